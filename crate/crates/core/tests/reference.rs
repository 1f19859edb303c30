//! Values frozen from independent computations: the closed-form odd-graph
//! spectrum (eigenvalue (-1)^i (k+1-i) with multiplicity C(2k+1,i) - C(2k+1,i-1))
//! evaluated in exact integer arithmetic outside this crate.

use conserved_moments::config::Budget;
use conserved_moments::spectral::{spectrum, SpectrumOptions};
use conserved_moments::system::{build_system, solve_system, sweep_patterns};
use conserved_moments::word::partitions;

const DET_K4: &str = "703337226073392018752445307944960";
const DET_K5: &str = "25809418269819331548253155885233406960267781033551568398526445183206868409237918033623585309928095817959906966951442888806891520000000000";
const LOG10_DET_K6: f64 = 557.718617;

fn binom(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn odd_graph_spectrum(k: usize) -> Vec<(i64, usize)> {
    (0..=k)
        .map(|i| {
            let value = if i % 2 == 0 { 1 } else { -1 } * (k + 1 - i) as i64;
            let below = if i == 0 { 0 } else { binom(2 * k + 1, i - 1) };
            (value, binom(2 * k + 1, i) - below)
        })
        .collect()
}

#[test]
fn spectra_match_closed_form() {
    for k in 1..=5 {
        let r = spectrum(k, SpectrumOptions::default(), &Budget::default()).unwrap();
        let got: Vec<(i64, usize)> = r.eigenvalues.iter().map(|e| (e.value, e.multiplicity)).collect();
        assert_eq!(got, odd_graph_spectrum(k), "k={k}");
    }
}

#[test]
fn exact_determinants() {
    for (k, det) in [(4, DET_K4), (5, DET_K5)] {
        let r = spectrum(k, SpectrumOptions::default(), &Budget::default()).unwrap();
        let exact = r.det.unwrap().exact.unwrap().to_string();
        assert_eq!(exact, det, "k={k}");
    }
}

#[test]
fn determinant_k6_log10() {
    let opts = SpectrumOptions {
        full: Some(false),
        determinant: true,
    };
    let r = spectrum(6, opts, &Budget::default()).unwrap();
    let d = r.det.unwrap();
    assert!((d.log10_abs - LOG10_DET_K6).abs() < 1e-5, "{}", d.log10_abs);
    assert!(d.sign > 0);
}

#[test]
fn sweep_sizes_are_partition_counts() {
    // p(3), p(5), p(7)
    for (len, k, count) in [(3, 1, 3), (5, 2, 7), (7, 3, 15)] {
        assert_eq!(partitions(len).len(), count);
        let s = sweep_patterns(len, k).unwrap();
        assert_eq!(s.entries.len(), count);
        assert!(s.counterexamples.is_empty());
    }
}

#[test]
fn system_sizes() {
    // Unknowns are C(5,2) two-letter subsets; rows C(5,3).
    let sys = build_system(&"abcde".parse().unwrap(), 2).unwrap();
    assert_eq!((sys.rows.len(), sys.unknowns.len()), (10, 10));
    assert_eq!(solve_system(&sys).rank, 10);
    let sys = build_system(&"a2bcd".parse().unwrap(), 2).unwrap();
    assert_eq!((sys.rows.len(), sys.unknowns.len()), (7, 7));
}
