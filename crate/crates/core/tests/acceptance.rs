//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runtime limits are part of each criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conserved_moments::analytic::akbkc_closed_forms;
use conserved_moments::boundary::{antisymmetric_system, cyclic_equality_holds, rank_limited_system, relation_a2b2_holds};
use conserved_moments::config::Budget;
use conserved_moments::oracle::{make_field, oracle_report, QuadratureGrid, ScalarProfile};
use conserved_moments::reproduce::{reference_eigenpairs, reference_row, reproduce, ReproduceOptions, FIXTURES, SWEEPS};
use conserved_moments::spectral::{spectrum, trace_sum_rules, verify_delta_algebra, SpectrumOptions};
use conserved_moments::system::{build_system, solve_system, sweep_patterns};
use conserved_moments::word::MultisetWord;

type Outcome = Result<(), String>;

/// Name, runtime limit in seconds (0 for none), check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn word(s: &str) -> MultisetWord {
    s.parse().expect("valid word")
}

fn fixtures() -> Outcome {
    for (w, k) in FIXTURES {
        let sys = build_system(&word(w), k).map_err(|e| e.to_string())?;
        let v = solve_system(&sys);
        ensure(v.nullity == 0, || format!("W={w} k={k} nullity {}", v.nullity))?;
    }
    Ok(())
}

fn sweeps() -> Outcome {
    for (len, k) in SWEEPS {
        let s = sweep_patterns(len, k).map_err(|e| e.to_string())?;
        let bad: Vec<String> = s
            .entries
            .iter()
            .filter(|e| e.verdict.nullity != 0)
            .map(|e| format!("{} nullity {}", e.word, e.verdict.nullity))
            .collect();
        ensure(bad.is_empty(), || format!("length {len} k={k}: counterexamples {bad:?}"))?;
    }
    Ok(())
}

fn exact_rows() -> Outcome {
    let expected = [
        (1, 3, "2", vec![(2, 1), (-1, 2)]),
        (2, 10, "48", vec![(3, 1), (-2, 4), (1, 5)]),
        (3, 35, "47775744", vec![(4, 1), (-3, 6), (2, 14), (-1, 14)]),
    ];
    for (k, n, det, eig) in expected {
        let r = spectrum(k, SpectrumOptions::default(), &Budget::default()).map_err(|e| e.to_string())?;
        let got_det = r.det.as_ref().and_then(|d| d.exact.as_ref()).map(ToString::to_string);
        let got_eig: Vec<(i64, usize)> = r.eigenvalues.iter().map(|e| (e.value, e.multiplicity)).collect();
        ensure(r.order == n, || format!("k={k} N {}", r.order))?;
        ensure(got_det.as_deref() == Some(det), || format!("k={k} det {got_det:?}"))?;
        ensure(got_eig == eig, || format!("k={k} eigenvalues {got_eig:?}"))?;
        ensure(r.passed(), || format!("k={k} spectral checks failed"))?;
    }
    Ok(())
}

fn large_rows() -> Outcome {
    let budget = Budget::default();
    for (k, n, log10, tol) in [(4, 126, 32.8, 0.1), (5, 462, 136.4, 0.2)] {
        let r = spectrum(k, SpectrumOptions::default(), &budget).map_err(|e| e.to_string())?;
        let d = r.det.as_ref().ok_or("no determinant")?;
        let reference = reference_eigenpairs(reference_row(k).ok_or("no reference row")?);
        ensure(r.order == n, || format!("k={k} N {}", r.order))?;
        ensure((d.log10_abs - log10).abs() <= tol, || format!("k={k} log10 det {:.4}", d.log10_abs))?;
        ensure(r.full && r.eigenvalues == reference, || format!("k={k} eigenvalues {}", r.eigenvalue_string()))?;
        ensure(r.passed(), || format!("k={k} spectral checks failed"))?;
    }
    for (k, n) in [(6, 1716), (7, 6435)] {
        let start = Instant::now();
        let r = spectrum(k, SpectrumOptions::default(), &budget).map_err(|e| e.to_string())?;
        ensure(r.order == n, || format!("k={k} N {}", r.order))?;
        ensure(r.structure.all_hold(), || format!("k={k} structure {:?}", r.structure))?;
        ensure(r.multiplicity(k as i64 + 1) == Some(1), || format!("k={k} top multiplicity {:?}", r.multiplicity(k as i64 + 1)))?;
        ensure(r.passed(), || format!("k={k} checks failed"))?;
        ensure(start.elapsed() < Duration::from_secs(600), || format!("k={k} took {:?}", start.elapsed()))?;
    }
    Ok(())
}

fn delta_algebra() -> Outcome {
    for k in 1..=5 {
        let r = verify_delta_algebra(k, &Budget::default()).map_err(|e| e.to_string())?;
        ensure(r.all_hold(), || format!("k={k}: {:?}", r.identities.iter().filter(|i| !i.holds).collect::<Vec<_>>()))?;
    }
    Ok(())
}

fn trace_rules() -> Outcome {
    for k in 1..=5 {
        let r = trace_sum_rules(k, &Budget::default()).map_err(|e| e.to_string())?;
        for needed in [2, 4, 6, 8] {
            ensure(r.rules.iter().any(|c| c.r == needed), || format!("k={k} Sigma_{needed} not checked"))?;
        }
        ensure(r.all_hold(), || format!("k={k}: {:?}", r.rules.iter().filter(|c| !c.holds).collect::<Vec<_>>()))?;
    }
    Ok(())
}

fn analytic_cases() -> Outcome {
    for k in 1..=6 {
        let r = akbkc_closed_forms(k).map_err(|e| e.to_string())?;
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
        ensure(failed.is_empty(), || format!("k={k} failed {failed:?}"))?;
        ensure(r.analytic_nullity == r.verdict.nullity && r.verdict.nullity == 0, || {
            format!("k={k} analytic nullity {} vs generic {}", r.analytic_nullity, r.verdict.nullity)
        })?;
    }
    Ok(())
}

fn boundaries() -> Outcome {
    let r = rank_limited_system(&word("a2b2"), 2).map_err(|e| e.to_string())?;
    ensure(r.verdict.nullity == 1 && relation_a2b2_holds(&r) && r.nullspace_checked, || {
        format!("rank-2 a2b2: nullity {} direction {:?}", r.verdict.nullity, r.free_direction())
    })?;
    let r = antisymmetric_system(&word("abc")).map_err(|e| e.to_string())?;
    ensure(r.verdict.nullity == 1 && cyclic_equality_holds(&r) && r.nullspace_checked, || {
        format!("antisymmetric abc: nullity {} direction {:?}", r.verdict.nullity, r.free_direction())
    })?;
    let r = rank_limited_system(&word("abc"), 1).map_err(|e| e.to_string())?;
    ensure(r.verdict.nullity == 0, || format!("symmetric abc nullity {}", r.verdict.nullity))
}

fn numeric_oracle() -> Outcome {
    let profile = ScalarProfile::gaussian(1.0).map_err(|e| e.to_string())?;
    let field = make_field(profile).map_err(|e| e.to_string())?;
    let r = oracle_report(&field, &QuadratureGrid::default_for(&profile));
    ensure(r.max_vanishing() <= 1e-8, || format!("vanishing moments {:.2e}", r.max_vanishing()))?;
    let failed: Vec<String> = r.checks.iter().filter(|c| !c.holds).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    let aabb = r.moment("(aa;bb)").ok_or("(aa;bb) missing")?;
    let abab = r.moment("(ab;ab)").ok_or("(ab;ab) missing")?;
    let residual = (aabb.value + 2.0 * abab.value).abs() / aabb.scale.max(abab.scale);
    ensure(residual <= 1e-6 && aabb.relative() > 1e-3 && abab.relative() > 1e-3, || {
        format!("residual {residual:.2e}, sizes {:.2e} {:.2e}", aabb.relative(), abab.relative())
    })
}

fn determinism() -> Outcome {
    let opts = ReproduceOptions::default();
    let first = reproduce(&opts).map_err(|e| e.to_string())?;
    let second = reproduce(&opts).map_err(|e| e.to_string())?;
    let (a, b) = (first.to_text(), second.to_text());
    ensure(first.passed(), || first.failures().map(|f| f.key.clone()).collect::<Vec<_>>().join("; "))?;
    ensure(a == b, || "ledgers differ".into())?;
    let (ja, jb) = (serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
    ensure(ja == jb, || "JSON ledgers differ".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("hand-worked systems have nullity 0", 1, fixtures),
        ("partition sweeps (3,1), (5,2), (7,3) have nullity 0", 30, sweeps),
        ("spectral table k = 1, 2, 3 exact", 10, exact_rows),
        ("spectral table k = 4, 5 and k = 6, 7 structure", 720, large_rows),
        ("Delta algebra identities for k <= 5", 0, delta_algebra),
        ("trace sum rules for k <= 5", 0, trace_rules),
        ("a^k b^k c closed forms and verdicts for k <= 6", 0, analytic_cases),
        ("rank-2, antisymmetric and symmetric boundaries", 0, boundaries),
        ("numeric oracle on the default Gaussian field", 60, numeric_oracle),
        ("two reproduce runs give identical ledgers", 0, determinism),
    ];
    let mut failures = 0;
    for (i, &(name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && limit > 0 && elapsed > Duration::from_secs(limit) {
            outcome = Err(format!("took {elapsed:.1?}, limit {limit} s"));
        }
        match outcome {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({elapsed:.1?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{} criteria, {failures} failed", criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
