use serde::{Deserialize, Serialize};

use super::spectrum::{format_eigenvalues, spectrum, Eigenpair, SpectrumOptions};
use crate::config::Budget;
use crate::error::Result;
use crate::linalg::DetResult;

/// Exact determinants with more digits than this are shown as powers of ten.
const EXACT_DIGITS_SHOWN: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    pub order: usize,
    pub det: DetResult,
    pub eigenvalues: Vec<Eigenpair>,
    pub full: bool,
    pub passed: bool,
}

impl TableRow {
    pub fn det_text(&self) -> String {
        match &self.det.exact {
            Some(x) if x.to_string().trim_start_matches('-').len() <= EXACT_DIGITS_SHOWN => x.to_string(),
            _ if self.det.sign == 0 => "0".to_string(),
            _ => format!(
                "{}10^{:.1}",
                if self.det.sign < 0 { "-" } else { "" },
                self.det.log10_abs
            ),
        }
    }

    pub fn eigenvalue_text(&self) -> String {
        let body = format_eigenvalues(&self.eigenvalues);
        if self.full {
            body
        } else {
            format!("{body}, ...")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralTable {
    pub rows: Vec<TableRow>,
}

/// Rows for `k = 1..=kmax`. Rows above the full-scan limit list only the
/// top eigenvalue unless `full` is set.
pub fn spectral_table(kmax: usize, full: bool, budget: &Budget) -> Result<SpectralTable> {
    let rows = (1..=kmax)
        .map(|k| {
            let opts = SpectrumOptions {
                full: full.then_some(true),
                determinant: true,
            };
            let report = spectrum(k, opts, budget)?;
            Ok(TableRow {
                k,
                order: report.order,
                passed: report.passed(),
                det: report.det.expect("determinant requested"),
                eigenvalues: report.eigenvalues,
                full: report.full,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralTable { rows })
}

impl SpectralTable {
    pub fn to_text(&self) -> String {
        let header = ["k", "N", "Det", "Eigenvalues ~ (E)^m"];
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| [r.k.to_string(), r.order.to_string(), r.det_text(), r.eigenvalue_text()])
            .collect();
        let widths: Vec<usize> = (0..3)
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].len())
                    .chain([header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |cols: [&str; 4]| {
            format!(
                "{:>w0$}  {:>w1$}  {:>w2$}  {}\n",
                cols[0],
                cols[1],
                cols[2],
                cols[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2]
            )
        };
        out.push_str(&line(header));
        for row in &cells {
            out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
        }
        out
    }

    /// `k,N,det_exact,det_log10,eig_1,mult_1,...`; the header carries as
    /// many eigenvalue columns as the longest row.
    pub fn to_csv(&self) -> String {
        let width = self.rows.iter().map(|r| r.eigenvalues.len()).max().unwrap_or(0);
        let mut header = vec!["k".to_string(), "N".into(), "det_exact".into(), "det_log10".into()];
        for i in 1..=width {
            header.push(format!("eig_{i}"));
            header.push(format!("mult_{i}"));
        }
        let mut out = header.join(",");
        out.push('\n');
        for r in &self.rows {
            let mut cols = vec![
                r.k.to_string(),
                r.order.to_string(),
                r.det.exact.as_ref().map(ToString::to_string).unwrap_or_default(),
                if r.det.log10_abs.is_finite() {
                    format!("{:.4}", r.det.log10_abs)
                } else {
                    "-inf".into()
                },
            ];
            for e in &r.eigenvalues {
                cols.push(e.value.to_string());
                cols.push(e.multiplicity.to_string());
            }
            cols.resize(4 + 2 * width, String::new());
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_renders() {
        let t = spectral_table(3, false, &Budget::default()).unwrap();
        let text = t.to_text();
        assert!(text.contains("47775744"), "{text}");
        assert!(text.contains("(+4)^1, (-3)^6, (+2)^14, (-1)^14"));
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,N,det_exact,det_log10,eig_1,mult_1,eig_2,mult_2,eig_3,mult_3,eig_4,mult_4");
        assert_eq!(lines[1], "1,3,2,0.3010,2,1,-1,2,,,,");
        assert!(lines[3].starts_with("3,35,47775744,7.6792,4,1,-3,6,2,14,-1,14"));
    }
}
