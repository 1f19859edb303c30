use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use conserved_moments::analytic::{akbkc_closed_forms, induction_case, two_letter_chain};
use conserved_moments::boundary::{
    antisymmetric_system, cyclic_equality_holds, rank_limited_system, relation_a2b2_holds, BoundaryReport,
};
use conserved_moments::config::Budget;
use conserved_moments::oracle::{make_field, oracle_report, ProfileKind, QuadratureGrid, ScalarProfile};
use conserved_moments::reproduce::{reproduce, ReproduceOptions};
use conserved_moments::spectral::{spectral_table, spectrum, CheckStatus, SpectrumOptions};
use conserved_moments::system::{build_system, solve_system, sweep_patterns, SystemReport};
use conserved_moments::word::MultisetWord;
use conserved_moments::{Error, Result};

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Exact checks of integral-moment identities for conserved symmetric tensors.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
/// 3 budget exceeded. Budgets can be set by flag or environment variable.
#[derive(Debug, Parser)]
#[command(name = "conserved-moments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,

    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Largest matrix order the spectral commands will build.
    #[arg(long, env = "CM_MAX_ORDER", global = true)]
    max_order: Option<usize>,

    /// Largest order for dense matrix powers and products.
    #[arg(long, env = "CM_MAX_DENSE_ORDER", global = true)]
    max_dense_order: Option<usize>,

    /// Highest matrix power for trace computations.
    #[arg(long, env = "CM_MAX_POWER", global = true)]
    max_power: Option<u32>,

    /// Two primes below 2^31 used to confirm finite-field ranks.
    #[arg(long, env = "CM_RANK_PRIMES", value_delimiter = ',', num_args = 2, global = true)]
    rank_primes: Option<Vec<u64>>,

    /// Primes below 2^31 for modular determinants (default: enough of the
    /// largest ones to cover the Hadamard bound).
    #[arg(long, env = "CM_CRT_PRIMES", value_delimiter = ',', global = true)]
    crt_primes: Option<Vec<u64>>,
}

impl BudgetArgs {
    fn resolve(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(v) = self.max_order {
            b.max_order = v;
        }
        if let Some(v) = self.max_dense_order {
            b.max_dense_order = v;
        }
        if let Some(v) = self.max_power {
            b.max_power = v;
        }
        if let Some(p) = &self.rank_primes {
            b.rank_primes = [p[0], p[1]];
        }
        if self.crt_primes.is_some() {
            b.crt_primes.clone_from(&self.crt_primes);
        }
        b
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and solve the system for one combined word and split.
    System {
        /// Combined word, e.g. `aab` or `a2b`.
        #[arg(long)]
        word: MultisetWord,
        /// Length of the left words.
        #[arg(long)]
        k: usize,
    },
    /// Solve one representative system per pattern of a given length.
    Sweep {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        k: usize,
    },
    /// Spectrum, determinant and sum rules of the subset matrix A.
    Spectrum {
        #[arg(long)]
        k: usize,
        /// Scan every candidate eigenvalue (default only for k <= 5).
        #[arg(long)]
        full: bool,
    },
    /// Table of N, determinant and eigenvalues for k = 1..=kmax.
    Table {
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long)]
        full: bool,
    },
    /// Hand-solvable families checked against the generic solver.
    Analytic {
        #[arg(long, value_enum)]
        case: AnalyticCase,
        #[arg(long)]
        k: usize,
        /// Exponent of b in the two-letter chain.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Tail word x_k for the induction case (default: k distinct letters after a).
        #[arg(long)]
        tail: Option<MultisetWord>,
    },
    /// Cases where moments are related but not forced to vanish.
    Boundary {
        #[arg(long, value_enum)]
        case: BoundaryCase,
    },
    /// Quadrature check on an explicit conserved rank-2 field.
    Oracle {
        #[arg(long, value_enum, default_value_t = Profile::Gaussian)]
        profile: Profile,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Gauss–Legendre points per axis (default 48, 96 for the bump).
        #[arg(long)]
        points: Option<usize>,
        /// Profile center as x,y,z.
        #[arg(long, value_parser = parse_center, allow_hyphen_values = true)]
        center: Option<[f64; 3]>,
    },
    /// Run every check and print a pass/fail ledger.
    Reproduce {
        /// Leave out the k = 6, 7 table rows.
        #[arg(long)]
        skip_large: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AnalyticCase {
    TwoLetter,
    Induction,
    Akbkc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundaryCase {
    #[value(name = "rank2-a2b2")]
    Rank2A2b2,
    #[value(name = "rank2-a4")]
    Rank2A4,
    #[value(name = "antisym-abc")]
    AntisymAbc,
    #[value(name = "antisym-a2b")]
    AntisymA2b,
    #[value(name = "sym-abc")]
    SymAbc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    Gaussian,
    Bump,
}

/// What a subcommand produced: rendered output plus whether its checks held.
struct Outcome {
    text: String,
    json: String,
    csv: Option<String>,
    passed: bool,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, text: String, passed: bool) -> Self {
        Self {
            text,
            json: serde_json::to_string_pretty(value).expect("reports serialize"),
            csv: None,
            passed,
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = cli.budget.resolve();
    match &cli.command {
        Command::System { word, k } => {
            let sys = build_system(word, *k)?;
            let verdict = solve_system(&sys);
            let report = SystemReport::new(&sys, &verdict);
            let counterexample = verdict.conjecture_applicable && verdict.nullity > 0;
            Ok(Outcome::new(&report, report.to_text(), !counterexample))
        }
        Command::Sweep { length, k } => {
            let report = sweep_patterns(*length, *k)?;
            Ok(Outcome::new(&report, report.to_text(), report.conjecture_holds()))
        }
        Command::Spectrum { k, full } => {
            let opts = SpectrumOptions {
                full: full.then_some(true),
                determinant: true,
            };
            let report = spectrum(*k, opts, &budget)?;
            let mut text = format!("k = {}, N = {}\n", report.k, report.order);
            if let Some(det) = &report.det {
                match &det.exact {
                    Some(x) => text.push_str(&format!("det = {x}\n")),
                    None => text.push_str(&format!("det = {}10^{:.4} ({:?})\n", if det.sign < 0 { "-" } else { "" }, det.log10_abs, det.method)),
                }
            }
            text.push_str(&format!(
                "eigenvalues: {}{}\n",
                report.eigenvalue_string(),
                if report.full { "" } else { ", ..." }
            ));
            for t in &report.trace_powers {
                text.push_str(&format!("Sigma_{} = {}\n", t.r, t.value));
            }
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Reported => "REPORTED",
                };
                text.push_str(&format!("{}: {status} ({})\n", c.name, c.detail));
            }
            Ok(Outcome::new(&report, text, report.passed()))
        }
        Command::Table { kmax, full } => {
            let table = spectral_table(*kmax, *full, &budget)?;
            let passed = table.rows.iter().all(|r| r.passed);
            let mut out = Outcome::new(&table, table.to_text(), passed);
            out.csv = Some(table.to_csv());
            Ok(out)
        }
        Command::Analytic { case, k, m, tail } => match case {
            AnalyticCase::TwoLetter => {
                let r = two_letter_chain(*k, *m)?;
                let text = format!(
                    "W = {} k = {}: coefficient pairs {:?}, rows match {}, peeled {}/{}, nullity {}\n",
                    r.word, r.k, r.coefficient_pairs, r.rows_match, r.peel.determined, r.peel.total, r.verdict.nullity
                );
                Ok(Outcome::new(&r, text, r.passed()))
            }
            AnalyticCase::Induction => {
                let tail = match tail {
                    Some(t) => t.clone(),
                    None => MultisetWord::from_counts([&[0u32][..], &vec![1u32; *k]].concat()),
                };
                let r = induction_case(*k, &tail)?;
                let text = format!(
                    "W = {} k = {}: top row {}, first rows {}, peel order {}, nullity {}\n",
                    r.word,
                    r.k,
                    r.top_row_ok,
                    r.first_rows_ok,
                    r.peel.order.join(" "),
                    r.verdict.nullity
                );
                Ok(Outcome::new(&r, text, r.passed()))
            }
            AnalyticCase::Akbkc => {
                let r = akbkc_closed_forms(*k)?;
                let mut text = format!("W = {} k = {}\n", r.word, r.k);
                let show = |s: &conserved_moments::analytic::Sym| format!("{} P0 + {} Q0", s[0], s[1]);
                for (i, p) in r.p.iter().enumerate() {
                    text.push_str(&format!("  P_{i} = {}\n", show(p)));
                }
                for (i, q) in r.q.iter().enumerate() {
                    text.push_str(&format!("  Q_{i} = {}\n", show(q)));
                }
                for c in &r.checks {
                    text.push_str(&format!("{}: {}\n", c.name, if c.holds { "PASS" } else { "FAIL" }));
                }
                text.push_str(&format!("nullity {} (analytic {})\n", r.verdict.nullity, r.analytic_nullity));
                Ok(Outcome::new(&r, text, r.passed()))
            }
        },
        Command::Boundary { case } => {
            let (report, expected): (BoundaryReport, bool) = match case {
                BoundaryCase::Rank2A2b2 => {
                    let r = rank_limited_system(&parse("a2b2")?, 2)?;
                    let ok = r.verdict.nullity == 1 && relation_a2b2_holds(&r);
                    (r, ok)
                }
                BoundaryCase::Rank2A4 => {
                    let r = rank_limited_system(&parse("a4")?, 2)?;
                    let ok = r.verdict.nullity == 0;
                    (r, ok)
                }
                BoundaryCase::AntisymAbc => {
                    let r = antisymmetric_system(&parse("abc")?)?;
                    let ok = r.verdict.nullity == 1 && cyclic_equality_holds(&r);
                    (r, ok)
                }
                BoundaryCase::AntisymA2b => {
                    let r = antisymmetric_system(&parse("a2b")?)?;
                    (r, true)
                }
                BoundaryCase::SymAbc => {
                    let r = rank_limited_system(&parse("abc")?, 1)?;
                    let ok = r.verdict.nullity == 0;
                    (r, ok)
                }
            };
            let mut text = format!(
                "W = {} k = {} {:?} rank-{} tensor\n",
                report.word, report.k, report.symmetry, report.tensor_rank
            );
            for e in &report.equations {
                text.push_str(&format!("  {e}\n"));
            }
            if !report.vanishing.is_empty() {
                text.push_str(&format!("identically zero: {}\n", report.vanishing.join(" ")));
            }
            text.push_str(&format!("nullity {}\n", report.verdict.nullity));
            if let Some(dir) = report.free_direction() {
                let coords: Vec<String> = dir.iter().map(|(n, v)| format!("{n} = {v}")).collect();
                text.push_str(&format!("free direction: {}\n", coords.join(", ")));
            }
            let passed = expected && report.nullspace_checked;
            Ok(Outcome::new(&report, text, passed))
        }
        Command::Oracle {
            profile,
            width,
            points,
            center,
        } => {
            let kind = match profile {
                Profile::Gaussian => ProfileKind::Gaussian,
                Profile::Bump => ProfileKind::CompactBump,
            };
            let c = center.unwrap_or([0.0; 3]);
            let profile = ScalarProfile::new(kind, *width, c)?;
            let field = make_field(profile)?;
            let grid = match points {
                Some(p) => QuadratureGrid::for_profile(&profile, *p)?,
                None => QuadratureGrid::default_for(&profile),
            };
            let report = oracle_report(&field, &grid);
            Ok(Outcome::new(&report, report.to_text(), report.passed()))
        }
        Command::Reproduce { skip_large } => {
            let opts = ReproduceOptions {
                budget,
                large_rows: !skip_large,
            };
            let ledger = reproduce(&opts)?;
            Ok(Outcome::new(&ledger, ledger.to_text(), ledger.passed()))
        }
    }
}

fn parse(s: &str) -> Result<MultisetWord> {
    s.parse()
}

fn exit_for(e: &Error) -> u8 {
    if e.is_budget() {
        EXIT_BUDGET
    } else if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_CHECK
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json { Format::Json } else { cli.format };
    match run(&cli) {
        Ok(out) => {
            let body = match format {
                Format::Text => out.text,
                Format::Json => out.json + "\n",
                Format::Csv => match out.csv {
                    Some(csv) => csv,
                    None => {
                        eprintln!("error: csv output is only available for `table`");
                        return ExitCode::from(EXIT_USAGE);
                    }
                },
            };
            print!("{body}");
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn parse_center(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|v| format!("expected x,y,z, got {} values", v.len()))
}
