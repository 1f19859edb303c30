//! Numerical check against an explicit conserved symmetric rank-2 field in
//! three dimensions.
//!
//! `T_ij = (δ_ij Δ − ∂_i ∂_j) φ` is divergence-free for any smooth `φ`.
//! With a radial profile `φ = f(ρ)`, `ρ = |x − c|²`, all derivatives are
//! closed-form in `f', f'', f'''`, so quadrature is the only approximation.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::build_system;
use crate::word::{sub_multisets, MultisetWord};

pub const DIM: usize = 3;
pub const DEFAULT_POINTS: usize = 48;
/// The bump is only finitely smooth at its rim, where Gauss–Legendre
/// converges algebraically; it needs a finer default grid.
pub const DEFAULT_BUMP_POINTS: usize = 96;
/// Half-width of the default Gaussian grid, in units of the width.
pub const GAUSSIAN_EXTENT: f64 = 8.0;

pub const VANISHING_TOL: f64 = 1e-8;
pub const RELATION_TOL: f64 = 1e-6;
pub const NONZERO_FLOOR: f64 = 1e-3;
pub const DIVERGENCE_TOL: f64 = 1e-12;
pub const CALIBRATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `exp(−ρ / 2σ²)`
    Gaussian,
    /// `(1 − ρ/R²)^6` inside the ball of radius `R`, zero outside.
    CompactBump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    pub kind: ProfileKind,
    pub width: f64,
    pub center: [f64; DIM],
}

impl ScalarProfile {
    pub fn new(kind: ProfileKind, width: f64, center: [f64; DIM]) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Profile(format!("width must be positive, got {width}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Profile("center must be finite".into()));
        }
        Ok(Self { kind, width, center })
    }

    pub fn gaussian(width: f64) -> Result<Self> {
        Self::new(ProfileKind::Gaussian, width, [0.0; DIM])
    }

    pub fn compact_bump(width: f64) -> Result<Self> {
        Self::new(ProfileKind::CompactBump, width, [0.0; DIM])
    }

    pub fn with_center(self, center: [f64; DIM]) -> Result<Self> {
        Self::new(self.kind, self.width, center)
    }

    /// `[f, f', f'', f''']` at `ρ`.
    pub fn radial(&self, rho: f64) -> [f64; 4] {
        match self.kind {
            ProfileKind::Gaussian => {
                let s2 = self.width * self.width;
                let f = (-rho / (2.0 * s2)).exp();
                let d = -1.0 / (2.0 * s2);
                [f, d * f, d * d * f, d * d * d * f]
            }
            ProfileKind::CompactBump => {
                let r2 = self.width * self.width;
                let g = 1.0 - rho / r2;
                if g <= 0.0 {
                    return [0.0; 4];
                }
                [
                    g.powi(6),
                    -6.0 * g.powi(5) / r2,
                    30.0 * g.powi(4) / (r2 * r2),
                    -120.0 * g.powi(3) / (r2 * r2 * r2),
                ]
            }
        }
    }

    /// Half-width of the box that carries the profile.
    pub fn extent(&self) -> f64 {
        match self.kind {
            ProfileKind::Gaussian => GAUSSIAN_EXTENT * self.width,
            ProfileKind::CompactBump => self.width,
        }
    }

    /// Exact `∫ φ d³x`.
    pub fn integral(&self) -> f64 {
        match self.kind {
            ProfileKind::Gaussian => (2.0 * PI * self.width * self.width).powf(1.5),
            ProfileKind::CompactBump => {
                // 4π R³ ∫₀¹ s² (1 − s²)⁶ ds, expanded binomially
                let binom = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];
                let radial: f64 = binom
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j % 2 == 0 { 1.0 } else { -1.0 } * c / (2 * j + 3) as f64)
                    .sum();
                4.0 * PI * self.width.powi(3) * radial
            }
        }
    }
}

/// Index pairs in word order: aa, ab, ac, bb, bc, cc.
pub const COMPONENTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn component_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    COMPONENTS.iter().position(|&p| p == (i, j)).expect("indices below DIM")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorField2 {
    pub profile: ScalarProfile,
}

pub fn make_field(profile: ScalarProfile) -> Result<TensorField2> {
    ScalarProfile::new(profile.kind, profile.width, profile.center)?;
    Ok(TensorField2 { profile })
}

impl TensorField2 {
    fn offset(&self, x: [f64; DIM]) -> ([f64; DIM], f64) {
        let c = self.profile.center;
        let u = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
        (u, u.iter().map(|v| v * v).sum())
    }

    pub fn phi(&self, x: [f64; DIM]) -> f64 {
        self.profile.radial(self.offset(x).1)[0]
    }

    /// Full 3×3 tensor `T_ij(x)`.
    pub fn tensor(&self, x: [f64; DIM]) -> [[f64; DIM]; DIM] {
        let (u, rho) = self.offset(x);
        let [_, f1, f2, _] = self.profile.radial(rho);
        // ∂_i∂_j φ = 4 u_i u_j f'' + 2 δ_ij f';  Δφ = 4ρ f'' + 6 f'
        let laplacian = 4.0 * rho * f2 + 2.0 * DIM as f64 * f1;
        let mut t = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                let hess = 4.0 * u[i] * u[j] * f2 + if i == j { 2.0 * f1 } else { 0.0 };
                t[i][j] = if i == j { laplacian } else { 0.0 } - hess;
            }
        }
        t
    }

    /// The six independent components in [`COMPONENTS`] order.
    pub fn components(&self, x: [f64; DIM]) -> [f64; 6] {
        let t = self.tensor(x);
        COMPONENTS.map(|(i, j)| t[i][j])
    }

    pub fn component(&self, x: [f64; DIM], i: usize, j: usize) -> f64 {
        self.components(x)[component_slot(i, j)]
    }

    /// `Σ_i ∂_i T_ij` from the analytic third derivatives; zero up to
    /// rounding.
    pub fn divergence(&self, x: [f64; DIM]) -> [f64; DIM] {
        let (u, rho) = self.offset(x);
        let [_, _, f2, f3] = self.profile.radial(rho);
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        // ∂_l ∂_i ∂_j φ
        let d3 = |i: usize, j: usize, l: usize| {
            8.0 * u[i] * u[j] * u[l] * f3
                + 4.0 * f2 * (delta(i, j) * u[l] + delta(i, l) * u[j] + delta(j, l) * u[i])
        };
        let mut div = [0.0; DIM];
        for (j, out) in div.iter_mut().enumerate() {
            for i in 0..DIM {
                // ∂_i T_ij = δ_ij ∂_i Δφ − ∂_i ∂_i ∂_j φ
                let grad_lap: f64 = (0..DIM).map(|m| d3(m, m, i)).sum();
                *out += delta(i, j) * grad_lap - d3(i, i, j);
            }
        }
        div
    }
}

/// Tensor-product Gauss–Legendre rule on the cube `center ± half_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub center: [f64; DIM],
    pub half_width: f64,
    pub points: usize,
}

impl QuadratureGrid {
    pub fn new(center: [f64; DIM], half_width: f64, points: usize) -> Result<Self> {
        if points == 0 || half_width.is_nan() || half_width <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!(
                "quadrature grid needs points > 0 and a positive extent (points={points}, half_width={half_width})"
            )));
        }
        Ok(Self {
            center,
            half_width,
            points,
        })
    }

    /// 48 points per axis over the profile's box (96 for the bump).
    pub fn default_for(profile: &ScalarProfile) -> Self {
        let points = match profile.kind {
            ProfileKind::Gaussian => DEFAULT_POINTS,
            ProfileKind::CompactBump => DEFAULT_BUMP_POINTS,
        };
        Self::for_profile(profile, points).expect("default grid is valid")
    }

    pub fn for_profile(profile: &ScalarProfile, points: usize) -> Result<Self> {
        Self::new(profile.center, profile.extent(), points)
    }

    /// Nodes and weights per axis.
    pub fn axes(&self) -> [Vec<(f64, f64)>; DIM] {
        let rule = GaussLegendre::new(NonZeroUsize::new(self.points).expect("points > 0"));
        let h = self.half_width;
        std::array::from_fn(|d| {
            rule.as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (self.center[d] + h * x, h * w))
                .collect()
        })
    }

    /// `∫ f d³x` over the cube.
    pub fn integrate<F: Fn([f64; DIM]) -> f64 + Sync>(&self, f: F) -> f64 {
        let [ax, ay, az] = self.axes();
        // Per-slice sums are collected and added in order so results are
        // bit-reproducible regardless of scheduling.
        let slices: Vec<f64> = ax
            .par_iter()
            .map(|&(x, wx)| {
                let mut s = 0.0;
                for &(y, wy) in &ay {
                    for &(z, wz) in &az {
                        s += wx * wy * wz * f([x, y, z]);
                    }
                }
                s
            })
            .collect();
        slices.iter().sum()
    }
}

/// Quadrature value of one moment with the magnitude used for relative
/// tolerances, `∫ |x^{w_L} T_{w_R}|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub label: String,
    pub value: f64,
    pub scale: f64,
}

impl MomentValue {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

fn axis_indices(w: &MultisetWord) -> Result<Vec<usize>> {
    w.letters()
        .map(|l| {
            if l.id() < DIM {
                Ok(l.id())
            } else {
                Err(Error::FieldLetter(l.as_char()))
            }
        })
        .collect()
}

fn monomial(x: [f64; DIM], axes: &[usize]) -> f64 {
    axes.iter().map(|&a| x[a]).product()
}

pub fn numeric_moment(
    field: &TensorField2,
    left: &MultisetWord,
    right: &MultisetWord,
    grid: &QuadratureGrid,
) -> Result<MomentValue> {
    let l = axis_indices(left)?;
    let r = axis_indices(right)?;
    if r.len() != 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "right word must have length 2 for a rank-2 field, got {}",
            r.len()
        )));
    }
    let slot = component_slot(r[0], r[1]);
    let value = grid.integrate(|x| monomial(x, &l) * field.components(x)[slot]);
    let scale = grid.integrate(|x| (monomial(x, &l) * field.components(x)[slot]).abs());
    Ok(MomentValue {
        label: format!("({left};{right})"),
        value,
        scale,
    })
}

/// All moments with `[w_L] ≤ 2` from a single pass over the grid.
#[derive(Debug, Clone)]
struct MomentTable {
    lefts: Vec<MultisetWord>,
    rights: Vec<MultisetWord>,
    value: Vec<Vec<f64>>,
    scale: Vec<Vec<f64>>,
}

impl MomentTable {
    fn compute(field: &TensorField2, grid: &QuadratureGrid) -> Self {
        let letters = MultisetWord::all_distinct(DIM);
        let lefts: Vec<MultisetWord> = (0..=2)
            .flat_map(|r| {
                let mut all = MultisetWord::empty();
                for _ in 0..r {
                    all = all.concat(&letters);
                }
                sub_multisets(&all, r).expect("r within range")
            })
            .collect();
        let rights: Vec<MultisetWord> = COMPONENTS
            .iter()
            .map(|&(i, j)| MultisetWord::from_letters([crate::word::Letter(i as u8), crate::word::Letter(j as u8)]))
            .collect();
        let left_axes: Vec<Vec<usize>> = lefts.iter().map(|w| axis_indices(w).expect("letters a-c")).collect();
        let nl = lefts.len();
        let [ax, ay, az] = grid.axes();
        let slices: Vec<(Vec<f64>, Vec<f64>)> = ax
            .par_iter()
            .map(|&(x, wx)| {
                let (mut v, mut s) = (vec![0.0; nl * 6], vec![0.0; nl * 6]);
                for &(y, wy) in &ay {
                    for &(z, wz) in &az {
                        let p = [x, y, z];
                        let w = wx * wy * wz;
                        let t = field.components(p);
                        for (li, axes) in left_axes.iter().enumerate() {
                            let m = w * monomial(p, axes);
                            for c in 0..6 {
                                let term = m * t[c];
                                v[li * 6 + c] += term;
                                s[li * 6 + c] += term.abs();
                            }
                        }
                    }
                }
                (v, s)
            })
            .collect();
        let (mut value, mut scale) = (vec![0.0; nl * 6], vec![0.0; nl * 6]);
        for (v, s) in &slices {
            value.iter_mut().zip(v).for_each(|(a, b)| *a += b);
            scale.iter_mut().zip(s).for_each(|(a, b)| *a += b);
        }
        Self {
            value: value.chunks(6).map(<[f64]>::to_vec).collect(),
            scale: scale.chunks(6).map(<[f64]>::to_vec).collect(),
            lefts,
            rights,
        }
    }

    fn get(&self, left: &MultisetWord, right: &MultisetWord) -> Option<MomentValue> {
        let li = self.lefts.iter().position(|w| w == left)?;
        let ri = self.rights.iter().position(|w| w == right)?;
        Some(MomentValue {
            label: format!("({left};{right})"),
            value: self.value[li][ri],
            scale: self.scale[li][ri],
        })
    }

    fn with_left_len(&self, len: usize) -> Vec<MomentValue> {
        self.lefts
            .iter()
            .filter(|w| w.len() == len)
            .flat_map(|l| self.rights.iter().map(move |r| (l, r)))
            .map(|(l, r)| self.get(l, r).expect("tabulated"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    /// Generating row, e.g. `<aab|b>`.
    pub row: String,
    pub residual: f64,
    /// Largest `|coefficient| · ∫|x^{w_L} T_{w_R}|` in the row; rows whose
    /// moments all vanish by parity are judged against this, not their values.
    pub magnitude: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub profile: ScalarProfile,
    pub grid: QuadratureGrid,
    pub calibration_error: f64,
    pub divergence_max: f64,
    /// `[w_L] ≤ 1`: predicted to vanish.
    pub vanishing: Vec<MomentValue>,
    /// `[w_L] = 2`: not predicted to vanish.
    pub second: Vec<MomentValue>,
    pub relations: Vec<RelationCheck>,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn max_vanishing(&self) -> f64 {
        self.vanishing.iter().map(MomentValue::relative).fold(0.0, f64::max)
    }

    pub fn moment(&self, label: &str) -> Option<&MomentValue> {
        self.vanishing.iter().chain(&self.second).find(|m| m.label == label)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:?} profile, width {}, center {:?}; {} points per axis on ±{}\n",
            self.profile.kind, self.profile.width, self.profile.center, self.grid.points, self.grid.half_width
        );
        out.push_str(&format!("calibration error {:.2e}, divergence {:.2e}\n", self.calibration_error, self.divergence_max));
        out.push_str("moments with [w_L] <= 1 (relative to scale):\n");
        for m in &self.vanishing {
            out.push_str(&format!("  {:<10} {:>12.3e}\n", m.label, m.relative()));
        }
        out.push_str("moments with [w_L] = 2:\n");
        for m in &self.second {
            out.push_str(&format!("  {:<10} {:>14.6e}  (rel {:.3e})\n", m.label, m.value, m.relative()));
        }
        for c in &self.checks {
            out.push_str(&format!("{}: {} ({})\n", c.name, if c.holds { "PASS" } else { "FAIL" }, c.detail));
        }
        out
    }
}

/// Length-4 rows `<w1|w2>` over letters a–c, each a relation among
/// `[w_L] = 2` moments that must hold for any conserved field.
fn relation_checks(table: &MomentTable) -> Vec<RelationCheck> {
    let mut four = MultisetWord::empty();
    for _ in 0..4 {
        four = four.concat(&MultisetWord::all_distinct(DIM));
    }
    let mut out = Vec::new();
    for w in sub_multisets(&four, 4).expect("length 4 within range") {
        let sys = build_system(&w, 2).expect("split 2 of a length-4 word");
        for (r, label) in sys.rows.iter().enumerate() {
            let terms: Vec<(f64, f64)> = sys
                .row_entries(r)
                .into_iter()
                .map(|(c, coeff)| {
                    let u = &sys.unknowns[c];
                    let m = table.get(&u.left, &u.right).expect("tabulated");
                    (coeff as f64 * m.value, coeff.abs() as f64 * m.scale)
                })
                .collect();
            let residual: f64 = terms.iter().map(|t| t.0).sum();
            let magnitude = terms.iter().map(|t| t.1).fold(0.0, f64::max);
            out.push(RelationCheck {
                row: format!("W={w} {label}"),
                residual,
                magnitude,
                holds: residual.abs() <= RELATION_TOL * magnitude.max(f64::MIN_POSITIVE),
            });
        }
    }
    out
}

fn sample_points(profile: &ScalarProfile, count: usize, seed: u64) -> Vec<[f64; DIM]> {
    let mut rng = StdRng::seed_from_u64(seed);
    let h = profile.extent().min(4.0 * profile.width);
    (0..count)
        .map(|_| std::array::from_fn(|d| profile.center[d] + rng.random_range(-h..h)))
        .collect()
}

pub fn oracle_report(field: &TensorField2, grid: &QuadratureGrid) -> OracleReport {
    let profile = field.profile;
    let numeric = grid.integrate(|x| field.phi(x));
    let calibration_error = (numeric - profile.integral()).abs() / profile.integral();

    let points = sample_points(&profile, 100, 0x5eed);
    let t_max = points
        .iter()
        .flat_map(|&p| field.components(p))
        .map(f64::abs)
        .fold(0.0, f64::max);
    let divergence_max = points
        .iter()
        .flat_map(|&p| field.divergence(p))
        .map(f64::abs)
        .fold(0.0, f64::max)
        / t_max.max(f64::MIN_POSITIVE);
    let symmetric = points.iter().all(|&p| {
        let t = field.tensor(p);
        (0..DIM).all(|i| (0..DIM).all(|j| t[i][j] == t[j][i]))
    });

    let table = MomentTable::compute(field, grid);
    let mut vanishing = table.with_left_len(0);
    vanishing.extend(table.with_left_len(1));
    let second = table.with_left_len(2);
    let relations = relation_checks(&table);

    let max_vanishing = vanishing.iter().map(MomentValue::relative).fold(0.0, f64::max);
    let max_second = second.iter().map(MomentValue::relative).fold(0.0, f64::max);
    let worst_relation = relations
        .iter()
        .filter(|r| r.magnitude > 0.0)
        .map(|r| r.residual.abs() / r.magnitude)
        .fold(0.0, f64::max);
    let get = |l: &str, r: &str| table.get(&l.parse().expect("word"), &r.parse().expect("word")).expect("tabulated");
    let (aabb, abab) = (get("aa", "bb"), get("ab", "ab"));
    let pair_residual = (aabb.value + 2.0 * abab.value).abs() / aabb.value.abs().max(abab.value.abs()).max(f64::MIN_POSITIVE);

    let checks = vec![
        OracleCheck {
            name: "quadrature calibration on the bare profile".into(),
            holds: calibration_error < CALIBRATION_TOL,
            detail: format!("relative error {calibration_error:.2e}"),
        },
        OracleCheck {
            name: "T symmetric at sample points".into(),
            holds: symmetric,
            detail: "100 points".into(),
        },
        OracleCheck {
            name: "divergence vanishes at sample points".into(),
            holds: divergence_max < DIVERGENCE_TOL,
            detail: format!("max |div T| / max |T| = {divergence_max:.2e}"),
        },
        OracleCheck {
            name: "moments with [w_L] <= 1 vanish".into(),
            holds: max_vanishing < VANISHING_TOL,
            detail: format!("{} moments, max relative {max_vanishing:.2e}", vanishing.len()),
        },
        OracleCheck {
            name: "length-4 row relations hold".into(),
            holds: relations.iter().all(|r| r.holds),
            detail: format!("{} rows, worst relative residual {worst_relation:.2e}", relations.len()),
        },
        OracleCheck {
            name: "(aa;bb) + 2(ab;ab) = 0".into(),
            holds: pair_residual <= RELATION_TOL,
            detail: format!(
                "(aa;bb) = {:.6e}, (ab;ab) = {:.6e}, relative residual {pair_residual:.2e}",
                aabb.value, abab.value
            ),
        },
        OracleCheck {
            name: "(aa;bb) and (ab;ab) are both nonzero".into(),
            holds: aabb.relative() > NONZERO_FLOOR && abab.relative() > NONZERO_FLOOR,
            detail: format!("relative sizes {:.3e}, {:.3e}", aabb.relative(), abab.relative()),
        },
        OracleCheck {
            name: "some [w_L] = 2 moment is nonzero".into(),
            holds: max_second > NONZERO_FLOOR,
            detail: format!("max relative {max_second:.3e}"),
        },
    ];
    OracleReport {
        profile,
        grid: grid.clone(),
        calibration_error,
        divergence_max,
        vanishing,
        second,
        relations,
        checks,
    }
}

/// Largest relative `[w_L] ≤ 1` moment at each resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionTrend {
    pub points: Vec<usize>,
    pub max_vanishing: Vec<f64>,
}

impl ResolutionTrend {
    /// Non-increasing with resolution, up to a rounding floor.
    pub fn converging(&self) -> bool {
        self.max_vanishing.windows(2).all(|w| w[1] <= w[0].max(1e-13))
    }
}

pub fn resolution_trend(field: &TensorField2, points: &[usize]) -> Result<ResolutionTrend> {
    let max_vanishing = points
        .iter()
        .map(|&p| {
            let grid = QuadratureGrid::for_profile(&field.profile, p)?;
            let table = MomentTable::compute(field, &grid);
            let mut v = table.with_left_len(0);
            v.extend(table.with_left_len(1));
            Ok(v.iter().map(MomentValue::relative).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResolutionTrend {
        points: points.to_vec(),
        max_vanishing,
    })
}
