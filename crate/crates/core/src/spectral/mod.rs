//! The permutation-generated 0/1 matrix on (k+1)-subsets of 2k+1 distinct
//! letters: structure, the Δ-matrix algebra, trace sum rules, and the exact
//! integer spectrum.

mod amatrix;
mod delta;
mod spectrum;
mod table;
mod traces;

pub use amatrix::{build_a, order_for, AMatrix, StructuralReport, SubsetIndex};
pub use delta::{build_deltas, verify_delta_algebra, DeltaAlgebraReport, DeltaMatrix, DeltaOrder, IdentityCheck};
pub use spectrum::{
    eigen_multiplicity, format_eigenvalues, log10_of_product, spectrum, Check, CheckStatus, Eigenpair,
    SpectralReport, SpectrumOptions, FULL_SCAN_MAX_K,
};
pub use table::{spectral_table, SpectralTable, TableRow};
pub use traces::{closed_form, trace_powers, trace_sum_rules, RuleCheck, TracePower, TraceReport};
