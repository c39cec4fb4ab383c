//! LS-sequences of partitions of the unit interval and their discrepancy.
//!
//! The crate is organised bottom-up:
//!
//! * [`beta`] exact arithmetic in `Q(β)`, where `Lβ + Sβ² = 1`, together with
//!   the regime classification and the constants `A`, `B`, `γ`.
//! * [`partition`] the long/short substitution that generates `ρ_{L,S}^n`,
//!   interval counts, and exact or floating-point endpoint sets.
//! * [`refine`] a general ρ-refinement engine (Kakutani splitting included).
//! * [`discrepancy`] star and extreme discrepancy of sorted point sets, and
//!   regime scans checking the three asymptotic behaviours.
//! * [`qmc`] quasi-Monte Carlo averages over partition endpoints.
//!
//! Floating-point code is generic over [`Real`]; the `*64` aliases below fix
//! the scalar to `f64`, which is what the CLI uses.

pub mod beta;
pub mod discrepancy;
mod error;
pub mod partition;
pub mod qmc;
pub mod refine;
mod scalar;

pub use beta::{
    classify_regime, derived_constants, solve_beta, DerivedConstants, LsParams, QBeta, Regime,
};
pub use discrepancy::{
    extreme_discrepancy, normalize, regime_scan, star_discrepancy, DiscrepancyRow, Normalization,
    RegimeReport, ScanConfig, Verdict,
};
pub use error::{Error, Result};
pub use partition::{
    count_points_in_interval, counts, counts_closed_form, endpoints, generate, substitute,
    Convention, Counts, Limits, Mode, PointSet, Symbol, SymbolSequence,
};
pub use qmc::{convergence_table, error_report, integrate, ConvergenceRow, ErrorReport, Integrand};
pub use refine::{
    iterate, kakutani_alpha, make_rho, rho_refine, GenericPartition, RefineOptions, RhoSpec,
    StepSummary,
};
pub use scalar::{NeumaierSum, Real};

/// Endpoint set with `f64` values.
pub type PointSet64 = PointSet<f64>;
/// ρ-refinement partition with `f64` endpoints.
pub type GenericPartition64 = GenericPartition<f64>;
/// Refinement template with `f64` lengths.
pub type RhoSpec64 = RhoSpec<f64>;
/// Integrand over `f64`.
pub type Integrand64 = Integrand<f64>;
/// Endpoint set with `f32` values.
pub type PointSet32 = PointSet<f32>;
/// ρ-refinement partition with `f32` endpoints.
pub type GenericPartition32 = GenericPartition<f32>;
