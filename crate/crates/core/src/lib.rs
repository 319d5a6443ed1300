//! Scale-free nonarchimedean arithmetic and an empirical prime-counting
//! error lab.
//!
//! The crate has three layers:
//!
//! * exact carriers — bounded-precision p-adic numbers ([`padic`]), their
//!   ultrametric ball trees ([`tree`]), and the relative-infinitesimal
//!   calculus with its log-based absolute value ([`valuation`]);
//! * scale-free dynamics — iterated nonsmooth solutions of `t dtau/dt = tau`
//!   with residual rescalings ([`nonsmooth`]) and the golden-ratio /
//!   prime-ladder machinery ([`dynamics`]);
//! * measurement — exact prime counting ([`sieve`]), the prime-number-theorem
//!   error scan with log-log exponent fits ([`pnt`]), and the combined
//!   pipeline report ([`report`]).
//!
//! Everything is deterministic: identical inputs produce byte-identical CSV,
//! JSON, and DOT exports regardless of worker count.

pub mod dynamics;
pub mod error;
pub mod nonsmooth;
pub mod numfmt;
pub mod padic;
pub mod pnt;
pub mod report;
pub mod sieve;
mod stats;
pub mod tree;
pub mod valuation;

pub use dynamics::{
    asymptotic_correction, golden_cf, golden_ratio_conjugate, prime_ladder_walk, rescaled_residual,
    solve_rescaled, GoldenCf, LadderState, LadderStep,
};
pub use error::{Error, Result};
pub use nonsmooth::{
    default_parity_grid, discontinuity_probe, extended_unity, parity_transform,
    residual_sigma_schedule, ExtendedUnity, IterationTrace, JumpEstimate, NonsmoothSolution,
    ParityOutcome, RescalingSchedule, Side, DEFAULT_PROBE_STEP,
};
pub use padic::{PAdicNumber, DEFAULT_PRECISION};
pub use pnt::{
    default_scan_grid, fit_exponent, log_grid, logarithmic_integral, pnt_scan, rh_bound_check,
    scan_range, ErrorScan, FitResult, RhBoundReport, ScanRow,
};
pub use report::{run_report, Report, ReportConfig};
pub use sieve::{
    bitset_sieve_pi, is_prime, primes_up_to, sieve_pi, sieve_pi_with_checkpoints,
    trial_division_pi, PiTable,
};
pub use tree::{LeafEntry, TreeNode, UltrametricTree};
pub use valuation::{
    adelic_compose, constant_to_log_variable_check, invert_to_infinitesimal, rel_abs, ultra_norm,
    AdelicComponent, AdelicComposite, Regime, UltraScalar, ValuedInfinitesimal,
};
