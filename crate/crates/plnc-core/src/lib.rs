//! End-to-end rate per unit area of two-way relaying under interference
//! and spatial reservation.
//!
//! Two schemes exchange packets between end nodes A and C through a relay
//! B on a line: conventional relaying (CR, four slots, two reserved discs
//! per slot) and physical-layer network coding with amplify-and-forward
//! (PLNC, two slots, three reserved discs). Surrounding interferers are
//! spread uniformly over a network disc outside the reserved area; rates
//! are charged for the area they reserve, so the figure of merit is
//! bit/s/Hz per unit area.
//!
//! Module map:
//! - [`geometry`]: the line topology, reserved-disc unions, crescents.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature.
//! - [`interference`]: expected INR per region and per scheme.
//! - [`rate`]: SINR/Shannon algebra and the per-area end-to-end rates.
//! - [`montecarlo`]: seeded stochastic oracle for every analytic quantity.
//! - [`experiments`]: sweeps, the reserved-radius optimizer, crossover
//!   search.

// Validation deliberately writes `!(x > 0.0)` so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod interference;
pub mod montecarlo;
pub mod quad;
pub mod rate;

pub use error::{Error, Result};
pub use experiments::{
    default_lambda_grid, default_r0_grid, find_crossover_density, optimize_r0, sweep_density,
    sweep_reserved_radius, validate_radius_sweep, CrossoverOutcome, OptimizerOpts, RadiusRecord,
    SweepGrid, SweepRecord,
};
pub use geometry::{NodeId, Point, Scheme, SlotReservation, SystemParams};
pub use interference::{CompositeInr, InrBreakdown, InrQuantity, UnitInr};
pub use montecarlo::{
    compare_with_analytic, default_validation_grid, estimate_inr, estimate_rates,
    sample_interferers, ComparisonRow, CountModel, McConfig, McEstimate, McRateResult, McRegion,
    RateEstimateMode,
};
pub use quad::QuadratureSpec;
pub use rate::{distance_from_snr_db, linear_to_db, LinkSinrs, RateResult};
