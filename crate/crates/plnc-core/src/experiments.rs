//! Figure-family drivers: radius-validity sweep, rate-versus-r0 sweeps,
//! density sweeps with per-point optimal r0, and crossover detection.
//!
//! Grid points are independent and evaluated in parallel; output records
//! are always assembled in grid order (then CR before PLNC), so results
//! do not depend on scheduling. Density sweeps exploit the exact linearity
//! of every INR component in `lambda`: the quadratures are paid once per
//! `r0` grid point and rescaled per density.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Scheme, SystemParams};
use crate::interference::{inr_toroidal_at_relay, inr_toroidal_at_relay_unbounded, unit_inr, UnitInr};
use crate::quad::QuadratureSpec;
use crate::rate::{distance_from_snr_db, rates_from_composites, RateResult};

/// Inclusive arithmetic grid; the endpoint is included when it lands
/// within half a step of the last multiple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[allow(clippy::len_without_is_empty)] // a grid always has at least one point
impl SweepGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid step must be positive and finite; got {step}"
            )));
        }
        if !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid stop = {stop} must be >= start = {start}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Number of grid points; never zero.
    pub fn len(&self) -> usize {
        ((self.stop - self.start + 0.5 * self.step) / self.step) as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

/// One point of the network-radius validity sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusRecord {
    pub big_r: f64,
    pub inr_finite: f64,
    pub inr_unbounded: f64,
}

/// One (grid point, scheme) record of a rate sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    /// The independent variable: `r0` for radius sweeps, `lambda` for
    /// density sweeps.
    pub x: f64,
    pub scheme: Scheme,
    pub result: RateResult,
    /// The optimizing reserved radius (density sweeps only).
    pub best_r0: Option<f64>,
}

/// Grid resolution and quadrature control for the r0 optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOpts {
    /// Step of the coarse scan preceding golden-section refinement.
    pub grid_step: f64,
    pub quad: QuadratureSpec,
}

impl Default for OptimizerOpts {
    fn default() -> Self {
        Self {
            grid_step: 0.005,
            quad: QuadratureSpec::default(),
        }
    }
}

/// Outcome of the density-crossover search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossoverOutcome {
    /// Optimized PLNC and CR rates cross at this density.
    Crossover { lambda_star: f64 },
    /// No sign change in the searched range; `dominant` wins throughout.
    NoCrossover { dominant: Scheme },
}

/// Absolute tolerance on the crossover density.
pub const CROSSOVER_TOL: f64 = 0.01;

/// Default r0 sweep for a link SNR: `[1.02 r_n, 1.0]` step 0.005.
pub fn default_r0_grid(snr_db: f64) -> Result<SweepGrid> {
    let r_n = distance_from_snr_db(snr_db);
    SweepGrid::new(1.02 * r_n, 1.0, 0.005)
}

/// Default density sweep: `[0.1, 10]` step 0.1.
pub fn default_lambda_grid() -> Result<SweepGrid> {
    SweepGrid::new(0.1, 10.0, 0.1)
}

/// Expected toroidal INR at the relay for each network radius in `grid`,
/// next to the unbounded-network reference value.
pub fn validate_radius_sweep(r0: f64, lambda: f64, grid: &SweepGrid) -> Result<Vec<RadiusRecord>> {
    for big_r in grid.values() {
        if big_r <= r0 {
            return Err(Error::InvalidParameter(format!(
                "network radius grid value {big_r} must exceed r0 = {r0}"
            )));
        }
    }
    grid.values()
        .into_iter()
        .map(|big_r| {
            // The node spacing does not enter either toroidal form.
            let params = SystemParams::new(r0, r0, big_r, lambda)?;
            Ok(RadiusRecord {
                big_r,
                inr_finite: inr_toroidal_at_relay(&params),
                inr_unbounded: inr_toroidal_at_relay_unbounded(&params),
            })
        })
        .collect()
}

// One r0 grid point worth of unit-density quadratures, reusable across
// densities and schemes.
struct R0Table {
    r_n: f64,
    big_r: f64,
    entries: Vec<(f64, UnitInr)>,
}

impl R0Table {
    fn build(r_n: f64, big_r: f64, grid: &SweepGrid, quad: &QuadratureSpec) -> Result<Self> {
        let entries: Vec<(f64, UnitInr)> = grid
            .values()
            .into_par_iter()
            .map(|r0| {
                let params = SystemParams::new(r_n, r0, big_r, 1.0)?;
                Ok((r0, unit_inr(&params, quad)?))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            r_n,
            big_r,
            entries,
        })
    }

    fn rate_at(&self, index: usize, scheme: Scheme, lambda: f64) -> Result<RateResult> {
        let (r0, unit) = self.entries[index];
        let params = SystemParams::new(self.r_n, r0, self.big_r, lambda)?;
        let inr = unit.breakdown(lambda)?.composite(scheme);
        rates_from_composites(&params, scheme, inr)
    }
}

fn rate_fresh(
    r_n: f64,
    r0: f64,
    big_r: f64,
    lambda: f64,
    scheme: Scheme,
    quad: &QuadratureSpec,
) -> Result<RateResult> {
    let params = SystemParams::new(r_n, r0, big_r, lambda)?;
    let inr = unit_inr(&params, quad)?.breakdown(lambda)?.composite(scheme);
    rates_from_composites(&params, scheme, inr)
}

/// Both schemes' full rate results for every reserved radius in `grid`.
pub fn sweep_reserved_radius(
    snr_db: f64,
    lambda: f64,
    big_r: f64,
    grid: &SweepGrid,
    quad: &QuadratureSpec,
) -> Result<Vec<SweepRecord>> {
    let r_n = distance_from_snr_db(snr_db);
    let per_point: Vec<(f64, RateResult, RateResult)> = grid
        .values()
        .into_par_iter()
        .map(|r0| {
            let params = SystemParams::new(r_n, r0, big_r, lambda)?;
            let unit = unit_inr(&params, quad)?;
            let breakdown = unit.breakdown(lambda)?;
            let cr = rates_from_composites(&params, Scheme::Cr, breakdown.composite(Scheme::Cr))?;
            let plnc =
                rates_from_composites(&params, Scheme::Plnc, breakdown.composite(Scheme::Plnc))?;
            Ok((r0, cr, plnc))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(2 * per_point.len());
    for (r0, cr, plnc) in per_point {
        records.push(SweepRecord {
            x: r0,
            scheme: Scheme::Cr,
            result: cr,
            best_r0: None,
        });
        records.push(SweepRecord {
            x: r0,
            scheme: Scheme::Plnc,
            result: plnc,
            best_r0: None,
        });
    }
    Ok(records)
}

// Scan the table for the best grid rate (ties toward smaller r0), then
// refine inside the surrounding bracket with golden-section search.
fn best_r0_from_table(
    table: &R0Table,
    scheme: Scheme,
    lambda: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, RateResult)> {
    let n = table.entries.len();
    let mut best_index = 0usize;
    let mut best = table.rate_at(0, scheme, lambda)?;
    for index in 1..n {
        let candidate = table.rate_at(index, scheme, lambda)?;
        if candidate.rate_per_area > best.rate_per_area {
            best = candidate;
            best_index = index;
        }
    }
    let lo = table.entries[best_index.saturating_sub(1)].0;
    let hi = table.entries[(best_index + 1).min(n - 1)].0;
    let mut best_r0 = table.entries[best_index].0;
    if hi > lo {
        let (refined_r0, refined) = golden_section_max(
            |r0| rate_fresh(table.r_n, r0, table.big_r, lambda, scheme, quad),
            lo,
            hi,
            1e-7,
        )?;
        if refined.rate_per_area > best.rate_per_area
            || (refined.rate_per_area == best.rate_per_area && refined_r0 < best_r0)
        {
            best = refined;
            best_r0 = refined_r0;
        }
    }
    Ok((best_r0, best))
}

fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<(f64, RateResult)>
where
    F: Fn(f64) -> Result<RateResult>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > x_tol {
        if f1.rate_per_area >= f2.rate_per_area {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    if f1.rate_per_area >= f2.rate_per_area {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

/// Best reserved radius and rate for one scheme over `range`, by coarse
/// grid scan plus golden-section refinement.
pub fn optimize_r0(
    snr_db: f64,
    lambda: f64,
    big_r: f64,
    scheme: Scheme,
    range: (f64, f64),
    opts: &OptimizerOpts,
) -> Result<(f64, RateResult)> {
    let r_n = distance_from_snr_db(snr_db);
    let grid = optimizer_grid(r_n, range, opts)?;
    let table = R0Table::build(r_n, big_r, &grid, &opts.quad)?;
    best_r0_from_table(&table, scheme, lambda, &opts.quad)
}

fn optimizer_grid(r_n: f64, range: (f64, f64), opts: &OptimizerOpts) -> Result<SweepGrid> {
    let (lo, hi) = range;
    let min_radius = r_n * (1.0 + crate::geometry::MIN_RADIUS_MARGIN);
    if lo <= min_radius {
        return Err(Error::InvalidParameter(format!(
            "search range start {lo} must exceed the minimum radius of reserved area \
             r_n = {r_n:.4} (threshold {min_radius:.6})"
        )));
    }
    SweepGrid::new(lo, hi, opts.grid_step)
}

/// Per density: the best r0 and rate for each scheme.
pub fn sweep_density(
    snr_db: f64,
    big_r: f64,
    lambda_grid: &SweepGrid,
    r0_range: (f64, f64),
    opts: &OptimizerOpts,
) -> Result<Vec<SweepRecord>> {
    type DensityPoint = (f64, (f64, RateResult), (f64, RateResult));
    let r_n = distance_from_snr_db(snr_db);
    let grid = optimizer_grid(r_n, r0_range, opts)?;
    let table = R0Table::build(r_n, big_r, &grid, &opts.quad)?;
    let per_lambda: Vec<DensityPoint> = lambda_grid
        .values()
        .into_par_iter()
        .map(|lambda| {
            let cr = best_r0_from_table(&table, Scheme::Cr, lambda, &opts.quad)?;
            let plnc = best_r0_from_table(&table, Scheme::Plnc, lambda, &opts.quad)?;
            Ok((lambda, cr, plnc))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(2 * per_lambda.len());
    for (lambda, (cr_r0, cr), (plnc_r0, plnc)) in per_lambda {
        records.push(SweepRecord {
            x: lambda,
            scheme: Scheme::Cr,
            result: cr,
            best_r0: Some(cr_r0),
        });
        records.push(SweepRecord {
            x: lambda,
            scheme: Scheme::Plnc,
            result: plnc,
            best_r0: Some(plnc_r0),
        });
    }
    Ok(records)
}

/// Bisection on the sign of `rate_plnc - rate_cr` (each side optimized
/// over `r0_range`) down to [`CROSSOVER_TOL`]. No sign change in the
/// searched range is an answer, not an error.
pub fn find_crossover_density(
    snr_db: f64,
    big_r: f64,
    lambda_range: (f64, f64),
    r0_range: (f64, f64),
    opts: &OptimizerOpts,
) -> Result<CrossoverOutcome> {
    let (mut lo, mut hi) = lambda_range;
    if !(lo >= 0.0) || !(hi >= lo) {
        return Err(Error::InvalidParameter(format!(
            "density range [{lo}, {hi}] must satisfy 0 <= lo <= hi"
        )));
    }
    let r_n = distance_from_snr_db(snr_db);
    let grid = optimizer_grid(r_n, r0_range, opts)?;
    let table = R0Table::build(r_n, big_r, &grid, &opts.quad)?;
    let diff = |lambda: f64| -> Result<f64> {
        let (_, cr) = best_r0_from_table(&table, Scheme::Cr, lambda, &opts.quad)?;
        let (_, plnc) = best_r0_from_table(&table, Scheme::Plnc, lambda, &opts.quad)?;
        Ok(plnc.rate_per_area - cr.rate_per_area)
    };

    let dominant = |d: f64| if d > 0.0 { Scheme::Plnc } else { Scheme::Cr };
    let d_lo = diff(lo)?;
    if lo == hi {
        return Ok(if d_lo == 0.0 {
            CrossoverOutcome::Crossover { lambda_star: lo }
        } else {
            CrossoverOutcome::NoCrossover {
                dominant: dominant(d_lo),
            }
        });
    }
    let d_hi = diff(hi)?;
    if d_lo == 0.0 {
        return Ok(CrossoverOutcome::Crossover { lambda_star: lo });
    }
    if d_hi == 0.0 {
        return Ok(CrossoverOutcome::Crossover { lambda_star: hi });
    }
    if d_lo.signum() == d_hi.signum() {
        return Ok(CrossoverOutcome::NoCrossover {
            dominant: dominant(d_lo),
        });
    }
    let mut d_lo = d_lo;
    while hi - lo > CROSSOVER_TOL {
        let mid = 0.5 * (lo + hi);
        let d_mid = diff(mid)?;
        if d_mid == 0.0 {
            return Ok(CrossoverOutcome::Crossover { lambda_star: mid });
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Ok(CrossoverOutcome::Crossover {
        lambda_star: 0.5 * (lo + hi),
    })
}
