//! Expected INR (linear scale) at each node from each interference region.
//!
//! Interferers occupy the annulus centered at the relay B between radii
//! `r0` and `R`, minus the reserved discs. The toroidal contributions have
//! closed forms; the crescent contributions are adaptive quadratures. The
//! per-scheme composites subtract the crescent terms from the toroidal
//! ones, which is where the model's numerical fragility lives: both end
//! terms diverge individually as `r0 -> r_n` while their difference stays
//! finite, hence the strict minimum-radius guard.
//!
//! Every quantity is carried in linear scale; decibels are presentation
//! only. All quantities are exactly linear in the density `lambda`, which
//! is factored out of every integral and applied as a final scale.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{crescent_half_angle, Scheme, SystemParams};
use crate::quad::{integrate, QuadratureSpec};

/// Composite INR seen by the relay and by an end node under one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeInr {
    pub at_relay: f64,
    pub at_end: f64,
}

/// All toroidal/crescent INR components and the CR/PLNC composites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InrBreakdown {
    /// Toroidal INR at the relay B.
    pub toro_at_relay: f64,
    /// Toroidal INR at an end node.
    pub toro_at_end: f64,
    /// A-side crescent seen from A itself.
    pub cre_at_end_own: f64,
    /// A-side crescent seen from the relay B.
    pub cre_at_relay: f64,
    /// A-side crescent seen from the far end C.
    pub cre_at_far_end: f64,
    pub cr_at_relay: f64,
    pub cr_at_end: f64,
    pub plnc_at_relay: f64,
    pub plnc_at_end: f64,
}

impl InrBreakdown {
    pub fn get(&self, quantity: InrQuantity) -> f64 {
        match quantity {
            InrQuantity::ToroAtRelay => self.toro_at_relay,
            InrQuantity::ToroAtEnd => self.toro_at_end,
            InrQuantity::CreAtEndOwn => self.cre_at_end_own,
            InrQuantity::CreAtRelay => self.cre_at_relay,
            InrQuantity::CreAtFarEnd => self.cre_at_far_end,
            InrQuantity::CrAtRelay => self.cr_at_relay,
            InrQuantity::CrAtEnd => self.cr_at_end,
            InrQuantity::PlncAtRelay => self.plnc_at_relay,
            InrQuantity::PlncAtEnd => self.plnc_at_end,
        }
    }

    pub fn composite(&self, scheme: Scheme) -> CompositeInr {
        match scheme {
            Scheme::Cr => CompositeInr {
                at_relay: self.cr_at_relay,
                at_end: self.cr_at_end,
            },
            Scheme::Plnc => CompositeInr {
                at_relay: self.plnc_at_relay,
                at_end: self.plnc_at_end,
            },
        }
    }
}

/// Names for the breakdown entries, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InrQuantity {
    ToroAtRelay,
    ToroAtEnd,
    CreAtEndOwn,
    CreAtRelay,
    CreAtFarEnd,
    CrAtRelay,
    CrAtEnd,
    PlncAtRelay,
    PlncAtEnd,
}

impl InrQuantity {
    pub const ALL: [InrQuantity; 9] = [
        InrQuantity::ToroAtRelay,
        InrQuantity::ToroAtEnd,
        InrQuantity::CreAtEndOwn,
        InrQuantity::CreAtRelay,
        InrQuantity::CreAtFarEnd,
        InrQuantity::CrAtRelay,
        InrQuantity::CrAtEnd,
        InrQuantity::PlncAtRelay,
        InrQuantity::PlncAtEnd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InrQuantity::ToroAtRelay => "inr_toro_at_relay",
            InrQuantity::ToroAtEnd => "inr_toro_at_end",
            InrQuantity::CreAtEndOwn => "inr_cre_at_end_own",
            InrQuantity::CreAtRelay => "inr_cre_at_relay",
            InrQuantity::CreAtFarEnd => "inr_cre_at_far_end",
            InrQuantity::CrAtRelay => "inr_cr_at_relay",
            InrQuantity::CrAtEnd => "inr_cr_at_end",
            InrQuantity::PlncAtRelay => "inr_plnc_at_relay",
            InrQuantity::PlncAtEnd => "inr_plnc_at_end",
        }
    }
}

/// The five region components per unit density (`lambda = 1`).
///
/// Everything is linear in `lambda`, so sweeps over density can reuse one
/// set of quadratures; `breakdown` applies the scale and the composite
/// clamping rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitInr {
    pub toro_at_relay: f64,
    pub toro_at_end: f64,
    pub cre_at_end_own: f64,
    pub cre_at_relay: f64,
    pub cre_at_far_end: f64,
}

impl UnitInr {
    /// Scale to a density and assemble composites.
    pub fn breakdown(&self, lambda: f64) -> Result<InrBreakdown> {
        let toro_at_relay = lambda * self.toro_at_relay;
        let toro_at_end = lambda * self.toro_at_end;
        let cre_at_end_own = lambda * self.cre_at_end_own;
        let cre_at_relay = lambda * self.cre_at_relay;
        let cre_at_far_end = lambda * self.cre_at_far_end;
        Ok(InrBreakdown {
            toro_at_relay,
            toro_at_end,
            cre_at_end_own,
            cre_at_relay,
            cre_at_far_end,
            cr_at_relay: clamp_composite(toro_at_relay - cre_at_relay, "CR INR at relay")?,
            cr_at_end: clamp_composite(toro_at_end - cre_at_end_own, "CR INR at end")?,
            plnc_at_relay: clamp_composite(
                toro_at_relay - 2.0 * cre_at_relay,
                "PLNC INR at relay",
            )?,
            plnc_at_end: clamp_composite(
                toro_at_end - cre_at_end_own - cre_at_far_end,
                "PLNC INR at end",
            )?,
        })
    }
}

// Floating-point residue from the subtraction is forgiven down to -1e-9;
// anything lower signals a numerical bug and is reported, never hidden.
fn clamp_composite(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -1e-9 {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!(
            "{what} evaluated to {value:.6e}, below the -1e-9 floor"
        )))
    }
}

/// Expected toroidal INR at the relay: `pi lambda (1/r0^2 - 1/R^2)`.
pub fn inr_toroidal_at_relay(params: &SystemParams) -> f64 {
    params.lambda() * unit_toro_at_relay(params)
}

/// Toroidal INR at the relay for an unbounded network: `pi lambda / r0^2`.
pub fn inr_toroidal_at_relay_unbounded(params: &SystemParams) -> f64 {
    params.lambda() * PI / (params.r0() * params.r0())
}

/// Expected toroidal INR at an end node:
/// `pi lambda { r0^2/(r0^2 - r_n^2)^2 - R^2/(R^2 - r_n^2)^2 }`.
///
/// Diverges as `r0 -> r_n`, hence the strict minimum-radius guard.
pub fn inr_toroidal_at_end(params: &SystemParams) -> Result<f64> {
    params.require_min_reserved_radius()?;
    Ok(params.lambda() * unit_toro_at_end(params))
}

/// Expected INR at A from its own crescent, by 1-D adaptive quadrature of
/// the reduced integrand `2 lambda phi(r) / r^3` over `[r0 - r_n, r0]`
/// (the crescent area cancels out of count times density).
pub fn inr_crescent_at_end_own(params: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    params.require_min_reserved_radius()?;
    Ok(params.lambda() * unit_cre_at_end_own(params, quad)?)
}

/// Expected INR at the relay B from the A-side crescent (2-D quadrature).
pub fn inr_crescent_at_relay(params: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    params.require_min_reserved_radius()?;
    Ok(params.lambda() * unit_crescent_seen_from(params, quad, CrescentObserver::Relay)?)
}

/// Expected INR at the far end C from the A-side crescent (2-D quadrature).
pub fn inr_crescent_at_far_end(params: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    params.require_min_reserved_radius()?;
    Ok(params.lambda() * unit_crescent_seen_from(params, quad, CrescentObserver::FarEnd)?)
}

/// Composite CR INR: toroidal minus one crescent, at the relay and at the
/// receiving end node (the same value applies to A and C by symmetry).
pub fn composite_inr_cr(params: &SystemParams, quad: &QuadratureSpec) -> Result<CompositeInr> {
    Ok(inr_breakdown(params, quad)?.composite(Scheme::Cr))
}

/// Composite PLNC INR: the relay loses both crescents, an end node loses
/// its own crescent plus the far one (whose INR equals the far-end view of
/// the near crescent by symmetry).
pub fn composite_inr_plnc(params: &SystemParams, quad: &QuadratureSpec) -> Result<CompositeInr> {
    Ok(inr_breakdown(params, quad)?.composite(Scheme::Plnc))
}

/// All components and composites for one parameter set.
pub fn inr_breakdown(params: &SystemParams, quad: &QuadratureSpec) -> Result<InrBreakdown> {
    unit_inr(params, quad)?.breakdown(params.lambda())
}

/// The unit-density components; the entry point for density sweeps that
/// want to pay for the quadratures once.
pub fn unit_inr(params: &SystemParams, quad: &QuadratureSpec) -> Result<UnitInr> {
    params.require_min_reserved_radius()?;
    params.require_reserved_inside_network()?;
    Ok(UnitInr {
        toro_at_relay: unit_toro_at_relay(params),
        toro_at_end: unit_toro_at_end(params),
        cre_at_end_own: unit_cre_at_end_own(params, quad)?,
        cre_at_relay: unit_crescent_seen_from(params, quad, CrescentObserver::Relay)?,
        cre_at_far_end: unit_crescent_seen_from(params, quad, CrescentObserver::FarEnd)?,
    })
}

fn unit_toro_at_relay(params: &SystemParams) -> f64 {
    let r0 = params.r0();
    let big_r = params.big_r();
    PI * (1.0 / (r0 * r0) - 1.0 / (big_r * big_r))
}

fn unit_toro_at_end(params: &SystemParams) -> f64 {
    let r0_sq = params.r0() * params.r0();
    let big_r_sq = params.big_r() * params.big_r();
    let rn_sq = params.r_n() * params.r_n();
    let near = r0_sq / ((r0_sq - rn_sq) * (r0_sq - rn_sq));
    let far = big_r_sq / ((big_r_sq - rn_sq) * (big_r_sq - rn_sq));
    PI * (near - far)
}

fn unit_cre_at_end_own(params: &SystemParams, quad: &QuadratureSpec) -> Result<f64> {
    let lo = params.r0() - params.r_n();
    let hi = params.r0();
    let inner_err: Cell<Option<Error>> = Cell::new(None);
    let value = integrate(
        |r_a| match crescent_half_angle(r_a, params) {
            Ok(phi) => phi / (r_a * r_a * r_a),
            Err(e) => {
                inner_err.set(Some(e));
                0.0
            }
        },
        lo,
        hi,
        quad,
    )?;
    if let Some(e) = inner_err.take() {
        return Err(e);
    }
    Ok(2.0 * value)
}

#[derive(Clone, Copy)]
enum CrescentObserver {
    Relay,
    FarEnd,
}

// Iterated 2-D quadrature of r_a / r_obs(r_a, theta)^4 over the crescent,
// exploiting the integrand's symmetry in theta. Inner failures are carried
// out through a cell because the outer integrand is infallible by type.
fn unit_crescent_seen_from(
    params: &SystemParams,
    quad: &QuadratureSpec,
    observer: CrescentObserver,
) -> Result<f64> {
    let r_n = params.r_n();
    let lo = params.r0() - params.r_n();
    let hi = params.r0();
    // Distance-squared coefficients: relay uses (r_n^2, 2 r_n),
    // far end uses (4 r_n^2, 4 r_n).
    let (off, cross) = match observer {
        CrescentObserver::Relay => (r_n * r_n, 2.0 * r_n),
        CrescentObserver::FarEnd => (4.0 * r_n * r_n, 4.0 * r_n),
    };
    let failure: Cell<Option<Error>> = Cell::new(None);
    let value = integrate(
        |r_a| {
            let phi = match crescent_half_angle(r_a, params) {
                Ok(phi) => phi,
                Err(e) => {
                    failure.set(Some(e));
                    return 0.0;
                }
            };
            if phi <= 0.0 {
                return 0.0;
            }
            let inner = integrate(
                |theta| {
                    let d_sq = r_a * r_a + off + cross * r_a * theta.cos();
                    1.0 / (d_sq * d_sq)
                },
                0.0,
                phi,
                quad,
            );
            match inner {
                Ok(v) => 2.0 * r_a * v,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        lo,
        hi,
        quad,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(value)
}
