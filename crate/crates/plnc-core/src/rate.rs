//! Link budget and end-to-end rate per unit area for both schemes.
//!
//! Rates are computed from the expected INR (first-moment substitution),
//! matching the analytic pipeline; averaging rates over interference
//! realizations instead is the Monte Carlo module's business. Slot time
//! cancels out of the per-area rates and is never represented.

use crate::error::{Error, Result};
use crate::geometry::{reserved_area, Scheme, SystemParams};
use crate::interference::{composite_inr_cr, composite_inr_plnc, CompositeInr};
use crate::quad::QuadratureSpec;

/// Linear SINRs of the four directed links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSinrs {
    pub gamma_ab: f64,
    pub gamma_ba: f64,
    pub gamma_bc: f64,
    pub gamma_cb: f64,
}

/// End-to-end outcome for one scheme at one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub scheme: Scheme,
    /// Rate of the A-to-C direction (for CR: min of the two hops; for
    /// PLNC: the rate decoded at C).
    pub rate_a_to_c: f64,
    /// Rate of the C-to-A direction.
    pub rate_c_to_a: f64,
    /// Reserved area per slot.
    pub reserved_area: f64,
    /// `(rate_a_to_c + rate_c_to_a) / (slots_per_exchange * reserved_area)`.
    pub rate_per_area: f64,
    /// The composite INR pair that produced the link SINRs.
    pub inr_used: CompositeInr,
}

/// Link SNR from distance under the path-loss-only channel with exponent 4
/// and 0 dB at unit distance: `d^-4`.
pub fn snr_linear_from_distance(d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "distance must be positive and finite; got {d}"
        )));
    }
    Ok(d.powi(-4))
}

/// Distance achieving a given link SNR in dB: `10^(-snr_db / 40)`.
pub fn distance_from_snr_db(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 40.0)
}

/// `snr / (1 + inr)`, all linear.
pub fn sinr(snr: f64, inr: f64) -> f64 {
    snr / (1.0 + inr)
}

/// Shannon rate `log2(1 + sinr)` in bit/s/Hz.
pub fn shannon_rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// Linear power ratio to decibels (presentation only).
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// End-to-end SINRs at the destinations A and C under amplify-and-forward
/// PLNC. The denominators are asymmetric by construction:
/// `gamma_a = g_ba g_cb / (1 + g_ba + g_ab + g_cb)` and
/// `gamma_c = g_ab g_bc / (1 + g_ab + g_bc + g_cb)`.
pub fn af_end_to_end_sinrs(links: &LinkSinrs) -> (f64, f64) {
    let gamma_a = links.gamma_ba * links.gamma_cb
        / (1.0 + links.gamma_ba + links.gamma_ab + links.gamma_cb);
    let gamma_c = links.gamma_ab * links.gamma_bc
        / (1.0 + links.gamma_ab + links.gamma_bc + links.gamma_cb);
    (gamma_a, gamma_c)
}

/// The rate algebra shared by the analytic path and the Monte Carlo
/// estimators: given the composite INR pair for a scheme, produce the
/// end-to-end rate per unit area.
///
/// Receiver-side INR assignment: in any slot the relay experiences
/// `at_relay` and an end node `at_end`. For CR that resolves the four
/// link SINRs directly; for PLNC the first slot loads both multiple-access
/// links with `at_relay` and the broadcast slot loads both downlinks with
/// `at_end`.
pub fn rates_from_composites(
    params: &SystemParams,
    scheme: Scheme,
    inr: CompositeInr,
) -> Result<RateResult> {
    params.require_min_reserved_radius()?;
    if inr.at_relay < 0.0 || inr.at_end < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "composite INR must be nonnegative; got at_relay = {}, at_end = {}",
            inr.at_relay, inr.at_end
        )));
    }
    let snr = params.link_snr();
    let area = reserved_area(scheme, params)?;
    let (rate_a_to_c, rate_c_to_a) = match scheme {
        Scheme::Cr => {
            let r_ab = shannon_rate(sinr(snr, inr.at_relay));
            let r_cb = r_ab;
            let r_ba = shannon_rate(sinr(snr, inr.at_end));
            let r_bc = r_ba;
            (r_ab.min(r_bc), r_cb.min(r_ba))
        }
        Scheme::Plnc => {
            let uplink = sinr(snr, inr.at_relay);
            let downlink = sinr(snr, inr.at_end);
            let links = LinkSinrs {
                gamma_ab: uplink,
                gamma_cb: uplink,
                gamma_ba: downlink,
                gamma_bc: downlink,
            };
            let (gamma_a, gamma_c) = af_end_to_end_sinrs(&links);
            (shannon_rate(gamma_c), shannon_rate(gamma_a))
        }
    };
    let slots = scheme.slots_per_exchange() as f64;
    Ok(RateResult {
        scheme,
        rate_a_to_c,
        rate_c_to_a,
        reserved_area: area,
        rate_per_area: (rate_a_to_c + rate_c_to_a) / (slots * area),
        inr_used: inr,
    })
}

/// End-to-end CR rate per unit area from the analytic composite INR.
pub fn end_to_end_rate_cr(params: &SystemParams, quad: &QuadratureSpec) -> Result<RateResult> {
    let inr = composite_inr_cr(params, quad)?;
    rates_from_composites(params, Scheme::Cr, inr)
}

/// End-to-end PLNC rate per unit area from the analytic composite INR.
pub fn end_to_end_rate_plnc(params: &SystemParams, quad: &QuadratureSpec) -> Result<RateResult> {
    let inr = composite_inr_plnc(params, quad)?;
    rates_from_composites(params, Scheme::Plnc, inr)
}
