//! Seeded Monte Carlo oracle for the interference statistics.
//!
//! Interferers are scattered uniformly over a sampled region (the toroidal
//! annulus, one crescent, or everything outside a slot's reserved area) and
//! the empirical INR at a receiver is the sum of `1/r^4` over the points.
//! Placements are independent draws; draw `i` consumes a dedicated ChaCha
//! substream derived from `(seed, stream offset + i)`, so results are
//! bit-identical across runs and across any degree of parallelism: the
//! per-draw values are collected in draw order and reduced sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    crescent_area, reserved_area, NodeId, Point, Scheme, SlotReservation, SystemParams,
};
use crate::interference::{inr_breakdown, CompositeInr, InrQuantity};
use crate::quad::QuadratureSpec;
use crate::rate::{
    af_end_to_end_sinrs, distance_from_snr_db, linear_to_db, rates_from_composites, shannon_rate,
    sinr, LinkSinrs, RateResult,
};

/// How the number of interferers per placement is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountModel {
    /// N ~ Poisson(lambda * area): the point process with expectation
    /// exactly matching the analytic first-moment derivation.
    Poisson,
    /// N = round(lambda * area) on every draw; for sensitivity checks.
    FixedExpected,
}

impl CountModel {
    pub fn as_str(self) -> &'static str {
        match self {
            CountModel::Poisson => "poisson",
            CountModel::FixedExpected => "fixed-expected",
        }
    }
}

/// Trial count, seed and count model for an estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub count_model: CountModel,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 42,
            count_model: CountModel::Poisson,
        }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter(
                "Monte Carlo trial count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Mean, standard error and provenance of one estimated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Region an interferer placement is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McRegion {
    /// Annulus around the relay between radii `r0` and `R`.
    Toroidal,
    /// The A-side crescent, `disc(A, r0) \ disc(B, r0)`.
    Crescent,
    /// `disc(B, R)` minus the discs reserved in the given slot.
    OutsideReserved(SlotReservation),
}

// Geometry digested for the hot rejection loop.
struct PreparedRegion {
    region: McRegion,
    square_center: Point,
    half_width: f64,
    mean_count: f64,
    node_a: Point,
    node_b: Point,
    node_c: Point,
    r0_sq: f64,
    big_r_sq: f64,
}

impl PreparedRegion {
    fn new(params: &SystemParams, region: McRegion) -> Result<Self> {
        params.require_min_reserved_radius()?;
        params.require_reserved_inside_network()?;
        let r0 = params.r0();
        let big_r = params.big_r();
        let node_b = NodeId::B.position(params);
        let (square_center, half_width, area) = match region {
            McRegion::Toroidal => (
                node_b,
                big_r,
                std::f64::consts::PI * (big_r * big_r - r0 * r0),
            ),
            McRegion::Crescent => (NodeId::A.position(params), r0, crescent_area(params)?),
            McRegion::OutsideReserved(slot) => (
                node_b,
                big_r,
                std::f64::consts::PI * big_r * big_r - reserved_area(slot.scheme(), params)?,
            ),
        };
        Ok(Self {
            region,
            square_center,
            half_width,
            mean_count: params.lambda() * area,
            node_a: NodeId::A.position(params),
            node_b,
            node_c: NodeId::C.position(params),
            r0_sq: r0 * r0,
            big_r_sq: big_r * big_r,
        })
    }

    #[inline]
    fn accepts(&self, p: Point) -> bool {
        match self.region {
            McRegion::Toroidal => {
                let d = p.distance_sq_to(self.node_b);
                d > self.r0_sq && d <= self.big_r_sq
            }
            McRegion::Crescent => {
                p.distance_sq_to(self.node_a) <= self.r0_sq
                    && p.distance_sq_to(self.node_b) > self.r0_sq
            }
            McRegion::OutsideReserved(slot) => {
                if p.distance_sq_to(self.node_b) > self.big_r_sq {
                    return false;
                }
                for node in slot.reserving_nodes() {
                    let center = match node {
                        NodeId::A => self.node_a,
                        NodeId::B => self.node_b,
                        NodeId::C => self.node_c,
                    };
                    if p.distance_sq_to(center) <= self.r0_sq {
                        return false;
                    }
                }
                true
            }
        }
    }
}

fn draw_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_count(
    mean_count: f64,
    count_model: CountModel,
    poisson: Option<&Poisson<f64>>,
    rng: &mut ChaCha8Rng,
) -> u64 {
    if mean_count <= 0.0 {
        return 0;
    }
    match count_model {
        CountModel::Poisson => poisson.expect("poisson prepared").sample(rng) as u64,
        CountModel::FixedExpected => mean_count.round() as u64,
    }
}

#[inline]
fn sample_point(prepared: &PreparedRegion, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let x = prepared.square_center.x + (2.0 * rng.random::<f64>() - 1.0) * prepared.half_width;
        let y = prepared.square_center.y + (2.0 * rng.random::<f64>() - 1.0) * prepared.half_width;
        let p = Point::new(x, y);
        if prepared.accepts(p) {
            return p;
        }
    }
}

/// One placement of interferers for a slot: points uniform over
/// `disc(B, R)` minus the reserved region, with the count drawn from the
/// configured model. Deterministic in `(seed, draw_index)`.
pub fn sample_interferers(
    params: &SystemParams,
    slot: SlotReservation,
    count_model: CountModel,
    draw_index: u64,
    seed: u64,
) -> Result<Vec<Point>> {
    let prepared = PreparedRegion::new(params, McRegion::OutsideReserved(slot))?;
    let poisson = prepare_poisson(prepared.mean_count, count_model)?;
    let mut rng = draw_rng(seed, draw_index);
    let n = draw_count(prepared.mean_count, count_model, poisson.as_ref(), &mut rng);
    let mut points = Vec::with_capacity(n as usize);
    for _ in 0..n {
        points.push(sample_point(&prepared, &mut rng));
    }
    Ok(points)
}

fn prepare_poisson(mean_count: f64, count_model: CountModel) -> Result<Option<Poisson<f64>>> {
    if count_model != CountModel::Poisson || mean_count <= 0.0 {
        return Ok(None);
    }
    Poisson::new(mean_count)
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("invalid Poisson mean {mean_count}: {e}")))
}

// Per-draw sums of 1/r^4 toward up to three receivers, in draw order.
fn region_draw_sums(
    prepared: &PreparedRegion,
    receivers: &[Point],
    mc: &McConfig,
    stream_offset: u64,
) -> Result<Vec<[f64; 3]>> {
    assert!(receivers.len() <= 3);
    let poisson = prepare_poisson(prepared.mean_count, mc.count_model)?;
    let values: Vec<[f64; 3]> = (0..mc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = draw_rng(mc.seed, stream_offset + i);
            let n = draw_count(prepared.mean_count, mc.count_model, poisson.as_ref(), &mut rng);
            let mut sums = [0.0f64; 3];
            for _ in 0..n {
                let p = sample_point(prepared, &mut rng);
                for (k, receiver) in receivers.iter().enumerate() {
                    let d_sq = p.distance_sq_to(*receiver);
                    sums[k] += 1.0 / (d_sq * d_sq);
                }
            }
            sums
        })
        .collect();
    Ok(values)
}

// Mean and standard error of one column, in draw order. A degenerate
// sample (all draws identical, e.g. lambda = 0) returns the value itself
// so that deterministic cases stay bit-exact.
fn column_stats<const N: usize>(values: &[[f64; N]], column: usize) -> (f64, f64) {
    let first = values[0][column];
    if values.iter().all(|v| v[column] == first) {
        return (first, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|v| v[column]).sum::<f64>() / n;
    let ss = values
        .iter()
        .map(|v| {
            let d = v[column] - mean;
            d * d
        })
        .sum::<f64>();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

fn estimate_from_column(values: &[[f64; 3]], column: usize, mc: &McConfig) -> McEstimate {
    let (mean, std_error) = column_stats(values, column);
    McEstimate {
        mean,
        std_error,
        trials: mc.trials,
        seed: mc.seed,
    }
}

/// Empirical INR at `receiver` from interferers placed in `region`.
pub fn estimate_region_inr(
    params: &SystemParams,
    region: McRegion,
    receiver: NodeId,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    let prepared = PreparedRegion::new(params, region)?;
    let values = region_draw_sums(&prepared, &[receiver.position(params)], mc, 0)?;
    Ok(estimate_from_column(&values, 0, mc))
}

/// Empirical INR at `receiver` when the given slot's area is reserved:
/// the Monte Carlo counterpart of the scheme-composite INR.
pub fn estimate_inr(
    params: &SystemParams,
    slot: SlotReservation,
    receiver: NodeId,
    mc: &McConfig,
) -> Result<McEstimate> {
    estimate_region_inr(params, McRegion::OutsideReserved(slot), receiver, mc)
}

/// How `estimate_rates` turns placements into a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateEstimateMode {
    /// Estimate the composite INR means, then run them through the same
    /// rate algebra as the analytic path (the analytic convention).
    InrMean,
    /// Compute the end-to-end rate inside every placement and average the
    /// rates instead.
    PerRealization,
}

/// Monte Carlo rate estimate plus the INR estimates behind it.
#[derive(Debug, Clone)]
pub struct McRateResult {
    pub mode: RateEstimateMode,
    pub rate: RateResult,
    pub inr_at_relay: McEstimate,
    pub inr_at_end: McEstimate,
    /// Standard error of the per-placement rate per area
    /// (`PerRealization` mode only).
    pub rate_std_error: Option<f64>,
}

/// Estimate the end-to-end rate of a scheme by Monte Carlo.
pub fn estimate_rates(
    params: &SystemParams,
    scheme: Scheme,
    mode: RateEstimateMode,
    mc: &McConfig,
) -> Result<McRateResult> {
    mc.validate()?;
    match mode {
        RateEstimateMode::InrMean => estimate_rates_inr_mean(params, scheme, mc),
        RateEstimateMode::PerRealization => estimate_rates_per_realization(params, scheme, mc),
    }
}

fn estimate_rates_inr_mean(
    params: &SystemParams,
    scheme: Scheme,
    mc: &McConfig,
) -> Result<McRateResult> {
    let slot = match scheme {
        Scheme::Cr => SlotReservation::CrRelayReceives,
        Scheme::Plnc => SlotReservation::Plnc,
    };
    let prepared = PreparedRegion::new(params, McRegion::OutsideReserved(slot))?;
    let receivers = [NodeId::B.position(params), NodeId::A.position(params)];
    let values = region_draw_sums(&prepared, &receivers, mc, 0)?;
    let at_relay = estimate_from_column(&values, 0, mc);
    let at_end = estimate_from_column(&values, 1, mc);
    let rate = rates_from_composites(
        params,
        scheme,
        CompositeInr {
            at_relay: at_relay.mean,
            at_end: at_end.mean,
        },
    )?;
    Ok(McRateResult {
        mode: RateEstimateMode::InrMean,
        rate,
        inr_at_relay: at_relay,
        inr_at_end: at_end,
        rate_std_error: None,
    })
}

// Per-trial draws: stream 2i feeds the slot where the relay receives,
// stream 2i+1 the slot where the ends receive. For PLNC both use the
// three-disc region; placements are i.i.d. across slots.
fn estimate_rates_per_realization(
    params: &SystemParams,
    scheme: Scheme,
    mc: &McConfig,
) -> Result<McRateResult> {
    params.require_min_reserved_radius()?;
    let (slot_relay_rx, slot_end_rx) = match scheme {
        Scheme::Cr => (
            SlotReservation::CrRelayReceives,
            SlotReservation::CrEndReceives,
        ),
        Scheme::Plnc => (SlotReservation::Plnc, SlotReservation::Plnc),
    };
    let prepared_relay_rx = PreparedRegion::new(params, McRegion::OutsideReserved(slot_relay_rx))?;
    let prepared_end_rx = PreparedRegion::new(params, McRegion::OutsideReserved(slot_end_rx))?;
    let poisson_relay_rx = prepare_poisson(prepared_relay_rx.mean_count, mc.count_model)?;
    let poisson_end_rx = prepare_poisson(prepared_end_rx.mean_count, mc.count_model)?;

    let node_a = NodeId::A.position(params);
    let node_b = NodeId::B.position(params);
    let node_c = NodeId::C.position(params);
    let snr = params.link_snr();
    let area = reserved_area(scheme, params)?;
    let slots = scheme.slots_per_exchange() as f64;

    // Per trial: [rate_a_to_c, rate_c_to_a, rate_per_area, inr_relay, inr_end]
    let values: Vec<[f64; 5]> = (0..mc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng1 = draw_rng(mc.seed, 2 * i);
            let n1 = draw_count(
                prepared_relay_rx.mean_count,
                mc.count_model,
                poisson_relay_rx.as_ref(),
                &mut rng1,
            );
            let mut inr_b1 = 0.0;
            let mut inr_a1 = 0.0;
            for _ in 0..n1 {
                let p = sample_point(&prepared_relay_rx, &mut rng1);
                let db = p.distance_sq_to(node_b);
                let da = p.distance_sq_to(node_a);
                inr_b1 += 1.0 / (db * db);
                inr_a1 += 1.0 / (da * da);
            }

            let mut rng2 = draw_rng(mc.seed, 2 * i + 1);
            let n2 = draw_count(
                prepared_end_rx.mean_count,
                mc.count_model,
                poisson_end_rx.as_ref(),
                &mut rng2,
            );
            let mut inr_b2 = 0.0;
            let mut inr_a2 = 0.0;
            let mut inr_c2 = 0.0;
            for _ in 0..n2 {
                let p = sample_point(&prepared_end_rx, &mut rng2);
                let db = p.distance_sq_to(node_b);
                let da = p.distance_sq_to(node_a);
                let dc = p.distance_sq_to(node_c);
                inr_b2 += 1.0 / (db * db);
                inr_a2 += 1.0 / (da * da);
                inr_c2 += 1.0 / (dc * dc);
            }

            let (rate_a_to_c, rate_c_to_a, inr_end_sample) = match scheme {
                Scheme::Cr => {
                    // Slot pair 1: A->B then B->A (reserved {A, B});
                    // slot pair 2: C->B then B->C (reserved {B, C}).
                    let r_ab = shannon_rate(sinr(snr, inr_b1));
                    let r_ba = shannon_rate(sinr(snr, inr_a1));
                    let r_cb = shannon_rate(sinr(snr, inr_b2));
                    let r_bc = shannon_rate(sinr(snr, inr_c2));
                    (r_ab.min(r_bc), r_cb.min(r_ba), inr_a1)
                }
                Scheme::Plnc => {
                    let uplink = sinr(snr, inr_b1);
                    let downlink_a = sinr(snr, inr_a2);
                    let downlink_c = sinr(snr, inr_c2);
                    let links = LinkSinrs {
                        gamma_ab: uplink,
                        gamma_cb: uplink,
                        gamma_ba: downlink_a,
                        gamma_bc: downlink_c,
                    };
                    let (gamma_a, gamma_c) = af_end_to_end_sinrs(&links);
                    (shannon_rate(gamma_c), shannon_rate(gamma_a), inr_a2)
                }
            };
            let rate_per_area = (rate_a_to_c + rate_c_to_a) / (slots * area);
            [rate_a_to_c, rate_c_to_a, rate_per_area, inr_b1, inr_end_sample]
        })
        .collect();

    let (rate_a_to_c, _) = column_stats(&values, 0);
    let (rate_c_to_a, _) = column_stats(&values, 1);
    let (_, rate_std_error) = column_stats(&values, 2);
    let (inr_relay_mean, inr_relay_se) = column_stats(&values, 3);
    let (inr_end_mean, inr_end_se) = column_stats(&values, 4);
    let inr_at_relay = McEstimate {
        mean: inr_relay_mean,
        std_error: inr_relay_se,
        trials: mc.trials,
        seed: mc.seed,
    };
    let inr_at_end = McEstimate {
        mean: inr_end_mean,
        std_error: inr_end_se,
        trials: mc.trials,
        seed: mc.seed,
    };

    let rate = RateResult {
        scheme,
        rate_a_to_c,
        rate_c_to_a,
        reserved_area: area,
        rate_per_area: (rate_a_to_c + rate_c_to_a) / (slots * area),
        inr_used: CompositeInr {
            at_relay: inr_at_relay.mean,
            at_end: inr_at_end.mean,
        },
    };
    Ok(McRateResult {
        mode: RateEstimateMode::PerRealization,
        rate,
        inr_at_relay,
        inr_at_end,
        rate_std_error: Some(rate_std_error),
    })
}

/// One line of the analytic-versus-Monte-Carlo report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub snr_db: f64,
    pub lambda: f64,
    pub r0: f64,
    pub quantity: InrQuantity,
    pub analytic: f64,
    pub mc_mean: f64,
    pub mc_std_error: f64,
    pub z: f64,
    pub pass: bool,
}

impl ComparisonRow {
    /// Scores an estimate against an analytic value at the 3-sigma level.
    /// With zero standard error the estimate must match exactly.
    pub fn evaluate(
        params: &SystemParams,
        quantity: InrQuantity,
        analytic: f64,
        estimate: &McEstimate,
    ) -> Self {
        let (z, pass) = if estimate.std_error > 0.0 {
            let z = (estimate.mean - analytic) / estimate.std_error;
            (z, z.abs() <= 3.0)
        } else if estimate.mean == analytic {
            (0.0, true)
        } else {
            (f64::INFINITY, false)
        };
        ComparisonRow {
            snr_db: linear_to_db(params.link_snr()),
            lambda: params.lambda(),
            r0: params.r0(),
            quantity,
            analytic,
            mc_mean: estimate.mean,
            mc_std_error: estimate.std_error,
            z,
            pass,
        }
    }
}

// Passes share placements: each region is sampled once per parameter set
// and measured at every receiver that needs it. Streams are offset per
// region so no two regions consume the same substream.
const REGION_PASSES: [(McRegion, &[(NodeId, InrQuantity)]); 4] = [
    (
        McRegion::Toroidal,
        &[
            (NodeId::B, InrQuantity::ToroAtRelay),
            (NodeId::A, InrQuantity::ToroAtEnd),
        ],
    ),
    (
        McRegion::Crescent,
        &[
            (NodeId::A, InrQuantity::CreAtEndOwn),
            (NodeId::B, InrQuantity::CreAtRelay),
            (NodeId::C, InrQuantity::CreAtFarEnd),
        ],
    ),
    (
        McRegion::OutsideReserved(SlotReservation::CrRelayReceives),
        &[
            (NodeId::B, InrQuantity::CrAtRelay),
            (NodeId::A, InrQuantity::CrAtEnd),
        ],
    ),
    (
        McRegion::OutsideReserved(SlotReservation::Plnc),
        &[
            (NodeId::B, InrQuantity::PlncAtRelay),
            (NodeId::A, InrQuantity::PlncAtEnd),
        ],
    ),
];

/// The default validation grid: six configurations spanning link SNRs of
/// 20 and 30 dB, densities 0.2 and 7, and reserved radii of 1.2 and 2
/// node spacings, all with network radius 10.
pub fn default_validation_grid() -> Result<Vec<SystemParams>> {
    const CASES: [(f64, f64, f64); 6] = [
        (20.0, 0.2, 1.2),
        (20.0, 0.2, 2.0),
        (30.0, 0.2, 1.2),
        (20.0, 7.0, 1.2),
        (20.0, 7.0, 2.0),
        (30.0, 7.0, 2.0),
    ];
    CASES
        .iter()
        .map(|&(snr_db, lambda, r0_factor)| {
            let r_n = distance_from_snr_db(snr_db);
            SystemParams::new(r_n, r0_factor * r_n, 10.0, lambda)
        })
        .collect()
}

/// For every parameter set in `grid`, compare each analytic INR quantity
/// against its Monte Carlo region oracle. Rows come out in grid order,
/// then in `InrQuantity::ALL` order.
pub fn compare_with_analytic(
    grid: &[SystemParams],
    mc: &McConfig,
    quad: &QuadratureSpec,
) -> Result<Vec<ComparisonRow>> {
    mc.validate()?;
    let mut rows = Vec::with_capacity(grid.len() * InrQuantity::ALL.len());
    for params in grid {
        let breakdown = inr_breakdown(params, quad)?;
        let mut estimates: Vec<(InrQuantity, McEstimate)> = Vec::with_capacity(9);
        for (pass_index, (region, measurements)) in REGION_PASSES.iter().enumerate() {
            let prepared = PreparedRegion::new(params, *region)?;
            let receivers: Vec<Point> = measurements
                .iter()
                .map(|(node, _)| node.position(params))
                .collect();
            let stream_offset = pass_index as u64 * mc.trials;
            let values = region_draw_sums(&prepared, &receivers, mc, stream_offset)?;
            for (k, (_, quantity)) in measurements.iter().enumerate() {
                estimates.push((*quantity, estimate_from_column(&values, k, mc)));
            }
        }
        for quantity in InrQuantity::ALL {
            let estimate = estimates
                .iter()
                .find(|(q, _)| *q == quantity)
                .map(|(_, e)| *e)
                .expect("every quantity measured");
            rows.push(ComparisonRow::evaluate(
                params,
                quantity,
                breakdown.get(quantity),
                &estimate,
            ));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_reserved_region;

    fn params(r_n: f64, r0: f64, big_r: f64, lambda: f64) -> SystemParams {
        SystemParams::new(r_n, r0, big_r, lambda).unwrap()
    }

    fn mc(trials: u64, seed: u64) -> McConfig {
        McConfig {
            trials,
            seed,
            count_model: CountModel::Poisson,
        }
    }

    #[test]
    fn sampler_zero_density_is_empty() {
        let p = params(0.25, 0.5, 10.0, 0.0);
        let pts =
            sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, 0, 42).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn sampler_respects_region_contract() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        let b = NodeId::B.position(&p);
        for slot in [
            SlotReservation::CrRelayReceives,
            SlotReservation::CrEndReceives,
            SlotReservation::Plnc,
        ] {
            for draw in 0..50 {
                let pts = sample_interferers(&p, slot, CountModel::Poisson, draw, 42).unwrap();
                for pt in pts {
                    assert!(!in_reserved_region(pt, slot, &p), "{pt:?} inside reserved");
                    assert!(pt.distance_to(b) <= 10.0);
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_per_draw() {
        let p = params(0.25, 0.5, 10.0, 0.5);
        let a = sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, 3, 42).unwrap();
        let b = sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, 4, 42).unwrap();
        assert_ne!(a, c);
        let d = sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, 3, 43).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn sampler_poisson_count_matches_expectation() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        let slot = SlotReservation::CrRelayReceives;
        let expected_per_draw =
            0.2 * (std::f64::consts::PI * 100.0 - reserved_area(Scheme::Cr, &p).unwrap());
        let draws = 3000u64;
        let total: u64 = (0..draws)
            .map(|i| {
                sample_interferers(&p, slot, CountModel::Poisson, i, 42)
                    .unwrap()
                    .len() as u64
            })
            .sum();
        let mean_total = expected_per_draw * draws as f64;
        let sd_total = mean_total.sqrt();
        assert!(
            ((total as f64) - mean_total).abs() <= 3.0 * sd_total,
            "total {total} vs expected {mean_total} +- {sd_total}"
        );
    }

    #[test]
    fn sampler_fixed_expected_count() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        let slot = SlotReservation::Plnc;
        let expected =
            (0.2 * (std::f64::consts::PI * 100.0 - reserved_area(Scheme::Plnc, &p).unwrap()))
                .round() as usize;
        for draw in 0..5 {
            let pts =
                sample_interferers(&p, slot, CountModel::FixedExpected, draw, 42).unwrap();
            assert_eq!(pts.len(), expected);
        }
    }

    #[test]
    fn sampler_point_density_is_uniform() {
        // Count points falling in a probe disc well inside the legal region
        // and compare with lambda * probe area.
        let p = params(0.25, 0.5, 10.0, 0.5);
        let probe_center = Point::new(4.0, 3.0);
        let probe_radius = 1.5f64;
        let draws = 2000u64;
        let mut hits = 0u64;
        for i in 0..draws {
            for pt in
                sample_interferers(&p, SlotReservation::Plnc, CountModel::Poisson, i, 7).unwrap()
            {
                if pt.distance_to(probe_center) <= probe_radius {
                    hits += 1;
                }
            }
        }
        let expected = 0.5 * std::f64::consts::PI * probe_radius * probe_radius * draws as f64;
        let sd = expected.sqrt();
        assert!(
            ((hits as f64) - expected).abs() <= 3.0 * sd,
            "hits {hits} vs {expected} +- {sd}"
        );
    }

    #[test]
    fn estimate_zero_density() {
        let p = params(0.25, 0.5, 10.0, 0.0);
        let est = estimate_inr(&p, SlotReservation::Plnc, NodeId::B, &mc(100, 42)).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn estimate_requires_trials() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        assert!(estimate_inr(&p, SlotReservation::Plnc, NodeId::B, &mc(0, 42)).is_err());
    }

    #[test]
    fn estimates_identical_across_thread_counts() {
        let p = params(0.25, 0.5, 10.0, 0.5);
        let config = mc(400, 42);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                estimate_inr(&p, SlotReservation::CrRelayReceives, NodeId::B, &config).unwrap()
            })
        };
        let single = run(1);
        let multi = run(4);
        assert_eq!(single.mean.to_bits(), multi.mean.to_bits());
        assert_eq!(single.std_error.to_bits(), multi.std_error.to_bits());
    }

    #[test]
    fn plnc_end_nodes_are_symmetric() {
        // Independent seeds; the two estimates target the same value.
        let p = params(0.31623, 0.55, 10.0, 0.5);
        let at_a = estimate_inr(&p, SlotReservation::Plnc, NodeId::A, &mc(20_000, 42)).unwrap();
        let at_c = estimate_inr(&p, SlotReservation::Plnc, NodeId::C, &mc(20_000, 43)).unwrap();
        let combined_se = (at_a.std_error.powi(2) + at_c.std_error.powi(2)).sqrt();
        assert!(
            (at_a.mean - at_c.mean).abs() <= 3.0 * combined_se,
            "A {} vs C {} (se {combined_se})",
            at_a.mean,
            at_c.mean
        );
    }

    #[test]
    fn std_error_shrinks_like_inverse_sqrt_trials() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        let small = estimate_inr(&p, SlotReservation::Plnc, NodeId::B, &mc(10_000, 42)).unwrap();
        let large =
            estimate_inr(&p, SlotReservation::Plnc, NodeId::B, &mc(1_000_000, 42)).unwrap();
        let ratio = small.std_error / large.std_error;
        assert!(
            (ratio - 10.0).abs() <= 2.0,
            "se ratio {ratio} should be ~10 (1/sqrt trials)"
        );
    }

    #[test]
    fn rate_estimate_zero_density_matches_analytic_exactly() {
        let p = params(0.31623, 0.5, 10.0, 0.0);
        let quad = QuadratureSpec::default();
        for scheme in [Scheme::Cr, Scheme::Plnc] {
            let analytic = match scheme {
                Scheme::Cr => crate::rate::end_to_end_rate_cr(&p, &quad).unwrap(),
                Scheme::Plnc => crate::rate::end_to_end_rate_plnc(&p, &quad).unwrap(),
            };
            for mode in [RateEstimateMode::InrMean, RateEstimateMode::PerRealization] {
                let est = estimate_rates(&p, scheme, mode, &mc(50, 42)).unwrap();
                assert_eq!(est.rate.rate_per_area, analytic.rate_per_area);
                assert_eq!(est.rate.rate_a_to_c, analytic.rate_a_to_c);
            }
        }
    }

    #[test]
    fn per_realization_reports_both_modes() {
        let p = params(0.31623, 0.6, 10.0, 0.5);
        let config = mc(2_000, 42);
        let by_mean =
            estimate_rates(&p, Scheme::Plnc, RateEstimateMode::InrMean, &config).unwrap();
        let by_realization =
            estimate_rates(&p, Scheme::Plnc, RateEstimateMode::PerRealization, &config).unwrap();
        assert!(by_mean.rate_std_error.is_none());
        let se = by_realization.rate_std_error.unwrap();
        assert!(se > 0.0);
        assert!(by_mean.rate.rate_per_area > 0.0);
        assert!(by_realization.rate.rate_per_area > 0.0);
    }

    #[test]
    fn comparison_empty_grid() {
        let rows =
            compare_with_analytic(&[], &mc(10, 42), &QuadratureSpec::default()).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn comparison_flags_corrupted_analytic_value() {
        let p = params(0.25, 0.5, 10.0, 0.2);
        let est = estimate_inr(&p, SlotReservation::Plnc, NodeId::B, &mc(2_000, 42)).unwrap();
        let honest = ComparisonRow::evaluate(&p, InrQuantity::PlncAtRelay, est.mean, &est);
        assert!(honest.pass);
        let corrupted =
            ComparisonRow::evaluate(&p, InrQuantity::PlncAtRelay, est.mean * 1.5, &est);
        assert!(!corrupted.pass);
        assert!(corrupted.z.abs() > 3.0);
    }

    #[test]
    fn comparison_zero_density_is_exact() {
        let p = params(0.25, 0.5, 10.0, 0.0);
        let rows = compare_with_analytic(&[p], &mc(50, 42), &QuadratureSpec::default()).unwrap();
        assert_eq!(rows.len(), InrQuantity::ALL.len());
        for row in rows {
            assert!(row.pass, "{:?} failed", row.quantity);
            assert_eq!(row.mc_mean, 0.0);
            assert_eq!(row.z, 0.0);
        }
    }
}
