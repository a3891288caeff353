//! Planar geometry of the three-node line topology and its reserved areas.
//!
//! Nodes sit on the x-axis: A at the origin, relay B at `(r_n, 0)`, C at
//! `(2 r_n, 0)`. Every closed form below presupposes this frame, as does the
//! Monte Carlo sampler. Angles around A are measured with `theta_a = 0`
//! pointing away from B (toward negative x), the only convention that keeps
//! the relay- and far-end-distance transforms mutually consistent.

use crate::error::{Error, Result};

/// Tolerance for clamping inverse-trig arguments that sit on a domain edge.
const TRIG_CLAMP_TOL: f64 = 1e-12;

/// Relative margin above `r_n` below which composite-INR and rate
/// evaluations are rejected (the end-node interference forms diverge
/// individually as `r0 -> r_n`).
pub const MIN_RADIUS_MARGIN: f64 = 1e-6;

/// A point in the plane of the deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: Point) -> f64 {
        self.distance_sq_to(other).sqrt()
    }

    pub fn distance_sq_to(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// The three nodes of the two-way relaying link; B is the relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeId {
    A,
    B,
    C,
}

impl NodeId {
    /// Fixed coordinates: A = (0,0), B = (r_n, 0), C = (2 r_n, 0).
    pub fn position(self, params: &SystemParams) -> Point {
        match self {
            NodeId::A => Point::new(0.0, 0.0),
            NodeId::B => Point::new(params.r_n(), 0.0),
            NodeId::C => Point::new(2.0 * params.r_n(), 0.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeId::A => "A",
            NodeId::B => "B",
            NodeId::C => "C",
        }
    }
}

/// Relaying scheme under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Conventional store-and-forward relaying: 4 slots per exchange,
    /// two discs reserved per slot.
    Cr,
    /// Physical-layer network coding (amplify-and-forward): 2 slots per
    /// exchange, all three discs reserved in both slots.
    Plnc,
}

impl Scheme {
    pub fn slots_per_exchange(self) -> u32 {
        match self {
            Scheme::Cr => 4,
            Scheme::Plnc => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Cr => "CR",
            Scheme::Plnc => "PLNC",
        }
    }
}

/// Which discs are reserved during one slot.
///
/// CR reserves discs around the active transmitter-receiver pair only;
/// PLNC reserves discs around all three nodes in both slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotReservation {
    /// An end node transmits to the relay; discs around {A, B}.
    CrRelayReceives,
    /// The relay transmits to an end node; discs around {B, C}.
    CrEndReceives,
    /// Both PLNC slots; discs around {A, B, C}.
    Plnc,
}

impl SlotReservation {
    pub fn scheme(self) -> Scheme {
        match self {
            SlotReservation::CrRelayReceives | SlotReservation::CrEndReceives => Scheme::Cr,
            SlotReservation::Plnc => Scheme::Plnc,
        }
    }

    pub fn reserving_nodes(self) -> &'static [NodeId] {
        match self {
            SlotReservation::CrRelayReceives => &[NodeId::A, NodeId::B],
            SlotReservation::CrEndReceives => &[NodeId::B, NodeId::C],
            SlotReservation::Plnc => &[NodeId::A, NodeId::B, NodeId::C],
        }
    }
}

/// Normalized geometry and interference environment.
///
/// Distances are normalized so that a unit-length link has 0 dB SNR under
/// the path-loss-only channel (exponent 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    r_n: f64,
    r0: f64,
    big_r: f64,
    lambda: f64,
}

impl SystemParams {
    /// Validates `r_n > 0`, `r0 > 0`, `big_r > r0`, `lambda >= 0`.
    ///
    /// `r0 > r_n` is deliberately *not* required here: pure geometry is
    /// well defined without it. Composite-INR and rate evaluations impose
    /// it through [`SystemParams::require_min_reserved_radius`].
    pub fn new(r_n: f64, r0: f64, big_r: f64, lambda: f64) -> Result<Self> {
        if !(r_n > 0.0) || !r_n.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "node spacing r_n must be positive and finite; got {r_n}"
            )));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reserved radius r0 must be positive and finite; got {r0}"
            )));
        }
        if !(big_r > r0) {
            return Err(Error::InvalidParameter(format!(
                "network radius R = {big_r} must exceed the reserved radius r0 = {r0}"
            )));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interferer density lambda must be finite and >= 0; got {lambda}"
            )));
        }
        Ok(Self {
            r_n,
            r0,
            big_r,
            lambda,
        })
    }

    pub fn r_n(&self) -> f64 {
        self.r_n
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn big_r(&self) -> f64 {
        self.big_r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Link SNR (linear) of the A-B and B-C hops: `r_n^-4`.
    pub fn link_snr(&self) -> f64 {
        self.r_n.powi(-4)
    }

    /// Same geometry with a different interferer density.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.r_n, self.r0, self.big_r, lambda)
    }

    /// Same geometry with a different reserved radius.
    pub fn with_r0(&self, r0: f64) -> Result<Self> {
        Self::new(self.r_n, r0, self.big_r, self.lambda)
    }

    /// Smallest admissible reserved radius for composite-INR and rate
    /// evaluation: `r_n * (1 + MIN_RADIUS_MARGIN)`.
    pub fn min_reserved_radius(&self) -> f64 {
        self.r_n * (1.0 + MIN_RADIUS_MARGIN)
    }

    /// Rejects reserved radii at or below the minimum radius of reserved
    /// area. The threshold is strict: as `r0 -> r_n` the end-node toroidal
    /// and crescent INR terms diverge individually and their difference
    /// loses all precision.
    pub fn require_min_reserved_radius(&self) -> Result<()> {
        if self.r0 <= self.min_reserved_radius() {
            return Err(Error::InvalidParameter(format!(
                "r0 = {:.4} must exceed the minimum radius of reserved area r_n = {:.4} \
                 (node spacing; threshold {:.6})",
                self.r0,
                self.r_n,
                self.min_reserved_radius()
            )));
        }
        Ok(())
    }

    /// Rejects configurations whose reserved discs poke outside the network
    /// disc of radius R around B; the scheme-composite interference forms
    /// assume full containment.
    pub fn require_reserved_inside_network(&self) -> Result<()> {
        if self.big_r < self.r_n + self.r0 {
            return Err(Error::InvalidParameter(format!(
                "network radius R = {} must be at least r_n + r0 = {} so the reserved \
                 area lies inside the network disc",
                self.big_r,
                self.r_n + self.r0
            )));
        }
        Ok(())
    }
}

fn clamped_acos(x: f64) -> Result<f64> {
    if !(-1.0 - TRIG_CLAMP_TOL..=1.0 + TRIG_CLAMP_TOL).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "inverse-cosine argument {x} outside [-1, 1]"
        )));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Half-angle of the lens between the discs around two adjacent nodes:
/// `psi = atan(sqrt(4 r0^2 - r_n^2) / r_n)`, equivalently `acos(r_n / (2 r0))`.
///
/// Defined for `0 < r_n < 2 r0`; tangent or disjoint discs are a domain error.
pub fn half_angle_psi(params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    if r_n >= 2.0 * r0 {
        return Err(Error::InvalidParameter(format!(
            "psi requires overlapping discs: r_n = {r_n} must be smaller than 2 r0 = {}",
            2.0 * r0
        )));
    }
    Ok(((4.0 * r0 * r0 - r_n * r_n).sqrt() / r_n).atan())
}

// psi extended continuously to the tangent case r_n = 2 r0 (psi = 0),
// where the area formulas remain valid although psi itself is treated as
// a domain edge by `half_angle_psi`.
fn psi_for_area(params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    if r_n > 2.0 * r0 {
        return Err(Error::InvalidParameter(format!(
            "reserved-area formulas require r_n <= 2 r0; got r_n = {r_n}, r0 = {r0}"
        )));
    }
    clamped_acos(r_n / (2.0 * r0))
}

/// Half-angle `phi(r_a)` subtended by the crescent at radius `r_a` from A:
/// `acos((r0^2 - r_n^2 - r_a^2) / (2 r_a r_n))` for
/// `r0 - r_n <= r_a <= r0`.
pub fn crescent_half_angle(r_a: f64, params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    let lo = r0 - r_n;
    if r_a < lo - TRIG_CLAMP_TOL || r_a > r0 + TRIG_CLAMP_TOL {
        return Err(Error::InvalidParameter(format!(
            "crescent radius r_a = {r_a} outside [r0 - r_n, r0] = [{lo}, {r0}]"
        )));
    }
    clamped_acos((r0 * r0 - r_n * r_n - r_a * r_a) / (2.0 * r_a * r_n))
}

/// Distance from A to a point at polar coordinates `(r_b, theta)` around B:
/// `sqrt(r_b^2 + r_n^2 - 2 r_n r_b cos(theta))`.
pub fn dist_end_from_ring_point(r_b: f64, theta: f64, params: &SystemParams) -> f64 {
    let r_n = params.r_n();
    (r_b * r_b + r_n * r_n - 2.0 * r_n * r_b * theta.cos())
        .max(0.0)
        .sqrt()
}

/// Distance from B to a point at polar coordinates `(r_a, theta_a)` around A
/// (`theta_a = 0` away from B): `sqrt(r_a^2 + r_n^2 + 2 r_n r_a cos(theta_a))`.
pub fn dist_relay_from_crescent_point(r_a: f64, theta_a: f64, params: &SystemParams) -> f64 {
    let r_n = params.r_n();
    (r_a * r_a + r_n * r_n + 2.0 * r_n * r_a * theta_a.cos())
        .max(0.0)
        .sqrt()
}

/// Distance from C to the same point:
/// `sqrt(r_a^2 + 4 r_n^2 + 4 r_n r_a cos(theta_a))`.
pub fn dist_far_end_from_crescent_point(r_a: f64, theta_a: f64, params: &SystemParams) -> f64 {
    let r_n = params.r_n();
    (r_a * r_a + 4.0 * r_n * r_n + 4.0 * r_n * r_a * theta_a.cos())
        .max(0.0)
        .sqrt()
}

/// Area of one crescent, `disc(A, r0) \ disc(B, r0)`:
/// `r0^2 (pi - 2 psi) + (r_n / 2) sqrt(4 r0^2 - r_n^2)`.
pub fn crescent_area(params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    let psi = psi_for_area(params)?;
    let root = (4.0 * r0 * r0 - r_n * r_n).max(0.0).sqrt();
    Ok(r0 * r0 * (std::f64::consts::PI - 2.0 * psi) + 0.5 * r_n * root)
}

/// Reserved area per CR slot (two-disc union):
/// `2 r0^2 (pi - psi) + (r_n / 2) sqrt(4 r0^2 - r_n^2)`.
pub fn reserved_area_cr(params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    let psi = psi_for_area(params)?;
    let root = (4.0 * r0 * r0 - r_n * r_n).max(0.0).sqrt();
    Ok(2.0 * r0 * r0 * (std::f64::consts::PI - psi) + 0.5 * r_n * root)
}

/// Reserved area per PLNC slot (exact three-disc union; the two crescents
/// are disjoint because the A-C lens lies inside the relay's disc):
/// `r0^2 (3 pi - 4 psi) + r_n sqrt(4 r0^2 - r_n^2)`.
pub fn reserved_area_plnc(params: &SystemParams) -> Result<f64> {
    let (r_n, r0) = (params.r_n(), params.r0());
    let psi = psi_for_area(params)?;
    let root = (4.0 * r0 * r0 - r_n * r_n).max(0.0).sqrt();
    Ok(r0 * r0 * (3.0 * std::f64::consts::PI - 4.0 * psi) + r_n * root)
}

/// Reserved area per slot for a scheme.
pub fn reserved_area(scheme: Scheme, params: &SystemParams) -> Result<f64> {
    match scheme {
        Scheme::Cr => reserved_area_cr(params),
        Scheme::Plnc => reserved_area_plnc(params),
    }
}

/// True iff `point` lies within distance `r0` of any node reserving in the
/// given slot.
pub fn in_reserved_region(point: Point, slot: SlotReservation, params: &SystemParams) -> bool {
    let r0_sq = params.r0() * params.r0();
    slot.reserving_nodes()
        .iter()
        .any(|node| point.distance_sq_to(node.position(params)) <= r0_sq)
}
