//! Discrete symmetries `ε¹`–`ε⁷` of the exponential map and the Maxwell
//! points they produce.
//!
//! Each symmetry acts on the pair (covector, time) and on the endpoint in
//! SO(3) so that `ε(Exp(p₀, t)) = Exp(ε(p₀, t), t)`. When the endpoint is a
//! fixed point of `ε` but the covector is not, two distinct geodesics of the
//! same length meet there. In quaternion terms the endpoint is fixed by
//! `ε⁶`, `ε¹`, `ε⁵`, `ε²` exactly when `q⁰`, `q¹`, `q²`, `q³` vanish.

use crate::algebra::{half_turn, Axis, Rotation};
use crate::error::{Error, Result};
use crate::exp_map::{exp_from_elliptic, GeodesicSample};
use crate::pendulum::{
    covector_at, pendulum_period, to_elliptic, Covector, EllipticData, Region, SRParams,
};
use crate::special_functions::jacobi_sncndn;
use serde::Serialize;
use std::fmt;

/// One of the seven symmetries, `1..=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymmetryId(u8);

impl SymmetryId {
    pub fn new(i: u8) -> Result<Self> {
        if !(1..=7).contains(&i) {
            return Err(Error::InvalidInput(format!("symmetry index {i} not in 1..=7")));
        }
        Ok(Self(i))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = SymmetryId> {
        (1..=7).map(SymmetryId)
    }

    /// Whether the symmetry reverses time along the geodesic (and so reads
    /// the covector at the end point).
    pub fn reverses_time(&self) -> bool {
        matches!(self.0, 1 | 2 | 5 | 6)
    }
}

impl fmt::Display for SymmetryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eps{}", self.0)
    }
}

/// `τ = (u(t) + u(0))/2`, `ξ = (u(t) − u(0))/2` where `u` is the argument of
/// the elliptic functions, so that `τ + ξ = u(t)` and `τ − ξ = u(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauXi {
    pub tau: f64,
    pub xi: f64,
}

/// In `C₁` and `C₃` this is `τ = a(t/2 + θ₀)`, `ξ = at/2`; in `C₂` both carry
/// the extra factor `1/k` of the elliptic argument.
pub fn tau_xi(ed: &EllipticData, params: &SRParams, t: f64) -> TauXi {
    let u0 = ed.elliptic_arg(params, 0.0);
    let ut = ed.elliptic_arg(params, t);
    TauXi {
        tau: 0.5 * (ut + u0),
        xi: 0.5 * (ut - u0),
    }
}

/// Sign pattern `(σ₁, σ₂, σ₃)` applied to the covector.
fn covector_signs(i: SymmetryId) -> [f64; 3] {
    match i.0 {
        1 => [1.0, -1.0, 1.0],
        2 => [1.0, 1.0, -1.0],
        3 => [1.0, -1.0, -1.0],
        4 => [-1.0, -1.0, 1.0],
        5 => [-1.0, 1.0, 1.0],
        6 => [-1.0, -1.0, -1.0],
        _ => [-1.0, 1.0, -1.0],
    }
}

/// Action on the initial covector for a geodesic of length `t`.
pub fn eps_preimage(
    i: SymmetryId,
    t: f64,
    p0: &Covector,
    params: &SRParams,
) -> Result<Covector> {
    let ed = to_elliptic(p0, params)?;
    Ok(eps_preimage_elliptic(i, t, &ed, params))
}

/// [`eps_preimage`] for a trajectory given by its chart.
pub fn eps_preimage_elliptic(
    i: SymmetryId,
    t: f64,
    ed: &EllipticData,
    params: &SRParams,
) -> Covector {
    let p = covector_at(ed, params, if i.reverses_time() { t } else { 0.0 });
    let [a, b, c] = covector_signs(i);
    Covector {
        p1: a * p.p1,
        p2: b * p.p2,
        p3: c * p.p3,
    }
}

/// Action on the endpoint.
pub fn eps_image(i: SymmetryId, r: &Rotation) -> Rotation {
    let conj = |axis: Axis, m: Rotation| half_turn(axis) * m * half_turn(axis);
    match i.0 {
        1 => conj(Axis::E1, r.inverse()),
        2 => conj(Axis::E3, r.inverse()),
        3 => conj(Axis::E2, *r),
        4 => conj(Axis::E3, *r),
        5 => conj(Axis::E2, r.inverse()),
        6 => r.inverse(),
        _ => conj(Axis::E1, *r),
    }
}

fn fixed_with_tol(
    i: SymmetryId,
    ed: &EllipticData,
    params: &SRParams,
    t: f64,
    tol: f64,
) -> Result<bool> {
    if matches!(ed.region, Region::C4 | Region::C5) {
        return Err(Error::RegionNotSupported {
            region: ed.region.to_string(),
        });
    }
    let TauXi { tau, .. } = tau_xi(ed, params, t);
    let fixed = match (i.0, ed.region) {
        (1, Region::C3) => tau.abs() <= tol,
        (1, _) => jacobi_sncndn(tau, ed.k).sn.abs() <= tol,
        (2, Region::C1) | (5, Region::C2) => jacobi_sncndn(tau, ed.k).cn.abs() <= tol,
        _ => false,
    };
    Ok(fixed)
}

/// Whether `ε^i` maps the covector of the geodesic of length `t` to itself.
/// Defined for `C₁`–`C₃`.
pub fn is_fixed_preimage(
    i: SymmetryId,
    ed: &EllipticData,
    params: &SRParams,
    t: f64,
) -> Result<bool> {
    fixed_with_tol(i, ed, params, t, params.tol.zero)
}

/// The four quaternion conditions for a Maxwell point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MaxwellCondition {
    /// `q⁰ = 0`, partner `ε⁶`.
    Q0,
    /// `q¹ = 0`, partner `ε¹`.
    Q1,
    /// `q² = 0`, partner `ε⁵`.
    Q2,
    /// `q³ = 0`, partner `ε²`.
    Q3,
}

impl MaxwellCondition {
    pub const ALL: [MaxwellCondition; 4] = [Self::Q0, Self::Q1, Self::Q2, Self::Q3];

    /// `1..=4`.
    pub fn id(&self) -> u8 {
        *self as u8 + 1
    }

    /// Quaternion component that vanishes.
    pub fn component(&self) -> usize {
        *self as usize
    }

    /// The symmetry whose fixed points in SO(3) are the zeros of the component.
    pub fn partner(&self) -> SymmetryId {
        SymmetryId(match self {
            Self::Q0 => 6,
            Self::Q1 => 1,
            Self::Q2 => 5,
            Self::Q3 => 2,
        })
    }
}

impl fmt::Display for MaxwellCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.component())
    }
}

/// Whether the partner geodesic differs from the original one.
fn partner_is_distinct(
    cond: MaxwellCondition,
    ed: &EllipticData,
    params: &SRParams,
    t: f64,
) -> bool {
    match ed.region {
        Region::C4 | Region::C5 => {
            let p0 = covector_at(ed, params, 0.0);
            let q = eps_preimage_elliptic(cond.partner(), t, ed, params);
            q.max_abs_diff(&p0) > params.tol.proviso
        }
        _ => !fixed_with_tol(cond.partner(), ed, params, t, params.tol.proviso)
            .expect("separatrix and oscillating regions are supported"),
    }
}

/// Zero threshold for quaternion components in [`maxwell_condition`].
pub const COMPONENT_TOL: f64 = 1e-9;

/// Conditions satisfied at the sample: the quaternion component vanishes and
/// the partner geodesic is distinct. Empty at `t = 0`.
pub fn maxwell_condition(
    sample: &GeodesicSample,
    ed: &EllipticData,
    params: &SRParams,
) -> Vec<MaxwellCondition> {
    if !(sample.t > 0.0) {
        return Vec::new();
    }
    let q = sample.q.to_array();
    MaxwellCondition::ALL
        .into_iter()
        .filter(|c| q[c.component()].abs() <= COMPONENT_TOL)
        .filter(|c| partner_is_distinct(*c, ed, params, sample.t))
        .collect()
}

fn component_at(ed: &EllipticData, params: &SRParams, c: MaxwellCondition, t: f64) -> Result<f64> {
    Ok(exp_from_elliptic(ed, params, t)?.q.component(c.component()))
}

fn bisect_root(
    ed: &EllipticData,
    params: &SRParams,
    c: MaxwellCondition,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
) -> Result<f64> {
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let f_mid = component_at(ed, params, c, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Earliest `t ∈ (0, t_max]` at which a Maxwell condition holds, found by a
/// sign-change scan of the quaternion components followed by bisection.
pub fn first_maxwell_time(
    p0: &Covector,
    params: &SRParams,
    t_max: f64,
) -> Result<Option<(f64, MaxwellCondition)>> {
    let ed = to_elliptic(p0, params)?;
    first_maxwell_time_elliptic(&ed, params, t_max)
}

/// [`first_maxwell_time`] for a trajectory given by its chart.
pub fn first_maxwell_time_elliptic(
    ed: &EllipticData,
    params: &SRParams,
    t_max: f64,
) -> Result<Option<(f64, MaxwellCondition)>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidInput(format!("t_max = {t_max} must be positive")));
    }
    let scale = match pendulum_period(ed, params) {
        Some(period) if period > 0.0 => period.min(t_max),
        _ => t_max,
    };
    let steps = (t_max / (scale / 256.0)).ceil().max(1.0) as usize;
    let h = t_max / steps as f64;

    let mut prev = exp_from_elliptic(ed, params, h)?.q.to_array();
    let mut prev_t = h;
    // the lift starts at q = 1, so roots in (0, h] show up only through q⁰
    if let Some(hit) = check_grid_point(ed, params, h, &prev)? {
        return Ok(Some(hit));
    }
    for s in 2..=steps {
        let t = h * s as f64;
        let q = exp_from_elliptic(ed, params, t)?.q.to_array();
        let mut best: Option<(f64, MaxwellCondition)> = None;
        for c in MaxwellCondition::ALL {
            let (a, b) = (prev[c.component()], q[c.component()]);
            if a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0) {
                let root = bisect_root(ed, params, c, prev_t, t, a)?;
                if partner_is_distinct(c, ed, params, root)
                    && best.is_none_or(|(bt, _)| root < bt)
                {
                    best = Some((root, c));
                }
            }
        }
        if best.is_none() {
            best = check_grid_point(ed, params, t, &q)?;
        }
        if best.is_some() {
            return Ok(best);
        }
        prev = q;
        prev_t = t;
    }
    Ok(None)
}

fn check_grid_point(
    ed: &EllipticData,
    params: &SRParams,
    t: f64,
    q: &[f64; 4],
) -> Result<Option<(f64, MaxwellCondition)>> {
    Ok(MaxwellCondition::ALL
        .into_iter()
        .find(|c| q[c.component()].abs() <= params.tol.zero && partner_is_distinct(*c, ed, params, t))
        .map(|c| (t, c)))
}
