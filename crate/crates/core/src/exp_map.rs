//! The sub-Riemannian exponential map on SO(3) and its lift to S³.
//!
//! A geodesic is written in Euler angles as
//! `R_t = e^{−φ₁(0)A₃} e^{−φ₂(0)A₁} e^{φ₃(t)A₃} e^{φ₂(t)A₁} e^{φ₁(t)A₃}`,
//! where `φ₁`, `φ₂` follow algebraically from the covector through the Lax
//! vector `p⃗ = (p₂, p₁√(1−a²), p₃)` and `φ₃` is a third-kind elliptic
//! integral. The S³ lift replaces each factor by its half-angle quaternion.

use crate::algebra::{basis_rotation_cs, quat_mul, Axis, Rotation, UnitQuaternion};
use crate::error::{Error, Result};
use crate::pendulum::{
    covector_at, lax_norm_sq, psi_at, to_elliptic, Covector, EllipticData, Region, SRParams,
};
use crate::special_functions::{ellip_pi_am, Characteristic};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Euler angles of the curve `D_t` together with the third angle φ₃.
///
/// `phi1` is the continuous branch of φ₁ along the trajectory, `phi2` lies in
/// `(0, π)` and `phi3` is unwrapped with `φ₃(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerPhi {
    pub cos_phi1: f64,
    pub sin_phi1: f64,
    pub cos_phi2: f64,
    pub sin_phi2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

/// One point of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub t: f64,
    pub r: Rotation,
    pub q: UnitQuaternion,
    pub p: Covector,
    pub phi: EulerPhi,
}

/// φ₁ and φ₂ from the covector and `M = |p⃗|²`; `phi1` is the principal
/// value and `phi3` is left at zero.
pub fn euler_phi12(p: &Covector, m: f64, params: &SRParams) -> EulerPhi {
    let c = params.c();
    let sqrt_m = m.sqrt();
    let w = (m - p.p3 * p.p3).max(0.0).sqrt();
    let cos_phi2 = p.p3 / sqrt_m;
    let sin_phi2 = w / sqrt_m;
    let cos_phi1 = p.p1 * c / w;
    let sin_phi1 = p.p2 / w;
    EulerPhi {
        cos_phi1,
        sin_phi1,
        cos_phi2,
        sin_phi2,
        phi1: sin_phi1.atan2(cos_phi1),
        phi2: sin_phi2.atan2(cos_phi2),
        phi3: 0.0,
    }
}

fn wrap_pi(x: f64) -> f64 {
    x - TAU * (x / TAU).round()
}

/// Euler angles at time `t`, with φ₁ on the branch that follows ψ(t).
pub fn euler_phi(ed: &EllipticData, params: &SRParams, t: f64) -> EulerPhi {
    let p = covector_at(ed, params, t);
    let mut phi = euler_phi12(&p, lax_norm_sq(&p, params), params);
    // tan φ₁ = −tan ψ / √(1−a²), so φ₁ stays within π/2 of −ψ
    let target = -psi_at(ed, params, t);
    phi.phi1 += TAU * ((target - phi.phi1) / TAU).round();
    debug_assert!(wrap_pi(target - phi.phi1).abs() <= PI / 2.0 + 1e-9);
    phi.phi3 = phi3(ed, params, t);
    phi
}

/// The third Euler angle, `φ₃(0) = 0`, strictly increasing in `t`.
pub fn phi3(ed: &EllipticData, params: &SRParams, t: f64) -> f64 {
    let a = params.a();
    let a2 = a * a;
    let c = params.c();
    let c2 = c * c;
    match ed.region {
        Region::C1 => {
            let k = ed.k;
            let scale = (1.0 - a2 * k.m1()).sqrt() / (a * c);
            let n = Characteristic::new(-a2 * k.m() / c2).expect("negative characteristic");
            let u0 = ed.elliptic_arg(params, 0.0);
            let ut = ed.elliptic_arg(params, t);
            scale * (ellip_pi_am(n, ut, k) - ellip_pi_am(n, u0, k))
        }
        Region::C2 => {
            let k = ed.k;
            let scale = (k.m() + a2 * k.m1()).sqrt() / (a * c);
            let n = Characteristic::new(-a2 / c2).expect("negative characteristic");
            let u0 = ed.elliptic_arg(params, 0.0);
            let ut = ed.elliptic_arg(params, t);
            scale * (ellip_pi_am(n, ut, k) - ellip_pi_am(n, u0, k))
        }
        Region::C3 => {
            let b = a / c;
            let u0 = ed.elliptic_arg(params, 0.0);
            let ut = ed.elliptic_arg(params, t);
            c * t + (b * ut.tanh()).atan() - (b * u0.tanh()).atan()
        }
        Region::C4 => t,
        Region::C5 => c * t,
    }
}

/// Right-hand side `√(M(1−a²))/(1 − a²p₁²)` of the φ₃ equation.
pub fn phi3_rate(p: &Covector, params: &SRParams) -> f64 {
    let a2 = params.a() * params.a();
    let m = lax_norm_sq(p, params);
    (m * (1.0 - a2)).sqrt() / (1.0 - a2 * p.p1 * p.p1)
}

fn euler_rotation(phi: &EulerPhi) -> Rotation {
    basis_rotation_cs(Axis::E3, phi.phi3.cos(), phi.phi3.sin())
        * basis_rotation_cs(Axis::E1, phi.cos_phi2, phi.sin_phi2)
        * basis_rotation_cs(Axis::E3, phi.cos_phi1, phi.sin_phi1)
}

fn inverse_initial_rotation(phi0: &EulerPhi) -> Rotation {
    basis_rotation_cs(Axis::E3, phi0.cos_phi1, -phi0.sin_phi1)
        * basis_rotation_cs(Axis::E1, phi0.cos_phi2, -phi0.sin_phi2)
}

fn lift(phi0: &EulerPhi, phi: &EulerPhi, q_init: &UnitQuaternion) -> UnitQuaternion {
    let h = UnitQuaternion::basis_half_angle;
    [
        h(Axis::E3, -phi0.phi1),
        h(Axis::E1, -phi0.phi2),
        h(Axis::E3, phi.phi3),
        h(Axis::E1, phi.phi2),
        h(Axis::E3, phi.phi1),
    ]
    .iter()
    .fold(*q_init, |acc, f| quat_mul(&acc, f))
}

/// Geodesic sample at time `t ≥ 0` for a trajectory given by its chart, with
/// the S³ lift starting at `q_init`.
pub fn exp_from_elliptic_with(
    ed: &EllipticData,
    params: &SRParams,
    t: f64,
    q_init: &UnitQuaternion,
) -> Result<GeodesicSample> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime { t });
    }
    let phi0 = euler_phi(ed, params, 0.0);
    if t == 0.0 {
        return Ok(GeodesicSample {
            t,
            r: Rotation::IDENTITY,
            q: *q_init,
            p: covector_at(ed, params, 0.0),
            phi: phi0,
        });
    }
    let phi = euler_phi(ed, params, t);
    let r = inverse_initial_rotation(&phi0) * euler_rotation(&phi);
    debug_assert!(r.orthogonality_defect() < 1e-12, "closed-form rotation left SO(3)");
    Ok(GeodesicSample {
        t,
        r,
        q: lift(&phi0, &phi, q_init),
        p: covector_at(ed, params, t),
        phi,
    })
}

/// Geodesic sample at time `t ≥ 0` for a trajectory given by its chart.
pub fn exp_from_elliptic(ed: &EllipticData, params: &SRParams, t: f64) -> Result<GeodesicSample> {
    exp_from_elliptic_with(ed, params, t, &UnitQuaternion::ONE)
}

/// `Exp(p₀, t)` with the lift normalized by `q(0) = 1`.
pub fn exp(p0: &Covector, params: &SRParams, t: f64) -> Result<GeodesicSample> {
    let ed = to_elliptic(p0, params)?;
    exp_from_elliptic(&ed, params, t)
}

/// S³ lift of the geodesic, `q(0) = q_init`.
pub fn exp_quat(
    p0: &Covector,
    params: &SRParams,
    t: f64,
    q_init: &UnitQuaternion,
) -> Result<UnitQuaternion> {
    let ed = to_elliptic(p0, params)?;
    Ok(exp_from_elliptic_with(&ed, params, t, q_init)?.q)
}

/// Samples a geodesic on a non-decreasing grid of non-negative times.
pub fn sample_geodesic(
    p0: &Covector,
    params: &SRParams,
    t_grid: &[f64],
) -> Result<Vec<GeodesicSample>> {
    let ed = to_elliptic(p0, params)?;
    sample_elliptic(&ed, params, t_grid)
}

/// [`sample_geodesic`] for a trajectory given by its chart.
pub fn sample_elliptic(
    ed: &EllipticData,
    params: &SRParams,
    t_grid: &[f64],
) -> Result<Vec<GeodesicSample>> {
    if t_grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidInput("time grid is not monotone".into()));
    }
    t_grid
        .iter()
        .map(|&t| exp_from_elliptic(ed, params, t))
        .collect()
}
