use super::{complete_k, f_reduced, Modulus};
use std::f64::consts::{FRAC_PI_2, PI};

/// sn, cn and dn at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Splits `u = 2jK + r` with `r ∈ [-K, K]` and inverts F on the reduced
/// argument, returning `(j, am(r))`.
pub(crate) fn am_parts(u: f64, m: Modulus) -> (f64, f64) {
    if m.m() == 0.0 {
        let j = (u / PI).round();
        return (j, u - j * PI);
    }
    let kk = complete_k(m);
    let j = (u / (2.0 * kk)).round();
    let r = (u - 2.0 * j * kk).clamp(-kk, kk);
    (j, invert_f(r, kk, m))
}

/// Solves `F(φ | m) = r` for φ ∈ [-π/2, π/2] by Newton iteration with a
/// bisection fallback; F is strictly increasing there.
fn invert_f(r: f64, kk: f64, m: Modulus) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (-FRAC_PI_2, FRAC_PI_2);
    // am(u | 0) = u and am(u | 1) = gd(u); blend the two as a starting point
    let linear = r * FRAC_PI_2 / kk;
    let gd = r.sinh().atan();
    let mut phi = (m.m1() * linear + m.m() * gd).clamp(lo, hi);
    for _ in 0..200 {
        let f = f_reduced(phi, m) - r;
        if f == 0.0 {
            return phi;
        }
        if f > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let (s, c) = phi.sin_cos();
        let slope_inv = (c * c + m.m1() * s * s).sqrt();
        let mut next = phi - f * slope_inv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - phi).abs() <= 2.0 * f64::EPSILON * phi.abs().max(1e-300) {
            return next;
        }
        if hi - lo <= 2.0 * f64::EPSILON {
            return next;
        }
        phi = next;
    }
    phi
}

/// Jacobi amplitude am(u | m), the inverse of F in its first argument.
/// Satisfies `am(u + 2jK) = am(u) + jπ`.
pub fn jacobi_am(u: f64, m: Modulus) -> f64 {
    let (j, phi) = am_parts(u, m);
    j * PI + phi
}

/// Jacobi elliptic functions sn, cn, dn.
pub fn jacobi_sncndn(u: f64, m: Modulus) -> JacobiTriple {
    let (j, phi) = am_parts(u, m);
    let (s, c) = phi.sin_cos();
    let sign = if j.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let dn = (c * c + m.m1() * s * s).sqrt();
    JacobiTriple {
        sn: sign * s,
        cn: sign * c,
        dn,
    }
}
