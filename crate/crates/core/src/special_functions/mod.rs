//! Legendre elliptic integrals of the first, second and third kind, the
//! Jacobi amplitude and the Jacobi elliptic functions.
//!
//! Conventions follow the parameter form: every function takes a [`Modulus`]
//! holding `k`, `m = k²` and the complementary parameter `m1 = 1 - k²`.
//! The complementary parameter is kept separately so that moduli very close
//! to one (long-period pendulum orbits) do not lose their digits to
//! cancellation.
//!
//! Integrals are evaluated through Carlson's symmetric forms (see
//! [`carlson`]); arguments beyond `±π/2` are reduced with the quasi-periodicity
//! `F(φ + jπ) = F(φ) + 2jK` and its analogues for `E` and `Π`.

pub mod carlson;
mod jacobi;

pub use jacobi::{jacobi_am, jacobi_sncndn, JacobiTriple};

use crate::error::{Error, Result};
use carlson::{rd, rf, rj};
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest admissible modulus. Beyond this the logarithmic growth of K near
/// k = 1 is not resolved in double precision.
pub const K_MAX: f64 = 1.0 - 1e-12;

/// Elliptic modulus `k ∈ [0, K_MAX)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    m: f64,
    m1: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..K_MAX).contains(&k) {
            return Err(Error::ModulusOutOfRange { k });
        }
        Ok(Self {
            k,
            m: k * k,
            m1: (1.0 - k) * (1.0 + k),
        })
    }

    /// Builds the modulus from `m1 = 1 - k²`, which is exact for moduli
    /// close to one.
    pub fn from_complement(m1: f64) -> Result<Self> {
        if !(m1 > 0.0 && m1 <= 1.0) {
            return Err(Error::ModulusOutOfRange {
                k: (1.0 - m1).max(0.0).sqrt(),
            });
        }
        let m = 1.0 - m1;
        let k = m.sqrt();
        if k >= K_MAX {
            return Err(Error::ModulusOutOfRange { k });
        }
        Ok(Self { k, m, m1 })
    }

    pub fn from_parameter(m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::ModulusOutOfRange { k: m.abs().sqrt() });
        }
        let k = m.sqrt();
        if k >= K_MAX {
            return Err(Error::ModulusOutOfRange { k });
        }
        Ok(Self { k, m, m1: 1.0 - m })
    }

    pub const ZERO: Modulus = Modulus {
        k: 0.0,
        m: 0.0,
        m1: 1.0,
    };

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Parameter `m = k²`.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Complementary parameter `1 - k²`.
    pub fn m1(&self) -> f64 {
        self.m1
    }
}

/// Characteristic `n < 1` of the third-kind integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic(f64);

impl Characteristic {
    pub fn new(n: f64) -> Result<Self> {
        if n.is_nan() || n >= 1.0 {
            return Err(Error::CharacteristicOutOfRange { n });
        }
        Ok(Self(n))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Splits `phi = j π + r` with `r ∈ [-π/2, π/2]`.
fn reduce_angle(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// `1 - m sin²φ` written as `cos²φ + m1 sin²φ`.
fn delta_sq(s: f64, c: f64, m: Modulus) -> f64 {
    c * c + m.m1 * s * s
}

fn f_reduced(r: f64, m: Modulus) -> f64 {
    let (s, c) = r.sin_cos();
    s * rf(c * c, delta_sq(s, c, m), 1.0)
}

fn e_reduced(r: f64, m: Modulus) -> f64 {
    let (s, c) = r.sin_cos();
    let (c2, d2) = (c * c, delta_sq(s, c, m));
    s * rf(c2, d2, 1.0) - m.m * s * s * s / 3.0 * rd(c2, d2, 1.0)
}

fn pi_reduced(n: f64, r: f64, m: Modulus) -> f64 {
    let (s, c) = r.sin_cos();
    let (c2, d2) = (c * c, delta_sq(s, c, m));
    let s2 = s * s;
    s * rf(c2, d2, 1.0) + n * s * s2 / 3.0 * rj(c2, d2, 1.0, 1.0 - n * s2)
}

/// Incomplete integral of the first kind F(φ | m).
pub fn ellip_f(phi: f64, m: Modulus) -> f64 {
    let (j, r) = reduce_angle(phi);
    let head = if j != 0.0 { 2.0 * j * complete_k(m) } else { 0.0 };
    head + f_reduced(r, m)
}

/// Incomplete integral of the second kind E(φ | m).
pub fn ellip_e(phi: f64, m: Modulus) -> f64 {
    let (j, r) = reduce_angle(phi);
    let head = if j != 0.0 { 2.0 * j * complete_e(m) } else { 0.0 };
    head + e_reduced(r, m)
}

/// Incomplete integral of the third kind Π(n; φ | m).
pub fn ellip_pi(n: Characteristic, phi: f64, m: Modulus) -> f64 {
    let (j, r) = reduce_angle(phi);
    let head = if j != 0.0 {
        2.0 * j * complete_pi(n, m)
    } else {
        0.0
    };
    head + pi_reduced(n.0, r, m)
}

/// `Π(n; am(u | m) | m)` with the amplitude unwrapped: for `u = 2jK + r`
/// this is `2jΠ(n | m) + Π(n; am(r))`, avoiding the round trip through
/// `jπ + am(r)`.
pub fn ellip_pi_am(n: Characteristic, u: f64, m: Modulus) -> f64 {
    let (j, phi) = jacobi::am_parts(u, m);
    let head = if j != 0.0 {
        2.0 * j * complete_pi(n, m)
    } else {
        0.0
    };
    head + pi_reduced(n.0, phi, m)
}

/// Complete integral K(m) = F(π/2 | m).
pub fn complete_k(m: Modulus) -> f64 {
    if m.m == 0.0 {
        return FRAC_PI_2;
    }
    rf(0.0, m.m1, 1.0)
}

/// Complete integral E(m) = E(π/2 | m).
pub fn complete_e(m: Modulus) -> f64 {
    if m.m == 0.0 {
        return FRAC_PI_2;
    }
    rf(0.0, m.m1, 1.0) - m.m / 3.0 * rd(0.0, m.m1, 1.0)
}

/// Complete integral Π(n | m) = Π(n; π/2 | m).
pub fn complete_pi(n: Characteristic, m: Modulus) -> f64 {
    let n = n.0;
    if n == 0.0 {
        return complete_k(m);
    }
    complete_k(m) + n / 3.0 * rj(0.0, m.m1, 1.0, 1.0 - n)
}

/// Closed-form derivatives of the complete integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticDerivatives {
    /// dK/dk
    pub dk: f64,
    /// dE/dk
    pub de: f64,
    /// ∂Π(n|k²)/∂k
    pub dpi_dk: f64,
    /// ∂Π(n|k²)/∂n
    pub dpi_dn: f64,
}

/// Derivatives of K, E and Π with respect to the modulus `k` and of Π with
/// respect to the characteristic `n`.
///
/// Requires `k ∈ (0, 1)`, `n < 1`, `n ≠ 0` and `n ≠ k²`; these are the
/// removable or genuine singularities of the formulas.
pub fn ellip_derivatives(n: Characteristic, m: Modulus) -> Result<EllipticDerivatives> {
    let (nv, k, k2, kp2) = (n.0, m.k, m.m, m.m1);
    let singular = k == 0.0 || nv == 0.0 || (k2 - nv).abs() <= 1e-14 * k2.max(nv.abs());
    if singular {
        return Err(Error::SingularDerivative { n: nv, k });
    }
    let kk = complete_k(m);
    let ee = complete_e(m);
    let pp = complete_pi(n, m);
    let dk = (ee - kp2 * kk) / (k * kp2);
    let de = (ee - kk) / k;
    let dpi_dk = k / (kp2 * (k2 - nv)) * (ee - kp2 * pp);
    let dpi_dn =
        (ee + (k2 - nv) * kk / nv + (nv * nv - k2) * pp / nv) / (2.0 * (k2 - nv) * (nv - 1.0));
    Ok(EllipticDerivatives {
        dk,
        de,
        dpi_dk,
        dpi_dn,
    })
}
