//! Periodic geodesics.
//!
//! A covector trajectory in `C₁` or `C₂` with period `T` closes up in SO(3)
//! after `m` periods exactly when `φ₃(mT) = 2πn`. Since φ₃ advances by
//! `4G(a, k)` per period, this is `G(a, k) = (π/2)(n/m)` with `G = G₁` in
//! `C₁` and `G = G₂` in `C₂`. Both are increasing in `k` and diverge at
//! `k → 1`, so each admissible fraction has exactly one modulus.

use crate::error::{Error, Result};
use crate::exp_map::exp_from_elliptic;
use crate::algebra::Rotation;
use crate::pendulum::{EllipticData, Region, SRParams};
use crate::special_functions::{
    complete_e, complete_k, complete_pi, Characteristic, Modulus, K_MAX,
};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Absolute tolerance on `G(a, k) − (π/2)(n/m)` for the solved modulus.
pub const SOLVE_TOL: f64 = 1e-12;

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidInvariant { a });
    }
    Ok(())
}

/// `G₁(a, k) = √((1 − a²(1−k²))/(a²(1−a²))) · Π(a²k²/(a²−1) | k²)`.
pub fn g1(a: f64, k: Modulus) -> Result<f64> {
    check_a(a)?;
    let a2 = a * a;
    let c2 = (1.0 - a) * (1.0 + a);
    let n = Characteristic::new(-a2 * k.m() / c2)?;
    Ok(((1.0 - a2 * k.m1()) / (a2 * c2)).sqrt() * complete_pi(n, k))
}

/// `G₂(a, k) = √((k² + a²(1−k²))/(a²(1−a²))) · Π(a²/(a²−1) | k²)`.
pub fn g2(a: f64, k: Modulus) -> Result<f64> {
    check_a(a)?;
    let a2 = a * a;
    let c2 = (1.0 - a) * (1.0 + a);
    let n = Characteristic::new(-a2 / c2)?;
    Ok(((k.m() + a2 * k.m1()) / (a2 * c2)).sqrt() * complete_pi(n, k))
}

/// `∂G₁/∂k = (E − (1−k²)K) / (a²k(1−k²)√(1/a² + k²/(1−a²)))`.
pub fn g1_dk(a: f64, k: Modulus) -> Result<f64> {
    check_a(a)?;
    if k.k() == 0.0 {
        return Ok(0.0);
    }
    let a2 = a * a;
    let num = complete_e(k) - k.m1() * complete_k(k);
    let root = (1.0 / a2 + k.m() / (1.0 - a2)).sqrt();
    Ok(num / (a2 * k.k() * k.m1() * root))
}

/// `∂G₂/∂k = kE / (a²(1−k²)√(1/(1−a²) + k²/a²))`.
pub fn g2_dk(a: f64, k: Modulus) -> Result<f64> {
    check_a(a)?;
    let a2 = a * a;
    let root = (1.0 / (1.0 - a2) + k.m() / a2).sqrt();
    Ok(k.k() * complete_e(k) / (a2 * k.m1() * root))
}

fn g_region(region: Region, a: f64, k: Modulus) -> Result<f64> {
    match region {
        Region::C1 => g1(a, k),
        Region::C2 => g2(a, k),
        other => Err(Error::RegionNotSupported {
            region: other.to_string(),
        }),
    }
}

fn gcd(mut x: u32, mut y: u32) -> u32 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// An irreducible fraction `n/m` together with the pendulum region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodicSpec {
    pub n: u32,
    pub m: u32,
    pub region: Region,
}

impl PeriodicSpec {
    pub fn new(n: u32, m: u32, region: Region) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput(format!("fraction {n}/{m} must be positive")));
        }
        if gcd(n, m) != 1 {
            return Err(Error::ReducibleFraction { n, m });
        }
        if !matches!(region, Region::C1 | Region::C2) {
            return Err(Error::RegionNotSupported {
                region: region.to_string(),
            });
        }
        Ok(Self { n, m, region })
    }

    /// `n/m > 1/a` in `C₁`, `n/m > 1` in `C₂`. The boundary fraction is
    /// the `k = 0` limit and is not admissible.
    pub fn is_admissible(&self, a: f64) -> bool {
        let (n, m) = (self.n as f64, self.m as f64);
        match self.region {
            Region::C1 => n * a - m > 1e-12 * m,
            _ => self.n > self.m,
        }
    }

    pub fn target(&self) -> f64 {
        FRAC_PI_2 * self.n as f64 / self.m as f64
    }
}

/// A solved periodic geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodicGeodesic {
    pub spec: PeriodicSpec,
    #[serde(serialize_with = "serialize_modulus")]
    pub k: Modulus,
    /// Period of the covector.
    pub period: f64,
    /// Closing time `mT`.
    pub total_time: f64,
    /// `G(a, k) − (π/2)(n/m)` at the solution.
    pub residual: f64,
    pub contractible: bool,
}

fn serialize_modulus<S: serde::Serializer>(k: &Modulus, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(k.k())
}

impl PeriodicGeodesic {
    /// The chart of this geodesic with phase `theta0` and signs `s1`, `s2`.
    pub fn elliptic_data(&self, theta0: f64, s1: f64, s2: f64) -> Result<EllipticData> {
        EllipticData::new(self.spec.region, self.k, theta0, s1, s2)
    }
}

/// Parity of the S³ lift after closing up: the lift returns to `+1` when
/// the loop is contractible.
///
/// ψ, and with it φ₁, is periodic in `C₁` but advances by `2π` per period
/// in `C₂`, which adds a factor `(−1)^m` to the lift there.
pub fn lift_parity(spec: &PeriodicSpec) -> i8 {
    let winding = match spec.region {
        Region::C2 => spec.n + spec.m,
        _ => spec.n,
    };
    if winding % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Solves `G(a, k) = (π/2)(n/m)`. Returns `None` when the fraction violates
/// the existence condition.
pub fn solve_periodic(spec: &PeriodicSpec, a: f64) -> Result<Option<PeriodicGeodesic>> {
    let spec = PeriodicSpec::new(spec.n, spec.m, spec.region)?;
    check_a(a)?;
    if !spec.is_admissible(a) {
        return Ok(None);
    }
    let target = spec.target();
    let g = |m1: f64| -> Result<f64> { g_region(spec.region, a, Modulus::from_complement(m1)?) };

    // G decreases in m1 = 1 − k²; m1 = 1 is k = 0 where G is below target
    let m1_floor = 4.0 * (1.0 - K_MAX);
    let mut hi = 1.0;
    let mut lo = 0.5;
    while g(lo)? < target {
        hi = lo;
        if lo <= m1_floor {
            return Err(Error::ModulusOutOfRange { k: K_MAX });
        }
        lo = (lo * 1e-2).max(m1_floor);
    }
    // bisection in log m1, then refine in m1 itself
    let mut best = (lo, g(lo)? - target);
    for _ in 0..400 {
        let mid = if hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let r = g(mid)? - target;
        if r.abs() < best.1.abs() {
            best = (mid, r);
        }
        if r == 0.0 {
            break;
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (m1, residual) = best;
    let r_hi = g(hi)? - target;
    let (m1, residual) = if r_hi.abs() < residual.abs() {
        (hi, r_hi)
    } else {
        (m1, residual)
    };
    if residual.abs() > SOLVE_TOL {
        return Err(Error::InvariantViolation(format!(
            "periodic solve for {}/{} stalled at residual {residual:e}",
            spec.n, spec.m
        )));
    }
    let k = Modulus::from_complement(m1)?;
    let quarter = complete_k(k) / a;
    let period = match spec.region {
        Region::C1 => 4.0 * quarter,
        _ => 4.0 * k.k() * quarter,
    };
    Ok(Some(PeriodicGeodesic {
        spec,
        k,
        period,
        total_time: spec.m as f64 * period,
        residual,
        contractible: lift_parity(&spec) == 1,
    }))
}

/// Outcome of closing a periodic geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Closure {
    /// `‖R(mT) − Id‖∞`.
    pub closure_error: f64,
    /// Sign of `q(mT) ≈ ±1`.
    pub lift_sign: i8,
    /// `‖q(mT) − lift_sign‖∞`.
    pub lift_error: f64,
    /// `φ₃(mT) − 2πn`.
    pub phi3_error: f64,
}

/// Evaluates the geodesic of `ed` at its closing time.
pub fn verify_closure(
    pg: &PeriodicGeodesic,
    ed: &EllipticData,
    params: &SRParams,
) -> Result<Closure> {
    if ed.region != pg.spec.region || ed.k != pg.k {
        return Err(Error::InvalidInput(
            "chart does not belong to the periodic geodesic".into(),
        ));
    }
    let s = exp_from_elliptic(ed, params, pg.total_time)?;
    let lift_sign: i8 = if s.q.q0 < 0.0 { -1 } else { 1 };
    let sign = lift_sign as f64;
    let lift_error = [s.q.q0 - sign, s.q.q1, s.q.q2, s.q.q3]
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    Ok(Closure {
        closure_error: s.r.max_abs_diff(&Rotation::IDENTITY),
        lift_sign,
        lift_error,
        phi3_error: s.phi.phi3 - TAU * pg.spec.n as f64,
    })
}

/// Every admissible irreducible fraction with `n ≤ max_n`, `m ≤ max_m` in
/// both regions, solved and sorted by closing time.
pub fn enumerate_periodic(a: f64, max_n: u32, max_m: u32) -> Result<Vec<PeriodicGeodesic>> {
    let mut out = enumerate_periodic_in(Region::C1, a, max_n, max_m)?;
    out.extend(enumerate_periodic_in(Region::C2, a, max_n, max_m)?);
    out.sort_by(|x, y| x.total_time.total_cmp(&y.total_time));
    Ok(out)
}

/// [`enumerate_periodic`] restricted to one region.
pub fn enumerate_periodic_in(
    region: Region,
    a: f64,
    max_n: u32,
    max_m: u32,
) -> Result<Vec<PeriodicGeodesic>> {
    check_a(a)?;
    if max_n == 0 || max_m == 0 {
        return Err(Error::InvalidInput("bounds must be at least 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..=max_m {
            if gcd(n, m) != 1 {
                continue;
            }
            let spec = PeriodicSpec::new(n, m, region)?;
            if let Some(pg) = solve_periodic(&spec, a)? {
                out.push(pg);
            }
        }
    }
    out.sort_by(|x, y| x.total_time.total_cmp(&y.total_time));
    Ok(out)
}

/// Closing time of the uniform rotations: `2π` in `C₄`, `2π/√(1−a²)` in `C₅`.
pub fn equilibrium_period(region: Region, params: &SRParams) -> Result<f64> {
    match region {
        Region::C4 => Ok(TAU),
        Region::C5 => Ok(2.0 * PI / params.c()),
        other => Err(Error::RegionNotSupported {
            region: other.to_string(),
        }),
    }
}
