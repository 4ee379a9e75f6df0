//! The vertical subsystem: a mathematical pendulum on the cylinder
//! `p₁² + p₂² = 1`, its energy strata `C₁`–`C₅`, and the elliptic
//! action-angle chart in which the covector flow is explicit.
//!
//! Writing `p₁ = cos ψ`, `p₂ = −sin ψ`, the flow is `ψ̇ = p₃`,
//! `ṗ₃ = −(a²/2) sin 2ψ` with energy `E = 2p₃² − a² cos 2ψ`.

use crate::error::{Error, Result};
use crate::special_functions::{complete_k, ellip_f, jacobi_am, jacobi_sncndn, Modulus};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

/// Numeric tolerances shared by the library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed `|p₁² + p₂² − 1|` for a covector.
    pub level_set: f64,
    /// Energy equality tolerance for region assignment, relative to `max(1, a²)`.
    pub region: f64,
    /// Zero detection for quaternion components and fixed-point tests.
    pub zero: f64,
    /// Coarser gate for the Maxwell provisos (`sn τ ≠ 0` and friends).
    pub proviso: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            level_set: 1e-12,
            region: 1e-10,
            zero: 1e-10,
            proviso: 1e-8,
        }
    }
}

/// The metric invariant `a ∈ (0, 1)` with the tolerance bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SRParams {
    a: f64,
    pub tol: Tolerances,
}

impl SRParams {
    pub fn new(a: f64) -> Result<Self> {
        Self::with_tolerances(a, Tolerances::default())
    }

    pub fn with_tolerances(a: f64, tol: Tolerances) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidInvariant { a });
        }
        Ok(Self { a, tol })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `√(1 − a²)`, the scale of `p₁` in the Lax vector.
    pub fn c(&self) -> f64 {
        ((1.0 - self.a) * (1.0 + self.a)).sqrt()
    }
}

/// Vertical coordinates `(p₁, p₂, p₃)` on the level set `H = ½`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Covector {
    /// Checked constructor; `|p₁² + p₂² − 1|` must not exceed `1e-12`.
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Self::with_tolerance(p1, p2, p3, Tolerances::default().level_set)
    }

    pub fn with_tolerance(p1: f64, p2: f64, p3: f64, tol: f64) -> Result<Self> {
        let p = Self { p1, p2, p3 };
        if !(p.level_defect() <= tol) || !p3.is_finite() {
            return Err(Error::OffLevelSet { p1, p2, p3 });
        }
        Ok(p)
    }

    /// `p₁ = cos ψ`, `p₂ = −sin ψ`.
    pub fn from_psi(psi: f64, p3: f64) -> Self {
        let (s, c) = psi.sin_cos();
        Self { p1: c, p2: -s, p3 }
    }

    pub(crate) fn raw(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }

    pub fn level_defect(&self) -> f64 {
        (self.p1 * self.p1 + self.p2 * self.p2 - 1.0).abs()
    }

    /// ψ ∈ (−π, π].
    pub fn psi(&self) -> f64 {
        (-self.p2).atan2(self.p1)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn max_abs_diff(&self, o: &Covector) -> f64 {
        (self.p1 - o.p1)
            .abs()
            .max((self.p2 - o.p2).abs())
            .max((self.p3 - o.p3).abs())
    }
}

/// Pendulum energy `E = 2p₃² − a²(1 − 2p₂²)`.
pub fn energy(p: &Covector, params: &SRParams) -> f64 {
    let a2 = params.a * params.a;
    2.0 * p.p3 * p.p3 - a2 * (1.0 - 2.0 * p.p2 * p.p2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Oscillation, `E ∈ (−a², a²)`.
    C1,
    /// Rotation, `E > a²`.
    C2,
    /// Separatrix, `E = a²`, `p₃ ≠ 0`.
    C3,
    /// Stable equilibrium, `E = −a²`.
    C4,
    /// Unstable equilibrium, `E = a²`, `p₃ = 0`.
    C5,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::C1 => "C1",
            Region::C2 => "C2",
            Region::C3 => "C3",
            Region::C4 => "C4",
            Region::C5 => "C5",
        };
        f.write_str(s)
    }
}

impl FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C1" => Ok(Region::C1),
            "C2" => Ok(Region::C2),
            "C3" => Ok(Region::C3),
            "C4" => Ok(Region::C4),
            "C5" => Ok(Region::C5),
            _ => Err(Error::InvalidInput(format!("unknown region `{s}`"))),
        }
    }
}

/// Action-angle chart of a pendulum trajectory.
///
/// `k` is meaningful in `C₁`/`C₂` only and is [`Modulus::ZERO`] elsewhere.
/// `theta0` is the phase of the initial point; `s1`, `s2` are `±1`.
/// `n_parity` is the integer `n` of the equilibria `ψ = πn` (C₄) and
/// `ψ = −π/2 + πn` (C₅); only its parity matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticData {
    pub region: Region,
    pub k: Modulus,
    pub theta0: f64,
    pub s1: f64,
    pub s2: f64,
    pub n_parity: i64,
}

fn sign_of(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

impl EllipticData {
    /// Builds the chart directly from its coordinates. Signs are reduced to
    /// `±1`; the modulus is ignored outside `C₁`/`C₂`.
    pub fn new(region: Region, k: Modulus, theta0: f64, s1: f64, s2: f64) -> Result<Self> {
        if !theta0.is_finite() {
            return Err(Error::InvalidInput("non-finite phase".into()));
        }
        if matches!(region, Region::C1 | Region::C2) && k.k() == 0.0 {
            return Err(Error::ModulusOutOfRange { k: 0.0 });
        }
        let k = match region {
            Region::C1 | Region::C2 => k,
            _ => Modulus::ZERO,
        };
        Ok(Self {
            region,
            k,
            theta0,
            s1: sign_of(s1),
            s2: sign_of(s2),
            n_parity: 0,
        })
    }

    /// Equilibrium chart `C₄`/`C₅` with the given `n`.
    pub fn equilibrium(region: Region, n: i64) -> Result<Self> {
        if !matches!(region, Region::C4 | Region::C5) {
            return Err(Error::RegionNotSupported {
                region: region.to_string(),
            });
        }
        Ok(Self {
            region,
            k: Modulus::ZERO,
            theta0: 0.0,
            s1: 1.0,
            s2: 1.0,
            n_parity: n,
        })
    }

    fn parity_sign(&self) -> f64 {
        if self.n_parity.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Argument of the elliptic functions at time `t`: `a(θ₀ + t)` in `C₁`
    /// and `C₃`, `a(θ₀ + t)/k` in `C₂`, zero for equilibria.
    pub fn elliptic_arg(&self, params: &SRParams, t: f64) -> f64 {
        let a = params.a;
        match self.region {
            Region::C1 | Region::C3 => a * (self.theta0 + t),
            Region::C2 => a * (self.theta0 + t) / self.k.k(),
            Region::C4 | Region::C5 => 0.0,
        }
    }
}

/// Energy and region of a covector.
pub fn classify(p0: &Covector, params: &SRParams) -> Result<(f64, Region)> {
    let a2 = params.a * params.a;
    let e = energy(p0, params);
    let scale = params.tol.region * a2.max(1.0);
    let near_lower = (e + a2).abs() <= scale;
    let near_upper = (e - a2).abs() <= scale;
    let region = match (near_lower, near_upper) {
        (true, true) => return Err(Error::RegionBoundary { energy: e }),
        (true, false) => Region::C4,
        (false, true) => {
            // on the separatrix |p₃| = a|p₁|, so the saddle is where p₁ vanishes
            if p0.p1.abs() <= params.tol.region && p0.p3.abs() <= params.tol.region {
                Region::C5
            } else {
                Region::C3
            }
        }
        _ if e < a2 => Region::C1,
        _ => Region::C2,
    };
    Ok((e, region))
}

/// Angle in `[0, 2π)`.
fn positive_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Picks whichever of `m = k²` and `m1 = 1 − k²` carries more digits.
fn modulus_from(m: f64, m1: f64) -> Result<Modulus> {
    if m <= 0.5 {
        Modulus::from_parameter(m.max(0.0))
    } else {
        Modulus::from_complement(m1.clamp(f64::MIN_POSITIVE, 1.0))
    }
}

/// Elliptic coordinates of a covector.
pub fn to_elliptic(p0: &Covector, params: &SRParams) -> Result<EllipticData> {
    let (_, region) = classify(p0, params)?;
    let a = params.a;
    let a2 = a * a;
    let Covector { p1, p2, p3 } = *p0;
    let ed = match region {
        Region::C1 => {
            // k² = (E + a²)/(2a²) = p₂² + p₃²/a²
            let k = modulus_from(p2 * p2 + p3 * p3 / a2, (a2 * p1 * p1 - p3 * p3) / a2)?;
            let s1 = sign_of(p1);
            let am0 = positive_angle((-a * s1 * p2).atan2(p3));
            EllipticData {
                region,
                k,
                theta0: ellip_f(am0, k) / a,
                s1,
                s2: 1.0,
                n_parity: 0,
            }
        }
        Region::C2 => {
            // k² = 2a²/(E + a²)
            let denom = p3 * p3 + a2 * p2 * p2;
            let k = modulus_from(a2 / denom, (p3 * p3 - a2 * p1 * p1) / denom)?;
            let s2 = sign_of(p3);
            let am0 = positive_angle((-s2 * p2).atan2(p1));
            EllipticData {
                region,
                k,
                theta0: k.k() * ellip_f(am0, k) / a,
                s1: 1.0,
                s2,
                n_parity: 0,
            }
        }
        Region::C3 => {
            let (s1, s2) = (sign_of(p1), sign_of(p3));
            EllipticData {
                region,
                k: Modulus::ZERO,
                theta0: (-s2 * p2 / p1).asinh() / a,
                s1,
                s2,
                n_parity: 0,
            }
        }
        Region::C4 => EllipticData::equilibrium(region, if p1 < 0.0 { 1 } else { 0 })?,
        Region::C5 => EllipticData::equilibrium(region, if p2 < 0.0 { 1 } else { 0 })?,
    };
    Ok(ed)
}

/// Covector at time `t` along the pendulum trajectory.
pub fn covector_at(ed: &EllipticData, params: &SRParams, t: f64) -> Covector {
    let a = params.a;
    let u = ed.elliptic_arg(params, t);
    match ed.region {
        Region::C1 => {
            let j = jacobi_sncndn(u, ed.k);
            let k = ed.k.k();
            Covector::raw(ed.s1 * j.dn, -ed.s1 * k * j.sn, a * k * j.cn)
        }
        Region::C2 => {
            let j = jacobi_sncndn(u, ed.k);
            Covector::raw(j.cn, -ed.s2 * j.sn, ed.s2 * a * j.dn / ed.k.k())
        }
        Region::C3 => {
            let sech = 1.0 / u.cosh();
            Covector::raw(ed.s1 * sech, -ed.s1 * ed.s2 * u.tanh(), ed.s2 * a * sech)
        }
        Region::C4 => Covector::raw(ed.parity_sign(), 0.0, 0.0),
        Region::C5 => Covector::raw(0.0, ed.parity_sign(), 0.0),
    }
}

/// Continuous branch of the pendulum angle ψ(t), with `p₁ = cos ψ` and
/// `p₂ = −sin ψ`.
pub fn psi_at(ed: &EllipticData, params: &SRParams, t: f64) -> f64 {
    let u = ed.elliptic_arg(params, t);
    let flip = if ed.s1 < 0.0 { PI } else { 0.0 };
    match ed.region {
        Region::C1 => {
            let j = jacobi_sncndn(u, ed.k);
            (ed.k.k() * j.sn).atan2(j.dn) + flip
        }
        Region::C2 => ed.s2 * jacobi_am(u, ed.k),
        Region::C3 => ed.s2 * u.sinh().atan() + flip,
        Region::C4 => PI * ed.n_parity as f64,
        Region::C5 => -FRAC_PI_2 + PI * ed.n_parity as f64,
    }
}

/// Squared length `M` of the Lax vector, from the region formula.
pub fn conserved_m(ed: &EllipticData, params: &SRParams) -> f64 {
    let a2 = params.a * params.a;
    match ed.region {
        Region::C1 => 1.0 - a2 * ed.k.m1(),
        Region::C2 => (ed.k.m() + a2 * ed.k.m1()) / ed.k.m(),
        Region::C3 | Region::C5 => 1.0,
        Region::C4 => 1.0 - a2,
    }
}

/// `M = p₂² + p₁²(1 − a²) + p₃²` evaluated directly.
pub fn lax_norm_sq(p: &Covector, params: &SRParams) -> f64 {
    let c2 = 1.0 - params.a * params.a;
    p.p2 * p.p2 + p.p1 * p.p1 * c2 + p.p3 * p.p3
}

/// Period of the covector: `4K/a` in `C₁`, `4kK/a` in `C₂`, `0` for the
/// equilibria and `None` on the separatrix.
pub fn pendulum_period(ed: &EllipticData, params: &SRParams) -> Option<f64> {
    let a = params.a;
    match ed.region {
        Region::C1 => Some(4.0 * complete_k(ed.k) / a),
        Region::C2 => Some(4.0 * ed.k.k() * complete_k(ed.k) / a),
        Region::C3 => None,
        Region::C4 | Region::C5 => Some(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibria_are_classified() {
        let params = SRParams::new(0.5).unwrap();
        let (e, r) = classify(&Covector::new(1.0, 0.0, 0.0).unwrap(), &params).unwrap();
        assert_eq!((e, r), (-0.25, Region::C4));
        let (e, r) = classify(&Covector::new(0.0, 1.0, 0.0).unwrap(), &params).unwrap();
        assert_eq!((e, r), (0.25, Region::C5));
    }

    #[test]
    fn invariant_range() {
        assert!(SRParams::new(0.0).is_err());
        assert!(SRParams::new(1.0).is_err());
        assert!(SRParams::new(f64::NAN).is_err());
    }

    #[test]
    fn off_level_set_rejected() {
        assert!(Covector::new(1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn phase_zero_points() {
        let params = SRParams::new(0.6).unwrap();
        let k = 0.4;
        let p = Covector::new(1.0, 0.0, 0.6 * k).unwrap();
        let ed = to_elliptic(&p, &params).unwrap();
        assert_eq!(ed.region, Region::C1);
        assert_eq!(ed.theta0, 0.0);
        assert_eq!(ed.s1, 1.0);
        assert!((ed.k.k() - k).abs() < 1e-15);

        let p = Covector::new(1.0, 0.0, 1.5).unwrap();
        let ed = to_elliptic(&p, &params).unwrap();
        assert_eq!(ed.region, Region::C2);
        assert_eq!(ed.theta0, 0.0);
    }

    #[test]
    fn separatrix_origin() {
        let params = SRParams::new(0.6).unwrap();
        let ed = EllipticData::new(Region::C3, Modulus::ZERO, 0.0, 1.0, 1.0).unwrap();
        let p = covector_at(&ed, &params, 0.0);
        assert_eq!(p.to_array(), [1.0, 0.0, 0.6]);
    }

    #[test]
    fn region_names_round_trip() {
        for r in [Region::C1, Region::C2, Region::C3, Region::C4, Region::C5] {
            assert_eq!(r.to_string().parse::<Region>().unwrap(), r);
        }
    }
}
