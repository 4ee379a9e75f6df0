//! Almost-Riemannian geodesics on S².
//!
//! A geodesic from `γ₀` is `γ_t = R_t⁻¹γ₀` where `R_t` is a sub-Riemannian
//! geodesic whose initial covector is transversal to `γ₀`:
//! `⟨p⃗₀, γ₀⟩ = p₂x₀ + p₁√(1−a²)y₀ + p₃z₀ = 0`.
//!
//! Here `p⃗ = (p₂, p₁√(1−a²), p₃)` is always the Lax vector, never the raw
//! covector `(p₁, p₂, p₃)`.

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::exp_map::{exp_from_elliptic, phi3};
use crate::pendulum::{
    covector_at, lax_norm_sq, to_elliptic, Covector, EllipticData, Region, SRParams,
};
use crate::special_functions::complete_k;
use crate::symmetry::SymmetryId;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance for `|γ| = 1`, transversality and membership of the singular set.
pub const SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !((norm - 1.0).abs() <= SPHERE_TOL) {
            return Err(Error::NotOnSphere { norm });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalized(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotOnSphere { norm: n });
        }
        Ok(Self {
            x: v.x() / n,
            y: v.y() / n,
            z: v.z() / n,
        })
    }

    pub fn to_vec(&self) -> Vec3 {
        Vec3([self.x, self.y, self.z])
    }

    pub fn coordinate(&self, c: Coordinate) -> f64 {
        match c {
            Coordinate::X => self.x,
            Coordinate::Y => self.y,
            Coordinate::Z => self.z,
        }
    }
}

/// The Lax vector `(p₂, p₁√(1−a²), p₃)`.
pub fn lax_vector(p: &Covector, params: &SRParams) -> Vec3 {
    Vec3([p.p2, params.c() * p.p1, p.p3])
}

/// `⟨p⃗, γ⟩`.
pub fn transversality_residual(p: &Covector, gamma: &SpherePoint, params: &SRParams) -> f64 {
    lax_vector(p, params).dot(&gamma.to_vec())
}

/// The equator `z = 0`, where the metric degenerates.
pub fn singular_set(p: &SpherePoint) -> bool {
    p.z.abs() <= SPHERE_TOL
}

/// An almost-Riemannian geodesic: initial point, transversal covector and
/// the pendulum chart of the covector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ARGeodesic {
    pub gamma0: SpherePoint,
    pub p0: Covector,
    pub ed: EllipticData,
}

impl ARGeodesic {
    pub fn new(gamma0: SpherePoint, p0: Covector, params: &SRParams) -> Result<Self> {
        let residual = transversality_residual(&p0, &gamma0, params);
        if !(residual.abs() <= SPHERE_TOL) {
            return Err(Error::Transversality { residual });
        }
        Ok(Self {
            gamma0,
            p0,
            ed: to_elliptic(&p0, params)?,
        })
    }

    /// `γ_t = R_t⁻¹γ₀`.
    pub fn point_at(&self, params: &SRParams, t: f64) -> Result<SpherePoint> {
        let r = exp_from_elliptic(&self.ed, params, t)?.r;
        let g = r.transpose().apply(&self.gamma0.to_vec());
        Ok(SpherePoint {
            x: g.x(),
            y: g.y(),
            z: g.z(),
        })
    }
}

/// `γ_t` for a transversal covector.
pub fn project(
    p0: &Covector,
    params: &SRParams,
    gamma0: &SpherePoint,
    t: f64,
) -> Result<SpherePoint> {
    ARGeodesic::new(*gamma0, *p0, params)?.point_at(params, t)
}

/// Transversal covectors at a point, as a one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransversalFamily {
    /// `z₀ ≠ 0`: any `ψ₀`, with `p₃ = (x₀ sin ψ₀ − y₀√(1−a²) cos ψ₀)/z₀`.
    Tilted { gamma0: SpherePoint, c: f64 },
    /// `z₀ = 0`: `ψ₀` is one of two opposite angles and `p₃` is free.
    Equatorial { psi0: [f64; 2] },
}

impl TransversalFamily {
    /// Member of the tilted chart with angle `ψ₀`.
    pub fn at_psi(&self, psi0: f64) -> Result<Covector> {
        match self {
            Self::Tilted { gamma0: g, c } => {
                let (s, co) = psi0.sin_cos();
                Ok(Covector::from_psi(psi0, (g.x * s - g.y * c * co) / g.z))
            }
            Self::Equatorial { .. } => Err(Error::InvalidInput(
                "equatorial family is parameterized by p3".into(),
            )),
        }
    }

    /// Member of the equatorial chart on branch `0` or `1` with the given `p₃`.
    pub fn at_p3(&self, branch: usize, p3: f64) -> Result<Covector> {
        match self {
            Self::Equatorial { psi0 } if branch < 2 => Ok(Covector::from_psi(psi0[branch], p3)),
            Self::Equatorial { .. } => {
                Err(Error::InvalidInput(format!("branch {branch} not in 0..2")))
            }
            Self::Tilted { .. } => Err(Error::InvalidInput(
                "tilted family is parameterized by psi0".into(),
            )),
        }
    }
}

/// Family of covectors transversal to `γ₀`.
pub fn transversal_family(gamma0: &SpherePoint, params: &SRParams) -> TransversalFamily {
    let c = params.c();
    if singular_set(gamma0) {
        // −x₀ sin ψ₀ + y₀√(1−a²) cos ψ₀ = 0
        let psi = (c * gamma0.y).atan2(gamma0.x);
        TransversalFamily::Equatorial {
            psi0: [psi, psi + PI],
        }
    } else {
        TransversalFamily::Tilted {
            gamma0: *gamma0,
            c,
        }
    }
}

/// Reflection of a sphere point by the image action of a symmetry, taken
/// with the `+` sign.
pub fn sphere_image(i: SymmetryId, g: &Vec3) -> Vec3 {
    let [x, y, z] = g.0;
    Vec3(match i.index() {
        1 => [-x, y, z],
        2 => [x, y, -z],
        3 => [-x, y, -z],
        4 => [-x, -y, z],
        5 => [x, -y, z],
        6 => [x, y, z],
        _ => [x, -y, -z],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coordinate {
    X,
    Y,
    Z,
}

/// Initial points covered by the Maxwell table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialSet {
    /// `x₀ = ±1`, `y₀ = ±1`, `z₀ = ±1`.
    Pole(Coordinate),
    /// `x₀ = 0`, `y₀ = 0`, `z₀ = 0`.
    Plane(Coordinate),
}

impl InitialSet {
    pub fn contains(&self, g: &SpherePoint) -> bool {
        match *self {
            Self::Pole(c) => (g.coordinate(c).abs() - 1.0).abs() <= SPHERE_TOL,
            Self::Plane(c) => g.coordinate(c).abs() <= SPHERE_TOL,
        }
    }
}

/// Values entering the residuals at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualInputs {
    pub c: f64,
    /// `M = |p⃗|²`.
    pub m: f64,
    pub gamma0: SpherePoint,
    pub p0: Covector,
    pub pt: Covector,
}

/// One row of the Maxwell table: on geodesics starting in `initial`, the
/// coordinate `coordinate` of `γ_t` vanishes exactly when
/// `B_s(t) sin φ₃(t) + B_c(t) cos φ₃(t) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct MaxwellCase {
    pub id: u8,
    pub initial: InitialSet,
    pub coordinate: Coordinate,
    coefficients: fn(&ResidualInputs) -> (f64, f64),
}

impl MaxwellCase {
    /// `(B_s, B_c)`.
    pub fn coefficients(&self, v: &ResidualInputs) -> (f64, f64) {
        (self.coefficients)(v)
    }

    pub fn by_id(id: u8) -> Result<&'static MaxwellCase> {
        MAXWELL_CASES
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::InvalidInput(format!("Maxwell case {id} not in 1..=9")))
    }
}

impl PartialEq for MaxwellCase {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id
    }
}

fn sin_only(_: &ResidualInputs) -> (f64, f64) {
    (1.0, 0.0)
}

pub static MAXWELL_CASES: [MaxwellCase; 9] = [
    MaxwellCase {
        id: 1,
        initial: InitialSet::Pole(Coordinate::X),
        coordinate: Coordinate::Y,
        coefficients: |v| (v.c * v.pt.p3 * v.pt.p1, v.m.sqrt() * v.pt.p2),
    },
    MaxwellCase {
        id: 2,
        initial: InitialSet::Pole(Coordinate::X),
        coordinate: Coordinate::Z,
        coefficients: sin_only,
    },
    MaxwellCase {
        id: 3,
        initial: InitialSet::Pole(Coordinate::Y),
        coordinate: Coordinate::X,
        coefficients: |v| (-v.pt.p3 * v.pt.p2, v.m.sqrt() * v.c * v.pt.p1),
    },
    MaxwellCase {
        id: 4,
        initial: InitialSet::Pole(Coordinate::Y),
        coordinate: Coordinate::Z,
        coefficients: sin_only,
    },
    MaxwellCase {
        id: 5,
        initial: InitialSet::Pole(Coordinate::Z),
        coordinate: Coordinate::X,
        coefficients: |v| (v.m.sqrt() * v.c * v.pt.p1, v.pt.p3 * v.pt.p2),
    },
    MaxwellCase {
        id: 6,
        initial: InitialSet::Pole(Coordinate::Z),
        coordinate: Coordinate::Y,
        coefficients: |v| (v.m.sqrt() * v.pt.p2, -v.c * v.pt.p3 * v.pt.p1),
    },
    MaxwellCase {
        id: 7,
        initial: InitialSet::Plane(Coordinate::Z),
        coordinate: Coordinate::Z,
        coefficients: sin_only,
    },
    MaxwellCase {
        id: 8,
        initial: InitialSet::Plane(Coordinate::Y),
        coordinate: Coordinate::Y,
        coefficients: |v| {
            let (x0, z0) = (v.gamma0.x, v.gamma0.z);
            let (p, q) = (v.p0, v.pt);
            (
                v.m * z0 * q.p2 - v.c * v.c * x0 * q.p3 * p.p1 * q.p1,
                -v.c * v.m.sqrt() * (z0 * q.p3 * q.p1 + x0 * p.p1 * q.p2),
            )
        },
    },
    MaxwellCase {
        id: 9,
        initial: InitialSet::Plane(Coordinate::X),
        coordinate: Coordinate::X,
        coefficients: |v| {
            let (y0, z0) = (v.gamma0.y, v.gamma0.z);
            let (p, q) = (v.p0, v.pt);
            (
                y0 * q.p3 * p.p2 * q.p2 - v.m * v.c * z0 * q.p1,
                -v.m.sqrt() * (v.c * y0 * q.p1 * p.p2 + z0 * q.p3 * q.p2),
            )
        },
    },
];

/// `B_s(t) sin φ₃(t) + B_c(t) cos φ₃(t)` for the geodesic; its roots are the
/// times at which the case's coordinate of `γ_t` vanishes.
pub fn maxwell_residual(
    case: &MaxwellCase,
    ar: &ARGeodesic,
    params: &SRParams,
    t: f64,
) -> Result<f64> {
    if !case.initial.contains(&ar.gamma0) {
        return Err(Error::CaseMismatch { case: case.id });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime { t });
    }
    let inputs = ResidualInputs {
        c: params.c(),
        m: lax_norm_sq(&ar.p0, params),
        gamma0: ar.gamma0,
        p0: ar.p0,
        pt: covector_at(&ar.ed, params, t),
    };
    let (bs, bc) = case.coefficients(&inputs);
    let (s, c) = phi3(&ar.ed, params, t).sin_cos();
    Ok(bs * s + bc * c)
}

/// Upper bound on the cut time of the almost-Riemannian problem.
pub fn cut_bound_ar(ed: &EllipticData, params: &SRParams) -> f64 {
    let a = params.a();
    match ed.region {
        Region::C1 => 2.0 * complete_k(ed.k) / a,
        Region::C2 => 2.0 * ed.k.k() * complete_k(ed.k) / a,
        Region::C3 | Region::C5 => PI / params.c(),
        Region::C4 => PI,
    }
}

/// Upper bound on the cut time of the sub-Riemannian problem on SO(3).
pub fn cut_bound_sr(ed: &EllipticData, params: &SRParams) -> f64 {
    match ed.region {
        Region::C4 => 2.0 * PI,
        _ => cut_bound_ar(ed, params) + PI,
    }
}

/// First return of a geodesic from the singular set to it: the root of
/// `φ₃(t) = π`, which lies in `(0, cut_bound_ar]`.
pub fn first_singular_return(ar: &ARGeodesic, params: &SRParams) -> Result<f64> {
    if !singular_set(&ar.gamma0) {
        return Err(Error::NotOnSingularSet);
    }
    let f = |t: f64| phi3(&ar.ed, params, t) - PI;
    let mut lo = 0.0;
    let mut hi = cut_bound_ar(&ar.ed, params);
    let f_hi = f(hi);
    if f_hi < 0.0 {
        if f_hi > -1e-12 {
            return Ok(hi);
        }
        return Err(Error::InvariantViolation(format!(
            "phi3 = {} < pi at the cut bound {hi}",
            f_hi + PI
        )));
    }
    while hi - lo > 1e-14 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::Modulus;

    #[test]
    fn sphere_point_checks_norm() {
        assert!(SpherePoint::new(1.0, 0.0, 0.0).is_ok());
        assert!(matches!(
            SpherePoint::new(1.0, 0.1, 0.0),
            Err(Error::NotOnSphere { .. })
        ));
    }

    #[test]
    fn singular_set_is_equator() {
        let h = 0.5f64.sqrt();
        assert!(singular_set(&SpherePoint::new(1.0, 0.0, 0.0).unwrap()));
        assert!(!singular_set(&SpherePoint::new(0.0, 0.0, 1.0).unwrap()));
        assert!(!singular_set(&SpherePoint::new(0.0, h, h).unwrap()));
    }

    #[test]
    fn pole_family_has_zero_p3() {
        let params = SRParams::new(0.6).unwrap();
        let e3 = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        let fam = transversal_family(&e3, &params);
        for psi in [0.0, 1.0, 4.0] {
            assert!(fam.at_psi(psi).unwrap().p3.abs() < 1e-15);
        }
        let e1 = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let p = transversal_family(&e1, &params).at_p3(1, 0.3).unwrap();
        assert!(p.p2.abs() < 1e-15);
    }

    #[test]
    fn transversality_enforced() {
        let params = SRParams::new(0.6).unwrap();
        let e3 = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        let p = Covector::from_psi(0.3, 0.1);
        assert!(matches!(
            project(&p, &params, &e3, 1.0),
            Err(Error::Transversality { .. })
        ));
    }

    #[test]
    fn stable_equilibrium_traces_great_circle() {
        let params = SRParams::new(0.6).unwrap();
        let e3 = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        let p = Covector::new(1.0, 0.0, 0.0).unwrap();
        let g = project(&p, &params, &e3, 0.7).unwrap();
        assert!(g.y.abs() < 1e-15);
        assert!((g.z - 0.7f64.cos()).abs() < 1e-14);
        assert!((g.x.abs() - 0.7f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn sine_only_cases() {
        let params = SRParams::new(0.6).unwrap();
        let e1 = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let ar = ARGeodesic::new(e1, Covector::from_psi(0.0, 0.4), &params).unwrap();
        let r = maxwell_residual(MaxwellCase::by_id(2).unwrap(), &ar, &params, 1.1).unwrap();
        assert!((r - phi3(&ar.ed, &params, 1.1).sin()).abs() < 1e-15);
        assert!(matches!(
            maxwell_residual(MaxwellCase::by_id(5).unwrap(), &ar, &params, 1.0),
            Err(Error::CaseMismatch { case: 5 })
        ));
    }

    #[test]
    fn cut_bounds() {
        let params = SRParams::new(0.6).unwrap();
        let c4 = EllipticData::equilibrium(Region::C4, 0).unwrap();
        assert_eq!(cut_bound_ar(&c4, &params), PI);
        assert_eq!(cut_bound_sr(&c4, &params), 2.0 * PI);
        let c3 = EllipticData::new(Region::C3, Modulus::ZERO, 0.0, 1.0, 1.0).unwrap();
        assert!((cut_bound_ar(&c3, &params) - PI / 0.8).abs() < 1e-15);
    }

    #[test]
    fn singular_return_of_equilibria() {
        let params = SRParams::new(0.6).unwrap();
        let e1 = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let ar = ARGeodesic::new(e1, Covector::new(0.0, 1.0, 0.0).unwrap(), &params);
        // (0, 1, 0) is not transversal to e₁
        assert!(ar.is_err());
        let e2 = SpherePoint::new(0.0, 1.0, 0.0).unwrap();
        let ar = ARGeodesic::new(e2, Covector::new(0.0, 1.0, 0.0).unwrap(), &params).unwrap();
        let t = first_singular_return(&ar, &params).unwrap();
        assert!((t - PI / 0.8).abs() < 1e-12);
        let ar = ARGeodesic::new(e1, Covector::new(1.0, 0.0, 0.0).unwrap(), &params).unwrap();
        assert!((first_singular_return(&ar, &params).unwrap() - PI).abs() < 1e-12);
    }
}
