//! Quaternions, rotation matrices and the identifications
//! so(3) ≃ imaginary quaternions ≃ ℝ³.
//!
//! The basis `A₁, A₂, A₃` of so(3) is the cross-product basis,
//! `hat(eᵢ) = Aᵢ`, and corresponds to the imaginary units `i, j, k`.
//! A rotation by angle β about a unit axis `u` lifts to the unit quaternion
//! `cos(β/2) + u sin(β/2)`; the covering map S³ → SO(3) is `q ↦ (a ↦ q a q⁻¹)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const E1: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const E2: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const E3: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let (a, b) = (self.0, o.0);
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3(self.0.map(|c| c * s))
    }

    pub fn max_abs_diff(&self, o: &Vec3) -> f64 {
        (0..3).map(|i| (self.0[i] - o.0[i]).abs()).fold(0.0, f64::max)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

/// 3×3 real matrix, row-major. Used both for rotations and for elements of
/// so(3) (skew matrices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation(pub [[f64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Rotation {
        let m = self.0;
        Rotation(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    /// Inverse of a rotation (its transpose).
    pub fn inverse(&self) -> Rotation {
        self.transpose()
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        Vec3(std::array::from_fn(|i| {
            m[i][0] * v.0[0] + m[i][1] * v.0[1] + m[i][2] * v.0[2]
        }))
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// ‖A − B‖∞ as the largest entrywise deviation.
    pub fn max_abs_diff(&self, o: &Rotation) -> f64 {
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        d
    }

    /// Largest entry of `RᵀR − Id`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.transpose() * *self).max_abs_diff(&Rotation::IDENTITY)
    }

    /// Checks `RᵀR = Id` and `det R = 1` within `tol`; never repairs.
    pub fn check_special_orthogonal(&self, tol: f64) -> Result<()> {
        let defect = self.orthogonality_defect();
        let det = self.determinant();
        if defect > tol || (det - 1.0).abs() > tol {
            return Err(Error::InvariantViolation(format!(
                "rotation not in SO(3): |RᵀR − I| = {defect:e}, det = {det}"
            )));
        }
        Ok(())
    }

    /// Row-major flattening.
    pub fn to_array(&self) -> [f64; 9] {
        let m = self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn scale(&self, s: f64) -> Rotation {
        Rotation(self.0.map(|r| r.map(|c| c * s)))
    }

    /// Gram–Schmidt on the rows. Only the ODE oracle uses this.
    pub fn reorthonormalize(&self) -> Rotation {
        let r0 = Vec3(self.0[0]);
        let r1 = Vec3(self.0[1]);
        let u0 = r0.scale(1.0 / r0.norm());
        let w1 = r1 - u0.scale(u0.dot(&r1));
        let u1 = w1.scale(1.0 / w1.norm());
        let u2 = u0.cross(&u1);
        Rotation([u0.0, u1.0, u2.0])
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, o: Rotation) -> Rotation {
        let (a, b) = (self.0, o.0);
        Rotation(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
        }))
    }
}

impl Add for Rotation {
    type Output = Rotation;
    fn add(self, o: Rotation) -> Rotation {
        Rotation(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + o.0[i][j])
        }))
    }
}

impl Sub for Rotation {
    type Output = Rotation;
    fn sub(self, o: Rotation) -> Rotation {
        Rotation(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - o.0[i][j])
        }))
    }
}

/// Coordinate axis `e₁`, `e₂` or `e₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    E1,
    E2,
    E3,
}

impl TryFrom<u8> for Axis {
    type Error = Error;
    fn try_from(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Axis::E1),
            2 => Ok(Axis::E2),
            3 => Ok(Axis::E3),
            _ => Err(Error::InvalidInput(format!("axis index {i} not in 1..=3"))),
        }
    }
}

/// `e^{angle·Aᵢ}`.
pub fn basis_rotation(axis: Axis, angle: f64) -> Rotation {
    let (s, c) = angle.sin_cos();
    basis_rotation_cs(axis, c, s)
}

/// Rotation about a coordinate axis given the cosine and sine of its angle.
pub fn basis_rotation_cs(axis: Axis, c: f64, s: f64) -> Rotation {
    match axis {
        Axis::E1 => Rotation([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]),
        Axis::E2 => Rotation([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]),
        Axis::E3 => Rotation([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]),
    }
}

/// The half-turns `Iᵢ = e^{πAᵢ}`, written exactly.
pub fn half_turn(axis: Axis) -> Rotation {
    basis_rotation_cs(axis, -1.0, 0.0)
}

/// `hat(v)`: the skew matrix with `hat(v) w = v × w`.
pub fn hat(v: &Vec3) -> Rotation {
    let [x, y, z] = v.0;
    Rotation([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
}

/// Inverse of [`hat`] on skew matrices.
pub fn vee(m: &Rotation) -> Vec3 {
    Vec3([m.0[2][1], m.0[0][2], m.0[1][0]])
}

/// Killing form on so(3) in the `Aᵢ` coordinates, i.e. the dot product.
pub fn killing_inner(x: &Vec3, y: &Vec3) -> f64 {
    x.dot(y)
}

/// Killing form evaluated literally as `−½ tr(XY)`.
pub fn killing_inner_trace(x: &Rotation, y: &Rotation) -> f64 {
    -0.5 * (*x * *y).trace()
}

/// Unit quaternion `q0 + q1 i + q2 j + q3 k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion::raw(1.0, 0.0, 0.0, 0.0);
    pub const I: UnitQuaternion = UnitQuaternion::raw(0.0, 1.0, 0.0, 0.0);
    pub const J: UnitQuaternion = UnitQuaternion::raw(0.0, 0.0, 1.0, 0.0);
    pub const K: UnitQuaternion = UnitQuaternion::raw(0.0, 0.0, 0.0, 1.0);

    const fn raw(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    /// Normalizes the four components; rejects the zero quaternion.
    pub fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Result<Self> {
        let n = (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidInput("zero or non-finite quaternion".into()));
        }
        Ok(Self::raw(q0 / n, q1 / n, q2 / n, q3 / n))
    }

    /// `e^{angle·u/2}` for a coordinate unit `u ∈ {i, j, k}`.
    pub fn basis_half_angle(axis: Axis, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        match axis {
            Axis::E1 => Self::raw(c, s, 0.0, 0.0),
            Axis::E2 => Self::raw(c, 0.0, s, 0.0),
            Axis::E3 => Self::raw(c, 0.0, 0.0, s),
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn component(&self, i: usize) -> f64 {
        self.to_array()[i]
    }

    pub fn norm(&self) -> f64 {
        let [a, b, c, d] = self.to_array();
        (a * a + b * b + c * c + d * d).sqrt()
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// Inverse of a unit quaternion (its conjugate).
    pub fn inverse(&self) -> Self {
        self.conjugate()
    }

    pub fn neg(&self) -> Self {
        Self::raw(-self.q0, -self.q1, -self.q2, -self.q3)
    }

    fn renormalized(self) -> Self {
        let n = self.norm();
        Self::raw(self.q0 / n, self.q1 / n, self.q2 / n, self.q3 / n)
    }

    /// Hamilton product without renormalization (also used on non-unit
    /// quaternions such as embedded vectors).
    pub fn product(&self, o: &Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (o.q0, o.q1, o.q2, o.q3);
        Self::raw(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let (a, b) = (self.to_array(), o.to_array());
        (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }

    /// Pure imaginary quaternion for a vector (not unit in general).
    pub fn pure(v: &Vec3) -> Self {
        Self::raw(0.0, v.0[0], v.0[1], v.0[2])
    }

    pub fn imaginary(&self) -> Vec3 {
        Vec3([self.q1, self.q2, self.q3])
    }
}

/// Quaternion product, renormalized to the unit sphere.
pub fn quat_mul(p: &UnitQuaternion, q: &UnitQuaternion) -> UnitQuaternion {
    p.product(q).renormalized()
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        quat_mul(&self, &o)
    }
}

/// The covering map S³ → SO(3).
pub fn quat_to_rotation(q: &UnitQuaternion) -> Rotation {
    let (q0, q1, q2, q3) = (q.q0, q.q1, q.q2, q.q3);
    Rotation([
        [
            q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3,
            2.0 * (q1 * q2 - q0 * q3),
            2.0 * (q0 * q2 + q1 * q3),
        ],
        [
            2.0 * (q1 * q2 + q0 * q3),
            q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3,
            2.0 * (q2 * q3 - q0 * q1),
        ],
        [
            2.0 * (q1 * q3 - q0 * q2),
            2.0 * (q2 * q3 + q0 * q1),
            q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3,
        ],
    ])
}

/// Unit quaternion of the rotation by `beta` about `axis`.
pub fn axis_angle_quat(axis: &Vec3, beta: f64) -> Result<UnitQuaternion> {
    let n = axis.norm();
    if !(n > 0.0) {
        return Err(Error::ZeroAxis);
    }
    let (s, c) = (0.5 * beta).sin_cos();
    let u = axis.scale(s / n);
    Ok(UnitQuaternion::raw(c, u.0[0], u.0[1], u.0[2]))
}
