//! Closed-form geodesics of the left-invariant sub-Riemannian problem on SO(3)
//! and of the associated almost-Riemannian problem on S².
//!
//! The vertical (covector) part of the Hamiltonian flow is a mathematical
//! pendulum; everything else (Euler angles, the third angle φ₃, the S³ lift,
//! periodic geodesics, discrete symmetries and cut-time bounds) is expressed
//! through Jacobi elliptic functions and Legendre elliptic integrals.
//!
//! Every closed form has an independent fixed-step RK4 counterpart in
//! [`verifier`].

pub mod algebra;
pub mod error;
pub mod exp_map;
pub mod pendulum;
pub mod periodic;
pub mod special_functions;
pub mod sphere;
pub mod symmetry;
pub mod verifier;

pub use algebra::{Rotation, UnitQuaternion, Vec3};
pub use error::{Error, Result};
pub use exp_map::{EulerPhi, GeodesicSample};
pub use pendulum::{Covector, EllipticData, Region, SRParams, Tolerances};
pub use special_functions::{Characteristic, Modulus};
