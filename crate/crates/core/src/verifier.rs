//! Fixed-step RK4 integration of the full Hamiltonian systems, used as an
//! oracle for the closed forms.
//!
//! * SO(3): `Ṙ = R(p₁A₂ + p₂√(1−a²)A₁)`
//! * S³: `q̇ = (q/2)(p₁j + p₂√(1−a²)i)`
//! * S²: `γ̇ = γ × ω`, `ω = (p₂√(1−a²), p₁, 0)`
//!
//! all driven by the vertical system `ṗ₁ = p₃p₂`, `ṗ₂ = −p₃p₁`,
//! `ṗ₃ = a²p₁p₂`.

use crate::algebra::{Rotation, UnitQuaternion, Vec3};
use crate::error::{Error, Result};
use crate::pendulum::{Covector, SRParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    /// Gram–Schmidt (SO(3)) or renormalization (S³, S²) period in steps.
    pub reorthonormalize_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            reorthonormalize_every: 100,
        }
    }
}

impl IntegratorConfig {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidInput(format!("step {} must be positive", self.step)));
        }
        Ok(())
    }
}

fn rk4_step<const N: usize>(y: &[f64; N], h: f64, f: &impl Fn(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let shift = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        std::array::from_fn(|i| y[i] + s * k[i])
    };
    let k1 = f(y);
    let k2 = f(&shift(y, &k1, 0.5 * h));
    let k3 = f(&shift(y, &k2, 0.5 * h));
    let k4 = f(&shift(y, &k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from 0 through each time in `times` (non-decreasing, ≥ 0),
/// recording the state there. Steps are of size `cfg.step` except the last
/// one before each output time, which is shortened to land on it exactly.
fn integrate<const N: usize>(
    y0: [f64; N],
    times: &[f64],
    cfg: &IntegratorConfig,
    f: impl Fn(&[f64; N]) -> [f64; N],
    project: impl Fn(&mut [f64; N]),
) -> Result<Vec<[f64; N]>> {
    cfg.validate()?;
    if times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::NegativeTime {
            t: times.iter().cloned().fold(f64::NAN, f64::min),
        });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("output times are not sorted".into()));
    }
    let mut y = y0;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let n = ((target - t) / cfg.step).floor() as usize;
        let start = t;
        for i in 1..=n {
            y = rk4_step(&y, cfg.step, &f);
            steps += 1;
            if steps.is_multiple_of(cfg.reorthonormalize_every.max(1)) {
                project(&mut y);
            }
            t = start + i as f64 * cfg.step;
        }
        let rest = target - t;
        if rest > 0.0 {
            y = rk4_step(&y, rest, &f);
        }
        t = target;
        out.push(y);
    }
    Ok(out)
}

fn vertical(p: [f64; 3], a2: f64) -> [f64; 3] {
    [p[2] * p[1], -p[2] * p[0], a2 * p[0] * p[1]]
}

fn covector(y: &[f64], at: usize) -> Covector {
    Covector {
        p1: y[at],
        p2: y[at + 1],
        p3: y[at + 2],
    }
}

/// State of the SO(3) system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3State {
    pub t: f64,
    pub r: Rotation,
    pub p: Covector,
}

/// State of the S³ system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatState {
    pub t: f64,
    pub q: UnitQuaternion,
    pub p: Covector,
}

/// State of the S² system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereState {
    pub t: f64,
    pub gamma: Vec3,
    pub p: Covector,
}

/// SO(3) trajectory recorded at the given times, starting at `R(0) = Id`.
pub fn integrate_so3_at(
    p0: &Covector,
    params: &SRParams,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<So3State>> {
    let a2 = params.a() * params.a();
    let c = params.c();
    let mut y0 = [0.0; 12];
    y0[..9].copy_from_slice(&Rotation::IDENTITY.to_array());
    y0[9..].copy_from_slice(&p0.to_array());
    let f = move |y: &[f64; 12]| {
        // Ω = p₁A₂ + p₂cA₁ = hat(p₂c, p₁, 0); Ṙ = RΩ
        let (w1, w2) = (y[10] * c, y[9]);
        let mut d = [0.0; 12];
        for i in 0..3 {
            let (r0, r1, r2) = (y[3 * i], y[3 * i + 1], y[3 * i + 2]);
            d[3 * i] = -r2 * w2;
            d[3 * i + 1] = r2 * w1;
            d[3 * i + 2] = r0 * w2 - r1 * w1;
        }
        d[9..].copy_from_slice(&vertical([y[9], y[10], y[11]], a2));
        d
    };
    let project = |y: &mut [f64; 12]| {
        let r = rotation_of(y).reorthonormalize();
        y[..9].copy_from_slice(&r.to_array());
    };
    let states = integrate(y0, times, cfg, f, project)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, y)| So3State {
            t,
            r: rotation_of(&y),
            p: covector(&y, 9),
        })
        .collect())
}

fn rotation_of(y: &[f64]) -> Rotation {
    Rotation(std::array::from_fn(|i| [y[3 * i], y[3 * i + 1], y[3 * i + 2]]))
}

/// SO(3) state at `t_end`.
pub fn integrate_so3(
    p0: &Covector,
    params: &SRParams,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<So3State> {
    Ok(integrate_so3_at(p0, params, &[t_end], cfg)?[0])
}

/// S³ trajectory recorded at the given times, starting at `q(0) = 1`.
pub fn integrate_quat_at(
    p0: &Covector,
    params: &SRParams,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<QuatState>> {
    let a2 = params.a() * params.a();
    let c = params.c();
    let mut y0 = [0.0; 7];
    y0[0] = 1.0;
    y0[4..].copy_from_slice(&p0.to_array());
    let f = move |y: &[f64; 7]| {
        // q̇ = q·w/2 with w = p₂c i + p₁ j
        let w = UnitQuaternion {
            q0: 0.0,
            q1: 0.5 * y[5] * c,
            q2: 0.5 * y[4],
            q3: 0.0,
        };
        let q = UnitQuaternion {
            q0: y[0],
            q1: y[1],
            q2: y[2],
            q3: y[3],
        };
        let dq = q.product(&w);
        let dp = vertical([y[4], y[5], y[6]], a2);
        [dq.q0, dq.q1, dq.q2, dq.q3, dp[0], dp[1], dp[2]]
    };
    let project = |y: &mut [f64; 7]| {
        let n = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
        y[..4].iter_mut().for_each(|c| *c /= n);
    };
    let states = integrate(y0, times, cfg, f, project)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, y)| QuatState {
            t,
            q: UnitQuaternion {
                q0: y[0],
                q1: y[1],
                q2: y[2],
                q3: y[3],
            },
            p: covector(&y, 4),
        })
        .collect())
}

/// S³ state at `t_end`.
pub fn integrate_quat(
    p0: &Covector,
    params: &SRParams,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<QuatState> {
    Ok(integrate_quat_at(p0, params, &[t_end], cfg)?[0])
}

/// S² trajectory recorded at the given times.
pub fn integrate_sphere_at(
    gamma0: &Vec3,
    p0: &Covector,
    params: &SRParams,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<SphereState>> {
    let a2 = params.a() * params.a();
    let c = params.c();
    let mut y0 = [0.0; 6];
    y0[..3].copy_from_slice(&gamma0.0);
    y0[3..].copy_from_slice(&p0.to_array());
    let f = move |y: &[f64; 6]| {
        let g = Vec3([y[0], y[1], y[2]]);
        let w = Vec3([y[4] * c, y[3], 0.0]);
        let dg = g.cross(&w);
        let dp = vertical([y[3], y[4], y[5]], a2);
        [dg.0[0], dg.0[1], dg.0[2], dp[0], dp[1], dp[2]]
    };
    let project = |y: &mut [f64; 6]| {
        let n = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        y[..3].iter_mut().for_each(|c| *c /= n);
    };
    let states = integrate(y0, times, cfg, f, project)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, y)| SphereState {
            t,
            gamma: Vec3([y[0], y[1], y[2]]),
            p: covector(&y, 3),
        })
        .collect())
}

/// S² state at `t_end`.
pub fn integrate_sphere(
    gamma0: &Vec3,
    p0: &Covector,
    params: &SRParams,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<SphereState> {
    Ok(integrate_sphere_at(gamma0, p0, params, &[t_end], cfg)?[0])
}
