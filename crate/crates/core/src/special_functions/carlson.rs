//! Carlson symmetric elliptic integrals R_F, R_D, R_J and the degenerate R_C,
//! evaluated by the duplication theorem followed by a fifth-order Taylor
//! expansion about the common mean.
//!
//! Iteration stops once `4^-n Q < |A_n|`, where `Q` is scaled from the
//! relative tolerance [`CARLSON_TOL`]; the truncation error of the series is
//! then below that tolerance.

/// Relative convergence tolerance of the duplication loops.
pub const CARLSON_TOL: f64 = 1e-15;

fn max_dev(a0: f64, xs: &[f64]) -> f64 {
    xs.iter().map(|x| (a0 - x).abs()).fold(0.0, f64::max)
}

/// R_F(x, y, z) for non-negative arguments, at most one of them zero.
pub fn rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * CARLSON_TOL).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z, mut a) = (x, y, z, a0);
    let mut pow4 = 1.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// R_D(x, y, z) = R_J(x, y, z, z); requires z > 0 and x + y > 0.
pub fn rd(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z > 0.0);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * CARLSON_TOL).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z, mut a) = (x, y, z, a0);
    let mut pow4 = 1.0;
    let mut sum = 0.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        sum += pow4 / (sz * (z + lam));
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        a = (a + lam) * 0.25;
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    pow4 * series / (a * a.sqrt()) + 3.0 * sum
}

/// R_C(1, 1 + e) for e > -1.
fn rc_one(e: f64) -> f64 {
    if e.abs() < 1e-4 {
        // atan(√e)/√e = Σ (-e)^j / (2j + 1)
        1.0 - e / 3.0 + e * e / 5.0 - e.powi(3) / 7.0 + e.powi(4) / 9.0 - e.powi(5) / 11.0
    } else if e > 0.0 {
        let s = e.sqrt();
        s.atan() / s
    } else {
        let s = (-e).sqrt();
        s.atanh() / s
    }
}

/// R_J(x, y, z, p) for p > 0 (no Cauchy principal value branch).
pub fn rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0 && p > 0.0);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * CARLSON_TOL).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z, p]);
    let (x0, y0, z0) = (x, y, z);
    let (mut x, mut y, mut z, mut p, mut a) = (x, y, z, p, a0);
    let mut pow4 = 1.0;
    let mut sum = 0.0;
    while pow4 * q >= a.abs() {
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = pow4 * pow4 * pow4 * delta / (d * d);
        sum += pow4 * rc_one(e) / d;
        x = (x + lam) * 0.25;
        y = (y + lam) * 0.25;
        z = (z + lam) * 0.25;
        p = (p + lam) * 0.25;
        a = (a + lam) * 0.25;
        pow4 *= 0.25;
    }
    let xx = (a0 - x0) * pow4 / a;
    let yy = (a0 - y0) * pow4 / a;
    let zz = (a0 - z0) * pow4 / a;
    let pp = -(xx + yy + zz) / 2.0;
    let xyz = xx * yy * zz;
    let p2 = pp * pp;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * p2;
    let e3 = xyz + 2.0 * e2 * pp + 4.0 * p2 * pp;
    let e4 = (2.0 * xyz + e2 * pp + 3.0 * p2 * pp) * pp;
    let e5 = xyz * p2;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    pow4 * series / (a * a.sqrt()) + 6.0 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rf_special_values() {
        // R_F(x, x, x) = x^{-1/2}
        assert!((rf(4.0, 4.0, 4.0) - 0.5).abs() < 1e-15);
        // R_F(0, 1, 1) = π/2
        assert!((rf(0.0, 1.0, 1.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rd_and_rj_reduce_consistently() {
        // R_J(x, y, z, z) = R_D(x, y, z)
        let (x, y, z) = (0.3, 1.7, 0.9);
        assert!((rj(x, y, z, z) - rd(x, y, z)).abs() < 1e-14);
        // R_D(x, x, x) = x^{-3/2}
        assert!((rd(2.0, 2.0, 2.0) - 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn rc_one_branches_agree_across_switch() {
        for e in [-0.5f64, -1.0001e-4, -0.9999e-4, 0.9999e-4, 1.0001e-4, 3.0] {
            let direct = if e > 0.0 {
                e.sqrt().atan() / e.sqrt()
            } else {
                (-e).sqrt().atanh() / (-e).sqrt()
            };
            assert!((rc_one(e) - direct).abs() < 1e-15, "e = {e}");
        }
    }
}
