//! Test-only oracles and random draws.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use so3geo::pendulum::{covector_at, Covector, EllipticData, Region, SRParams};
use so3geo::special_functions::Modulus;
use std::f64::consts::{PI, TAU};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = K15_WEIGHTS[7] * fc;
    let mut g = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return val;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adapt(&f, a, b, 1e-15, 40)
}

/// Defining integrals, evaluated by quadrature.
pub fn quad_f(phi: f64, m: f64) -> f64 {
    quad(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi)
}

pub fn quad_e(phi: f64, m: f64) -> f64 {
    quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi)
}

pub fn quad_pi(n: f64, phi: f64, m: f64) -> f64 {
    quad(
        |t| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - m * s2).sqrt())
        },
        0.0,
        phi,
    )
}

pub fn random_a(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.05..0.95)
}

pub fn random_sign(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Any covector on the level set, with `|p₃| ≤ 1.5`.
pub fn random_covector(rng: &mut impl Rng) -> Covector {
    Covector::from_psi(rng.gen_range(0.0..TAU), rng.gen_range(-1.5..1.5))
}

/// A chart in the given region with a random phase and signs.
pub fn random_chart(rng: &mut impl Rng, region: Region) -> EllipticData {
    match region {
        Region::C1 | Region::C2 => {
            let k = Modulus::new(rng.gen_range(0.05..0.95)).unwrap();
            let theta0 = rng.gen_range(0.0..20.0);
            EllipticData::new(region, k, theta0, random_sign(rng), random_sign(rng)).unwrap()
        }
        Region::C3 => {
            let theta0 = rng.gen_range(-3.0..3.0);
            EllipticData::new(region, Modulus::ZERO, theta0, random_sign(rng), random_sign(rng))
                .unwrap()
        }
        Region::C4 | Region::C5 => EllipticData::equilibrium(region, rng.gen_range(0..2)).unwrap(),
    }
}

/// Initial covector of a random chart, renormalized onto the level set.
pub fn random_covector_in(rng: &mut impl Rng, region: Region, params: &SRParams) -> Covector {
    let p = covector_at(&random_chart(rng, region), params, 0.0);
    let r = (p.p1 * p.p1 + p.p2 * p.p2).sqrt();
    Covector::new(p.p1 / r, p.p2 / r, p.p3).unwrap()
}

pub const ALL_REGIONS: [Region; 5] = [Region::C1, Region::C2, Region::C3, Region::C4, Region::C5];

pub fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

pub const HALF_PI: f64 = PI / 2.0;
