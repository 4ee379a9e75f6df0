mod common;

use common::{quad_f, random_chart, random_covector, rng, ALL_REGIONS};
use proptest::prelude::*;
use rand::Rng;
use so3geo::pendulum::*;
use so3geo::special_functions::{complete_k, Modulus};
use so3geo::verifier::{integrate_so3_at, IntegratorConfig};
use so3geo::Error;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

fn params(a: f64) -> SRParams {
    SRParams::new(a).unwrap()
}

#[test]
fn invariant_range() {
    assert!(matches!(SRParams::new(0.0), Err(Error::InvalidInvariant { .. })));
    assert!(SRParams::new(1.0).is_err());
    assert!(SRParams::new(f64::NAN).is_err());
    assert!((params(0.6).c() - 0.8).abs() < 1e-16);
}

#[test]
fn level_set_is_enforced() {
    assert!(Covector::new(1.0, 0.0, 5.0).is_ok());
    assert!(matches!(
        Covector::new(1.0, 1e-5, 0.0),
        Err(Error::OffLevelSet { .. })
    ));
}

#[test]
fn classify_examples() {
    let p = params(0.5);
    let (e, r) = classify(&Covector::new(1.0, 0.0, 0.0).unwrap(), &p).unwrap();
    assert_eq!((e, r), (-0.25, Region::C4));
    let (e, r) = classify(&Covector::new(0.0, 1.0, 0.0).unwrap(), &p).unwrap();
    assert_eq!((e, r), (0.25, Region::C5));
    let p = params(0.6);
    let c = Covector::from_psi(0.3, 0.1);
    let e_direct = 2.0 * 0.01 - 0.36 * (2.0 * 0.3f64).cos();
    let (e, r) = classify(&c, &p).unwrap();
    assert!((e - e_direct).abs() < 1e-15);
    assert_eq!(r, Region::C1);
    // on the separatrix, away from the saddle
    let psi: f64 = 0.4;
    let c3 = Covector::from_psi(psi, 0.6 * psi.cos());
    assert_eq!(classify(&c3, &p).unwrap().1, Region::C3);
}

#[test]
fn region_names_round_trip() {
    for r in ALL_REGIONS {
        assert_eq!(r.to_string().parse::<Region>().unwrap(), r);
    }
    assert!("C6".parse::<Region>().is_err());
}

#[test]
fn chart_examples() {
    let p = params(0.5);
    let k = 0.4;
    let ed = to_elliptic(&Covector::new(1.0, 0.0, 0.5 * k).unwrap(), &p).unwrap();
    assert_eq!(ed.region, Region::C1);
    assert!(ed.theta0.abs() < 1e-15 && ed.s1 == 1.0);
    assert!((ed.k.k() - k).abs() < 1e-15);
    let ed = to_elliptic(&Covector::new(1.0, 0.0, 0.9).unwrap(), &p).unwrap();
    assert_eq!(ed.region, Region::C2);
    assert!(ed.theta0.abs() < 1e-15);
    assert_eq!(ed.s2, 1.0);
    let ed = to_elliptic(&Covector::new(1.0, 0.0, -0.9).unwrap(), &p).unwrap();
    assert_eq!(ed.s2, -1.0);
}

#[test]
fn covector_examples() {
    let p = params(0.6);
    for n in [0, 1] {
        let ed = EllipticData::equilibrium(Region::C4, n).unwrap();
        let expected = if n == 0 { 1.0 } else { -1.0 };
        for t in [0.0, 2.5, 40.0] {
            assert_eq!(covector_at(&ed, &p, t).to_array(), [expected, 0.0, 0.0]);
        }
    }
    let ed = EllipticData::new(Region::C3, Modulus::ZERO, 0.0, 1.0, 1.0).unwrap();
    assert_eq!(covector_at(&ed, &p, 0.0).to_array(), [1.0, 0.0, 0.6]);
    let ed = EllipticData::new(Region::C1, Modulus::new(0.7).unwrap(), 0.3, 1.0, 1.0).unwrap();
    let period = pendulum_period(&ed, &p).unwrap();
    assert!(covector_at(&ed, &p, period).max_abs_diff(&covector_at(&ed, &p, 0.0)) < 1e-14);
    assert!(EllipticData::equilibrium(Region::C1, 0).is_err());
}

#[test]
fn conserved_m_examples() {
    let ed = EllipticData::equilibrium(Region::C4, 0).unwrap();
    assert!((conserved_m(&ed, &params(0.5)) - 0.75).abs() < 1e-16);
    let ed = EllipticData::new(Region::C3, Modulus::ZERO, 0.2, -1.0, 1.0).unwrap();
    assert_eq!(conserved_m(&ed, &params(0.5)), 1.0);
}

#[test]
fn conserved_m_along_trajectories() {
    let mut rng = rng(11);
    for region in ALL_REGIONS {
        for _ in 0..10 {
            let p = params(rng.gen_range(0.05..0.95));
            let ed = random_chart(&mut rng, region);
            let m = conserved_m(&ed, &p);
            for _ in 0..100 {
                let t = rng.gen_range(0.0..50.0);
                let c = covector_at(&ed, &p, t);
                assert!((lax_norm_sq(&c, &p) - m).abs() <= 1e-12, "{region} at {t}");
            }
        }
    }
}

#[test]
fn period_examples() {
    let p = params(0.5);
    let tiny = EllipticData::new(Region::C1, Modulus::new(1e-8).unwrap(), 0.0, 1.0, 1.0).unwrap();
    assert!((pendulum_period(&tiny, &p).unwrap() - 2.0 * PI / 0.5).abs() < 1e-12);
    let c2 = EllipticData::new(Region::C2, Modulus::new(0.5).unwrap(), 0.0, 1.0, 1.0).unwrap();
    let expected = 4.0 * 0.5 * quad_f(FRAC_PI_2, 0.25) / 0.5;
    assert!((pendulum_period(&c2, &p).unwrap() - expected).abs() < 1e-13);
    let c4 = EllipticData::equilibrium(Region::C4, 0).unwrap();
    assert_eq!(pendulum_period(&c4, &p), Some(0.0));
    let c3 = EllipticData::new(Region::C3, Modulus::ZERO, 0.0, 1.0, 1.0).unwrap();
    assert_eq!(pendulum_period(&c3, &p), None);
    let k = Modulus::new(0.5).unwrap();
    assert!((complete_k(k) - quad_f(FRAC_PI_2, 0.25)).abs() < 1e-14);
}

#[test]
fn s1_constant_and_p2_bounded_in_c1() {
    let mut rng = rng(12);
    for _ in 0..20 {
        let p = params(rng.gen_range(0.05..0.95));
        let ed = random_chart(&mut rng, Region::C1);
        for i in 0..200 {
            let c = covector_at(&ed, &p, i as f64 * 0.1);
            assert!(c.p2.abs() <= ed.k.k() + 1e-15);
            assert_eq!(c.p1.signum(), ed.s1);
        }
    }
}

#[test]
fn flow_matches_rk4() {
    let mut rng = rng(13);
    let cfg = IntegratorConfig::default();
    for region in [Region::C1, Region::C2, Region::C3] {
        let p = params(rng.gen_range(0.3..0.9));
        let ed = random_chart(&mut rng, region);
        let p0 = covector_at(&ed, &p, 0.0);
        let t_end = match pendulum_period(&ed, &p) {
            Some(period) => (4.0 * period).min(40.0),
            None => 10.0,
        };
        let times: Vec<f64> = (1..=20).map(|i| t_end * i as f64 / 20.0).collect();
        let states = integrate_so3_at(&p0, &p, &times, &cfg).unwrap();
        for s in states {
            let err = covector_at(&ed, &p, s.t).max_abs_diff(&s.p);
            assert!(err <= 1e-8, "{region}: {err:e} at {}", s.t);
        }
    }
}

#[test]
fn boundary_ambiguity_is_reported() {
    // with a huge region tolerance every energy is near both ends
    let tol = Tolerances {
        region: 10.0,
        ..Tolerances::default()
    };
    let p = SRParams::with_tolerances(0.5, tol).unwrap();
    let c = Covector::from_psi(0.3, 0.1);
    assert!(matches!(classify(&c, &p), Err(Error::RegionBoundary { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn chart_round_trip(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5) {
        let p = params(a);
        let c = Covector::from_psi(psi, p3);
        let ed = to_elliptic(&c, &p).unwrap();
        prop_assert!(covector_at(&ed, &p, 0.0).max_abs_diff(&c) <= 1e-10);
        let (e, region) = classify(&c, &p).unwrap();
        prop_assert_eq!(region, ed.region);
        let a2 = a * a;
        match region {
            Region::C1 => prop_assert!((ed.k.m() - (e + a2) / (2.0 * a2)).abs() <= 1e-10),
            Region::C2 => prop_assert!((ed.k.m() - 2.0 * a2 / (e + a2)).abs() <= 1e-10),
            _ => {}
        }
    }

    #[test]
    fn flow_property(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5, t in 0.0f64..20.0, s in 0.0f64..20.0) {
        let p = params(a);
        let ed = to_elliptic(&Covector::from_psi(psi, p3), &p).unwrap();
        let mid = covector_at(&ed, &p, t);
        let ed_mid = to_elliptic(&mid, &p).unwrap();
        prop_assert!(covector_at(&ed, &p, t + s).max_abs_diff(&covector_at(&ed_mid, &p, s)) <= 1e-10);
    }

    #[test]
    fn energy_is_conserved(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5, t in 0.0f64..100.0) {
        let p = params(a);
        let c = Covector::from_psi(psi, p3);
        let ed = to_elliptic(&c, &p).unwrap();
        prop_assert!((energy(&covector_at(&ed, &p, t), &p) - energy(&c, &p)).abs() <= 1e-10);
    }
}

#[test]
fn random_covectors_classify() {
    let mut rng = rng(14);
    for _ in 0..1000 {
        let p = params(rng.gen_range(0.05..0.95));
        let c = random_covector(&mut rng);
        assert!(to_elliptic(&c, &p).is_ok());
    }
}
