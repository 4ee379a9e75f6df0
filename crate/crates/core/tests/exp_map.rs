mod common;

use common::{random_chart, rng, ALL_REGIONS};
use proptest::prelude::*;
use rand::Rng;
use so3geo::algebra::{basis_rotation, quat_to_rotation, Axis, Rotation, UnitQuaternion, Vec3};
use so3geo::exp_map::*;
use so3geo::pendulum::*;
use so3geo::periodic::g1;
use so3geo::special_functions::{complete_k, Modulus};
use so3geo::verifier::{integrate_so3, IntegratorConfig};
use std::f64::consts::TAU;

fn params(a: f64) -> SRParams {
    SRParams::new(a).unwrap()
}

fn lax(p: &Covector, params: &SRParams) -> Vec3 {
    Vec3::new(p.p2, params.c() * p.p1, p.p3)
}

#[test]
fn euler_angle_examples() {
    let p = params(0.5);
    let c4 = Covector::new(1.0, 0.0, 0.0).unwrap();
    let e = euler_phi12(&c4, 1.0 - 0.25, &p);
    assert!(e.cos_phi2.abs() < 1e-16 && (e.sin_phi2 - 1.0).abs() < 1e-16);
    assert!((e.cos_phi1 - 1.0).abs() < 1e-15 && e.sin_phi1.abs() < 1e-16);
    let c5 = Covector::new(0.0, 1.0, 0.0).unwrap();
    let e = euler_phi12(&c5, 1.0, &p);
    assert!(e.cos_phi1.abs() < 1e-16 && (e.sin_phi1 - 1.0).abs() < 1e-16);
}

#[test]
fn phi3_examples() {
    let p = params(0.6);
    let c4 = EllipticData::equilibrium(Region::C4, 0).unwrap();
    let c5 = EllipticData::equilibrium(Region::C5, 1).unwrap();
    for t in [0.0, 1.0, 7.3] {
        assert_eq!(phi3(&c4, &p, t), t);
        assert!((phi3(&c5, &p, t) - 0.8 * t).abs() < 1e-15);
    }
    // half period of the oscillation gives 2 G₁
    let k = Modulus::new(0.55).unwrap();
    let ed = EllipticData::new(Region::C1, k, 0.0, 1.0, 1.0).unwrap();
    let half = 2.0 * complete_k(k) / 0.6;
    assert!((phi3(&ed, &p, half) - 2.0 * g1(0.6, k).unwrap()).abs() < 1e-13);
}

#[test]
fn exp_examples() {
    let p = params(0.5);
    let p0 = Covector::new(1.0, 0.0, 0.0).unwrap();
    assert!(exp(&p0, &p, 0.0).unwrap().r.max_abs_diff(&Rotation::IDENTITY) < 1e-15);
    for t in [0.5, 3.0, 9.0] {
        let s = exp(&p0, &p, t).unwrap();
        assert!(s.r.max_abs_diff(&basis_rotation(Axis::E2, t)) < 1e-14);
        assert!(s.q.max_abs_diff(&UnitQuaternion::basis_half_angle(Axis::E2, t)) < 1e-14);
    }
    let p = params(0.7);
    let p0 = Covector::from_psi(0.3, 0.2);
    assert_eq!(classify(&p0, &p).unwrap().1, Region::C1);
    let closed = exp(&p0, &p, 5.0).unwrap().r;
    let rk4 = integrate_so3(&p0, &p, 5.0, &IntegratorConfig::default()).unwrap().r;
    assert!(closed.max_abs_diff(&rk4) < 1e-8);
}

#[test]
fn exp_quat_examples() {
    let p = params(0.5);
    let p0 = Covector::from_psi(0.9, -0.4);
    assert_eq!(exp_quat(&p0, &p, 0.0, &UnitQuaternion::ONE).unwrap().max_abs_diff(&UnitQuaternion::ONE) < 1e-15, true);
    let start = UnitQuaternion::new(0.1, 0.7, -0.2, 0.4).unwrap();
    let q = exp_quat(&p0, &p, 2.0, &start).unwrap();
    let q1 = exp_quat(&p0, &p, 2.0, &UnitQuaternion::ONE).unwrap();
    assert!(q.max_abs_diff(&so3geo::algebra::quat_mul(&start, &q1)) < 1e-15);
}

#[test]
fn projection_consistency() {
    let mut rng = rng(21);
    for _ in 0..100 {
        let p = params(rng.gen_range(0.05..0.95));
        let p0 = common::random_covector(&mut rng);
        let t = rng.gen_range(0.0..15.0);
        let s = exp(&p0, &p, t).unwrap();
        assert!(quat_to_rotation(&s.q).max_abs_diff(&s.r) <= 1e-10);
    }
}

#[test]
fn sample_grid() {
    let p = params(0.5);
    let p0 = Covector::from_psi(0.2, 0.1);
    let s = sample_geodesic(&p0, &p, &[0.0]).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].r.max_abs_diff(&Rotation::IDENTITY) < 1e-15);
    let ed = to_elliptic(&p0, &p).unwrap();
    let period = pendulum_period(&ed, &p).unwrap();
    let s = sample_geodesic(&p0, &p, &[0.0, period, 2.0 * period]).unwrap();
    let g = g1(0.5, ed.k).unwrap();
    for (i, x) in s.iter().enumerate() {
        assert!(x.p.max_abs_diff(&p0) < 1e-13);
        assert!((x.phi.phi3 - 4.0 * g * i as f64).abs() < 1e-12);
    }
    assert!(sample_geodesic(&p0, &p, &[0.0, 2.0, 1.0]).is_err());
}

#[test]
fn lax_invariant_all_regions() {
    let mut rng = rng(22);
    for region in ALL_REGIONS {
        for _ in 0..30 {
            let p = params(rng.gen_range(0.05..0.95));
            let ed = random_chart(&mut rng, region);
            let p0 = covector_at(&ed, &p, 0.0);
            let m = conserved_m(&ed, &p);
            let t = rng.gen_range(0.0..20.0);
            let s = exp_from_elliptic(&ed, &p, t).unwrap();
            let transported = s.r.transpose().apply(&lax(&p0, &p));
            assert!(transported.max_abs_diff(&lax(&s.p, &p)) <= 1e-10, "{region}");
            assert!((lax(&s.p, &p).norm() - m.sqrt()).abs() <= 1e-12);
            assert!(s.r.orthogonality_defect() <= 1e-12);
            let phi = s.phi;
            assert!((phi.cos_phi1.powi(2) + phi.sin_phi1.powi(2) - 1.0).abs() <= 1e-12);
            assert!((phi.cos_phi2.powi(2) + phi.sin_phi2.powi(2) - 1.0).abs() <= 1e-12);
            assert!(phi.sin_phi2 >= (p.c() * p.c() / m).sqrt() - 1e-12);
        }
    }
}

#[test]
fn closed_form_matches_oracle() {
    let mut rng = rng(23);
    let cfg = IntegratorConfig::with_step(2e-4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = params(rng.gen_range(0.05..0.95));
        let p0 = common::random_covector(&mut rng);
        let s = so3geo::verifier::integrate_so3_at(&p0, &p, &[2.5, 5.0, 7.5, 10.0], &cfg).unwrap();
        for st in s {
            worst = worst.max(exp(&p0, &p, st.t).unwrap().r.max_abs_diff(&st.r));
        }
    }
    assert!(worst <= 1e-8, "worst deviation {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn phi3_is_increasing(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5, t in 0.0f64..30.0, dt in 1e-3f64..3.0) {
        let p = params(a);
        let ed = to_elliptic(&Covector::from_psi(psi, p3), &p).unwrap();
        prop_assert!(phi3(&ed, &p, t + dt) > phi3(&ed, &p, t));
    }

    #[test]
    fn phi3_rate_matches_differences(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5, t in 0.01f64..30.0) {
        let p = params(a);
        let ed = to_elliptic(&Covector::from_psi(psi, p3), &p).unwrap();
        let h = 1e-5;
        let fd = (phi3(&ed, &p, t + h) - phi3(&ed, &p, t - h)) / (2.0 * h);
        let rate = phi3_rate(&covector_at(&ed, &p, t), &p);
        prop_assert!((fd - rate).abs() <= 1e-6 * rate);
    }

    #[test]
    fn rotation_is_orthogonal(a in 0.05f64..0.95, psi in 0.0f64..TAU, p3 in -1.5f64..1.5, t in 0.0f64..50.0) {
        let p = params(a);
        let s = exp(&Covector::from_psi(psi, p3), &p, t).unwrap();
        prop_assert!(s.r.orthogonality_defect() <= 1e-12);
        prop_assert!(quat_to_rotation(&s.q).max_abs_diff(&s.r) <= 1e-10);
    }
}
