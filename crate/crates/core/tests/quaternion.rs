use std::f64::consts::PI;

use lawson_core::quat::*;
use lawson_core::sampling::{gaussian_quaternion, rng, s32_quaternion, unit_quaternion};
use proptest::prelude::*;

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
}

fn unit() -> impl Strategy<Value = UnitQuaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(|a| UnitQuaternion::normalize(Quaternion::from_array(a)))
}

fn rotation() -> impl Strategy<Value = Rotation4> {
    (unit(), unit()).prop_map(|(p, q)| Rotation4::new(p, q))
}

#[test]
fn hamilton_product_examples() {
    assert_eq!(quat_mul(Quaternion::I, Quaternion::J), Quaternion::K);
    assert_eq!(quat_mul(Quaternion::J, Quaternion::I), -Quaternion::K);
    let a = Quaternion::new(1.0, 2.0, 3.0, 4.0);
    let b = Quaternion::new(5.0, 6.0, 7.0, 8.0);
    assert_eq!(quat_mul(a, b), Quaternion::new(-60.0, 12.0, 30.0, 24.0));
    assert_eq!(quat_mul(Quaternion::ONE, a), a);
}

#[test]
fn norm_is_multiplicative_on_ten_thousand_pairs() {
    let mut r = rng(11);
    for _ in 0..10_000 {
        let (a, b) = (gaussian_quaternion(&mut r), gaussian_quaternion(&mut r));
        let lhs = quat_mul(a, b).norm();
        let rhs = a.norm() * b.norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs, "{a} {b}");
    }
}

#[test]
fn rotation4_examples() {
    let h = Quaternion::new(0.3, -1.2, 0.7, 2.0);
    assert!(close(apply_rotation4(h, Rotation4::IDENTITY), h, 1e-15));
    let jj = Rotation4::new(UnitQuaternion::J, UnitQuaternion::J);
    assert!(close(apply_rotation4(Quaternion::real(2.0), jj), Quaternion::real(2.0), 1e-15));
    let p = UnitQuaternion::exp_i(PI / 4.0);
    assert!(close(apply_rotation4(Quaternion::I, Rotation4::new(p, p)), Quaternion::I, 1e-15));
}

#[test]
fn rotation3_examples() {
    let r = Rotation3::new(UnitQuaternion::exp_i(PI / 2.0));
    assert!(close(apply_rotation3(Quaternion::I, r).unwrap(), Quaternion::I, 1e-15));
    // e^{-iπ/4} j e^{iπ/4} = e^{-iπ/2} j = -k: a left-hand quarter turn about i.
    let quarter = Rotation3::new(UnitQuaternion::exp_i(PI / 4.0));
    assert!(close(apply_rotation3(Quaternion::J, quarter).unwrap(), -Quaternion::K, 1e-15));
    let half = Rotation3::new(UnitQuaternion::J);
    assert!(close(apply_rotation3(Quaternion::K, half).unwrap(), -Quaternion::K, 1e-15));
    let err = apply_rotation3(Quaternion::new(0.1, 1.0, 0.0, 0.0), half).unwrap_err();
    assert!(matches!(err, QuatError::NotInE3 { .. }));
    assert_eq!(apply_rotation3(Quaternion::new(1e-12, 0.0, 1.0, 0.0), half).unwrap().t, 0.0);
}

#[test]
fn reflection_examples() {
    assert!(close(reflect_hyperplane(Quaternion::ONE, UnitQuaternion::I), Quaternion::ONE, 1e-15));
    let mut r = rng(3);
    for _ in 0..100 {
        let p = unit_quaternion(&mut r);
        let h = gaussian_quaternion(&mut r);
        assert!(close(reflect_hyperplane(p.get(), p), -p.get(), 1e-14));
        assert!(close(reflect_hyperplane(reflect_hyperplane(h, p), p), h, 1e-12));
        let in_plane = h - p.get() * h.dot(p.get());
        assert!(close(reflect_hyperplane(in_plane, p), in_plane, 1e-12));
    }
}

#[test]
fn pi_rotation_about_the_j_geodesic() {
    let r = pi_rotation_about_geodesic(0.0);
    for s in [0.0, PI / 3.0, PI] {
        let x = (Quaternion::real((s / 2.0).cos()) + Quaternion::J * (s / 2.0).sin()) * 2.0;
        assert!(close(r.apply(x), x, 1e-14), "s = {s}");
    }
    let x = Quaternion::exp_i(PI / 4.0) * 2.0;
    assert!(close(r.apply(x), Quaternion::exp_i(-PI / 4.0) * 2.0, 1e-14));
    assert!(r.compose(r).is_identity());
    for tau in [0.4, 1.9, -2.5] {
        let r = pi_rotation_about_geodesic(tau);
        let axis = Quaternion::exp_i(tau) * Quaternion::J;
        let x = (Quaternion::real(0.6) + axis * 0.8) * 2.0;
        assert!(close(r.apply(x), x, 1e-14));
        assert!(r.compose(r).is_identity());
    }
}

#[test]
fn double_cover_kernel_is_plus_minus_one() {
    let mut r = rng(5);
    for _ in 0..200 {
        let (p, q) = (unit_quaternion(&mut r), unit_quaternion(&mut r));
        let a = Rotation4::new(p, q);
        assert!(a.approx_eq(&Rotation4::new(p.neg(), q.neg())));
        assert!(!a.approx_eq(&Rotation4::new(p, q.neg())));
        let c = Rotation3::new(p);
        assert!(c.approx_eq(&Rotation3::new(p.neg())));
    }
}

#[test]
fn unit_constructor_enforces_the_tolerance() {
    assert!(UnitQuaternion::new(Quaternion::new(1.0 + 5e-10, 0.0, 0.0, 0.0)).is_ok());
    let err = UnitQuaternion::new(Quaternion::new(1.0 + 1e-6, 0.0, 0.0, 0.0)).unwrap_err();
    assert!(matches!(err, QuatError::NotUnit { .. }));
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(g in rotation()) {
        let c = g.canon();
        prop_assert_eq!(c, c.canon());
        prop_assert_eq!(c, g);
    }

    #[test]
    fn action_composes_on_the_right(h in quaternion(), g1 in rotation(), g2 in rotation()) {
        let lhs = apply_rotation4(apply_rotation4(h, g1), g2);
        let rhs = apply_rotation4(h, g1.compose(g2));
        prop_assert!(close(lhs, rhs, 1e-12 * h.norm().max(1.0)));
    }

    #[test]
    fn rotations_preserve_the_radius_two_sphere(g in rotation(), a in unit()) {
        let x = a.get() * 2.0;
        prop_assert!((g.apply(x).norm() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn inverse_undoes_the_action(h in quaternion(), g in rotation()) {
        let back = g.inverse().apply(g.apply(h));
        prop_assert!(close(back, h, 1e-12 * h.norm().max(1.0)));
    }

    #[test]
    fn rotation3_keeps_imaginary_quaternions_imaginary(p in unit(), v in prop::array::uniform3(-5.0f64..5.0)) {
        let v = Quaternion::imag(v[0], v[1], v[2]);
        let w = apply_rotation3(v, Rotation3::new(p)).unwrap();
        prop_assert_eq!(w.t, 0.0);
        prop_assert!((w.norm() - v.norm()).abs() <= 1e-12 * v.norm().max(1.0));
    }
}

#[test]
fn sampled_sphere_points_have_radius_two() {
    let mut r = rng(9);
    for _ in 0..1000 {
        assert!((s32_quaternion(&mut r).norm() - 2.0).abs() <= 1e-14);
    }
}
