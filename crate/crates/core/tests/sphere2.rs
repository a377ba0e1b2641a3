use std::f64::consts::PI;

use lawson_core::quat::Quaternion;
use lawson_core::sampling::{hemisphere_triangle, rng, s2_point};
use lawson_core::sphere2::*;
use rand::Rng;

/// Integrates `dv/ds = −⟨P'(s), v⟩ P(s)` along `arc` with classical RK4.
fn transport_by_ode(v: Quaternion, arc: &GeodesicArc2, step: f64) -> Quaternion {
    let rhs = |s: f64, v: Quaternion| {
        let p = arc.point(s);
        let dp = arc.tangent_at(s);
        p * -dp.dot(v)
    };
    let steps = (arc.length / step).ceil() as usize;
    let h = arc.length / steps as f64;
    let mut v = v;
    for n in 0..steps {
        let s = n as f64 * h;
        let k1 = rhs(s, v);
        let k2 = rhs(s + h / 2.0, v + k1 * (h / 2.0));
        let k3 = rhs(s + h / 2.0, v + k2 * (h / 2.0));
        let k4 = rhs(s + h, v + k3 * h);
        v = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    v
}

fn random_arc<R: Rng>(r: &mut R) -> GeodesicArc2 {
    let start = s2_point(r);
    let other = s2_point(r).get();
    let tangent = (other - start.get() * other.dot(start.get())).normalized();
    GeodesicArc2::new(start, tangent, r.gen_range(0.1..3.0)).unwrap()
}

#[test]
fn transport_matches_the_defining_ode() {
    let mut r = rng(21);
    for _ in 0..5 {
        let arc = random_arc(&mut r);
        for v in [arc.binormal(), arc.tangent, (arc.binormal() + arc.tangent).normalized()] {
            let exact = parallel_transport(v, &arc).unwrap();
            let numeric = transport_by_ode(v, &arc, 1e-4);
            assert!((exact - numeric).max_abs() < 1e-10, "{exact} vs {numeric}");
        }
        let b = parallel_transport(arc.binormal(), &arc).unwrap();
        assert!((b - arc.binormal()).max_abs() < 1e-14);
    }
}

#[test]
fn transport_examples() {
    let mut r = rng(22);
    let arc = random_arc(&mut r);
    let moved = parallel_transport(arc.tangent, &arc).unwrap();
    assert!((moved - arc.end_tangent()).max_abs() < 1e-14);
    let tiny = GeodesicArc2::new(arc.start, arc.tangent, 1e-15).unwrap();
    let v = (arc.binormal() * 0.6 + arc.tangent * 0.8).normalized();
    assert!((parallel_transport(v, &tiny).unwrap() - v).max_abs() < 1e-12);
    let err = parallel_transport(arc.start.get(), &arc).unwrap_err();
    assert!(matches!(err, SphereError::NotTangent { .. }));
}

#[test]
fn transport_is_an_isometry() {
    let mut r = rng(23);
    for _ in 0..200 {
        let arc = random_arc(&mut r);
        let a: f64 = r.gen_range(0.0..2.0 * PI);
        let b: f64 = r.gen_range(0.0..2.0 * PI);
        let va = arc.tangent * a.cos() + arc.binormal() * a.sin();
        let vb = arc.tangent * b.cos() + arc.binormal() * b.sin();
        let (ta, tb) = (parallel_transport(va, &arc).unwrap(), parallel_transport(vb, &arc).unwrap());
        assert!((ta.norm() - 1.0).abs() < 1e-12);
        assert!((ta.dot(tb) - va.dot(vb)).abs() < 1e-10);
        assert!(ta.dot(arc.end().get()).abs() < 1e-12);
    }
}

#[test]
fn piece_areas_from_the_angle_excess() {
    use ReflectionFamily::*;
    let octant = GeodesicPolygon2::from_vertices(&[S2Point::I, S2Point::J, S2Point::K]).unwrap();
    assert!((polygon_area(&octant).unwrap() - PI / 2.0).abs() < 1e-14);
    for (spec, area) in [
        (ReflectionGroupSpec::new(C, 2), PI),
        (ReflectionGroupSpec::new(D, 4), PI / 4.0),
        (ReflectionGroupSpec::new(T, 1), PI / 6.0),
        (ReflectionGroupSpec::new(O, 1), PI / 12.0),
        (ReflectionGroupSpec::new(I, 1), PI / 30.0),
    ] {
        assert!((polygon_area(&typical_piece(spec)).unwrap() - area).abs() < 1e-12, "{spec:?}");
    }
}

#[test]
fn holonomy_examples() {
    use ReflectionFamily::*;
    let octant = GeodesicPolygon2::from_vertices(&[S2Point::I, S2Point::J, S2Point::K]).unwrap();
    assert!((holonomy_angle(&octant, Side::Left).unwrap() - PI / 2.0).abs() < HOL);
    assert!((holonomy_angle(&octant.reversed(), Side::Right).unwrap() - PI / 2.0).abs() < HOL);
    let d2 = typical_piece(ReflectionGroupSpec::new(D, 2));
    assert!((holonomy_angle(&d2, Side::Left).unwrap() - PI / 2.0).abs() < HOL);
    let lune = typical_piece(ReflectionGroupSpec::new(C, 1));
    assert!((holonomy_angle(&lune, Side::Left).unwrap() - 2.0 * PI).abs() < HOL);
}

const HOL: f64 = 1e-8;

#[test]
fn holonomy_equals_area_on_random_hemisphere_triangles() {
    let mut r = rng(24);
    for _ in 0..100 {
        let tri = hemisphere_triangle(&mut r);
        let area = polygon_area(&tri).unwrap();
        assert!(area > 0.0 && area < 2.0 * PI);
        assert!((holonomy_angle(&tri, Side::Left).unwrap() - area).abs() <= HOL);
        assert!((holonomy_angle(&tri.reversed(), Side::Right).unwrap() - area).abs() <= HOL);
    }
}

#[test]
fn area_is_additive_under_a_cevian_split() {
    let mut r = rng(25);
    for _ in 0..100 {
        let tri = hemisphere_triangle(&mut r);
        let v = tri.vertices();
        let t: f64 = r.gen_range(0.1..0.9);
        let opposite = &tri.arcs()[1];
        let foot = S2Point::normalize(opposite.point(opposite.length * t));
        let a = GeodesicPolygon2::from_vertices(&[v[0], v[1], foot]).unwrap();
        let b = GeodesicPolygon2::from_vertices(&[v[0], foot, v[2]]).unwrap();
        let total = polygon_area(&tri).unwrap();
        let parts = polygon_area(&a).unwrap() + polygon_area(&b).unwrap();
        assert!((total - parts).abs() < 1e-10);
    }
}

#[test]
fn anti_parallel_corners_are_rejected() {
    let there = GeodesicArc2::new(S2Point::I, Quaternion::J, 1.0).unwrap();
    let back = there.reversed();
    let poly = GeodesicPolygon2::new(vec![there, back]).unwrap();
    assert!(matches!(polygon_area(&poly), Err(SphereError::DegeneratePolygon { .. })));
}

#[test]
fn reflection_groups_contain_the_identity_and_have_classical_orders() {
    use ReflectionFamily::*;
    for (spec, order) in [
        (ReflectionGroupSpec::new(T, 1), 24),
        (ReflectionGroupSpec::new(O, 1), 48),
        (ReflectionGroupSpec::new(I, 1), 120),
        (ReflectionGroupSpec::new(C, 5), 10),
        (ReflectionGroupSpec::new(D, 5), 20),
    ] {
        let g = reflection_group_2d(spec).unwrap();
        assert_eq!(g.len(), order, "{spec:?}");
        assert!(g.iter().any(|e| e.approx_eq(&O3Element::IDENTITY)));
    }
}

#[test]
fn tessellations_are_mapped_to_themselves_by_their_reflections() {
    use ReflectionFamily::*;
    for spec in [
        ReflectionGroupSpec::new(C, 2),
        ReflectionGroupSpec::new(D, 3),
        ReflectionGroupSpec::new(T, 1),
        ReflectionGroupSpec::new(O, 1),
        ReflectionGroupSpec::new(I, 1),
    ] {
        let normals = tessellation_graph(spec).unwrap();
        let has = |n: Quaternion| normals.iter().any(|m| (m.get() - n).max_abs() < 1e-7 || (m.get() + n).max_abs() < 1e-7);
        for e in reflection_group_2d(spec).unwrap() {
            if e.mirror_normal().is_none() {
                continue;
            }
            for n in &normals {
                assert!(has(e.apply(n.get()).normalized()), "{spec:?}");
            }
        }
    }
    assert_eq!(tessellation_graph(ReflectionGroupSpec::new(O, 1)).unwrap().len(), 9);
    assert_eq!(tessellation_graph(ReflectionGroupSpec::new(C, 2)).unwrap().len(), 2);
}

#[test]
fn special_points_are_unit_and_fit_the_icosahedral_triangle() {
    let sp = SpecialPoints::new();
    for u in [sp.u_t, sp.u_t_prime, sp.u_o, sp.u_i, sp.u_i_prime] {
        assert!((u.get().norm() - 1.0).abs() <= 1e-14);
        assert_eq!(u.get().t, 0.0);
    }
    let (a, b, c) = (PI / 2.0, PI / 3.0, PI / 5.0);
    let cos_side = (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin());
    assert!((sp.u_i.dot(sp.u_i_prime) - cos_side).abs() < 1e-14);
}
