use std::f64::consts::PI;

use lawson_core::groups::{closure, conjugation_witness, isometry_group_order, symmetry_group, GroupSpec};
use lawson_core::hopf::{hopf_project, Arc32, S32Point};
use lawson_core::quat::{reflect_hyperplane, Quaternion, Rotation4, UnitQuaternion};
use lawson_core::sampling::{rng, unit_quaternion};
use lawson_core::skeleton::*;
use rand::Rng;

fn parametric() -> Vec<GroupSpec> {
    let mut v = Vec::new();
    for m in 2..=6 {
        for n in 2..=6 {
            v.push(GroupSpec::C { m, n });
        }
        v.push(GroupSpec::D { l: m });
        v.push(GroupSpec::DHalf { l: m });
    }
    v
}

fn all_specs() -> Vec<GroupSpec> {
    let mut v = GroupSpec::special();
    v.extend(parametric());
    v
}

fn quad_from_vertices(v: [Quaternion; 4], labels: [u32; 4]) -> Quadrilateral32 {
    let pts = v.map(S32Point::project);
    let edges = [0, 1, 2, 3].map(|t| Arc32::between(pts[t], pts[(t + 1) % 4]).unwrap());
    Quadrilateral32 { vertices: pts, edges, angle_denominators: labels, crossing: None }
}

#[test]
fn quadrilaterals_match_the_table() {
    for spec in all_specs() {
        let q = fundamental_quadrilateral(spec).unwrap();
        let dev = quad_metrics(&q).max_deviation(&table_row(spec));
        assert!(dev < 1e-9, "{spec}: deviation {dev}");
        for a in q.angles() {
            assert!(a > 0.0 && a <= PI / 2.0 + 1e-9, "{spec}: angle {a}");
        }
    }
}

#[test]
fn o3_and_t2_rows() {
    let q = fundamental_quadrilateral(GroupSpec::O(3)).unwrap();
    let expect = [PI / 4.0, PI / 2.0, PI / 4.0, PI / 2.0];
    for (a, b) in q.lengths().iter().zip(expect) {
        assert!((a - b).abs() < 1e-9);
    }
    for (a, b) in q.angles().iter().zip(expect) {
        assert!((a - b).abs() < 1e-9);
    }
    let q = fundamental_quadrilateral(GroupSpec::T(2)).unwrap();
    let (s, l) = ((1.0f64 / 3.0).acos(), (-1.0f64 / 3.0).acos());
    for (a, b) in q.lengths().iter().zip([s, l, s, l]) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn genus_matches_euler_characteristic() {
    for spec in all_specs() {
        let formula = complex_counts(spec).unwrap();
        let geometric = geometric_complex_counts(spec).unwrap();
        assert_eq!(formula, geometric, "{spec}");
        assert_eq!(genus(spec).unwrap(), geometric.genus(), "{spec}");
    }
    let expected = [
        (GroupSpec::T(2), 25),
        (GroupSpec::T(3), 9),
        (GroupSpec::O(2), 121),
        (GroupSpec::O(3), 49),
        (GroupSpec::O(4), 25),
        (GroupSpec::I(2), 841),
        (GroupSpec::I(3), 361),
        (GroupSpec::I(5), 121),
    ];
    for (spec, g) in expected {
        assert_eq!(genus(spec).unwrap(), g, "{spec}");
    }
    let c = complex_counts(GroupSpec::I(2)).unwrap();
    assert_eq!((c.vertices, c.edges, c.faces), (1920, 7200, 3600));
    let c = complex_counts(GroupSpec::C { m: 2, n: 2 }).unwrap();
    assert_eq!((c.vertices, c.edges, c.faces, c.genus()), (8, 16, 8, 1));
    for m in 2..=6u32 {
        for n in 2..=6u32 {
            assert_eq!(genus(GroupSpec::C { m, n }).unwrap(), i64::from((m - 1) * (n - 1)));
        }
        assert_eq!(genus(GroupSpec::D { l: m }).unwrap(), 1);
    }
}

#[test]
fn orbits_have_group_order() {
    assert_eq!(quad_orbit(GroupSpec::T(3)).unwrap().len(), 96);
    assert_eq!(quad_orbit(GroupSpec::C { m: 2, n: 2 }).unwrap().len(), 8);
    for spec in all_specs() {
        assert_eq!(quad_orbit(spec).unwrap().len(), spec.order(), "{spec}");
    }
    let spec = GroupSpec::O(4);
    let stab = stabilizer(&fundamental_quadrilateral(spec).unwrap(), &symmetry_group(spec).unwrap());
    assert_eq!(stab.len(), 1);
    assert!(stab[0].is_identity());
}

#[test]
fn skeleton_is_closed_under_its_pi_rotations() {
    for spec in [GroupSpec::T(3), GroupSpec::O(3), GroupSpec::C { m: 2, n: 2 }, GroupSpec::DHalf { l: 3 }] {
        assert!(build_skeleton(spec).unwrap().is_pi_rotation_invariant(), "{spec}");
    }
    let expected = [
        (GroupSpec::T(2), 36),
        (GroupSpec::T(3), 24),
        (GroupSpec::O(2), 108),
        (GroupSpec::O(3), 72),
        (GroupSpec::O(4), 54),
        (GroupSpec::I(2), 450),
        (GroupSpec::I(3), 300),
        (GroupSpec::I(5), 180),
    ];
    for (spec, n) in expected {
        assert_eq!(build_skeleton(spec).unwrap().circles.len(), n, "{spec}");
    }
}

#[test]
fn skeleton_circles_meet_fibres_at_constant_angle() {
    for spec in GroupSpec::representatives() {
        for c in build_skeleton(spec).unwrap().circles.iter().take(40) {
            let a0 = c.fibre_angle(0.0);
            for s in 1..16 {
                let a = c.fibre_angle(s as f64 * 0.77);
                assert!((a - a0).abs() < 1e-9, "{spec}: {a} vs {a0}");
            }
        }
    }
}

#[test]
fn degenerate_skeletons() {
    assert_eq!(build_skeleton(GroupSpec::C { m: 1, n: 1 }).unwrap().circles.len(), 1);
    assert_eq!(build_skeleton(GroupSpec::DHalf { l: 1 }).unwrap().circles.len(), 2);
    assert!(matches!(quad_orbit(GroupSpec::C { m: 1, n: 1 }), Err(SkeletonError::DegenerateSpec(_))));
}

#[test]
fn fibre_intersection_count_is_constant_and_halves_the_group() {
    let expected = [
        (GroupSpec::T(2), 12),
        (GroupSpec::T(3), 8),
        (GroupSpec::O(2), 24),
        (GroupSpec::O(3), 16),
        (GroupSpec::O(4), 12),
        (GroupSpec::I(2), 60),
        (GroupSpec::I(3), 40),
        (GroupSpec::I(5), 24),
    ];
    for (spec, t) in expected {
        let counts = generic_fibre_count(spec, 20).unwrap();
        assert!(counts.iter().all(|&c| c == t), "{spec}: {counts:?}");
        let g = symmetry_group(spec).unwrap();
        let conj = g.conjugated(conjugation_witness(t as u32));
        assert_eq!(g.intersection_order(&conj), g.order() / 2, "{spec}");
    }
}

#[test]
fn hulls_are_tetrahedra_in_open_hemispheres() {
    for spec in all_specs() {
        let q = fundamental_quadrilateral(spec).unwrap();
        let h = convex_hull(&q);
        assert_eq!(h.kind, HullKind::Tetrahedron, "{spec}");
        assert!(h.hemisphere_margin > 0.0, "{spec}");
        assert!(h.vertex_violation() <= 1e-9, "{spec}");
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(q.vertices[a].distance(q.vertices[b]) <= PI + 1e-9, "{spec}");
            }
        }
    }
    let h = convex_hull(&fundamental_quadrilateral(GroupSpec::C { m: 1, n: 1 }).unwrap());
    assert_eq!(h.kind, HullKind::Circle);
    let h = convex_hull(&fundamental_quadrilateral(GroupSpec::C { m: 1, n: 3 }).unwrap());
    assert_eq!(h.kind, HullKind::Bigon);
}

#[test]
fn c22_hull_is_a_strict_tetrahedron() {
    let q = fundamental_quadrilateral(GroupSpec::C { m: 2, n: 2 }).unwrap();
    for a in 0..4 {
        for b in a + 1..4 {
            assert!(q.vertices[a].get().dot(q.vertices[b].get()).abs() < 1e-9);
        }
    }
    let h = convex_hull(&q);
    assert!((h.hemisphere_margin - 0.5).abs() < 1e-9);
}

#[test]
fn t3_hull_cells_have_disjoint_interiors() {
    let cells: Vec<ConvexHullCell> =
        quad_orbit(GroupSpec::T(3)).unwrap().iter().map(convex_hull).collect();
    let mut r = rng(7);
    for (idx, cell) in cells.iter().enumerate() {
        for _ in 0..100 {
            let w: [f64; 4] = std::array::from_fn(|_| r.gen_range(0.05..1.0));
            let x = cell.vertices.iter().zip(w).fold(Quaternion::ZERO, |acc, (v, c)| acc + *v * c);
            let x = x.normalized() * 2.0;
            let inside: Vec<usize> = (0..cells.len()).filter(|&c| cells[c].contains_strictly(x, 1e-9)).collect();
            assert_eq!(inside, vec![idx]);
        }
    }
}

#[test]
fn fundamental_quadrilaterals_are_proper() {
    for spec in all_specs() {
        let report = check_proper(&fundamental_quadrilateral(spec).unwrap());
        assert!(report.proper(), "{spec}: {report:?}");
    }
}

#[test]
fn t2_in_normal_position_is_bounded_by_the_incoming_sphere() {
    let q = fundamental_quadrilateral(GroupSpec::T(2)).unwrap();
    let (_, g) = normalized_quadrilateral(&q, 0);
    assert!(g.lengths()[0] >= g.lengths()[3]);
    let v0 = check_proper(&g).vertices[0];
    assert!(v0.bounded_by_prev);
    assert!(!v0.bounded_by_next);
}

#[test]
fn pushed_vertex_breaks_properness() {
    let q = fundamental_quadrilateral(GroupSpec::O(3)).unwrap();
    let v = q.vertices.map(|p| p.get());
    let centre = (v[0] + v[1] + v[2] + v[3]).normalized() * 2.0;
    let path = Arc32::between(q.vertices[2], S32Point::project(centre)).unwrap();
    let mut moved = v;
    moved[2] = path.point(1.5 * path.length);
    let bad = quad_from_vertices(moved, q.angle_denominators);
    assert!(!check_proper(&bad).proper());
    assert!(!check_proper_with(&bad, 640).proper());
    let same = quad_from_vertices(v, q.angle_denominators);
    assert!(check_proper_with(&same, 640).proper());
}

#[test]
fn common_perpendicular_is_orthogonal_to_both_diagonals() {
    for spec in all_specs() {
        let q = fundamental_quadrilateral(spec).unwrap();
        let p = common_perpendicular(&q).unwrap();
        assert!(p.residual < 1e-9, "{spec}: {}", p.residual);
        let exceptional =
            matches!(spec, GroupSpec::DHalf { .. } | GroupSpec::O(2) | GroupSpec::O(4) | GroupSpec::I(2));
        let method = if exceptional { PerpendicularMethod::Fibre } else { PerpendicularMethod::DiagonalMidpoints };
        assert_eq!(p.method, method, "{spec}");
        // The π-rotation maps the vertex set onto itself.
        for v in q.vertices {
            let image = p.symmetry.apply(v.get());
            assert!(q.vertices.iter().any(|w| (w.get() - image).norm() < 1e-9), "{spec}");
        }
    }
    let q = fundamental_quadrilateral(GroupSpec::O(3)).unwrap();
    let a = common_perpendicular(&q).unwrap().length;
    let b = common_perpendicular(&q.relabeled(2, false)).unwrap().length;
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn extra_symmetry_gives_the_isometry_group() {
    // The C(m,n) surfaces also admit a reflection of S³ (orientation
    // reversing), so their rotation part has half the listed order.
    let specs = [
        GroupSpec::C { m: 2, n: 3 },
        GroupSpec::C { m: 3, n: 3 },
        GroupSpec::C { m: 2, n: 5 },
        GroupSpec::C { m: 4, n: 4 },
        GroupSpec::C { m: 3, n: 5 },
        GroupSpec::T(3),
        GroupSpec::O(2),
        GroupSpec::O(3),
        GroupSpec::O(4),
        GroupSpec::I(2),
        GroupSpec::I(3),
        GroupSpec::I(5),
    ];
    for spec in specs {
        let g = symmetry_group(spec).unwrap();
        let q = fundamental_quadrilateral(spec).unwrap();
        assert!(is_quad_symmetry(&q, &quad_symmetry(&q).unwrap()), "{spec}");
        let mut gens = g.generators.clone();
        gens.extend(quad_symmetries(&q).unwrap());
        let rotations = closure(&gens).unwrap().order();
        let listed = isometry_group_order(spec).unwrap();
        if let GroupSpec::C { .. } = spec {
            assert_eq!(2 * rotations, listed, "{spec}");
            // The reflection across the hyperplane orthogonal to L − N fixes
            // K and M and swaps L and N.
            let normal = UnitQuaternion::normalize(q.vertices[1].get() - q.vertices[3].get());
            let image = |x: Quaternion| reflect_hyperplane(x, normal);
            for (a, b) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
                assert!((image(q.vertices[a].get()) - q.vertices[b].get()).norm() < 1e-9, "{spec}");
            }
        } else {
            assert_eq!(rotations, listed, "{spec}");
        }
    }
}

#[test]
fn normal_position() {
    for spec in all_specs() {
        let q = fundamental_quadrilateral(spec).unwrap();
        for t in 0..4 {
            let (eta, g) = normalized_quadrilateral(&q, t);
            assert!((g.vertices[0].get() - Quaternion::real(2.0)).norm() < 1e-10, "{spec}");
            let (first, second) = g.tangents_at(0);
            let l = g.angle_denominators[0];
            let target = Quaternion::exp_i(PI / f64::from(l)) * Quaternion::J;
            assert!((first - Quaternion::J).norm() < 1e-9, "{spec} {t}");
            assert!((second - target).norm() < 1e-9, "{spec} {t}");
            assert!(g.lengths()[0] >= g.lengths()[3] - 1e-12);
            assert!(lawson_core::groups::preserves_fibration(&eta));
            // Fibres go to fibres: the base image of a moved point depends
            // only on the base image of the point.
            let mut r = rng(t as u64);
            for _ in 0..4 {
                let x = unit_quaternion(&mut r).get() * 2.0;
                let y = Quaternion::exp_i(r.gen_range(0.0..PI)) * x;
                let (px, py) = (
                    hopf_project(S32Point::project(eta.apply(x))),
                    hopf_project(S32Point::project(eta.apply(y))),
                );
                assert!(px.get().dist(py.get()) < 1e-9);
            }
            let again = normalize_position(&g, 0);
            assert!(again.approx_eq(&Rotation4::IDENTITY), "{spec} {t}: {again}");
        }
    }
}
