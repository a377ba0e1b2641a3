use std::fs;
use std::path::PathBuf;

use lawson_core::export::*;
use lawson_core::groups::GroupSpec;
use lawson_core::plateau::{solve_spec, SolverOptions, SurfaceMesh};
use lawson_core::quat::Quaternion;

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lawson-export-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn clifford(refinement: usize) -> SurfaceMesh {
    let opts = SolverOptions { refinement, ..SolverOptions::default() };
    solve_spec(GroupSpec::C { m: 2, n: 2 }, &opts, 2_000_000).unwrap().closed
}

#[test]
fn obj_round_trip_preserves_topology_and_coordinates() {
    let mesh = clifford(6);
    let frame = ProjectionFrame::avoiding(&mesh.vertices);
    let dir = scratch_dir("torus");
    export_mesh(&mesh, &frame, &dir, "torus").unwrap();

    let back = import_obj(&dir.join("torus.obj")).unwrap();
    let original = mesh.topology();
    let imported = back.topology();
    assert_eq!(imported.euler_characteristic, 0);
    assert_eq!(
        (imported.vertices, imported.edges, imported.faces),
        (original.vertices, original.edges, original.faces)
    );
    let projected = project_mesh(&mesh, &frame).unwrap();
    assert_eq!(back.faces, projected.faces);
    for (a, b) in back.vertices.iter().zip(&projected.vertices) {
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= 1e-6 * b[k].abs().max(1.0));
        }
    }

    let json: MeshJson = serde_json::from_str(&fs::read_to_string(dir.join("torus.mesh.json")).unwrap()).unwrap();
    assert_eq!(json.faces, mesh.faces);
    for (a, b) in json.vertices.iter().zip(&mesh.vertices) {
        assert_eq!(Quaternion::from_array(*a), *b);
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn projection_inverts_to_the_sphere() {
    let mesh = clifford(4);
    let frame = ProjectionFrame::avoiding(&mesh.vertices);
    // The chart is the standard one after right multiplication by −p̄/2.
    let undo = -(frame.pole / 2.0);
    for v in &mesh.vertices {
        let [x, y, z] = stereographic(*v, &frame).unwrap();
        // Inverse of the standard chart: (1 − |p|², 2p)·2/(1 + |p|²).
        let s = x * x + y * y + z * z;
        let back = Quaternion::new(1.0 - s, 2.0 * x, 2.0 * y, 2.0 * z) * (2.0 / (1.0 + s));
        assert!((back * undo - *v).max_abs() < 1e-12);
    }
}

#[test]
fn the_chosen_pole_keeps_clear_of_the_mesh() {
    let mesh = clifford(4);
    let frame = ProjectionFrame::avoiding(&mesh.vertices);
    let clearance = mesh.vertices.iter().map(|v| v.dist(frame.pole)).fold(f64::INFINITY, f64::min);
    assert!(clearance > 0.5, "{clearance}");
    assert!(project_mesh(&mesh, &frame).is_ok());
}

#[test]
fn an_empty_mesh_gives_a_valid_empty_file() {
    let mesh = SurfaceMesh { vertices: vec![], faces: vec![], tags: vec![] };
    let dir = scratch_dir("empty");
    export_mesh(&mesh, &ProjectionFrame::default(), &dir, "empty").unwrap();
    let text = fs::read_to_string(dir.join("empty.obj")).unwrap();
    assert!(text.is_empty());
    let back = import_obj(&dir.join("empty.obj")).unwrap();
    assert!(back.vertices.is_empty() && back.faces.is_empty());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_obj_is_rejected_with_its_line() {
    let err = parse_obj("v 0 0 0\nv 1 0 0\nf 1 2 7\n").unwrap_err();
    assert!(matches!(err, ExportError::Parse { line: 3, .. }));
    let err = parse_obj("v 0 zero 0\n").unwrap_err();
    assert!(matches!(err, ExportError::Parse { line: 1, .. }));
    assert!(matches!(ProjectionFrame::with_pole(Quaternion::ONE), Err(ExportError::BadPole(_))));
}
