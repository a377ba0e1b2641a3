//! Verification reports: every computed quantity next to its expected value,
//! with a pass flag, serializable to JSON and printable as text.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export::ExportError;
use crate::groups::{
    conjugation_witness, isometry_group_order, poincare_subgroup, symmetry_group, GroupError, GroupReport, GroupSpec,
};
use crate::hopf::{fiber_through, lift_displacement, lift_path, HopfError, S32Point};
use crate::plateau::{quotient_genus, self_intersection_spot_check, solve_spec, PlateauError, SolverOptions, SpotCheck};
use crate::quat::Quaternion;
use crate::sampling::{hemisphere_triangle, rng};
use crate::skeleton::{
    check_proper, complex_counts, fundamental_quadrilateral, generic_fibre_count, genus, quad_metrics, table_row,
    QuadMetrics, SkeletonError,
};
use crate::sphere2::{
    polygon_area, typical_piece, GeodesicArc2, GeodesicPolygon2, ReflectionFamily, ReflectionGroupSpec, S2Point,
    SphereError,
};
use crate::tol::HOLONOMY_TOL;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
    #[error(transparent)]
    Export(#[from] ExportError),
}

/// Settings shared by all reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Absolute tolerance for the quadrilateral table comparison.
    pub tol: f64,
    pub seed: u64,
    /// Triangle budget of a closed surface.
    pub budget: usize,
    pub solver: SolverOptions,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { tol: 1e-9, seed: 0, budget: 2_000_000, solver: SolverOptions::default() }
    }
}

/// A report with an overall verdict and a plain-text rendering.
pub trait Verdict {
    fn pass(&self) -> bool;
    fn text(&self) -> String;
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// The eleven families with every parameter in `1..=6`, followed by the special specs.
pub fn order_table_specs() -> Vec<GroupSpec> {
    let mut specs = Vec::new();
    for m in 1..=6 {
        for n in 1..=6 {
            specs.push(GroupSpec::C { m, n });
        }
    }
    specs.extend((1..=6).map(|l| GroupSpec::D { l }));
    specs.extend((1..=6).map(|l| GroupSpec::DHalf { l }));
    specs.extend(GroupSpec::special());
    specs
}

/// Orders listed for each family.
pub fn expected_group_order(spec: GroupSpec) -> usize {
    match spec {
        GroupSpec::C { m, n } => 2 * (m * n) as usize,
        GroupSpec::D { l } => 8 * l as usize,
        GroupSpec::DHalf { l } => 4 * (l * l) as usize,
        GroupSpec::T(2) => 144,
        GroupSpec::T(_) => 96,
        GroupSpec::O(2) => 576,
        GroupSpec::O(3) => 384,
        GroupSpec::O(_) => 288,
        GroupSpec::I(2) => 3600,
        GroupSpec::I(3) => 2400,
        GroupSpec::I(_) => 1440,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupsReport {
    pub groups: Vec<GroupReport>,
    pub pass: bool,
}

pub fn groups_report() -> Result<GroupsReport, ReportError> {
    let mut groups = Vec::new();
    for spec in order_table_specs() {
        let mut report = GroupReport::new(spec, &symmetry_group(spec)?);
        report.expected_order = expected_group_order(spec);
        groups.push(report);
    }
    let pass = groups.iter().all(|g| g.order == g.expected_order);
    Ok(GroupsReport { groups, pass })
}

impl Verdict for GroupsReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let ok = g.order == g.expected_order;
            let _ = writeln!(out, "{} {:<12} order {:>5} expected {:>5}", mark(ok), g.spec, g.order, g.expected_order);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryRow {
    pub spec: String,
    pub order: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub rows: Vec<IsometryRow>,
    pub pass: bool,
}

/// The listed isometric-group orders over the table's domain (parameters up to 6).
pub fn isometry_report() -> IsometryReport {
    let mut expected: Vec<(GroupSpec, usize)> = Vec::new();
    for m in 1..=6u32 {
        for n in 1..=6u32 {
            if m == n && m >= 3 {
                expected.push((GroupSpec::C { m, n }, 16 * (m * m) as usize));
            } else if m != n && (m - 1) * (n - 1) >= 2 {
                expected.push((GroupSpec::C { m, n }, 8 * (m * n) as usize));
            }
        }
    }
    expected.extend([
        (GroupSpec::T(3), 192),
        (GroupSpec::O(2), 1152),
        (GroupSpec::O(3), 768),
        (GroupSpec::O(4), 576),
        (GroupSpec::I(2), 7200),
        (GroupSpec::I(3), 4800),
        (GroupSpec::I(5), 2880),
    ]);
    let rows: Vec<IsometryRow> = expected
        .into_iter()
        .map(|(spec, expected)| {
            let order = isometry_group_order(spec).unwrap_or(0);
            IsometryRow { spec: spec.to_string(), order, expected, pass: order == expected }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    IsometryReport { rows, pass }
}

impl Verdict for IsometryReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "{} {:<12} isometries {:>5} expected {:>5}", mark(r.pass), r.spec, r.order, r.expected);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRow {
    pub spec: String,
    pub computed: QuadMetrics,
    pub expected: QuadMetrics,
    pub max_deviation: f64,
    pub proper: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadsReport {
    pub tol: f64,
    pub rows: Vec<QuadRow>,
    pub pass: bool,
}

/// Lengths and angles of the eleven representative quadrilaterals against
/// their closed forms, plus the properness check at every vertex.
pub fn quads_report(tol: f64) -> Result<QuadsReport, ReportError> {
    let mut rows = Vec::new();
    for spec in GroupSpec::representatives() {
        let q = fundamental_quadrilateral(spec)?;
        let computed = quad_metrics(&q);
        let expected = table_row(spec);
        let max_deviation = computed.max_deviation(&expected);
        let proper = check_proper(&q).proper();
        rows.push(QuadRow {
            spec: spec.to_string(),
            computed,
            expected,
            max_deviation,
            proper,
            pass: max_deviation <= tol && proper,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(QuadsReport { tol, rows, pass })
}

impl Verdict for QuadsReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} {:<12} max deviation {:.2e} (tol {:.0e}) proper {}",
                mark(r.pass),
                r.spec,
                r.max_deviation,
                self.tol,
                r.proper
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusRow {
    pub spec: String,
    pub formula: i64,
    pub combinatorial: i64,
    pub expected: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusReport {
    pub rows: Vec<GenusRow>,
    pub pass: bool,
}

/// Listed genus of each family.
pub fn expected_genus(spec: GroupSpec) -> i64 {
    match spec {
        GroupSpec::C { m, n } => (i64::from(m) - 1) * (i64::from(n) - 1),
        GroupSpec::D { .. } => 1,
        GroupSpec::DHalf { l } => (i64::from(l) - 1).pow(2),
        GroupSpec::T(2) => 25,
        GroupSpec::T(_) => 9,
        GroupSpec::O(2) => 121,
        GroupSpec::O(3) => 49,
        GroupSpec::O(_) => 25,
        GroupSpec::I(2) => 841,
        GroupSpec::I(3) => 361,
        GroupSpec::I(_) => 121,
    }
}

/// The specs with a genus: every parameter in `2..=6`, then the special specs.
pub fn genus_table_specs() -> Vec<GroupSpec> {
    let mut specs = Vec::new();
    for m in 2..=6 {
        for n in 2..=6 {
            specs.push(GroupSpec::C { m, n });
        }
    }
    specs.extend((2..=6).map(|l| GroupSpec::D { l }));
    specs.extend((2..=6).map(|l| GroupSpec::DHalf { l }));
    specs.extend(GroupSpec::special());
    specs
}

pub fn genus_report(specs: &[GroupSpec]) -> Result<GenusReport, ReportError> {
    let mut rows = Vec::new();
    for &spec in specs {
        let formula = genus(spec)?;
        let combinatorial = complex_counts(spec)?.genus();
        let expected = expected_genus(spec);
        rows.push(GenusRow {
            spec: spec.to_string(),
            formula,
            combinatorial,
            expected,
            pass: formula == expected && combinatorial == expected,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(GenusReport { rows, pass })
}

impl Verdict for GenusReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} {:<12} genus {:>4} (cells {:>4}) expected {:>4}",
                mark(r.pass),
                r.spec,
                r.formula,
                r.combinatorial,
                r.expected
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftDemo {
    pub name: String,
    pub displacement: f64,
    pub expected: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub demos: Vec<LiftDemo>,
    pub random_triangles: usize,
    /// Largest `| |displacement| − area |` over the random triangles.
    pub max_area_error: f64,
    pub fibre_length: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Length of the fibre through `u`, by Richardson-extrapolated chord sums.
pub fn fibre_length(u: S2Point) -> f64 {
    let f = fiber_through(u);
    let chords = |n: usize| -> f64 {
        (0..n)
            .map(|s| {
                let a = f.point(4.0 * PI * s as f64 / n as f64);
                let b = f.point(4.0 * PI * (s + 1) as f64 / n as f64);
                (b - a).norm()
            })
            .sum()
    };
    (4.0 * chords(2000) - chords(1000)) / 3.0
}

/// Holonomy demonstrations: lifts of closed loops from 2 and how far along
/// the fibre they end.
pub fn lift_report(seed: u64) -> Result<LiftReport, ReportError> {
    let start = S32Point::new(Quaternion::real(2.0))?;
    let tol = HOLONOMY_TOL;
    let mut demos = Vec::new();
    let mut demo = |name: &str, displacement: f64, expected: f64| {
        demos.push(LiftDemo {
            name: name.to_string(),
            displacement,
            expected,
            pass: (displacement - expected).abs() <= tol,
        });
    };
    let octant = GeodesicPolygon2::from_vertices(&[S2Point::I, S2Point::J, S2Point::K])?;
    demo("octant i→j→k", lift_displacement(&octant, start)?, -PI / 2.0);
    demo("octant reversed", lift_displacement(&octant.reversed(), start)?, PI / 2.0);
    let there = GeodesicArc2::new(S2Point::I, Quaternion::J, 1.0)?;
    let back = lift_path(&[there, there.reversed()], start)?;
    let end = back.end().expect("two arcs").get();
    demo("there and back", 2.0 * (end.x.atan2(end.t)), 0.0);
    let lune = typical_piece(ReflectionGroupSpec::new(ReflectionFamily::C, 2));
    demo("half-sphere lune", lift_displacement(&lune, start)?.abs(), PI);

    let mut r = rng(seed);
    let random_triangles = 100;
    let mut max_area_error: f64 = 0.0;
    for _ in 0..random_triangles {
        let tri = hemisphere_triangle(&mut r);
        let base = fiber_through(tri.arcs()[0].start).base;
        let theta = lift_displacement(&tri, base)?;
        max_area_error = max_area_error.max((theta.abs() - polygon_area(&tri)?).abs());
    }
    let fibre_length = fibre_length(S2Point::I);
    let pass = demos.iter().all(|d| d.pass) && max_area_error <= tol && (fibre_length - 4.0 * PI).abs() <= 1e-10;
    Ok(LiftReport { demos, random_triangles, max_area_error, fibre_length, tol, pass })
}

impl Verdict for LiftReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for d in &self.demos {
            let _ =
                writeln!(out, "{} {:<18} displacement {:+.12} expected {:+.12}", mark(d.pass), d.name, d.displacement, d.expected);
        }
        let _ = writeln!(
            out,
            "{} {} random triangles: max | |displacement| − area | = {:.2e} (tol {:.0e})",
            mark(self.max_area_error <= self.tol),
            self.random_triangles,
            self.max_area_error,
            self.tol
        );
        let ok = (self.fibre_length - 4.0 * PI).abs() <= 1e-10;
        let _ = writeln!(out, "{} fibre length {:.12} expected 4π = {:.12}", mark(ok), self.fibre_length, 4.0 * PI);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationRow {
    pub spec: String,
    pub fibre_points: u32,
    pub order: usize,
    pub intersection_order: usize,
    pub index: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub rows: Vec<ConjugationRow>,
    pub pass: bool,
}

/// Conjugation by the half-spacing fibre shift `[e^{πi/t}, 1]`: the
/// intersection with the original group should have index 2.
pub fn conjugation_report(specs: &[GroupSpec]) -> Result<ConjugationReport, ReportError> {
    let mut rows = Vec::new();
    for &spec in specs {
        let counts = generic_fibre_count(spec, 20)?;
        let t = counts[0] as u32;
        let g = symmetry_group(spec)?;
        let conj = g.conjugated(conjugation_witness(t));
        let common = g.intersection_order(&conj);
        let index = g.order() as f64 / common.max(1) as f64;
        rows.push(ConjugationRow {
            spec: spec.to_string(),
            fibre_points: t,
            order: g.order(),
            intersection_order: common,
            index,
            pass: counts.iter().all(|&c| c == counts[0]) && conj.order() == g.order() && 2 * common == g.order(),
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(ConjugationReport { rows, pass })
}

impl Verdict for ConjugationReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} {:<12} t = {:>3}  |G| = {:>5}  |G ∩ G'| = {:>5}  index {} expected 2",
                mark(r.pass),
                r.spec,
                r.fibre_points,
                r.order,
                r.intersection_order,
                r.index
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub spec: String,
    pub subgroup: String,
    pub subgroup_order: usize,
    pub acts_freely: bool,
    pub genus: Option<i64>,
    pub expected: Option<i64>,
    pub error: Option<String>,
    pub pass: bool,
}

/// Genus of the quotient by the Poincaré group, listed for the icosahedral specs.
pub fn expected_poincare_quotient_genus(spec: GroupSpec) -> Option<i64> {
    match spec {
        GroupSpec::I(5) => Some(2),
        GroupSpec::I(3) => Some(4),
        GroupSpec::I(2) => Some(8),
        _ => None,
    }
}

pub fn quotient_report(spec: GroupSpec) -> QuotientReport {
    let p = poincare_subgroup();
    let result = quotient_genus(spec, &p);
    let expected = expected_poincare_quotient_genus(spec);
    let genus = result.as_ref().ok().copied();
    QuotientReport {
        spec: spec.to_string(),
        subgroup: "poincare".to_string(),
        subgroup_order: p.order(),
        acts_freely: p.acts_freely(),
        genus,
        expected,
        error: result.err().map(|e| e.to_string()),
        pass: expected.is_some() && genus == expected,
    }
}

impl Verdict for QuotientReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let show = |g: Option<i64>| g.map_or("-".to_string(), |g| g.to_string());
        let mut out = format!(
            "{} {} / {} (order {}, free {}): genus {} expected {}",
            mark(self.pass),
            self.spec,
            self.subgroup,
            self.subgroup_order,
            self.acts_freely,
            show(self.genus),
            show(self.expected)
        );
        if let Some(e) = &self.error {
            let _ = write!(out, " ({e})");
        }
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub spec: String,
    pub requested_refinement: usize,
    pub refinement: usize,
    pub budget: usize,
    pub triangles: usize,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub residual_tol: f64,
    pub gradient_residual: f64,
    pub initial_disk_area: f64,
    pub disk_area: f64,
    pub closed_area: f64,
    /// Known area of the surface, where one is available (the Clifford torus).
    pub reference_area: Option<f64>,
    pub area_error: Option<f64>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub closed_manifold: bool,
    pub genus: Option<i64>,
    pub expected_genus: i64,
    pub symmetry_deviation: Option<f64>,
    pub vertices_outside_hull: usize,
    pub spot_check: SpotCheck,
    pub pass: bool,
}

/// Relative area tolerance against a known reference area.
pub const AREA_TOL: f64 = 0.01;

/// Number of face pairs tested by the self-intersection spot check.
const SPOT_CHECK_PAIRS: f64 = 20_000.0;

/// Solves `spec`, extends the disk to a closed surface and checks it; the
/// closed mesh is returned for export.
pub fn solve_report(
    spec: GroupSpec,
    opts: &ReportOptions,
) -> Result<(SolveReport, crate::plateau::SurfaceMesh), ReportError> {
    let sol = solve_spec(spec, &opts.solver, opts.budget)?;
    let faces = sol.closed.faces.len();
    let pairs = (faces * faces.saturating_sub(1) / 2).max(1) as f64;
    let spot_check = self_intersection_spot_check(&sol.closed, (SPOT_CHECK_PAIRS / pairs).min(1.0), opts.seed);
    let reference_area = match spec {
        GroupSpec::C { m: 2, n: 2 } => Some(8.0 * PI * PI),
        _ => None,
    };
    let area_error = reference_area.map(|a| (sol.closed_area - a).abs() / a);
    let expected_genus = expected_genus(spec);
    let closed_manifold = sol.topology.is_closed_manifold();
    let pass = sol.disk.converged
        && closed_manifold
        && sol.genus == Some(expected_genus)
        && area_error.is_none_or(|e| e <= AREA_TOL)
        && sol.containment.outside == 0
        && spot_check.intersections == 0;
    let report = SolveReport {
        spec: spec.to_string(),
        requested_refinement: sol.requested_refinement,
        refinement: sol.refinement,
        budget: opts.budget,
        triangles: faces,
        iterations: sol.disk.iterations,
        converged: sol.disk.converged,
        residual: sol.disk.residual,
        residual_tol: opts.solver.residual_tol,
        gradient_residual: sol.disk.gradient_residual,
        initial_disk_area: sol.disk.initial_area,
        disk_area: sol.disk.area,
        closed_area: sol.closed_area,
        reference_area,
        area_error,
        vertices: sol.topology.vertices,
        edges: sol.topology.edges,
        faces: sol.topology.faces,
        euler_characteristic: sol.topology.euler_characteristic,
        closed_manifold,
        genus: sol.genus,
        expected_genus,
        symmetry_deviation: sol.symmetry_deviation,
        vertices_outside_hull: sol.containment.outside,
        spot_check,
        pass,
    };
    Ok((report, sol.closed))
}

impl Verdict for SolveReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}: refinement {} (requested {}, budget {}), {} triangles",
            mark(self.pass),
            self.spec,
            self.refinement,
            self.requested_refinement,
            self.budget,
            self.triangles
        );
        let _ = writeln!(
            out,
            "  disk: {} iterations, converged {}, residual {:.2e} (tol {:.0e}), area {:.6} → {:.6}",
            self.iterations, self.converged, self.residual, self.residual_tol, self.initial_disk_area, self.disk_area
        );
        let _ = writeln!(
            out,
            "  closed: V {} E {} F {} χ {} genus {} expected {}, area {:.6}",
            self.vertices,
            self.edges,
            self.faces,
            self.euler_characteristic,
            self.genus.map_or("-".to_string(), |g| g.to_string()),
            self.expected_genus,
            self.closed_area
        );
        if let (Some(a), Some(e)) = (self.reference_area, self.area_error) {
            let _ = writeln!(out, "  reference area {a:.6}, relative error {e:.2e} (tol {AREA_TOL:.0e})");
        }
        let _ = writeln!(
            out,
            "  symmetry deviation {}, vertices outside hull {}, intersecting face pairs {} of {}",
            self.symmetry_deviation.map_or("-".to_string(), |d| format!("{d:.2e}")),
            self.vertices_outside_hull,
            self.spot_check.intersections,
            self.spot_check.pairs_tested
        );
        out
    }
}

/// The full verification suite as one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub options: ReportOptions,
    pub groups: GroupsReport,
    pub isometry: IsometryReport,
    pub quads: QuadsReport,
    pub genus: GenusReport,
    pub lift: LiftReport,
    pub conjugation: ConjugationReport,
    pub quotients: Vec<QuotientReport>,
    pub solves: Vec<SolveReport>,
    pub pass: bool,
}

pub fn report_all(opts: &ReportOptions) -> Result<FullReport, ReportError> {
    let groups = groups_report()?;
    let isometry = isometry_report();
    let quads = quads_report(opts.tol)?;
    let genus = genus_report(&genus_table_specs())?;
    let lift = lift_report(opts.seed)?;
    let conjugation = conjugation_report(&[GroupSpec::T(3), GroupSpec::O(3)])?;
    let quotients: Vec<QuotientReport> = [5, 3, 2].map(|d| quotient_report(GroupSpec::I(d))).to_vec();
    let mut specs = vec![GroupSpec::C { m: 2, n: 2 }];
    specs.extend(GroupSpec::representatives());
    let solves = specs
        .into_iter()
        .map(|spec| solve_report(spec, opts).map(|(r, _)| r))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = groups.pass
        && isometry.pass
        && quads.pass
        && genus.pass
        && lift.pass
        && conjugation.pass
        && quotients.iter().all(|q| q.pass)
        && solves.iter().all(|s| s.pass);
    Ok(FullReport { options: *opts, groups, isometry, quads, genus, lift, conjugation, quotients, solves, pass })
}

impl Verdict for FullReport {
    fn pass(&self) -> bool {
        self.pass
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, body: String| {
            let _ = writeln!(out, "== {name}");
            out.push_str(&body);
        };
        section("group orders", self.groups.text());
        section("isometric-group orders", self.isometry.text());
        section("fundamental quadrilaterals", self.quads.text());
        section("genus", self.genus.text());
        section("horizontal lifts", self.lift.text());
        section("conjugation", self.conjugation.text());
        section("Poincaré quotients", self.quotients.iter().map(Verdict::text).collect());
        section("Plateau solutions", self.solves.iter().map(Verdict::text).collect());
        let _ = writeln!(out, "{} overall", mark(self.pass));
        out
    }
}
