//! The lifted symmetry groups: finite subgroups of SO(4) generated by
//! π-rotations about the edges of fundamental quadrilaterals, their
//! closure enumeration, the Poincaré subgroup and isometric-group orders.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{Quaternion, Rotation3, Rotation4, UnitQuaternion};
use crate::sphere2::{O3Element, SpecialPoints};
use crate::tol::GROUP_TOL;

/// Default bound on enumerated group orders.
pub const MAX_ORDER: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),
    #[error("{0} is outside the domain of the isometric-group order table")]
    OutOfTableDomain(GroupSpec),
    #[error("cannot parse group spec {0:?}")]
    Parse(String),
    #[error("invalid parameters for {0}")]
    InvalidParameters(String),
}

/// The vertex angle `π/d` at the crossing vertex of the T, O, I families.
pub type VertexDenominator = u32;

/// One of the eleven lifted group families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    /// `G_C(m,n)`, order `2mn`.
    C { m: u32, n: u32 },
    /// `G_D(l)`, order `8l`.
    D { l: u32 },
    /// `G_D(l, π/2)`, order `4l²`.
    DHalf { l: u32 },
    /// `G_T(π/d)` for `d ∈ {2, 3}`.
    T(VertexDenominator),
    /// `G_O(π/d)` for `d ∈ {2, 3, 4}`.
    O(VertexDenominator),
    /// `G_I(π/d)` for `d ∈ {2, 3, 5}`.
    I(VertexDenominator),
}

impl GroupSpec {
    /// Validating constructor for all families.
    pub fn validate(self) -> Result<Self, GroupError> {
        let ok = match self {
            GroupSpec::C { m, n } => m >= 1 && n >= 1,
            GroupSpec::D { l } | GroupSpec::DHalf { l } => l >= 1,
            GroupSpec::T(d) => matches!(d, 2 | 3),
            GroupSpec::O(d) => (2..=4).contains(&d),
            GroupSpec::I(d) => matches!(d, 2 | 3 | 5),
        };
        if ok {
            Ok(self)
        } else {
            Err(GroupError::InvalidParameters(self.to_string()))
        }
    }

    /// The eight non-parametric specs `T(π/2) … I(π/5)`.
    pub fn special() -> Vec<GroupSpec> {
        vec![
            GroupSpec::T(2),
            GroupSpec::T(3),
            GroupSpec::O(2),
            GroupSpec::O(3),
            GroupSpec::O(4),
            GroupSpec::I(2),
            GroupSpec::I(3),
            GroupSpec::I(5),
        ]
    }

    /// One representative of each of the eleven families (C(2,3), D(3), D(3,π/2)
    /// plus the eight special specs).
    pub fn representatives() -> Vec<GroupSpec> {
        let mut v = vec![GroupSpec::C { m: 2, n: 3 }, GroupSpec::D { l: 3 }, GroupSpec::DHalf { l: 3 }];
        v.extend(GroupSpec::special());
        v
    }

    /// Vertex-angle denominators `(d_K, d_L, d_M, d_N)` of the fundamental
    /// quadrilateral: the angle at each vertex is `π/d`.
    pub fn angle_denominators(self) -> [u32; 4] {
        match self {
            GroupSpec::C { m, n } => [m, n, m, n],
            GroupSpec::D { .. } => [2, 2, 2, 2],
            GroupSpec::DHalf { l } => [l, 2, 2, l],
            GroupSpec::T(2) => [3, 3, 3, 3],
            GroupSpec::T(_) => [2, 3, 2, 3],
            GroupSpec::O(2) => [4, 4, 3, 3],
            GroupSpec::O(3) => [4, 2, 4, 2],
            GroupSpec::O(_) => [2, 3, 3, 2],
            GroupSpec::I(2) => [3, 5, 5, 3],
            GroupSpec::I(3) => [2, 5, 2, 5],
            GroupSpec::I(_) => [2, 3, 2, 3],
        }
    }

    /// The pair `(m, n)`: each occurs at two vertices.
    pub fn mn(self) -> (u32, u32) {
        let d = self.angle_denominators();
        let m = d[0];
        let n = d.iter().copied().find(|&x| x != m).unwrap_or(m);
        (m, n)
    }

    /// The number of elements of the lifted group of this spec.
    pub fn order(self) -> usize {
        group_order(self)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::C { m, n } => write!(f, "C({m},{n})"),
            GroupSpec::D { l } => write!(f, "D({l})"),
            GroupSpec::DHalf { l } => write!(f, "D({l},pi/2)"),
            GroupSpec::T(d) => write!(f, "T(pi/{d})"),
            GroupSpec::O(d) => write!(f, "O(pi/{d})"),
            GroupSpec::I(d) => write!(f, "I(pi/{d})"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Parses `C(2,3)`, `D(3)`, `D(3,pi/2)`, `T(pi/3)`, `O(π/4)`, `I(pi/5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('π', "pi");
        let (family, rest) = compact.split_at(compact.find('(').ok_or_else(err)?);
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(err)?;
        let args: Vec<&str> = inner.split(',').collect();
        let int = |a: &str| a.parse::<u32>().map_err(|_| err());
        let denom = |a: &str| {
            a.strip_prefix("pi/").ok_or_else(err).and_then(|d| d.parse::<u32>().map_err(|_| err()))
        };
        let spec = match (family.to_ascii_uppercase().as_str(), args.as_slice()) {
            ("C", [m, n]) => GroupSpec::C { m: int(m)?, n: int(n)? },
            ("D", [l]) => GroupSpec::D { l: int(l)? },
            ("D", [l, half]) if denom(half)? == 2 => GroupSpec::DHalf { l: int(l)? },
            ("T", [d]) => GroupSpec::T(denom(d)?),
            ("O", [d]) => GroupSpec::O(denom(d)?),
            ("I", [d]) => GroupSpec::I(denom(d)?),
            _ => return Err(err()),
        };
        spec.validate().map_err(|_| err())
    }
}

/// `[e^{iα}, cos β + u sin β]`.
fn lifted(alpha: f64, u: Quaternion, beta: f64) -> Rotation4 {
    Rotation4::new(UnitQuaternion::exp_i(alpha), UnitQuaternion::exp_axis(u, beta))
}

fn diagonal(a: Quaternion) -> Rotation4 {
    Rotation4::from_quats(a, a)
}

/// The generators listed for each lifted group.
pub fn generators(spec: GroupSpec) -> Vec<Rotation4> {
    let sp = SpecialPoints::new();
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    let (ut, utp, uo, ui, uip) =
        (sp.u_t.get(), sp.u_t_prime.get(), sp.u_o.get(), sp.u_i.get(), sp.u_i_prime.get());
    let half = PI / 2.0;
    let third = PI / 3.0;
    let quarter = PI / 4.0;
    let fifth = PI / 5.0;
    match spec {
        GroupSpec::C { m, n } => {
            let (pm, pn) = (PI / f64::from(m), PI / f64::from(n));
            vec![lifted(pm, i, pm), lifted(pn, -i, pn), diagonal(j)]
        }
        GroupSpec::D { l } => {
            let e = Quaternion::exp_i(-PI / f64::from(l)) * k;
            vec![lifted(half, k, half), lifted(half, e, half), diagonal(j)]
        }
        GroupSpec::DHalf { l } => {
            let pl = PI / f64::from(l);
            vec![lifted(pl, i, pl), lifted(half, k, half), diagonal(j)]
        }
        GroupSpec::T(2) => vec![
            lifted(third, ut, third),
            lifted(third, utp, third),
            diagonal(Quaternion::exp_i(quarter) * k),
        ],
        GroupSpec::T(_) => vec![
            lifted(half, i, half),
            lifted(third, ut, third),
            diagonal(Quaternion::exp_i(quarter) * k),
        ],
        GroupSpec::O(2) => vec![lifted(third, ut, third), lifted(quarter, i, quarter), diagonal(k)],
        GroupSpec::O(3) => vec![lifted(half, uo, half), lifted(quarter, i, quarter), diagonal(k)],
        GroupSpec::O(_) => vec![lifted(half, uo, half), lifted(third, ut, third), diagonal(k)],
        GroupSpec::I(2) => vec![lifted(third, ui, third), lifted(fifth, uip, fifth), diagonal(k)],
        GroupSpec::I(3) => vec![lifted(half, i, half), lifted(fifth, uip, fifth), diagonal(k)],
        GroupSpec::I(_) => vec![lifted(half, i, half), lifted(third, ui, third), diagonal(k)],
    }
}

/// The closed-form order of the group of `spec`.
pub fn group_order(spec: GroupSpec) -> usize {
    match spec {
        GroupSpec::C { m, n } => 2 * m as usize * n as usize,
        GroupSpec::D { l } => 8 * l as usize,
        GroupSpec::DHalf { l } => 4 * (l as usize).pow(2),
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

const KEY_SCALE: f64 = 1e6;

type ElementKey = [i64; 8];

/// Hash keys of `g`: components rounded to six decimals, plus the
/// alternatives for components lying within rounding noise of a cell boundary.
fn element_keys(g: &Rotation4) -> Vec<ElementKey> {
    let c = g.components().map(|x| x * KEY_SCALE);
    let mut keys = vec![c.map(|x| x.round() as i64)];
    for (idx, x) in c.iter().enumerate() {
        let frac = x - x.floor();
        if (frac - 0.5).abs() < 1e-3 {
            let alt = if x.round() > *x { x.floor() } else { x.ceil() } as i64;
            let extra: Vec<ElementKey> = keys
                .iter()
                .map(|k| {
                    let mut k = *k;
                    k[idx] = alt;
                    k
                })
                .collect();
            keys.extend(extra);
        }
    }
    keys
}

/// A finite group of isometries of S³₂, enumerated in breadth-first order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryGroup {
    pub spec: Option<GroupSpec>,
    pub generators: Vec<Rotation4>,
    elements: Vec<Rotation4>,
    #[serde(skip)]
    index: HashMap<ElementKey, usize>,
}

impl SymmetryGroup {
    fn empty(generators: Vec<Rotation4>) -> Self {
        SymmetryGroup { spec: None, generators, elements: Vec::new(), index: HashMap::new() }
    }

    fn insert(&mut self, g: Rotation4) -> bool {
        if self.index_of(&g).is_some() {
            return false;
        }
        let idx = self.elements.len();
        let key = g.components().map(|x| (x * KEY_SCALE).round() as i64);
        self.index.insert(key, idx);
        self.elements.push(g);
        true
    }

    pub fn elements(&self) -> &[Rotation4] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Position of `g` in the enumeration (within [`GROUP_TOL`]).
    pub fn index_of(&self, g: &Rotation4) -> Option<usize> {
        element_keys(g)
            .iter()
            .filter_map(|k| self.index.get(k))
            .copied()
            .find(|&idx| self.elements[idx].approx_eq(g))
    }

    pub fn contains(&self, g: &Rotation4) -> bool {
        self.index_of(g).is_some()
    }

    pub fn is_subgroup_of(&self, other: &SymmetryGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// `{w⁻¹ g w}`, enumerated in the same order.
    pub fn conjugated(&self, w: Rotation4) -> SymmetryGroup {
        let mut out = SymmetryGroup::empty(self.generators.iter().map(|g| g.conjugate_by(w)).collect());
        for g in &self.elements {
            out.insert(g.conjugate_by(w));
        }
        out
    }

    /// Number of elements lying in both groups.
    pub fn intersection_order(&self, other: &SymmetryGroup) -> usize {
        self.elements.iter().filter(|g| other.contains(g)).count()
    }

    /// Whether the set is closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|g| {
            self.contains(&g.inverse()) && self.generators.iter().all(|s| self.contains(&g.compose(*s)))
        })
    }

    /// Elements acting trivially on the base S²: `[e^{iτ}, ±1]`.
    pub fn kernel(&self) -> Vec<Rotation4> {
        self.elements
            .iter()
            .copied()
            .filter(|g| {
                let (p, q) = (g.p().get(), g.q().get());
                (q.t.abs() - 1.0).abs() <= GROUP_TOL && p.y.abs() <= GROUP_TOL && p.z.abs() <= GROUP_TOL
            })
            .collect()
    }

    /// The induced action on the base S² as elements `±[q]` of O(3): first
    /// slots `e^{iτ}` induce `[q]`, first slots `e^{iτ}j` induce `−[q]`.
    pub fn induced_o3(&self) -> Vec<O3Element> {
        let mut out: Vec<O3Element> = Vec::new();
        let mut seen: HashMap<(i8, [i64; 4]), usize> = HashMap::new();
        for g in &self.elements {
            let p = g.p().get();
            let sign = if p.y.abs() <= GROUP_TOL && p.z.abs() <= GROUP_TOL { 1 } else { -1 };
            let e = O3Element { sign, rotation: Rotation3::new(g.q()) };
            let key = (sign, e.rotation.p().get().to_array().map(|x| (x * KEY_SCALE).round() as i64));
            let dup = match seen.get(&key) {
                Some(&i) => out[i].approx_eq(&e) || out.iter().any(|o| o.approx_eq(&e)),
                None => out.iter().any(|o| o.approx_eq(&e)),
            };
            if !dup {
                seen.insert(key, out.len());
                out.push(e);
            }
        }
        out
    }

    /// Whether every element preserves the fibration: first slot `e^{iτ}` or `e^{iτ}j`.
    pub fn preserves_fibration(&self) -> bool {
        self.elements.iter().all(preserves_fibration)
    }

    /// Whether the action on S³ is free: no non-identity element has a fixed
    /// point. `[p, q]` fixes some point iff `p` and `q` are conjugate, i.e.
    /// `Re p = Re q`; this is independent of the representative `±(p, q)`,
    /// while `Re p = −Re q` only means some point is sent to its antipode.
    pub fn acts_freely(&self) -> bool {
        self.elements.iter().filter(|g| !g.is_identity()).all(|g| {
            let (a, b) = (g.p().get().t, g.q().get().t);
            (a - b).abs() > GROUP_TOL
        })
    }

    /// The largest number of non-identity elements fixing one of the given points.
    pub fn max_stabilizer(&self, points: &[Quaternion]) -> usize {
        points
            .iter()
            .map(|r| {
                self.elements
                    .iter()
                    .filter(|g| !g.is_identity() && (g.apply(*r) - *r).norm() <= GROUP_TOL)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Whether `[p, q]` maps fibres to fibres: `p = e^{iτ}` or `p = e^{iτ} j`.
pub fn preserves_fibration(g: &Rotation4) -> bool {
    let p = g.p().get();
    let commuting = p.y.abs() <= GROUP_TOL && p.z.abs() <= GROUP_TOL;
    let anti = p.t.abs() <= GROUP_TOL && p.x.abs() <= GROUP_TOL;
    commuting || anti
}

/// Breadth-first closure of `generators` (bounded by [`MAX_ORDER`]).
pub fn closure(generators: &[Rotation4]) -> Result<SymmetryGroup, GroupError> {
    closure_bounded(generators, MAX_ORDER)
}

/// Breadth-first closure with an explicit element bound.
pub fn closure_bounded(generators: &[Rotation4], limit: usize) -> Result<SymmetryGroup, GroupError> {
    let mut group = SymmetryGroup::empty(generators.to_vec());
    group.insert(Rotation4::IDENTITY);
    let mut head = 0;
    while head < group.elements.len() {
        let g = group.elements[head];
        head += 1;
        for s in generators {
            if group.insert(g.compose(*s)) && group.elements.len() > limit {
                return Err(GroupError::ClosureOverflow(limit));
            }
        }
    }
    Ok(group)
}

/// The enumerated group of `spec`.
pub fn symmetry_group(spec: GroupSpec) -> Result<SymmetryGroup, GroupError> {
    let mut g = closure(&generators(spec))?;
    g.spec = Some(spec);
    Ok(g)
}

/// The group generated by `[1, i]` and `[1, cos(π/3) + u_I sin(π/3)]` (order 120).
pub fn poincare_subgroup() -> SymmetryGroup {
    let sp = SpecialPoints::new();
    let gens = [
        Rotation4::new(UnitQuaternion::ONE, UnitQuaternion::I),
        Rotation4::new(UnitQuaternion::ONE, UnitQuaternion::exp_axis(sp.u_i.get(), PI / 3.0)),
    ];
    closure(&gens).expect("binary icosahedral group has order 120")
}

/// The order of the full orientation-preserving isometry group of the
/// minimal surface of `spec`, for specs in the table domain.
pub fn isometry_group_order(spec: GroupSpec) -> Result<usize, GroupError> {
    let out = || Err(GroupError::OutOfTableDomain(spec));
    match spec {
        GroupSpec::C { m, n } if m == n => {
            if m >= 3 {
                Ok(16 * (m as usize).pow(2))
            } else {
                out()
            }
        }
        GroupSpec::C { m, n } => {
            if m >= 1 && n >= 1 && (m - 1) * (n - 1) >= 2 {
                Ok(8 * m as usize * n as usize)
            } else {
                out()
            }
        }
        GroupSpec::T(3) => Ok(192),
        GroupSpec::O(2) => Ok(1152),
        GroupSpec::O(3) => Ok(768),
        GroupSpec::O(4) => Ok(576),
        GroupSpec::I(2) => Ok(7200),
        GroupSpec::I(3) => Ok(4800),
        GroupSpec::I(5) => Ok(2880),
        _ => out(),
    }
}

/// `[e^{πi/t}, 1]`, the fibre shift by half the spacing of the `t` points in
/// which the skeleton meets a generic fibre.
pub fn conjugation_witness(t: u32) -> Rotation4 {
    Rotation4::new(UnitQuaternion::exp_i(PI / f64::from(t.max(1))), UnitQuaternion::ONE)
}

/// Serializable summary of a group.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupReport {
    pub spec: String,
    pub order: usize,
    pub expected_order: usize,
    pub generators: Vec<[f64; 8]>,
    pub kernel_order: usize,
    pub induced_o3_order: usize,
}

impl GroupReport {
    pub fn new(spec: GroupSpec, group: &SymmetryGroup) -> Self {
        GroupReport {
            spec: spec.to_string(),
            order: group.order(),
            expected_order: group_order(spec),
            generators: group.generators.iter().map(Rotation4::components).collect(),
            kernel_order: group.kernel().len(),
            induced_o3_order: group.induced_o3().len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["C(2,3)", "D(4)", "D(3,pi/2)", "T(pi/2)", "O(pi/4)", "I(pi/5)"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("I(π/2)".parse::<GroupSpec>().unwrap(), GroupSpec::I(2));
        assert!("T(pi/5)".parse::<GroupSpec>().is_err());
        assert!("X(1)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn small_orders() {
        assert_eq!(closure(&[Rotation4::IDENTITY]).unwrap().order(), 1);
        assert_eq!(symmetry_group(GroupSpec::C { m: 1, n: 1 }).unwrap().order(), 2);
        assert_eq!(symmetry_group(GroupSpec::T(2)).unwrap().order(), 144);
        assert_eq!(symmetry_group(GroupSpec::DHalf { l: 3 }).unwrap().order(), 36);
        assert_eq!(symmetry_group(GroupSpec::O(3)).unwrap().order(), 384);
    }

    #[test]
    fn generator_shapes() {
        let g = generators(GroupSpec::I(5));
        assert!(g[2].approx_eq(&Rotation4::new(UnitQuaternion::K, UnitQuaternion::K)));
        for spec in GroupSpec::representatives() {
            assert!(generators(spec).iter().all(preserves_fibration), "{spec}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let g = generators(GroupSpec::I(2));
        assert_eq!(closure_bounded(&g, 100).unwrap_err(), GroupError::ClosureOverflow(100));
    }

    #[test]
    fn table_domain() {
        assert_eq!(isometry_group_order(GroupSpec::C { m: 3, n: 3 }).unwrap(), 144);
        assert_eq!(isometry_group_order(GroupSpec::C { m: 2, n: 4 }).unwrap(), 64);
        assert!(isometry_group_order(GroupSpec::C { m: 2, n: 2 }).is_err());
        assert_eq!(isometry_group_order(GroupSpec::C { m: 2, n: 3 }).unwrap(), 48);
        assert!(isometry_group_order(GroupSpec::C { m: 1, n: 5 }).is_err());
        assert!(isometry_group_order(GroupSpec::T(2)).is_err());
    }

    #[test]
    fn witness() {
        let w = conjugation_witness(2);
        assert!(w.approx_eq(&Rotation4::new(UnitQuaternion::I, UnitQuaternion::ONE)));
    }
}
