//! Quaternion algebra, the double covers S³×S³ → SO(4) and S³ → SO(3),
//! hyperplane reflections and π-rotations.
//!
//! Conventions: `Rotation4 [p,q]` acts on the right by `h ↦ p⁻¹ h q`, so
//! `apply(apply(h, r1), r2) = apply(h, r1.compose(r2))` with
//! `[p1,q1]·[p2,q2] = [p1 p2, q1 q2]`. `Rotation3 [p]` acts on imaginary
//! quaternions by `v ↦ p⁻¹ v p`, a left-hand rotation about `Im p`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol::{GROUP_TOL, UNIT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuatError {
    #[error("quaternion norm {norm} is not within {tol} of 1")]
    NotUnit { norm: f64, tol: f64 },
    #[error("quaternion has real part {t}, expected an imaginary quaternion")]
    NotInE3 { t: f64 },
}

/// The number `t + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { t, x, y, z }
    }

    pub const fn real(t: f64) -> Self {
        Quaternion::new(t, 0.0, 0.0, 0.0)
    }

    pub const fn imag(x: f64, y: f64, z: f64) -> Self {
        Quaternion::new(0.0, x, y, z)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    /// `cos θ + i sin θ`.
    pub fn exp_i(theta: f64) -> Self {
        Quaternion::new(theta.cos(), theta.sin(), 0.0, 0.0)
    }

    /// `cos θ + u sin θ` for an imaginary `u`.
    pub fn exp_axis(u: Quaternion, theta: f64) -> Self {
        Quaternion::real(theta.cos()) + u.vector() * theta.sin()
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.t, -self.x, -self.y, -self.z)
    }

    pub fn dot(self, o: Quaternion) -> f64 {
        self.t * o.t + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse; panics-free, returns non-finite components for zero.
    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    /// Imaginary part `x i + y j + z k`.
    pub fn vector(self) -> Self {
        Quaternion::imag(self.x, self.y, self.z)
    }

    /// Cross product of the imaginary parts.
    pub fn cross(self, o: Quaternion) -> Self {
        Quaternion::imag(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn dist(self, o: Quaternion) -> f64 {
        (self - o).norm()
    }

    pub fn max_abs(self) -> f64 {
        self.t.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Hamilton product.
pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
        a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
        a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
        a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        quat_mul(self, o)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.t / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6}, {:.6})", self.t, self.x, self.y, self.z)
    }
}

/// A quaternion of norm 1 (within [`UNIT_TOL`], renormalized on construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self, QuatError> {
        let norm = q.norm();
        if (norm - 1.0).abs() > UNIT_TOL || !norm.is_finite() {
            return Err(QuatError::NotUnit { norm, tol: UNIT_TOL });
        }
        Ok(UnitQuaternion(q / norm))
    }

    /// Normalizes an arbitrary non-zero quaternion.
    pub fn normalize(q: Quaternion) -> Self {
        UnitQuaternion(q.normalized())
    }

    pub fn exp_i(theta: f64) -> Self {
        UnitQuaternion(Quaternion::exp_i(theta))
    }

    /// `cos θ + u sin θ` for a unit imaginary `u`.
    pub fn exp_axis(u: Quaternion, theta: f64) -> Self {
        UnitQuaternion::normalize(Quaternion::exp_axis(u, theta))
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    pub fn inv(self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn neg(self) -> Self {
        UnitQuaternion(-self.0)
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * o.0)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

fn first_significant_negative(components: impl IntoIterator<Item = f64>) -> bool {
    components
        .into_iter()
        .find(|c| c.abs() > UNIT_TOL)
        .is_some_and(|c| c < 0.0)
}

/// The isometry `h ↦ p⁻¹ h q` of ℍ, stored as the canonical one of `±(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation4 {
    p: UnitQuaternion,
    q: UnitQuaternion,
}

impl Rotation4 {
    pub const IDENTITY: Rotation4 = Rotation4 { p: UnitQuaternion::ONE, q: UnitQuaternion::ONE };

    pub fn new(p: UnitQuaternion, q: UnitQuaternion) -> Self {
        let (p0, q0) = (p.get(), q.get());
        let comps = p0.to_array().into_iter().chain(q0.to_array());
        if first_significant_negative(comps) {
            Rotation4 { p: p.neg(), q: q.neg() }
        } else {
            Rotation4 { p, q }
        }
    }

    /// Builds `[p, q]` from raw quaternions, normalizing both.
    pub fn from_quats(p: Quaternion, q: Quaternion) -> Self {
        Rotation4::new(UnitQuaternion::normalize(p), UnitQuaternion::normalize(q))
    }

    pub fn p(&self) -> UnitQuaternion {
        self.p
    }

    pub fn q(&self) -> UnitQuaternion {
        self.q
    }

    /// Re-canonicalizes (idempotent; values are already canonical).
    pub fn canon(self) -> Self {
        Rotation4::new(self.p, self.q)
    }

    pub fn compose(self, o: Rotation4) -> Rotation4 {
        Rotation4::new(self.p * o.p, self.q * o.q)
    }

    pub fn inverse(self) -> Rotation4 {
        Rotation4::new(self.p.inv(), self.q.inv())
    }

    /// `g⁻¹ self g`, the conjugate acting as "first g⁻¹, then self, then g" in the right action.
    pub fn conjugate_by(self, g: Rotation4) -> Rotation4 {
        g.inverse().compose(self).compose(g)
    }

    pub fn apply(&self, h: Quaternion) -> Quaternion {
        apply_rotation4(h, *self)
    }

    /// The eight components `(p, q)` of the canonical representative.
    pub fn components(&self) -> [f64; 8] {
        let (a, b) = (self.p.get().to_array(), self.q.get().to_array());
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    /// Distance between the sign classes `±(p,q)` in ℝ⁸ (max norm).
    pub fn distance(&self, o: &Rotation4) -> f64 {
        let a = self.components();
        let b = o.components();
        let plus = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let minus = a.iter().zip(&b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn approx_eq(&self, o: &Rotation4) -> bool {
        self.distance(o) <= GROUP_TOL
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&Rotation4::IDENTITY)
    }
}

impl fmt::Display for Rotation4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.p.get(), self.q.get())
    }
}

/// `p⁻¹ h q`.
pub fn apply_rotation4(h: Quaternion, r: Rotation4) -> Quaternion {
    r.p.inv().get() * h * r.q.get()
}

/// The rotation `v ↦ p⁻¹ v p` of imaginary quaternions, stored canonically up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation3 {
    p: UnitQuaternion,
}

impl Rotation3 {
    pub const IDENTITY: Rotation3 = Rotation3 { p: UnitQuaternion::ONE };

    pub fn new(p: UnitQuaternion) -> Self {
        if first_significant_negative(p.get().to_array()) {
            Rotation3 { p: p.neg() }
        } else {
            Rotation3 { p }
        }
    }

    /// `[cos(φ/2) + u sin(φ/2)]`: left-hand rotation by `φ` about the unit axis `u`.
    pub fn about_axis(u: Quaternion, phi: f64) -> Self {
        Rotation3::new(UnitQuaternion::exp_axis(u.normalized(), phi / 2.0))
    }

    pub fn p(&self) -> UnitQuaternion {
        self.p
    }

    pub fn compose(self, o: Rotation3) -> Rotation3 {
        Rotation3::new(self.p * o.p)
    }

    pub fn inverse(self) -> Rotation3 {
        Rotation3::new(self.p.inv())
    }

    pub fn distance(&self, o: &Rotation3) -> f64 {
        let (a, b) = (self.p.get(), o.p.get());
        (a - b).max_abs().min((a + b).max_abs())
    }

    pub fn approx_eq(&self, o: &Rotation3) -> bool {
        self.distance(o) <= GROUP_TOL
    }

    /// Applies to an imaginary quaternion without the membership check.
    pub fn rotate(&self, v: Quaternion) -> Quaternion {
        let p = self.p.get();
        (p.conj() * v * p).vector()
    }
}

/// `p⁻¹ v p` for imaginary `v`; rejects inputs with a real part beyond [`UNIT_TOL`].
pub fn apply_rotation3(v: Quaternion, r: Rotation3) -> Result<Quaternion, QuatError> {
    if v.t.abs() > UNIT_TOL {
        return Err(QuatError::NotInE3 { t: v.t });
    }
    Ok(r.rotate(v.vector()))
}

/// Reflection of ℍ in the hyperplane orthogonal to `p`: `h ↦ −conj(h p⁻¹) p`.
pub fn reflect_hyperplane(h: Quaternion, p: UnitQuaternion) -> Quaternion {
    -((h * p.inv().get()).conj()) * p.get()
}

/// The π-rotation `[e^{iτ} j, e^{iτ} j]` about the geodesic `2(cos(s/2) + e^{iτ} j sin(s/2))`.
pub fn pi_rotation_about_geodesic(tau: f64) -> Rotation4 {
    let a = Quaternion::exp_i(tau) * Quaternion::J;
    Rotation4::from_quats(a, a)
}

/// The π-rotation fixing pointwise the 2-plane spanned by `a` and `b`.
///
/// With `{c, d}` an orthonormal basis of the orthogonal complement, the map is
/// `[c d̄, c̄ d]` (it negates `c` and `d` and fixes their complement).
pub fn pi_rotation_about_plane(a: Quaternion, b: Quaternion) -> Rotation4 {
    let [c, d] = crate::linalg::orthonormal_complement(a, b);
    Rotation4::from_quats(c * d.conj(), c.conj() * d)
}
