//! Seeded random sampling of quaternions, sphere points and test triangles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quat::{Quaternion, UnitQuaternion};
use crate::sphere2::{GeodesicPolygon2, S2Point};

/// The deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; sufficient for isotropic direction sampling.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A quaternion with independent standard-normal components.
pub fn gaussian_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng))
}

/// A uniformly distributed unit quaternion.
pub fn unit_quaternion<R: Rng>(rng: &mut R) -> UnitQuaternion {
    loop {
        let q = gaussian_quaternion(rng);
        if q.norm() > 1e-6 {
            return UnitQuaternion::normalize(q);
        }
    }
}

/// A uniformly distributed point of S².
pub fn s2_point<R: Rng>(rng: &mut R) -> S2Point {
    loop {
        let v = Quaternion::imag(gaussian(rng), gaussian(rng), gaussian(rng));
        if v.norm() > 1e-6 {
            return S2Point::normalize(v);
        }
    }
}

/// A uniformly distributed point of the radius-2 sphere S³₂.
pub fn s32_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    unit_quaternion(rng).get() * 2.0
}

/// A random non-degenerate geodesic triangle inside the open hemisphere
/// around a random centre, oriented so that it lies on its left.
pub fn hemisphere_triangle<R: Rng>(rng: &mut R) -> GeodesicPolygon2 {
    loop {
        let c = s2_point(rng);
        let pts: Vec<S2Point> = (0..3)
            .map(|_| loop {
                let p = s2_point(rng);
                if p.dot(c) > 0.05 {
                    break p;
                }
            })
            .collect();
        let orient = pts[0].get().dot(pts[1].get().cross(pts[2].get()));
        if orient.abs() < 1e-3 {
            continue;
        }
        let tri = if orient > 0.0 {
            [pts[0], pts[1], pts[2]]
        } else {
            [pts[0], pts[2], pts[1]]
        };
        if let Ok(p) = GeodesicPolygon2::from_vertices(&tri) {
            return p;
        }
    }
}
