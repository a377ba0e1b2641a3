//! Small fixed-size linear algebra on ℝ⁴ = ℍ.

use crate::quat::Quaternion;

const BASIS: [Quaternion; 4] = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];

/// Gram–Schmidt on `vs`, dropping vectors that are (numerically) dependent.
pub fn orthonormalize(vs: &[Quaternion]) -> Vec<Quaternion> {
    let mut out: Vec<Quaternion> = Vec::with_capacity(4);
    for &v in vs {
        let mut w = v;
        // Two passes for numerical orthogonality.
        for _ in 0..2 {
            for &e in &out {
                w = w - e * e.dot(w);
            }
        }
        let n = w.norm();
        if n > 1e-10 * v.norm().max(1.0) && n > 1e-12 {
            out.push(w / n);
        }
    }
    out
}

/// Completes the orthonormal span of `vs` to an orthonormal basis of ℝ⁴ and
/// returns only the added vectors.
pub fn complement(vs: &[Quaternion]) -> Vec<Quaternion> {
    let base = orthonormalize(vs);
    let k = base.len();
    let mut all = base;
    for e in BASIS {
        if all.len() == 4 {
            break;
        }
        let mut w = e;
        for _ in 0..2 {
            for &f in &all {
                w = w - f * f.dot(w);
            }
        }
        let n = w.norm();
        if n > 1e-6 {
            all.push(w / n);
        }
    }
    all.split_off(k)
}

/// Orthonormal basis `{c, d}` of the complement of `span{a, b}`.
pub fn orthonormal_complement(a: Quaternion, b: Quaternion) -> [Quaternion; 2] {
    let c = complement(&[a, b]);
    [c[0], c[1]]
}

/// Generalized cross product: a vector orthogonal to `a`, `b`, `c` with
/// length equal to the 3-volume they span (the cofactor expansion of the
/// determinant with rows `(e, a, b, c)`).
pub fn cross3(a: Quaternion, b: Quaternion, c: Quaternion) -> Quaternion {
    let (a, b, c) = (a.to_array(), b.to_array(), c.to_array());
    let det3 = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    Quaternion::new(det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2))
}

/// Orthogonal projector onto `span{a, b}` as a 4×4 matrix.
pub fn plane_projector(a: Quaternion, b: Quaternion) -> [[f64; 4]; 4] {
    let e = orthonormalize(&[a, b]);
    let mut m = [[0.0; 4]; 4];
    for v in e {
        let v = v.to_array();
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] += v[r] * v[c];
            }
        }
    }
    m
}

/// Largest entry-wise difference between two 4×4 matrices.
pub fn max_abs_diff(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> f64 {
    let mut d = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            d = d.max((a[r][c] - b[r][c]).abs());
        }
    }
    d
}

/// Principal vectors of two 2-planes given by orthonormal bases `(a1, a2)` and
/// `(b1, b2)`: returns `(cos θ, u, v)` for the smallest principal angle θ,
/// with `u` in the first plane and `v` in the second, both unit, `⟨u,v⟩ = cos θ`.
/// Also returns the second (larger-angle) pair.
pub fn principal_vectors(
    a: [Quaternion; 2],
    b: [Quaternion; 2],
) -> [(f64, Quaternion, Quaternion); 2] {
    // M = Aᵀ B, a 2×2 matrix; its SVD gives the principal pairs.
    let m = [[a[0].dot(b[0]), a[0].dot(b[1])], [a[1].dot(b[0]), a[1].dot(b[1])]];
    // Right singular vectors: eigenvectors of MᵀM.
    let s00 = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let s01 = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    let s11 = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let phi = 0.5 * (2.0 * s01).atan2(s00 - s11);
    let right = [(phi.cos(), phi.sin()), (-phi.sin(), phi.cos())];
    let mut pairs = right.map(|(c, s)| {
        let v = b[0] * c + b[1] * s;
        // u ∝ M (c, s)
        let (x, y) = (m[0][0] * c + m[0][1] * s, m[1][0] * c + m[1][1] * s);
        let sigma = (x * x + y * y).sqrt();
        let u = if sigma > 1e-14 {
            (a[0] * x + a[1] * y) / sigma
        } else {
            // Orthogonal planes in this direction: any unit vector of plane A
            // orthogonal to the other principal vector works; fixed up below.
            Quaternion::ZERO
        };
        (sigma, u, v)
    });
    pairs.sort_by(|p, q| q.0.total_cmp(&p.0));
    if pairs[1].1 == Quaternion::ZERO {
        let u0 = pairs[0].1;
        let w = orthonormalize(&[u0, a[0], a[1]]);
        pairs[1].1 = w[1];
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross3_is_orthogonal() {
        let a = Quaternion::new(1.0, 2.0, 0.5, -1.0);
        let b = Quaternion::new(0.3, -0.2, 1.0, 0.0);
        let c = Quaternion::new(0.0, 0.7, 0.1, 2.0);
        let n = cross3(a, b, c);
        for v in [a, b, c] {
            assert!(n.dot(v).abs() < 1e-12);
        }
        assert_eq!(cross3(Quaternion::I, Quaternion::J, Quaternion::K).t.abs(), 1.0);
    }

    #[test]
    fn complement_is_orthonormal() {
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(0.0, 1.0, 1.0, 0.0);
        let [c, d] = orthonormal_complement(a, b);
        for v in [a, b] {
            assert!(c.dot(v).abs() < 1e-14 && d.dot(v).abs() < 1e-14);
        }
        assert!((c.norm() - 1.0).abs() < 1e-14 && c.dot(d).abs() < 1e-14);
    }

    #[test]
    fn principal_vectors_of_tilted_planes() {
        let t: f64 = 0.4;
        let a = [Quaternion::ONE, Quaternion::I];
        let b = [
            Quaternion::new(t.cos(), 0.0, t.sin(), 0.0),
            Quaternion::new(0.0, 0.0, 0.0, 1.0),
        ];
        let [(c0, u0, v0), (c1, _, _)] = principal_vectors(a, b);
        assert!((c0 - t.cos()).abs() < 1e-14);
        assert!(c1.abs() < 1e-14);
        assert!((u0.dot(v0) - c0).abs() < 1e-14);
    }
}

/// Solves the 4×4 system `Σ_c m[r][c] x[c] = rhs[r]` by Gaussian elimination
/// with partial pivoting; `None` if the matrix is (numerically) singular.
pub fn solve4(m: [[f64; 4]; 4], rhs: [f64; 4]) -> Option<[f64; 4]> {
    let mut a = [[0.0; 5]; 4];
    for r in 0..4 {
        a[r][..4].copy_from_slice(&m[r]);
        a[r][4] = rhs[r];
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..5 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some([0, 1, 2, 3].map(|r| a[r][4] / a[r][r]))
}
