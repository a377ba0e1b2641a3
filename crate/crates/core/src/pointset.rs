//! Approximate point sets in ℝ⁴ via grid hashing with neighbour probing.

use std::collections::HashMap;

use crate::quat::Quaternion;

/// Indexes points so that any stored point within `tol` of a query is found.
#[derive(Debug, Clone)]
pub struct PointIndex {
    tol: f64,
    cell: f64,
    buckets: HashMap<[i64; 4], Vec<usize>>,
    points: Vec<Quaternion>,
}

impl PointIndex {
    pub fn new(tol: f64) -> Self {
        PointIndex { tol, cell: tol * 4.0, buckets: HashMap::new(), points: Vec::new() }
    }

    fn cell_of(&self, p: Quaternion) -> [i64; 4] {
        p.to_array().map(|c| (c / self.cell).floor() as i64)
    }

    /// Index of a stored point within `tol` of `p`, if any.
    pub fn find(&self, p: Quaternion) -> Option<usize> {
        let c = self.cell_of(p);
        let mut best: Option<(f64, usize)> = None;
        for d in 0..81 {
            let off = [d % 3, (d / 3) % 3, (d / 9) % 3, d / 27].map(|o| o as i64 - 1);
            let key = [c[0] + off[0], c[1] + off[1], c[2] + off[2], c[3] + off[3]];
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    let dist = self.points[id].dist(p);
                    if dist <= self.tol && best.is_none_or(|(b, _)| dist < b) {
                        best = Some((dist, id));
                    }
                }
            }
        }
        best.map(|(_, id)| id)
    }

    /// Returns the index of the matching stored point, inserting `p` if none
    /// exists; the flag tells whether an insertion happened.
    pub fn insert(&mut self, p: Quaternion) -> (usize, bool) {
        if let Some(id) = self.find(p) {
            return (id, false);
        }
        let id = self.points.len();
        self.points.push(p);
        let key = self.cell_of(p);
        self.buckets.entry(key).or_default().push(id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Quaternion] {
        &self.points
    }
}
