//! Small numeric helpers shared by the root and group machinery.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Grid used to bucket float vectors before exact comparison.
pub const QUANTUM: f64 = 1e-6;

/// Largest absolute entry.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `|a_i - b_i| <= tol * max(1, |b|_max)` for every entry.
pub fn close_scaled(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let scale = max_abs(b).max(1.0);
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

pub fn is_identity(m: &Matrix, tol: f64) -> bool {
    m.is_square()
        && m.iter().enumerate().all(|(k, v)| {
            let (i, j) = (k % m.nrows(), k / m.nrows());
            let target = if i == j { 1.0 } else { 0.0 };
            (v - target).abs() <= tol
        })
}

/// Hash index over float vectors that tolerates rounding drift.
///
/// Vectors are bucketed on a [`QUANTUM`] grid and compared within a
/// scaled tolerance inside the bucket. Coordinates that sit close to a
/// rounding boundary are probed on both sides, so two vectors that agree
/// within tolerance are always found in a common bucket.
#[derive(Debug, Clone, Default)]
pub struct VecIndex {
    tol: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    items: Vec<Vec<f64>>,
}

impl VecIndex {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            buckets: HashMap::new(),
            items: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, id: usize) -> &[f64] {
        &self.items[id]
    }

    fn key(v: &[f64]) -> Vec<i64> {
        v.iter().map(|x| (x / QUANTUM).round() as i64).collect()
    }

    fn candidate_keys(v: &[f64]) -> Vec<Vec<i64>> {
        let mut keys = vec![Vec::with_capacity(v.len())];
        for x in v {
            let scaled = x / QUANTUM;
            let primary = scaled.round() as i64;
            let frac = scaled - scaled.floor();
            let ambiguous = (frac - 0.5).abs() < 0.05 && keys.len() < 64;
            if ambiguous {
                let other = if primary as f64 > scaled {
                    primary - 1
                } else {
                    primary + 1
                };
                let mut doubled = Vec::with_capacity(keys.len() * 2);
                for k in keys {
                    let mut a = k.clone();
                    a.push(primary);
                    let mut b = k;
                    b.push(other);
                    doubled.push(a);
                    doubled.push(b);
                }
                keys = doubled;
            } else {
                for k in keys.iter_mut() {
                    k.push(primary);
                }
            }
        }
        keys
    }

    pub fn find(&self, v: &[f64]) -> Option<usize> {
        for key in Self::candidate_keys(v) {
            if let Some(ids) = self.buckets.get(&key) {
                for &id in ids {
                    if close_scaled(v, &self.items[id], self.tol) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    /// Returns the id of `v`, inserting it if absent; the flag is true on insertion.
    pub fn insert(&mut self, v: &[f64]) -> (usize, bool) {
        if let Some(id) = self.find(v) {
            return (id, false);
        }
        let id = self.items.len();
        self.items.push(v.to_vec());
        self.buckets.entry(Self::key(v)).or_default().push(id);
        (id, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_merges_drifted_vectors() {
        let mut idx = VecIndex::new(1e-9);
        let (a, new_a) = idx.insert(&[0.5, 1.0 / 3.0]);
        let (b, new_b) = idx.insert(&[0.5 + 1e-13, 1.0 / 3.0 - 1e-13]);
        assert!(new_a && !new_b);
        assert_eq!(a, b);
        let (c, new_c) = idx.insert(&[0.5, 0.3333]);
        assert!(new_c);
        assert_ne!(a, c);
    }

    #[test]
    fn index_handles_rounding_boundary() {
        let mut idx = VecIndex::new(1e-9);
        let edge = 2.5 * QUANTUM;
        idx.insert(&[edge - 1e-13]);
        assert_eq!(idx.find(&[edge + 1e-13]), Some(0));
    }

    #[test]
    fn identity_detection() {
        let m = Matrix::identity(3, 3);
        assert!(is_identity(&m, 1e-12));
        let mut n = m.clone();
        n[(0, 2)] = 1e-3;
        assert!(!is_identity(&n, 1e-6));
    }
}
