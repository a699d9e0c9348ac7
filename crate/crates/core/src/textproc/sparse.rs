use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Sparse feature vector: `(column, weight)` pairs with strictly increasing
/// columns and nonzero weights.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validates ordering; zero weights are dropped.
    pub fn from_entries(entries: Vec<(usize, f64)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter(
                "sparse vector columns must be strictly increasing".into(),
            ));
        }
        Ok(Self::from_sorted(entries))
    }

    pub(crate) fn from_sorted(mut entries: Vec<(usize, f64)>) -> Self {
        entries.retain(|&(_, w)| w != 0.0);
        Self { entries }
    }

    /// Builds a vector from a dense slice, skipping zeros.
    pub fn from_dense(dense: &[f64]) -> Self {
        Self::from_sorted(dense.iter().copied().enumerate().collect())
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, column: usize) -> f64 {
        self.entries
            .binary_search_by_key(&column, |&(c, _)| c)
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// Dot product with a dense vector; columns past its end count as zero.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(c, w)| dense.get(c).map_or(0.0, |d| d * w))
            .sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.squared_norm())
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w).sum()
    }

    pub fn max_column(&self) -> Option<usize> {
        self.entries.last().map(|&(c, _)| c)
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut dense = alloc::vec![0.0; len];
        for &(c, w) in &self.entries {
            dense[c] = w;
        }
        dense
    }
}

/// Row-major sparse matrix: one [`SparseVector`] per document.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureMatrix {
    rows: Vec<SparseVector>,
    n_features: usize,
}

impl FeatureMatrix {
    /// Fails when a row references a column `>= n_features`.
    pub fn new(rows: Vec<SparseVector>, n_features: usize) -> Result<Self> {
        if let Some(i) = rows
            .iter()
            .position(|r| r.max_column().is_some_and(|c| c >= n_features))
        {
            return Err(Error::InvalidParameter(alloc::format!(
                "row {i} has a column outside 0..{n_features}"
            )));
        }
        Ok(Self { rows, n_features })
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVector {
        &self.rows[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted() {
        assert!(SparseVector::from_entries(alloc::vec![(2, 1.0), (1, 1.0)]).is_err());
        assert!(SparseVector::from_entries(alloc::vec![(1, 1.0), (1, 1.0)]).is_err());
        let v = SparseVector::from_entries(alloc::vec![(0, 0.0), (3, 2.0)]).unwrap();
        assert_eq!(v.entries(), &[(3, 2.0)]);
    }

    #[test]
    fn dense_helpers() {
        let v = SparseVector::from_dense(&[0.0, 3.0, 0.0, 4.0]);
        assert_eq!(v.nnz(), 2);
        assert_eq!(v.norm(), 5.0);
        assert_eq!(v.get(3), 4.0);
        assert_eq!(v.get(2), 0.0);
        assert_eq!(v.dot(&[1.0, 1.0, 1.0]), 3.0);
        assert_eq!(v.to_dense(4), [0.0, 3.0, 0.0, 4.0]);
    }

    #[test]
    fn matrix_bounds() {
        let v = SparseVector::from_dense(&[0.0, 1.0]);
        assert!(FeatureMatrix::new(alloc::vec![v.clone()], 1).is_err());
        assert_eq!(
            FeatureMatrix::new(alloc::vec![v], 2).unwrap().n_features(),
            2
        );
    }
}
