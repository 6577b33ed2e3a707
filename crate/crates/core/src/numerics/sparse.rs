//! Compressed sparse row storage.
//!
//! Matrices are assembled from `(row, col, value)` triplets; duplicates are
//! summed in insertion order so that repeated assemblies are bit-identical.

use crate::error::{Error, Result};

/// Unordered list of `(row, col, value)` contributions.
#[derive(Debug, Clone, Default)]
pub struct Triplets {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl Triplets {
    pub fn new(n: usize) -> Self {
        Triplets {
            n,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, capacity: usize) -> Self {
        Triplets {
            n,
            entries: Vec::with_capacity(capacity),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Compresses into CSR, summing duplicates. Exact zeros are kept when
    /// `keep_zeros` is set (Jacobian patterns), dropped otherwise.
    pub fn to_csr(&self, keep_zeros: bool) -> CsrMatrix {
        let n = self.n;
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in &self.entries {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        // bucket by row, stable in insertion order
        let mut cols = vec![0usize; self.entries.len()];
        let mut vals = vec![0.0; self.entries.len()];
        let mut next = counts.clone();
        for &(r, c, v) in &self.entries {
            cols[next[r]] = c;
            vals[next[r]] = v;
            next[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values = Vec::with_capacity(self.entries.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for i in 0..n {
            scratch.clear();
            for k in counts[i]..counts[i + 1] {
                scratch.push((cols[k], vals[k]));
            }
            // stable sort keeps the summation order of duplicates fixed
            scratch.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut sum = 0.0;
                while k < scratch.len() && scratch[k].0 == c {
                    sum += scratch[k].1;
                    k += 1;
                }
                if keep_zeros || sum != 0.0 {
                    col_idx.push(c);
                    values.push(sum);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }
}

/// Square sparse matrix in CSR format.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Same dimension and nonzero structure.
    pub fn same_pattern(&self, other: &CsrMatrix) -> bool {
        self.n == other.n && self.row_ptr == other.row_ptr && self.col_idx == other.col_idx
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y);
        y
    }

    /// Maximum of |A_ij - A_ji| relative to max |A_ij|.
    pub fn asymmetry(&self) -> f64 {
        let mut max_entry = 0.0f64;
        let mut max_diff = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                max_entry = max_entry.max(v.abs());
                max_diff = max_diff.max((v - self.get(j, i)).abs());
            }
        }
        if max_entry == 0.0 {
            0.0
        } else {
            max_diff / max_entry
        }
    }

    /// Removes row and column `k` (used to pin a node).
    pub fn without_row_col(&self, k: usize) -> CsrMatrix {
        let mut t = Triplets::with_capacity(self.n - 1, self.nnz());
        for i in 0..self.n {
            if i == k {
                continue;
            }
            let ii = if i > k { i - 1 } else { i };
            for (j, v) in self.row(i) {
                if j == k {
                    continue;
                }
                let jj = if j > k { j - 1 } else { j };
                t.add(ii, jj, v);
            }
        }
        t.to_csr(false)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Structurally symmetric sparse matrix with symmetric values.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric(CsrMatrix);

impl SparseSymmetric {
    /// Wraps `a` after checking symmetry to `tol` (relative to the largest entry).
    pub fn new(a: CsrMatrix, tol: f64) -> Result<Self> {
        let asym = a.asymmetry();
        if asym > tol {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symmetric (relative asymmetry {asym:e})"
            )));
        }
        Ok(SparseSymmetric(a))
    }

    pub fn from_triplets(t: &Triplets) -> Result<Self> {
        Self::new(t.to_csr(false), 1e-12)
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn without_row_col(&self, k: usize) -> SparseSymmetric {
        SparseSymmetric(self.0.without_row_col(k))
    }
}
