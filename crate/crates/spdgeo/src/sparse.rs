//! Sparse SPD matrices with an explicit symmetric pattern.
//!
//! Storage is compressed rows with both triangles stored and column indices
//! sorted within each row. Explicit zeros are legal pattern entries and are
//! kept by linear combinations, so a geodesic sweep never re-compresses.
//!
//! Validation factorizes the matrix with an up-looking sparse Cholesky
//! (elimination tree + row reach, natural ordering); the factor is kept on
//! the value so matrix-free solves reuse it.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};

use crate::dense::{DenseSpd, SYMMETRY_TOL};
use crate::error::{Result, SpdError};

const NONE: usize = usize::MAX;

/// Sparse SPD matrix, validated and factorized on construction.
#[derive(Clone, Debug)]
pub struct SparseSpd {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
    chol: SparseCholesky,
}

impl SparseSpd {
    /// Builds from `(row, col, value)` triplets, 0-based. Entries given in
    /// one triangle are mirrored; entries given in both triangles must agree
    /// within `tol` (relative) and are averaged. Duplicate coordinates are
    /// rejected.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)], tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(SpdError::InvalidArgument("dimension must be positive".into()));
        }
        let mut map: HashMap<(usize, usize), f64> = HashMap::with_capacity(2 * entries.len());
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(SpdError::Parse(format!(
                    "entry ({i}, {j}) out of bounds for dimension {n}"
                )));
            }
            if map.insert((i, j), v).is_some() {
                return Err(SpdError::Parse(format!("duplicate entry at ({i}, {j})")));
            }
        }
        let keys: Vec<(usize, usize)> = map.keys().copied().collect();
        for (i, j) in keys {
            if i <= j {
                continue;
            }
            let v = map[&(i, j)];
            match map.get(&(j, i)).copied() {
                Some(w) => {
                    let delta = (v - w).abs();
                    if delta > tol * f64::max(1.0, v.abs()) {
                        return Err(SpdError::NotSymmetric { i, j, delta });
                    }
                    let avg = 0.5 * (v + w);
                    map.insert((i, j), avg);
                    map.insert((j, i), avg);
                }
                None => {
                    map.insert((j, i), v);
                }
            }
        }
        // Mirror remaining upper-triangle-only entries.
        let keys: Vec<(usize, usize)> = map.keys().copied().collect();
        for (i, j) in keys {
            if i < j && !map.contains_key(&(j, i)) {
                map.insert((j, i), map[&(i, j)]);
            }
        }

        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for ((i, j), v) in map {
            rows[i].insert(j, v);
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (j, v) in row {
                col_idx.push(j);
                vals.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_csr(n, row_ptr, col_idx, vals)
    }

    /// Default-tolerance variant of [`SparseSpd::from_triplets`].
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_triplets(n, entries, SYMMETRY_TOL)
    }

    /// Internal: pattern and values already symmetric, rows sorted.
    pub(crate) fn from_csr(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        vals: Vec<f64>,
    ) -> Result<Self> {
        let chol = SparseCholesky::factor_csr(n, &row_ptr, &col_idx, &vals)?;
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            vals,
            chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of stored entries (both triangles, explicit zeros included).
    pub fn nnz_stored(&self) -> usize {
        self.col_idx.len()
    }

    /// Stored entries of row `i` as `(col, value)`, ascending by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.vals[lo..hi].iter().copied())
    }

    /// Value at `(i, j)`, zero when outside the stored pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(pos) => self.vals[lo + pos],
            Err(_) => 0.0,
        }
    }

    /// The stored pattern as a sorted set of index pairs.
    pub fn pattern(&self) -> std::collections::BTreeSet<(usize, usize)> {
        let mut set = std::collections::BTreeSet::new();
        for i in 0..self.n {
            for (j, _) in self.row(i) {
                set.insert((i, j));
            }
        }
        set
    }

    /// `y = A v`.
    pub fn matvec(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for (j, a) in self.row(i) {
                s += a * v[j];
            }
            y[i] = s;
        }
        y
    }

    /// Solves `A x = b` through the cached sparse Cholesky factor.
    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve_vec(b)
    }

    /// Densifies (used by oracles and by operations defined densely).
    pub fn to_dense(&self) -> Result<DenseSpd> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        DenseSpd::from_symmetric(m)
    }

    /// `sum_t c_t M_t` over the union pattern. Entries of the union carried
    /// with explicit zeros even when a coefficient vanishes.
    pub fn linear_combination(terms: &[(f64, &SparseSpd)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| SpdError::InvalidArgument("empty combination".into()))?;
        let n = first.n;
        for &(_, m) in terms {
            if m.n != n {
                return Err(SpdError::DimensionMismatch { left: n, right: m.n });
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for i in 0..n {
            acc.clear();
            for &(c, m) in terms {
                for (j, v) in m.row(i) {
                    *acc.entry(j).or_insert(0.0) += c * v;
                }
            }
            for (&j, &v) in acc.iter() {
                col_idx.push(j);
                vals.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_csr(n, row_ptr, col_idx, vals)
    }
}

/// Lower Cholesky factor in column-major sparse form; the diagonal entry is
/// first in each column.
#[derive(Clone, Debug)]
pub(crate) struct SparseCholesky {
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
}

impl SparseCholesky {
    fn factor_csr(n: usize, row_ptr: &[usize], col_idx: &[usize], vals: &[f64]) -> Result<Self> {
        let row = |i: usize| {
            let lo = row_ptr[i];
            let hi = row_ptr[i + 1];
            col_idx[lo..hi].iter().copied().zip(vals[lo..hi].iter().copied())
        };

        // Elimination tree (Liu's algorithm with ancestor compression).
        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for k in 0..n {
            for (j, _) in row(k) {
                if j >= k {
                    continue;
                }
                let mut i = j;
                while i != NONE && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == NONE {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut x = vec![0.0f64; n];
        let mut mark = vec![NONE; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut path: Vec<usize> = Vec::with_capacity(n);
        for k in 0..n {
            // Row reach of k in the elimination tree: pattern of L(k, 0..k).
            order.clear();
            mark[k] = k;
            let mut d = 0.0;
            for (j, v) in row(k) {
                if j > k {
                    continue;
                }
                if j == k {
                    d = v;
                    continue;
                }
                x[j] = v;
                path.clear();
                let mut i = j;
                while mark[i] != k {
                    path.push(i);
                    mark[i] = k;
                    debug_assert!(parent[i] != NONE, "etree path must reach {k}");
                    i = parent[i];
                }
                // Shallow-to-deep here; consumed in reverse below so that
                // descendants are eliminated before their ancestors.
                for &node in path.iter().rev() {
                    order.push(node);
                }
            }
            for idx in (0..order.len()).rev() {
                let i = order[idx];
                let lki = x[i] / cols[i][0].1;
                x[i] = 0.0;
                for &(r, v) in &cols[i][1..] {
                    x[r] -= v * lki;
                }
                d -= lki * lki;
                cols[i].push((k, lki));
            }
            if !(d > 0.0) {
                return Err(SpdError::NotPositiveDefinite);
            }
            cols[k].push((k, d.sqrt()));
        }
        Ok(Self { n, cols })
    }

    pub(crate) fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone_owned();
        for j in 0..self.n {
            let xj = x[j] / self.cols[j][0].1;
            x[j] = xj;
            for &(r, v) in &self.cols[j][1..] {
                x[r] -= v * xj;
            }
        }
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for &(r, v) in &self.cols[j][1..] {
                s -= v * x[r];
            }
            x[j] = s / self.cols[j][0].1;
        }
        x
    }
}
