//! Generalized eigenvalues of SPD pencils `(Y, X)`, i.e. the eigenvalues of
//! `Y X^{-1}`.
//!
//! Dense pencils get the full spectrum through Cholesky whitening
//! (`X = L L^T`, symmetric eigendecomposition of `L^{-1} Y L^{-T}`), which
//! preserves symmetry and keeps the error constant small. Large or sparse
//! pencils get their extreme eigenvalues from a matrix-free Lanczos iteration
//! with full reorthogonalization, run in the `X`-inner product so only
//! matrix-vector products and an `X`-solve are required. The smallest
//! eigenvalue comes from the swapped pencil `(X, Y)` as `1/mu_max`, which
//! reuses the same machinery and avoids shift selection; the swap means both
//! operators must expose a solve.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseSpd;
use crate::error::{Result, SpdError};
use crate::sparse::SparseSpd;

/// Full sorted spectrum of a pencil: positive, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    lams: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut lams: Vec<f64>) -> Result<Self> {
        if lams.is_empty() {
            return Err(SpdError::InvalidArgument("empty spectrum".into()));
        }
        if lams.iter().any(|l| !(*l > 0.0)) {
            return Err(SpdError::InvalidArgument(
                "spectrum entries must be positive".into(),
            ));
        }
        lams.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { lams })
    }

    pub fn lams(&self) -> &[f64] {
        &self.lams
    }

    pub fn len(&self) -> usize {
        self.lams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lams.is_empty()
    }

    pub fn lam_min(&self) -> f64 {
        self.lams[0]
    }

    pub fn lam_max(&self) -> f64 {
        *self.lams.last().unwrap()
    }

    pub fn extreme_pair(&self) -> ExtremePair {
        ExtremePair::new(self.lam_min(), self.lam_max()).expect("spectrum is positive and sorted")
    }
}

/// The pair of extreme generalized eigenvalues of a pencil.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremePair {
    lam_min: f64,
    lam_max: f64,
}

impl ExtremePair {
    pub fn new(lam_min: f64, lam_max: f64) -> Result<Self> {
        if !(lam_min > 0.0) || !(lam_max >= lam_min) {
            return Err(SpdError::InvalidArgument(format!(
                "invalid extreme pair ({lam_min}, {lam_max})"
            )));
        }
        Ok(Self { lam_min, lam_max })
    }

    pub fn lam_min(&self) -> f64 {
        self.lam_min
    }

    pub fn lam_max(&self) -> f64 {
        self.lam_max
    }

    /// `(lam_max - lam_min) <= 1e-12 * lam_max`: the cutoff used by the
    /// geodesic formulas to take their single-eigenvalue branch.
    pub fn is_degenerate(&self) -> bool {
        self.lam_max - self.lam_min <= 1e-12 * self.lam_max
    }
}

/// Ascending eigenvalues of `Y X^{-1}` via Cholesky whitening.
pub fn full_spectrum(x: &DenseSpd, y: &DenseSpd) -> Result<Spectrum> {
    let w = whiten(x, y)?;
    let eig = w.symmetric_eigen();
    let lams: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if lams.iter().any(|l| !(*l > 0.0)) {
        return Err(SpdError::FactorizationFailure);
    }
    Spectrum::new(lams)
}

/// `L^{-1} Y L^{-T}` for `X = L L^T`, symmetrized.
pub(crate) fn whiten(x: &DenseSpd, y: &DenseSpd) -> Result<DMatrix<f64>> {
    if x.dim() != y.dim() {
        return Err(SpdError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let l = x.cholesky().l();
    let a1 = l
        .solve_lower_triangular(y.matrix())
        .ok_or(SpdError::FactorizationFailure)?;
    let mut w = l
        .solve_lower_triangular(&a1.transpose())
        .ok_or(SpdError::FactorizationFailure)?;
    let n = w.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (w[(i, j)] + w[(j, i)]);
            w[(i, j)] = avg;
            w[(j, i)] = avg;
        }
    }
    Ok(w)
}

/// Extreme eigenvalues of a dense pencil: the endpoints of [`full_spectrum`].
pub fn extreme_pair_dense(x: &DenseSpd, y: &DenseSpd) -> Result<ExtremePair> {
    Ok(full_spectrum(x, y)?.extreme_pair())
}

/// An SPD matrix exposed through matrix-vector products and a linear solve.
///
/// The solve is expected to be backed by a factorization of the operator
/// (dense or sparse Cholesky); both pencil members need one because the
/// smallest eigenvalue is computed from the swapped pencil.
pub trait SpdLinOp {
    fn dim(&self) -> usize;

    /// `A v`.
    fn apply(&self, v: &DVector<f64>) -> DVector<f64>;

    /// `A^{-1} rhs`.
    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>>;
}

impl SpdLinOp for DenseSpd {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        self.matrix() * v
    }

    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.solve_vec(rhs))
    }
}

impl SpdLinOp for SparseSpd {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        self.matvec(v)
    }

    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.solve_vec(rhs))
    }
}

/// Default Lanczos tolerance.
pub const KRYLOV_TOL: f64 = 1e-10;

/// Default Lanczos iteration cap for dimension `n`.
pub fn krylov_max_iter(n: usize) -> usize {
    5 * n
}

/// Extreme generalized eigenvalues of the pencil `(Y, X)` from matrix-vector
/// products: `lam_max` by Lanczos on the whitened pencil, `lam_min` as
/// `1/mu_max` of the swapped pencil `(X, Y)`. Each eigenvalue is accepted at
/// relative residual `tol`.
pub fn extreme_pair_krylov(
    x: &impl SpdLinOp,
    y: &impl SpdLinOp,
    tol: f64,
    max_iter: usize,
) -> Result<ExtremePair> {
    if x.dim() != y.dim() {
        return Err(SpdError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let lam_max = lanczos_max(y, x, tol, max_iter)?;
    let mu_max = lanczos_max(x, y, tol, max_iter)?;
    let mut lam_min = 1.0 / mu_max;
    if lam_min > lam_max {
        // Rounding on a single-point spectrum can invert the order slightly.
        if lam_min <= lam_max * (1.0 + 1e-8) {
            lam_min = lam_max;
        } else {
            return Err(SpdError::FactorizationFailure);
        }
    }
    ExtremePair::new(lam_min, lam_max)
}

/// Largest generalized eigenvalue of the pencil `(A, B)` (`A v = lam B v`)
/// by Lanczos in the `B`-inner product, i.e. Lanczos on the whitened
/// operator expressed through `B`-orthonormal basis vectors. Full
/// reorthogonalization, two passes.
fn lanczos_max(a: &impl SpdLinOp, b: &impl SpdLinOp, tol: f64, max_iter: usize) -> Result<f64> {
    let n = a.dim();
    let cap = max_iter.min(n).max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(0x7370_6467_656f);
    let v0 = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let bv0 = b.apply(&v0);
    let nrm = v0.dot(&bv0);
    if !(nrm > 0.0) {
        return Err(SpdError::SolveFailure);
    }
    let scale = nrm.sqrt();
    let mut qs: Vec<DVector<f64>> = vec![v0 / scale];
    let mut bqs: Vec<DVector<f64>> = vec![bv0 / scale];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    for j in 0.. {
        let u = a.apply(&qs[j]);
        let alpha = qs[j].dot(&u);
        alphas.push(alpha);
        let mut w = b.solve(&u)?;
        w.axpy(-alpha, &qs[j], 1.0);
        if j > 0 {
            w.axpy(-betas[j - 1], &qs[j - 1], 1.0);
        }
        for _ in 0..2 {
            for i in 0..=j {
                let c = bqs[i].dot(&w);
                w.axpy(-c, &qs[i], 1.0);
            }
        }
        let bw = b.apply(&w);
        let beta = w.dot(&bw).max(0.0).sqrt();

        let (theta, s_last) = tridiag_max(&alphas, &betas);
        let resid = beta * s_last.abs();
        if resid <= tol * theta.abs() {
            return Ok(theta);
        }
        // Krylov space exhausted: the Ritz value is exact up to rounding.
        if beta <= 1e-13 * theta.abs().max(1.0) || j + 1 == n {
            return Ok(theta);
        }
        if j + 1 >= cap {
            return Err(SpdError::NoConvergence { max_iter });
        }
        betas.push(beta);
        qs.push(w / beta);
        bqs.push(bw / beta);
    }
    unreachable!()
}

/// Largest eigenvalue of the symmetric tridiagonal `(alphas, betas)` and the
/// last component of its eigenvector.
fn tridiag_max(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let j = alphas.len();
    if j == 1 {
        return (alphas[0], 1.0);
    }
    let mut t = DMatrix::zeros(j, j);
    for i in 0..j {
        t[(i, i)] = alphas[i];
        if i + 1 < j {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..j {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors[(j - 1, best)])
}
