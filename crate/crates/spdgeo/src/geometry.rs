//! Distances and geodesics on the SPD cone.
//!
//! Three metrics: the affine-invariant Riemannian distance (full spectrum),
//! the Hilbert projective distance (`log(lam_max/lam_min)`), and the
//! Thompson distance (`max_i |log lam_i|`, extreme eigenvalues only). Three
//! interpolations: Euclidean, the Riemannian geodesic, and the distinguished
//! Thompson geodesic `X *_t Y`, which is a linear combination of its
//! endpoints and therefore preserves common subspace and sparsity structure.

use crate::dense::DenseSpd;
use crate::error::{Result, SpdError};
use crate::geneig::{
    extreme_pair_dense, extreme_pair_krylov, full_spectrum, krylov_max_iter, ExtremePair,
    KRYLOV_TOL,
};
use crate::sparse::SparseSpd;

/// The interpolation families exposed by the CLI and experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeodesicKind {
    Euclidean,
    Riemannian,
    ThompsonStar,
}

/// Affine-invariant Riemannian distance `sqrt(sum_i log^2 lam_i)`.
pub fn dist_riemannian(x: &DenseSpd, y: &DenseSpd) -> Result<f64> {
    let s = full_spectrum(x, y)?;
    Ok(s.lams().iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// Hilbert projective distance `log(lam_max / lam_min)`.
pub fn dist_hilbert(x: &DenseSpd, y: &DenseSpd) -> Result<f64> {
    let p = extreme_pair_dense(x, y)?;
    Ok((p.lam_max() / p.lam_min()).ln())
}

/// Thompson distance `max(log lam_max, -log lam_min)`.
pub fn dist_thompson(x: &DenseSpd, y: &DenseSpd) -> Result<f64> {
    Ok(thompson_of_pair(&extreme_pair_dense(x, y)?))
}

/// Thompson distance along the sparse matrix-free path.
pub fn dist_thompson_sparse(x: &SparseSpd, y: &SparseSpd) -> Result<f64> {
    let p = extreme_pair_krylov(x, y, KRYLOV_TOL, krylov_max_iter(x.dim()))?;
    Ok(thompson_of_pair(&p))
}

fn thompson_of_pair(p: &ExtremePair) -> f64 {
    f64::max(p.lam_max().ln(), -p.lam_min().ln()).max(0.0)
}

/// Riemannian geodesic `X^{1/2} (X^{-1/2} Y X^{-1/2})^t X^{1/2}`, computed
/// through Cholesky whitening: `L (L^{-1} Y L^{-T})^t L^T`.
pub fn geodesic_riemannian(x: &DenseSpd, y: &DenseSpd, t: f64) -> Result<DenseSpd> {
    let w = crate::geneig::whiten(x, y)?;
    let mut eig = w.symmetric_eigen();
    if eig.eigenvalues.iter().any(|l| !(*l > 0.0)) {
        return Err(SpdError::FactorizationFailure);
    }
    for l in eig.eigenvalues.iter_mut() {
        *l = l.powf(t);
    }
    let powered = eig.recompose();
    let l = x.cholesky().l();
    DenseSpd::from_symmetric(&l * powered * l.transpose())
}

/// Coefficients `(a, b)` with `X *_t Y = a Y + b X`, evaluated stably for
/// nearly equal extremes. `None` in the degenerate branch.
fn star_coefficients(p: &ExtremePair, t: f64) -> Option<(f64, f64)> {
    if p.is_degenerate() {
        return None;
    }
    let lm = p.lam_min();
    let lam_ratio_log = (p.lam_max() / lm).ln();
    let denom = lam_ratio_log.exp_m1();
    let a = lm.powf(t - 1.0) * (t * lam_ratio_log).exp_m1() / denom;
    let b = -p.lam_max() * lm.powf(t - 1.0) * ((t - 1.0) * lam_ratio_log).exp_m1() / denom;
    Some((a, b))
}

/// The distinguished Thompson geodesic `X *_t Y` (dense operands).
pub fn geodesic_star(x: &DenseSpd, y: &DenseSpd, t: f64) -> Result<DenseSpd> {
    let p = extreme_pair_dense(x, y)?;
    match star_coefficients(&p, t) {
        Some((a, b)) => DenseSpd::from_symmetric(y.matrix() * a + x.matrix() * b)
            .map_err(|_| SpdError::NonPositiveResult),
        None => DenseSpd::from_symmetric(x.matrix() * p.lam_min().powf(t))
            .map_err(|_| SpdError::NonPositiveResult),
    }
}

/// `X *_t Y` for sparse operands. The result keeps the union of the input
/// patterns (explicit zeros included), so subspace structure is preserved;
/// extremes come from the matrix-free Lanczos path.
pub fn geodesic_star_sparse(x: &SparseSpd, y: &SparseSpd, t: f64) -> Result<SparseSpd> {
    let p = extreme_pair_krylov(x, y, KRYLOV_TOL, krylov_max_iter(x.dim()))?;
    let (a, b) = match star_coefficients(&p, t) {
        Some(c) => c,
        None => (0.0, p.lam_min().powf(t)),
    };
    SparseSpd::linear_combination(&[(a, y), (b, x)]).map_err(|e| match e {
        SpdError::NotPositiveDefinite => SpdError::NonPositiveResult,
        other => other,
    })
}

/// Euclidean interpolation `(1 - t) X + t Y`; positive definiteness is only
/// guaranteed for `t` in `[0, 1]`.
pub fn geodesic_euclidean(x: &DenseSpd, y: &DenseSpd, t: f64) -> Result<DenseSpd> {
    if x.dim() != y.dim() {
        return Err(SpdError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    DenseSpd::from_symmetric(x.matrix() * (1.0 - t) + y.matrix() * t)
        .map_err(|_| SpdError::NonPositiveResult)
}

/// Sparse Euclidean interpolation over the union pattern.
pub fn geodesic_euclidean_sparse(x: &SparseSpd, y: &SparseSpd, t: f64) -> Result<SparseSpd> {
    SparseSpd::linear_combination(&[(1.0 - t, x), (t, y)]).map_err(|e| match e {
        SpdError::NotPositiveDefinite => SpdError::NonPositiveResult,
        other => other,
    })
}

/// Shared surface for dense and sparse operands, used by the means module:
/// the star geodesic, Thompson distance, and linear combinations.
pub trait SpdGeometry: Sized + Clone {
    fn dim(&self) -> usize;
    fn star(&self, other: &Self, t: f64) -> Result<Self>;
    fn thompson_distance(&self, other: &Self) -> Result<f64>;
    fn linear_combination(terms: &[(f64, &Self)]) -> Result<Self>;
}

impl SpdGeometry for DenseSpd {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn star(&self, other: &Self, t: f64) -> Result<Self> {
        geodesic_star(self, other, t)
    }

    fn thompson_distance(&self, other: &Self) -> Result<f64> {
        dist_thompson(self, other)
    }

    fn linear_combination(terms: &[(f64, &Self)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| SpdError::InvalidArgument("empty combination".into()))?;
        let n = first.dim();
        let mut acc = nalgebra::DMatrix::zeros(n, n);
        for &(c, m) in terms {
            if m.dim() != n {
                return Err(SpdError::DimensionMismatch { left: n, right: m.dim() });
            }
            acc += m.matrix() * c;
        }
        DenseSpd::from_symmetric(acc)
    }
}

impl SpdGeometry for SparseSpd {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn star(&self, other: &Self, t: f64) -> Result<Self> {
        geodesic_star_sparse(self, other, t)
    }

    fn thompson_distance(&self, other: &Self) -> Result<f64> {
        dist_thompson_sparse(self, other)
    }

    fn linear_combination(terms: &[(f64, &Self)]) -> Result<Self> {
        SparseSpd::linear_combination(terms)
    }
}
