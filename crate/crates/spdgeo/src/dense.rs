//! Dense symmetric positive definite matrices.
//!
//! A [`DenseSpd`] is validated on construction (symmetry within a relative
//! tolerance, Cholesky succeeds), symmetrized once, and carries its Cholesky
//! factor so downstream kernels never re-factorize.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SpdError};

/// Default relative tolerance for the symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A dense SPD matrix together with its lower Cholesky factor.
#[derive(Clone, Debug)]
pub struct DenseSpd {
    mat: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl DenseSpd {
    /// Validates `a` as SPD with symmetry tolerance `tol` (relative, per entry).
    pub fn new(a: DMatrix<f64>, tol: f64) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(SpdError::DimensionMismatch {
                left: a.nrows(),
                right: a.ncols(),
            });
        }
        let n = a.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = (a[(i, j)] - a[(j, i)]).abs();
                if delta > tol * f64::max(1.0, a[(i, j)].abs()) {
                    return Err(SpdError::NotSymmetric { i, j, delta });
                }
            }
        }
        Self::from_symmetric(a)
    }

    /// Validates with the default symmetry tolerance.
    pub fn from_matrix(a: DMatrix<f64>) -> Result<Self> {
        Self::new(a, SYMMETRY_TOL)
    }

    /// Symmetrizes (no symmetry check) and factorizes. Internal constructor
    /// for results that are symmetric by construction.
    pub(crate) fn from_symmetric(a: DMatrix<f64>) -> Result<Self> {
        let mat = symmetrize(a);
        let chol = Cholesky::new(mat.clone()).ok_or(SpdError::NotPositiveDefinite)?;
        Ok(Self { mat, chol })
    }

    /// Draws a reproducible random SPD matrix: `Q diag(exp(g_i)) Q^T` with
    /// standard normal `g_i` and `Q` the orthogonal factor of a QR
    /// decomposition of a standard normal matrix. With `unit_det` the result
    /// is divided by `det^(1/n)` so its determinant is 1.
    pub fn random(n: usize, seed: u64, unit_det: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_from_rng(n, &mut rng, unit_det)
    }

    /// Same as [`DenseSpd::random`] but drawing from a caller-owned RNG, so a
    /// single stream can produce a sequence of matrices.
    pub fn random_from_rng(n: usize, rng: &mut impl Rng, unit_det: bool) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let q = g.qr().q();
        let mut logs: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if unit_det {
            let mean = logs.iter().sum::<f64>() / n as f64;
            for l in logs.iter_mut() {
                *l -= mean;
            }
        }
        let d = DVector::from_iterator(n, logs.iter().map(|l| l.exp()));
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += q[(i, l)] * d[l] * q[(j, l)];
                }
                m[(i, j)] = s;
            }
        }
        Self::from_symmetric(m).expect("random SPD construction cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Lower Cholesky factor `L` with `A = L L^T`.
    pub fn cholesky(&self) -> &Cholesky<f64, Dyn> {
        &self.chol
    }

    /// `log det A`, read off the Cholesky diagonal.
    pub fn log_det(&self) -> f64 {
        let l = self.chol.l_dirty();
        2.0 * (0..self.dim()).map(|i| l[(i, i)].ln()).sum::<f64>()
    }

    /// Solves `A x = b`.
    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// The inverse as a fresh `DenseSpd`.
    pub fn inverse(&self) -> Result<DenseSpd> {
        DenseSpd::from_symmetric(self.chol.inverse())
    }

    /// Congruence transform `A M A^T` of this matrix by an invertible `A`.
    pub fn congruence(&self, a: &DMatrix<f64>) -> Result<DenseSpd> {
        DenseSpd::from_symmetric(a * &self.mat * a.transpose())
    }
}

fn symmetrize(mut a: DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_accepted() {
        let a = DMatrix::<f64>::identity(3, 3);
        assert!(DenseSpd::from_matrix(a).is_ok());
    }

    #[test]
    fn negative_pivot_is_rejected() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(
            DenseSpd::from_matrix(a),
            Err(SpdError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn indefinite_is_rejected() {
        // eigenvalues 3 and -1
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            DenseSpd::from_matrix(a),
            Err(SpdError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn asymmetry_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.1, 0.2, 2.0]);
        assert!(matches!(
            DenseSpd::from_matrix(a),
            Err(SpdError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn random_unit_det_1x1_is_one() {
        let m = DenseSpd::random(1, 42, true);
        assert_eq!(m.matrix()[(0, 0)], 1.0);
    }

    #[test]
    fn random_unit_det_has_unit_determinant() {
        let m = DenseSpd::random(3, 7, true);
        assert!(m.log_det().abs() <= 1e-9);
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = DenseSpd::random(5, 123, false);
        let b = DenseSpd::random(5, 123, false);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn log_det_matches_diagonal_product() {
        let m = DenseSpd::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![
            1.0, 2.0, 4.0,
        ])))
        .unwrap();
        assert!((m.log_det() - 8.0f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_spd_always_validates(seed in any::<u64>(), n in 1usize..=50, unit in any::<bool>()) {
            let m = DenseSpd::random(n, seed, unit);
            prop_assert!(DenseSpd::from_matrix(m.matrix().clone()).is_ok());
            if unit {
                prop_assert!(m.log_det().abs() <= 1e-9);
            }
        }
    }
}
