//! Means of SPD collections: the inductive Thompson mean, the Riemannian
//! barycentre (fixed-point Karcher iteration) as a dense baseline, and the
//! arithmetic mean.
//!
//! The inductive mean is the limit of `X_{i+1} = X_i *_{1/(i+1)} Y_j`
//! cycling through the inputs. The raw sequence approaches its limit only
//! like `1/i`, so the solver runs the cycle iteration with Richardson
//! extrapolation of the cycle-start snapshots (doubling snapshot schedule,
//! the table annihilates the `1/m` and `log^j(m)/m` error terms level by
//! level) and then refines the localized limit by Newton iteration on the
//! span weights: every iterate is a linear combination of the inputs, and
//! the limit is the stationary point of the cycle-averaged drift
//! `W(X) = (1/k) sum_j d/dt|_0 (X *_t Y_j)`, an equation that closes over
//! the span coordinates. The Newton result is accepted only when it agrees
//! with the extrapolated iterates; otherwise the solver falls back to plain
//! iteration.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dense::DenseSpd;
use crate::error::{Result, SpdError};
use crate::geneig::{extreme_pair_dense, extreme_pair_krylov, krylov_max_iter, whiten, ExtremePair, KRYLOV_TOL};
use crate::geometry::SpdGeometry;
use crate::sparse::SparseSpd;

/// Stopping parameters shared by the iterative means.
#[derive(Clone, Copy, Debug)]
pub struct MeanOptions {
    pub tol: f64,
    pub max_cycles: usize,
}

impl Default for MeanOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_cycles: 100_000,
        }
    }
}

/// Convergence record of an iterative mean computation.
#[derive(Clone, Debug)]
pub struct MeanReport<M> {
    pub result: M,
    pub cycles: usize,
    pub final_gap: f64,
    pub converged: bool,
}

/// Extremes of the pencil `(Y, X)` for either operand kind.
fn pencil_extremes<M: SpdGeometry>(x: &M, y: &M) -> Result<ExtremePair>
where
    M: PencilOps,
{
    M::extremes(x, y)
}

/// Kind-specific pencil machinery the mean solvers need beyond
/// [`SpdGeometry`].
pub trait PencilOps: SpdGeometry {
    /// Extreme eigenvalues of `Y X^{-1}`.
    fn extremes(x: &Self, y: &Self) -> Result<ExtremePair>;
}

impl PencilOps for DenseSpd {
    fn extremes(x: &Self, y: &Self) -> Result<ExtremePair> {
        extreme_pair_dense(x, y)
    }
}

impl PencilOps for SparseSpd {
    fn extremes(x: &Self, y: &Self) -> Result<ExtremePair> {
        extreme_pair_krylov(x, y, KRYLOV_TOL, krylov_max_iter(x.dim()))
    }
}

/// Coefficients `(a, b)` of the star velocity
/// `d/dt|_0 (X *_t Y) = a Y + b X`.
fn velocity_coefficients(p: &ExtremePair) -> (f64, f64) {
    if p.is_degenerate() {
        let lam = p.lam_min();
        (1.0 / lam, lam.ln() - 1.0)
    } else {
        let d = p.lam_max() - p.lam_min();
        let u = (p.lam_max() / p.lam_min()).ln();
        (
            u / d,
            (p.lam_max() * p.lam_min().ln() - p.lam_min() * p.lam_max().ln()) / d,
        )
    }
}

/// The inductive Thompson mean of `ys` (Algorithm-1 limit).
///
/// `x1` seeds the cycle iteration (default `Y_1`; the limit does not depend
/// on it). `tol` bounds the reported `final_gap`; the returned matrix is the
/// refined limit, which is typically far more accurate than `tol`.
pub fn inductive_mean<M: PencilOps>(
    ys: &[M],
    x1: Option<&M>,
    opts: &MeanOptions,
) -> Result<MeanReport<M>> {
    check_family(ys)?;
    if !(opts.tol > 0.0) {
        return Err(SpdError::InvalidArgument("tolerance must be positive".into()));
    }
    if let Some(init) = x1 {
        if init.dim() != ys[0].dim() {
            return Err(SpdError::DimensionMismatch {
                left: init.dim(),
                right: ys[0].dim(),
            });
        }
    }
    let mut cycle = CycleIteration::new(ys, x1.unwrap_or(&ys[0]).clone(), opts.max_cycles);

    // Phase 1: cycle iteration with extrapolated snapshots, run until the
    // best extrapolant gap localizes the limit well enough to hand over.
    let coarse = opts.tol.max(1e-3);
    let (coarse_gap, coarse_point) = cycle.run_until(coarse)?;

    // Phase 2: Newton on the span weights, verified against the iterates.
    if let Some((refined, last_step)) = newton_refine(ys, opts.tol)? {
        let agree = refined.thompson_distance(&coarse_point)?;
        if agree <= 30.0 * coarse_gap + 1e-9 {
            return Ok(MeanReport {
                result: refined,
                cycles: cycle.cycles,
                final_gap: last_step.max(0.0),
                converged: true,
            });
        }
    }

    // Fallback: plain extrapolated iteration down to `tol`.
    let (gap, result) = cycle.run_until(opts.tol)?;
    Ok(MeanReport {
        result,
        cycles: cycle.cycles,
        final_gap: gap,
        converged: true,
    })
}

/// Algorithm-1 cycle iteration with extrapolated snapshots at doubling
/// cycle counts.
struct CycleIteration<'a, M: PencilOps> {
    ys: &'a [M],
    x: M,
    step: usize,
    cycles: usize,
    max_cycles: usize,
    next_snapshot: usize,
    snaps: Vec<M>,
    prev_diag: Vec<Option<M>>,
    best: Option<(f64, M)>,
}

impl<'a, M: PencilOps> CycleIteration<'a, M> {
    fn new(ys: &'a [M], x1: M, max_cycles: usize) -> Self {
        Self {
            ys,
            x: x1,
            step: 1,
            cycles: 0,
            max_cycles,
            next_snapshot: 8,
            snaps: Vec::new(),
            prev_diag: vec![None; MAX_LEVEL + 1],
            best: None,
        }
    }

    /// Iterates until the best extrapolant gap drops to `target`, returning
    /// that gap and extrapolant.
    fn run_until(&mut self, target: f64) -> Result<(f64, M)> {
        if let Some((gap, point)) = &self.best {
            if *gap <= target {
                return Ok((*gap, point.clone()));
            }
        }
        loop {
            if self.cycles >= self.max_cycles {
                let gap = self.best.as_ref().map(|(g, _)| *g).unwrap_or(f64::INFINITY);
                return Err(SpdError::MeanNoConvergence {
                    max_cycles: self.max_cycles,
                    gap,
                });
            }
            for y in self.ys.iter() {
                self.x = self.x.star(y, 1.0 / (self.step + 1) as f64)?;
                self.step += 1;
            }
            self.cycles += 1;
            if self.cycles < self.next_snapshot {
                continue;
            }
            self.next_snapshot *= 2;
            self.snaps.push(self.x.clone());
            if let Some((gap, extrap)) = best_extrapolant(&self.snaps, &mut self.prev_diag)? {
                let done = gap <= target;
                self.best = Some((gap, extrap));
                if done {
                    let (g, p) = self.best.as_ref().unwrap();
                    return Ok((*g, p.clone()));
                }
            }
        }
    }
}

const MAX_LEVEL: usize = 5;

/// Builds the Richardson table over the snapshots and returns the entry with
/// the smallest gap to its predecessor at the same level. Levels whose
/// combination leaves the cone are skipped.
fn best_extrapolant<M: PencilOps>(
    snaps: &[M],
    prev_diag: &mut [Option<M>],
) -> Result<Option<(f64, M)>> {
    let mut row: Vec<M> = snaps.to_vec();
    let mut best: Option<(f64, M)> = None;
    for level in 1..=MAX_LEVEL.min(snaps.len().saturating_sub(1)) {
        let mut next = Vec::with_capacity(row.len() - 1);
        let mut ok = true;
        for q in 0..row.len() - 1 {
            match M::linear_combination(&[(2.0, &row[q + 1]), (-1.0, &row[q])]) {
                Ok(m) => next.push(m),
                Err(SpdError::NotPositiveDefinite) | Err(SpdError::NonPositiveResult) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !ok {
            break;
        }
        row = next;
        let diag = row.last().expect("level <= snaps - 1").clone();
        if let Some(prev) = &prev_diag[level] {
            let gap = diag.thompson_distance(prev)?;
            if best.as_ref().map(|(g, _)| gap < *g).unwrap_or(true) {
                best = Some((gap, diag.clone()));
            }
        }
        prev_diag[level] = Some(diag);
    }
    Ok(best)
}

/// Newton iteration for the span weights `w` of the limit `X = sum w_j Y_j`:
/// solves `v(w) = 0` where `v` are the span coordinates of the averaged
/// drift `W(X)`. Returns the refined matrix and the Thompson length of the
/// final Newton step, or `None` when the iteration does not settle.
fn newton_refine<M: PencilOps>(ys: &[M], tol: f64) -> Result<Option<(M, f64)>> {
    let k = ys.len();
    let build = |w: &DVector<f64>| -> Result<M> {
        let terms: Vec<(f64, &M)> = w.iter().copied().zip(ys.iter()).collect();
        M::linear_combination(&terms)
    };
    let residual = |w: &DVector<f64>| -> Result<Option<DVector<f64>>> {
        let x = match build(w) {
            Ok(x) => x,
            Err(SpdError::NotPositiveDefinite) | Err(SpdError::NonPositiveResult) => {
                return Ok(None)
            }
            Err(e) => return Err(e),
        };
        let mut a = DVector::zeros(k);
        let mut b_sum = 0.0;
        for (j, y) in ys.iter().enumerate() {
            let p = pencil_extremes(&x, y)?;
            let (aj, bj) = velocity_coefficients(&p);
            a[j] = aj;
            b_sum += bj;
        }
        Ok(Some(a / k as f64 + w * (b_sum / k as f64)))
    };

    let mut w = DVector::from_element(k, 1.0 / k as f64);
    let mut v = match residual(&w)? {
        Some(v) => v,
        None => return Ok(None),
    };
    let step_floor = (tol * 0.1).min(1e-12);
    for _ in 0..60 {
        // Finite-difference Jacobian.
        let mut jac = DMatrix::zeros(k, k);
        let h = 1e-7 * w.amax().max(1.0);
        for j in 0..k {
            let mut wj = w.clone();
            wj[j] += h;
            let vj = match residual(&wj)? {
                Some(v) => v,
                None => return Ok(None),
            };
            jac.set_column(j, &((vj - &v) / h));
        }
        let delta = match nalgebra::linalg::SVD::new(jac, true, true).solve(&(-&v), 1e-13) {
            Ok(d) => d,
            Err(_) => return Ok(None),
        };
        // Damped update: keep the combination inside the cone and require
        // residual decrease.
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand = &w + &delta * t;
            if let Some(vc) = residual(&cand)? {
                if vc.norm() <= v.norm() * (1.0 - 0.25 * t) + 1e-300 {
                    let step_len = (&cand - &w).amax();
                    let prev = build(&w)?;
                    w = cand;
                    v = vc;
                    if step_len <= 1e-12 * w.amax().max(1.0) {
                        let result = build(&w)?;
                        let last = result.thompson_distance(&prev)?;
                        if last <= step_floor.max(1e-10).max(tol) {
                            return Ok(Some((result, last)));
                        }
                    }
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Ok(None);
        }
    }
    Ok(None)
}

fn check_family<M: SpdGeometry>(ys: &[M]) -> Result<()> {
    let first = ys
        .first()
        .ok_or_else(|| SpdError::InvalidArgument("mean of an empty family".into()))?;
    for y in ys.iter().skip(1) {
        if y.dim() != first.dim() {
            return Err(SpdError::DimensionMismatch {
                left: first.dim(),
                right: y.dim(),
            });
        }
    }
    Ok(())
}

/// Riemannian barycentre by the fixed-point iteration
/// `X <- L exp((1/k) sum_j log(L^{-1} Y_j L^{-T})) L^T`, `X = L L^T`,
/// started from the arithmetic mean. Dense only.
pub fn karcher_mean(ys: &[DenseSpd], opts: &MeanOptions) -> Result<MeanReport<DenseSpd>> {
    check_family(ys)?;
    if !(opts.tol > 0.0) {
        return Err(SpdError::InvalidArgument("tolerance must be positive".into()));
    }
    let k = ys.len() as f64;
    let mut x = arithmetic_mean(ys)?;
    for it in 1..=opts.max_cycles {
        let n = x.dim();
        let mut g = DMatrix::zeros(n, n);
        for y in ys {
            let w = whiten(&x, y)?;
            let mut eig = w.symmetric_eigen();
            if eig.eigenvalues.iter().any(|l| !(*l > 0.0)) {
                return Err(SpdError::FactorizationFailure);
            }
            for l in eig.eigenvalues.iter_mut() {
                *l = l.ln();
            }
            g += eig.recompose();
        }
        g /= k;
        let gap = g.norm();
        if gap <= opts.tol {
            return Ok(MeanReport {
                result: x,
                cycles: it,
                final_gap: gap,
                converged: true,
            });
        }
        let mut eig = g.symmetric_eigen();
        for l in eig.eigenvalues.iter_mut() {
            *l = l.exp();
        }
        let l = x.cholesky().l();
        x = DenseSpd::from_symmetric(&l * eig.recompose() * l.transpose())?;
    }
    Err(SpdError::MeanNoConvergence {
        max_cycles: opts.max_cycles,
        gap: f64::INFINITY,
    })
}

/// `(1/k) sum_j Y_j` for either operand kind.
pub fn arithmetic_mean<M: SpdGeometry>(ys: &[M]) -> Result<M> {
    check_family(ys)?;
    let c = 1.0 / ys.len() as f64;
    let terms: Vec<(f64, &M)> = ys.iter().map(|y| (c, y)).collect();
    M::linear_combination(&terms)
}

/// Entries with `|value| > 1e-12` are counted as nonzero.
pub const SPARSITY_EPS: f64 = 1e-12;

/// Where a matrix's numerically nonzero entries sit relative to a reference
/// pattern.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SparsityReport {
    /// Numerically nonzero entries outside the reference pattern.
    pub out_of_pattern: usize,
    /// Numerically nonzero entries overall.
    pub nnz: usize,
    /// `nnz / n^2`.
    pub fill: f64,
}

pub fn sparsity_report_sparse(
    m: &SparseSpd,
    reference: &BTreeSet<(usize, usize)>,
) -> SparsityReport {
    let n = m.dim();
    let mut nnz = 0;
    let mut out = 0;
    for i in 0..n {
        for (j, v) in m.row(i) {
            if v.abs() > SPARSITY_EPS {
                nnz += 1;
                if !reference.contains(&(i, j)) {
                    out += 1;
                }
            }
        }
    }
    SparsityReport {
        out_of_pattern: out,
        nnz,
        fill: nnz as f64 / (n * n) as f64,
    }
}

pub fn sparsity_report_dense(
    m: &DenseSpd,
    reference: &BTreeSet<(usize, usize)>,
) -> SparsityReport {
    let n = m.dim();
    let mut nnz = 0;
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if m.matrix()[(i, j)].abs() > SPARSITY_EPS {
                nnz += 1;
                if !reference.contains(&(i, j)) {
                    out += 1;
                }
            }
        }
    }
    SparsityReport {
        out_of_pattern: out,
        nnz,
        fill: nnz as f64 / (n * n) as f64,
    }
}

/// Relative Frobenius residual of the least-squares projection of `m` onto
/// `span{basis}`.
pub fn span_residual(m: &DenseSpd, basis: &[DenseSpd]) -> f64 {
    let k = basis.len();
    let dot = |a: &DenseSpd, b: &DenseSpd| (a.matrix().transpose() * b.matrix()).trace();
    let mut gram = DMatrix::zeros(k, k);
    let mut rhs = DVector::zeros(k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&basis[i], &basis[j]);
        }
        rhs[i] = dot(&basis[i], m);
    }
    let coeffs = nalgebra::linalg::SVD::new(gram, true, true)
        .solve(&rhs, 1e-14)
        .expect("SVD solve of a Gram system");
    let mut res = m.matrix().clone();
    for (c, b) in coeffs.iter().zip(basis) {
        res -= b.matrix() * *c;
    }
    res.norm() / m.matrix().norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist_thompson, geodesic_riemannian};
    use nalgebra::DVector;

    fn diag(vals: &[f64]) -> DenseSpd {
        DenseSpd::from_matrix(DMatrix::from_diagonal(&DVector::from_row_slice(vals))).unwrap()
    }

    fn identity(n: usize) -> DenseSpd {
        DenseSpd::from_matrix(DMatrix::identity(n, n)).unwrap()
    }

    fn random_family(n: usize, k: usize, seed: u64) -> Vec<DenseSpd> {
        (0..k as u64).map(|j| DenseSpd::random(n, seed + j, false)).collect()
    }

    #[test]
    fn single_input_returns_it() {
        let a = DenseSpd::random(4, 9, false);
        let rep = inductive_mean(&[a.clone()], None, &MeanOptions::default()).unwrap();
        assert!(rep.converged);
        assert!(dist_thompson(&rep.result, &a).unwrap() <= 1e-10);
    }

    #[test]
    fn scaled_identities_give_geometric_mean() {
        let cs = [0.5, 2.0, 4.0, 1.0];
        let ys: Vec<DenseSpd> = cs
            .iter()
            .map(|c| DenseSpd::from_symmetric(DMatrix::identity(3, 3) * *c).unwrap())
            .collect();
        let rep = inductive_mean(&ys, None, &MeanOptions::default()).unwrap();
        let expect = cs.iter().product::<f64>().powf(0.25);
        let got = rep.result.matrix()[(0, 0)];
        assert!((got - expect).abs() <= 1e-8 * expect);
        assert!((rep.result.matrix()[(1, 1)] - got).abs() <= 1e-10);
    }

    #[test]
    fn initializer_independence() {
        let ys = random_family(5, 5, 700);
        let opts = MeanOptions::default();
        let a = inductive_mean(&ys, None, &opts).unwrap();
        let arith = arithmetic_mean(&ys).unwrap();
        let b = inductive_mean(&ys, Some(&arith), &opts).unwrap();
        assert!(dist_thompson(&a.result, &b.result).unwrap() <= 1e-6);
    }

    #[test]
    fn permutation_invariance() {
        let ys = random_family(5, 5, 800);
        let opts = MeanOptions::default();
        let a = inductive_mean(&ys, None, &opts).unwrap();
        let perm: Vec<DenseSpd> = [2usize, 0, 4, 1, 3].iter().map(|i| ys[*i].clone()).collect();
        let b = inductive_mean(&perm, None, &opts).unwrap();
        assert!(dist_thompson(&a.result, &b.result).unwrap() <= 10.0 * opts.tol);
    }

    #[test]
    fn affine_equivariance() {
        let ys = random_family(4, 4, 900);
        let opts = MeanOptions::default();
        let a = {
            let q = DenseSpd::random(4, 950, false).into_matrix().qr().q();
            q * DMatrix::from_diagonal(&DVector::from_fn(4, |i, _| (0.4 * i as f64 - 0.6).exp()))
        };
        let m = inductive_mean(&ys, None, &opts).unwrap().result;
        let ys_c: Vec<DenseSpd> = ys.iter().map(|y| y.congruence(&a).unwrap()).collect();
        let mc = inductive_mean(&ys_c, None, &opts).unwrap().result;
        let expect = m.congruence(&a).unwrap();
        let rel = (mc.matrix() - expect.matrix()).norm() / expect.matrix().norm();
        assert!(rel <= 1e-6);
    }

    #[test]
    fn joint_homogeneity() {
        let ys = random_family(4, 4, 1000);
        let cs = [0.5, 3.0, 1.25, 2.0];
        let scaled: Vec<DenseSpd> = ys
            .iter()
            .zip(cs)
            .map(|(y, c)| DenseSpd::from_symmetric(y.matrix() * c).unwrap())
            .collect();
        let opts = MeanOptions::default();
        let m = inductive_mean(&ys, None, &opts).unwrap().result;
        let ms = inductive_mean(&scaled, None, &opts).unwrap().result;
        let factor = cs.iter().product::<f64>().powf(1.0 / 4.0);
        let rel = (ms.matrix() - m.matrix() * factor).norm() / (m.matrix().norm() * factor);
        assert!(rel <= 1e-7);
    }

    #[test]
    fn result_lies_in_span() {
        let ys = random_family(6, 5, 1100);
        let m = inductive_mean(&ys, None, &MeanOptions::default()).unwrap().result;
        assert!(span_residual(&m, &ys) <= 1e-7);
    }

    #[test]
    fn tiny_cycle_budget_does_not_converge() {
        let ys = random_family(5, 5, 1200);
        let r = inductive_mean(
            &ys,
            None,
            &MeanOptions {
                tol: 1e-10,
                max_cycles: 4,
            },
        );
        assert!(matches!(r, Err(SpdError::MeanNoConvergence { .. })));
    }

    #[test]
    fn sparse_same_pattern_mean_keeps_pattern() {
        // pentadiagonal pattern shared by three inputs
        let n = 24;
        let mk = |seed: u64| {
            let mut entries = Vec::new();
            let mut s = seed;
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            };
            for i in 0..n {
                entries.push((i, i, 3.0 + next()));
                if i + 1 < n {
                    entries.push((i + 1, i, next()));
                }
                if i + 2 < n {
                    entries.push((i + 2, i, next()));
                }
            }
            SparseSpd::from_entries(n, &entries).unwrap()
        };
        let ys = vec![mk(1), mk(2), mk(3)];
        let pattern = ys[0].pattern();
        let rep = inductive_mean(&ys, None, &MeanOptions::default()).unwrap();
        let sr = sparsity_report_sparse(&rep.result, &pattern);
        assert_eq!(sr.out_of_pattern, 0);
        // and the dense Karcher mean of the same inputs does leave the pattern
        let dense: Vec<DenseSpd> = ys.iter().map(|y| y.to_dense().unwrap()).collect();
        let km = karcher_mean(&dense, &MeanOptions { tol: 1e-9, max_cycles: 200 }).unwrap();
        let kr = sparsity_report_dense(&km.result, &pattern);
        assert!(kr.out_of_pattern > 0);
    }

    #[test]
    fn karcher_two_points_is_riemannian_midpoint() {
        let x = DenseSpd::random(5, 1300, false);
        let y = DenseSpd::random(5, 1301, false);
        let rep = karcher_mean(
            &[x.clone(), y.clone()],
            &MeanOptions { tol: 1e-12, max_cycles: 500 },
        )
        .unwrap();
        let mid = geodesic_riemannian(&x, &y, 0.5).unwrap();
        let rel = (rep.result.matrix() - mid.matrix()).norm() / mid.matrix().norm();
        assert!(rel <= 1e-8);
    }

    #[test]
    fn karcher_of_equal_inputs_stops_immediately() {
        let x = DenseSpd::random(4, 1400, false);
        let rep = karcher_mean(
            &[x.clone(), x.clone(), x.clone()],
            &MeanOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.cycles, 1);
        assert!((rep.result.matrix() - x.matrix()).norm() <= 1e-10);
    }

    #[test]
    fn karcher_commuting_diagonals_geometric_mean() {
        let ys = vec![diag(&[1.0, 8.0]), diag(&[4.0, 2.0]), diag(&[2.0, 4.0])];
        let rep = karcher_mean(&ys, &MeanOptions { tol: 1e-12, max_cycles: 500 }).unwrap();
        let e0 = (1.0f64 * 4.0 * 2.0).powf(1.0 / 3.0);
        let e1 = (8.0f64 * 2.0 * 4.0).powf(1.0 / 3.0);
        assert!((rep.result.matrix()[(0, 0)] - e0).abs() <= 1e-9);
        assert!((rep.result.matrix()[(1, 1)] - e1).abs() <= 1e-9);
    }

    #[test]
    fn arithmetic_mean_examples() {
        let m = arithmetic_mean(&[identity(2), diag(&[3.0, 3.0])]).unwrap();
        assert!((m.matrix() - DMatrix::identity(2, 2) * 2.0).norm() <= 1e-15);
        let x = DenseSpd::random(3, 1500, false);
        let one = arithmetic_mean(std::slice::from_ref(&x)).unwrap();
        assert!((one.matrix() - x.matrix()).norm() <= 1e-15);
    }

    #[test]
    fn arithmetic_mean_sparse_union_pattern() {
        let a = SparseSpd::from_entries(3, &[(0, 0, 2.0), (1, 1, 2.0), (2, 2, 2.0), (0, 1, 0.3)])
            .unwrap();
        let b = SparseSpd::from_entries(3, &[(0, 0, 2.0), (1, 1, 2.0), (2, 2, 2.0), (1, 2, 0.3)])
            .unwrap();
        let m = arithmetic_mean(&[a.clone(), b.clone()]).unwrap();
        let mut union = a.pattern();
        union.extend(b.pattern());
        assert_eq!(m.pattern(), union);
    }

    #[test]
    fn inductive_two_identical_scaled_inputs() {
        // (I, 4I): joint homogeneity forces (1*4)^(1/2) * I = 2I
        let ys = vec![identity(3), diag(&[4.0, 4.0, 4.0])];
        let rep = inductive_mean(&ys, None, &MeanOptions::default()).unwrap();
        assert!((rep.result.matrix() - DMatrix::identity(3, 3) * 2.0).norm() <= 1e-7);
    }
}
