//! Determinant evolution along interpolations and the distance between the
//! Riemannian and Thompson-star midpoints, all as closed forms over the
//! generalized spectrum, plus the spectrum sampler behind the scatter
//! experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseSpd;
use crate::error::Result;
use crate::geneig::Spectrum;
use crate::geometry::{dist_riemannian, geodesic_riemannian, geodesic_star};

/// Midpoint comparison derived from a spectrum: the Riemannian distance
/// `d_rt` between the two geodesic midpoints, the Thompson distance `r` of
/// the underlying pair, the upper bound `sqrt(n-2) log cosh(r/2)`, and the
/// normalized distance `f = d_rt / r`.
#[derive(Clone, Copy, Debug)]
pub struct MidpointReport {
    pub d_rt: f64,
    pub r: f64,
    pub upper: f64,
    pub f: f64,
}

/// `det((X+Y)/2) / sqrt(det XY)` as a function of the spectrum:
/// `prod_i (sqrt(lam_i) + 1/sqrt(lam_i)) / 2`. Always `>= 1`; equality only
/// on the all-ones spectrum.
pub fn det_euclid_midpoint_factor(spec: &Spectrum) -> f64 {
    spec.lams()
        .iter()
        .map(|l| {
            let s = l.sqrt();
            0.5 * (s + 1.0 / s)
        })
        .product()
}

/// `det(X *_{1/2} Y) / sqrt(det XY)`:
/// `prod_i (sqrt(lam_i) + sqrt(lam_max lam_min)/sqrt(lam_i)) / (sqrt(lam_max) + sqrt(lam_min))`.
/// Always `<= 1`; equality exactly when every eigenvalue is extreme.
pub fn det_star_midpoint_factor(spec: &Spectrum) -> f64 {
    let sm = spec.lam_min().sqrt();
    let sq = spec.lam_max().sqrt();
    let geo = sm * sq;
    let denom = sm + sq;
    spec.lams()
        .iter()
        .map(|l| {
            if *l == spec.lam_min() || *l == spec.lam_max() {
                return 1.0;
            }
            let s = l.sqrt();
            (s + geo / s) / denom
        })
        .product()
}

/// `log((sqrt(lam) + sqrt(lam_max lam_min)/sqrt(lam)) / (sqrt(lam_max)+sqrt(lam_min)))`,
/// exactly zero at the extremes.
fn log_midpoint_factor(lam: f64, lam_min: f64, lam_max: f64) -> f64 {
    if lam == lam_min || lam == lam_max {
        return 0.0;
    }
    let s = lam.sqrt();
    let sm = lam_min.sqrt();
    let sq = lam_max.sqrt();
    ((s + sm * sq / s) / (sm + sq)).ln()
}

/// `log cosh x` without overflow for large `x`.
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Upper bound of the normalized midpoint distance: `sqrt(n-2) log cosh(r/2) / r`
/// (zero at `r = 0` and for `n = 2`).
pub fn f_upper_bound(n: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    ((n as f64 - 2.0).max(0.0)).sqrt() * log_cosh(0.5 * r) / r
}

/// Closed-form midpoint comparison on a spectrum.
pub fn midpoint_distance(spec: &Spectrum) -> MidpointReport {
    let lm = spec.lam_min();
    let lq = spec.lam_max();
    let d_rt = spec
        .lams()
        .iter()
        .map(|l| log_midpoint_factor(*l, lm, lq).powi(2))
        .sum::<f64>()
        .sqrt();
    let r = spec
        .lams()
        .iter()
        .map(|l| l.ln().abs())
        .fold(0.0, f64::max);
    let n = spec.len();
    let upper = ((n as f64 - 2.0).max(0.0)).sqrt() * log_cosh(0.5 * r);
    let f = if r > 0.0 { d_rt / r } else { 0.0 };
    MidpointReport { d_rt, r, upper, f }
}

/// The same distance computed the expensive way: build both midpoints and
/// measure `d_R` between them. Kept as the independent route for the closed
/// form.
pub fn midpoint_distance_direct(x: &DenseSpd, y: &DenseSpd) -> Result<f64> {
    let riem = geodesic_riemannian(x, y, 0.5)?;
    let star = geodesic_star(x, y, 0.5)?;
    dist_riemannian(&riem, &star)
}

/// Draws `count` spectra with `max_i |log lam_i| = r` exactly: one
/// coordinate pinned to `e^r` or `e^{-r}` by a fair coin, the rest
/// log-uniform on `[-r, r]`. Deterministic per `(seed, index)`, so sample
/// `index` can be regenerated independently of the batch.
pub fn sample_spectra(n: usize, r: f64, count: usize, seed: u64) -> Vec<Spectrum> {
    (0..count).map(|i| sample_spectrum(n, r, seed, i as u64)).collect()
}

/// Single spectrum of the family drawn by [`sample_spectra`].
pub fn sample_spectrum(n: usize, r: f64, seed: u64, index: u64) -> Spectrum {
    assert!(n >= 2, "spectrum sampling needs n >= 2");
    assert!(r >= 0.0, "radius must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut logs = Vec::with_capacity(n);
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    logs.push(sign * r);
    for _ in 1..n {
        logs.push(if r > 0.0 { rng.gen_range(-r..=r) } else { 0.0 });
    }
    Spectrum::new(logs.into_iter().map(f64::exp).collect()).expect("positive by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geneig::full_spectrum;
    use crate::geometry::geodesic_euclidean;
    use nalgebra::{DMatrix, DVector};

    fn spec(vals: &[f64]) -> Spectrum {
        Spectrum::new(vals.to_vec()).unwrap()
    }

    fn diag(vals: &[f64]) -> DenseSpd {
        DenseSpd::from_matrix(DMatrix::from_diagonal(&DVector::from_row_slice(vals))).unwrap()
    }

    fn identity(n: usize) -> DenseSpd {
        DenseSpd::from_matrix(DMatrix::identity(n, n)).unwrap()
    }

    #[test]
    fn euclid_factor_is_one_on_equal_pair() {
        assert_eq!(det_euclid_midpoint_factor(&spec(&[1.0, 1.0, 1.0])), 1.0);
    }

    #[test]
    fn euclid_factor_matches_direct_determinant_2x2() {
        // X = I, Y = diag(4, 1/4): midpoint diag(5/2, 5/8), det 25/16
        let s = spec(&[4.0, 0.25]);
        let factor = det_euclid_midpoint_factor(&s);
        assert!((factor - 25.0 / 16.0).abs() < 1e-14);
        let x = identity(2);
        let y = diag(&[4.0, 0.25]);
        let mid = geodesic_euclidean(&x, &y, 0.5).unwrap();
        let sqrt_det = (0.5 * (x.log_det() + y.log_det())).exp();
        assert!((mid.log_det().exp() - sqrt_det * factor).abs() < 1e-12);
    }

    #[test]
    fn euclid_factor_matches_direct_determinant_3x3() {
        let s = spec(&[1.0, 2.0, 4.0]);
        let factor = det_euclid_midpoint_factor(&s);
        let x = identity(3);
        let y = diag(&[1.0, 2.0, 4.0]);
        let mid = geodesic_euclidean(&x, &y, 0.5).unwrap();
        let direct = mid.log_det().exp();
        let expect = (0.5 * y.log_det()).exp() * factor;
        assert!((direct - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn star_factor_is_one_when_all_eigenvalues_extreme() {
        let s = spec(&[1.0, 4.0, 4.0]);
        assert_eq!(det_star_midpoint_factor(&s), 1.0);
        // direct: X = I, Y = diag(4,4,1): star midpoint (Y + 2I)/3
        let x = identity(3);
        let y = diag(&[4.0, 4.0, 1.0]);
        let mid = geodesic_star(&x, &y, 0.5).unwrap();
        let expect = (0.5 * y.log_det()).exp(); // sqrt(det XY) = det(Y)^(1/2) = 4
        assert!((mid.log_det().exp() - expect).abs() < 1e-12);
        assert!((expect - 4.0).abs() < 1e-12);
    }

    #[test]
    fn star_factor_matches_direct_determinant() {
        let s = spec(&[1.0, 2.0, 4.0]);
        let factor = det_star_midpoint_factor(&s);
        assert!((factor - 0.94281).abs() < 1e-5);
        let x = identity(3);
        let y = diag(&[1.0, 2.0, 4.0]);
        let mid = geodesic_star(&x, &y, 0.5).unwrap();
        // star midpoint = (Y + 2I)/3 = diag(1, 4/3, 2), det 8/3
        assert!((mid.log_det().exp() - 8.0 / 3.0).abs() < 1e-12);
        let expect = (0.5 * y.log_det()).exp() * factor;
        assert!((mid.log_det().exp() - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn star_factor_is_one_on_constant_spectrum() {
        for c in [0.1, 1.0, 7.3] {
            assert_eq!(det_star_midpoint_factor(&spec(&[c, c, c, c])), 1.0);
        }
    }

    #[test]
    fn swelling_and_shrinkage_bounds_hold() {
        for seed in 0..200u64 {
            let s = sample_spectrum(5, 2.0, 99, seed);
            assert!(det_euclid_midpoint_factor(&s) >= 1.0);
            assert!(det_star_midpoint_factor(&s) <= 1.0);
        }
    }

    #[test]
    fn midpoint_distance_vanishes_for_n2() {
        for vals in [[4.0, 0.125], [1.0, 9.0], [0.3, 0.7]] {
            let rep = midpoint_distance(&spec(&vals));
            assert_eq!(rep.d_rt, 0.0);
            assert_eq!(rep.upper, 0.0);
            assert_eq!(rep.f, 0.0);
        }
    }

    #[test]
    fn midpoint_distance_attains_bound_on_marker_spectrum() {
        let r = 2.0;
        let s = spec(&[(-r).exp(), 1.0, r.exp()]);
        let rep = midpoint_distance(&s);
        assert!((rep.r - r).abs() < 1e-12);
        assert!((rep.d_rt - log_cosh(1.0)).abs() < 1e-12);
        assert!((rep.d_rt - 0.433781).abs() < 1e-5);
        assert!((rep.d_rt - rep.upper).abs() < 1e-10);
    }

    #[test]
    fn midpoint_distance_zero_on_two_valued_spectra() {
        let rep = midpoint_distance(&spec(&[0.5, 0.5, 2.0, 2.0, 2.0]));
        assert_eq!(rep.d_rt, 0.0);
    }

    #[test]
    fn direct_midpoint_distance_zero_for_2x2_and_equal() {
        for seed in 0..10u64 {
            let x = DenseSpd::random(2, 300 + seed, false);
            let y = DenseSpd::random(2, 400 + seed, false);
            assert!(midpoint_distance_direct(&x, &y).unwrap() <= 1e-9);
        }
        let x = DenseSpd::random(5, 17, false);
        assert!(midpoint_distance_direct(&x, &x).unwrap() <= 1e-9);
    }

    #[test]
    fn direct_matches_closed_form() {
        for seed in 0..10u64 {
            let x = DenseSpd::random(6, 500 + seed, false);
            let y = DenseSpd::random(6, 600 + seed, false);
            let direct = midpoint_distance_direct(&x, &y).unwrap();
            let closed = midpoint_distance(&full_spectrum(&x, &y).unwrap()).d_rt;
            assert!((direct - closed).abs() <= 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn bound_sharpness_across_radii() {
        for r in [0.5, 1.0, 2.0, 5.0] {
            for n in [3usize, 5, 20] {
                let mut vals = vec![1.0; n];
                vals[0] = (-r).exp();
                vals[n - 1] = r.exp();
                let rep = midpoint_distance(&spec(&vals));
                let expect = ((n as f64) - 2.0).sqrt() * log_cosh(0.5 * r);
                assert!((rep.d_rt - expect).abs() <= 1e-10, "r={r} n={n}");
                assert!((rep.d_rt - rep.upper).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn sampled_spectra_pin_the_radius() {
        let r = 3.0;
        for s in sample_spectra(6, r, 50, 7) {
            let got = s.lams().iter().map(|l| l.ln().abs()).fold(0.0, f64::max);
            assert!((got - r).abs() <= 1e-12);
            let rep = midpoint_distance(&s);
            assert!(rep.f <= f_upper_bound(6, rep.r) + 1e-9);
        }
    }

    #[test]
    fn zero_radius_spectra_are_all_ones() {
        for s in sample_spectra(4, 0.0, 5, 3) {
            assert!(s.lams().iter().all(|l| *l == 1.0));
        }
    }

    #[test]
    fn sampling_is_deterministic_per_index() {
        let a = sample_spectrum(5, 2.0, 42, 7);
        let batch = sample_spectra(5, 2.0, 10, 42);
        assert_eq!(a.lams(), batch[7].lams());
    }
}
