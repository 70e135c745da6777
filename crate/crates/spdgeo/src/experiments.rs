//! Experiment drivers behind the command-line interface: log-determinant
//! evolution along the three interpolations over random unit-determinant
//! pairs, the normalized midpoint-distance scatter against its bound, and
//! sparsity preservation of the means. All drivers are deterministic per
//! seed, with one RNG stream per sample so batches can be evaluated in any
//! order.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{f_upper_bound, midpoint_distance, sample_spectrum};
use crate::dense::DenseSpd;
use crate::error::{Result, SpdError};
use crate::geneig::Spectrum;
use crate::geometry::{geodesic_euclidean, geodesic_riemannian, geodesic_star};
use crate::means::{
    arithmetic_mean, inductive_mean, karcher_mean, sparsity_report_dense,
    sparsity_report_sparse, MeanOptions, MeanReport, SparsityReport,
};
use crate::sparse::SparseSpd;

/// `steps` evenly spaced values covering `[0, 1]` inclusive.
pub fn t_grid(steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a t-grid needs at least the two endpoints");
    (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect()
}

/// One row of the shrinkage experiment table.
#[derive(Clone, Copy, Debug)]
pub struct ShrinkageRow {
    pub pair_id: usize,
    pub t: f64,
    pub log_det_euclid: f64,
    pub log_det_riem: f64,
    pub log_det_star: f64,
}

/// Log-determinants along the Euclidean, Riemannian, and Thompson-star
/// interpolations of `count` random unit-determinant pairs at dimension `n`.
pub fn run_shrinkage(n: usize, count: usize, seed: u64, ts: &[f64]) -> Result<Vec<ShrinkageRow>> {
    let mut rows = Vec::with_capacity(count * ts.len());
    for pair_id in 0..count {
        let (x, y) = random_unit_det_pair(n, seed, pair_id as u64);
        for &t in ts {
            rows.push(ShrinkageRow {
                pair_id,
                t,
                log_det_euclid: geodesic_euclidean(&x, &y, t)?.log_det(),
                log_det_riem: geodesic_riemannian(&x, &y, t)?.log_det(),
                log_det_star: geodesic_star(&x, &y, t)?.log_det(),
            });
        }
    }
    Ok(rows)
}

/// The `pair_id`-th unit-determinant pair of the stream seeded by `seed`.
pub fn random_unit_det_pair(n: usize, seed: u64, pair_id: u64) -> (DenseSpd, DenseSpd) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pair_id);
    let x = DenseSpd::random_from_rng(n, &mut rng, true);
    let y = DenseSpd::random_from_rng(n, &mut rng, true);
    (x, y)
}

/// One point of the midpoint-distance scatter.
#[derive(Clone, Copy, Debug)]
pub struct MidpointRow {
    pub r: f64,
    pub f: f64,
    pub bound: f64,
}

/// Normalized midpoint distances for `count` spectra with radii spread
/// evenly over `(0, r_max]`, followed by one marker row evaluated on the
/// bound-attaining spectrum `(e^-r, 1, ..., 1, e^r)` at `r = r_max`.
pub fn run_midpoint_scatter(n: usize, count: usize, seed: u64, r_max: f64) -> Vec<MidpointRow> {
    let mut rows = Vec::with_capacity(count + 1);
    for i in 0..count {
        let r = r_max * (i + 1) as f64 / count as f64;
        let spec = sample_spectrum(n, r, seed, i as u64);
        let rep = midpoint_distance(&spec);
        rows.push(MidpointRow {
            r: rep.r,
            f: rep.f,
            bound: f_upper_bound(n, rep.r),
        });
    }
    rows.push(marker_row(n, r_max));
    rows
}

/// The bound-attaining spectrum row at radius `r`.
pub fn marker_row(n: usize, r: f64) -> MidpointRow {
    let mut vals = vec![1.0; n];
    vals[0] = (-r).exp();
    vals[n - 1] = r.exp();
    let rep = midpoint_distance(&Spectrum::new(vals).expect("positive spectrum"));
    MidpointRow {
        r: rep.r,
        f: rep.f,
        bound: f_upper_bound(n, rep.r),
    }
}

/// A random symmetric pattern: the full diagonal plus uniformly drawn
/// off-diagonal pairs until roughly `fill * n^2` entries are stored.
pub fn random_pattern(n: usize, fill: f64, seed: u64) -> BTreeSet<(usize, usize)> {
    let target = ((fill * (n * n) as f64).round() as usize).max(n);
    let pairs = target.saturating_sub(n) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pattern = BTreeSet::new();
    for i in 0..n {
        pattern.insert((i, i));
    }
    let mut placed = 0;
    while placed < pairs {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || pattern.contains(&(i, j)) {
            continue;
        }
        pattern.insert((i, j));
        pattern.insert((j, i));
        placed += 1;
    }
    pattern
}

/// Random SPD values on a fixed pattern: off-diagonals uniform in
/// `[-1, 1]`, diagonals dominant so positive definiteness is structural.
pub fn random_sparse_spd(n: usize, pattern: &BTreeSet<(usize, usize)>, seed: u64) -> SparseSpd {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut rowsum = vec![0.0f64; n];
    for &(i, j) in pattern.iter() {
        if i < j {
            let v = rng.gen_range(-1.0..1.0);
            entries.push((i, j, v));
            rowsum[i] += v.abs();
            rowsum[j] += v.abs();
        }
    }
    for i in 0..n {
        entries.push((i, i, rowsum[i] + 1.0 + rng.gen_range(0.0..1.0)));
    }
    SparseSpd::from_entries(n, &entries).expect("diagonally dominant construction is SPD")
}

/// Summary of one mean within a sparsity scenario.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeanSummary {
    pub cycles: usize,
    pub final_gap: f64,
    pub converged: bool,
    pub sparsity: SparsityReport,
}

/// One sparsity scenario: inputs, their reference pattern, and both means.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub reference_fill: f64,
    pub inductive: MeanSummary,
    pub karcher: MeanSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityExperimentReport {
    pub n: usize,
    pub k: usize,
    pub fill: f64,
    pub seed: u64,
    pub same_pattern: ScenarioReport,
    pub distinct_pattern: ScenarioReport,
}

/// Everything the sparsity experiment produces, matrices included so the
/// caller can write them out.
pub struct SparsityExperiment {
    pub same_inputs: Vec<SparseSpd>,
    pub same_inductive: MeanReport<SparseSpd>,
    pub same_karcher: MeanReport<DenseSpd>,
    pub distinct_inputs: Vec<SparseSpd>,
    pub distinct_inductive: MeanReport<SparseSpd>,
    pub distinct_karcher: MeanReport<DenseSpd>,
    pub report: SparsityExperimentReport,
}

/// Runs both sparsity scenarios: `k` inputs sharing one random pattern, and
/// `k` inputs with distinct patterns. The inductive mean is taken on the
/// sparse path; the Karcher baseline runs on densified inputs.
pub fn run_sparsity_experiment(
    n: usize,
    k: usize,
    fill: f64,
    seed: u64,
    opts: &MeanOptions,
) -> Result<SparsityExperiment> {
    if k == 0 {
        return Err(SpdError::InvalidArgument("need at least one input".into()));
    }
    let karcher_opts = MeanOptions {
        tol: 1e-9,
        max_cycles: 500,
    };

    let shared = random_pattern(n, fill, seed);
    let same_inputs: Vec<SparseSpd> = (0..k)
        .map(|j| random_sparse_spd(n, &shared, seed.wrapping_add(1 + j as u64)))
        .collect();
    let same_inductive = inductive_mean(&same_inputs, None, opts)?;
    let same_dense: Vec<DenseSpd> = same_inputs
        .iter()
        .map(|m| m.to_dense())
        .collect::<Result<_>>()?;
    let same_karcher = karcher_mean(&same_dense, &karcher_opts)?;
    let same_report = ScenarioReport {
        reference_fill: shared.len() as f64 / (n * n) as f64,
        inductive: MeanSummary {
            cycles: same_inductive.cycles,
            final_gap: same_inductive.final_gap,
            converged: same_inductive.converged,
            sparsity: sparsity_report_sparse(&same_inductive.result, &shared),
        },
        karcher: MeanSummary {
            cycles: same_karcher.cycles,
            final_gap: same_karcher.final_gap,
            converged: same_karcher.converged,
            sparsity: sparsity_report_dense(&same_karcher.result, &shared),
        },
    };

    let patterns: Vec<BTreeSet<(usize, usize)>> = (0..k)
        .map(|j| random_pattern(n, fill, seed.wrapping_add(1000 + j as u64)))
        .collect();
    let mut union = BTreeSet::new();
    for p in &patterns {
        union.extend(p.iter().copied());
    }
    let distinct_inputs: Vec<SparseSpd> = patterns
        .iter()
        .enumerate()
        .map(|(j, p)| random_sparse_spd(n, p, seed.wrapping_add(2000 + j as u64)))
        .collect();
    let distinct_inductive = inductive_mean(&distinct_inputs, None, opts)?;
    let distinct_dense: Vec<DenseSpd> = distinct_inputs
        .iter()
        .map(|m| m.to_dense())
        .collect::<Result<_>>()?;
    let distinct_karcher = karcher_mean(&distinct_dense, &karcher_opts)?;
    let distinct_report = ScenarioReport {
        reference_fill: union.len() as f64 / (n * n) as f64,
        inductive: MeanSummary {
            cycles: distinct_inductive.cycles,
            final_gap: distinct_inductive.final_gap,
            converged: distinct_inductive.converged,
            sparsity: sparsity_report_sparse(&distinct_inductive.result, &union),
        },
        karcher: MeanSummary {
            cycles: distinct_karcher.cycles,
            final_gap: distinct_karcher.final_gap,
            converged: distinct_karcher.converged,
            sparsity: sparsity_report_dense(&distinct_karcher.result, &union),
        },
    };

    Ok(SparsityExperiment {
        same_inputs,
        same_inductive,
        same_karcher,
        distinct_inputs,
        distinct_inductive,
        distinct_karcher,
        report: SparsityExperimentReport {
            n,
            k,
            fill,
            seed,
            same_pattern: same_report,
            distinct_pattern: distinct_report,
        },
    })
}

/// Arithmetic-mean helper re-exported for the CLI `mean` command.
pub fn arithmetic_mean_dense(ys: &[DenseSpd]) -> Result<DenseSpd> {
    arithmetic_mean(ys)
}
