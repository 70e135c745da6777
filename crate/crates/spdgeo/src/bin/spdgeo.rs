//! Command-line driver: distances, geodesic interpolation, means, and the
//! determinant/midpoint/sparsity experiments, emitting CSV and JSON.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 solver error,
//! 4 mean non-convergence.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spdgeo::experiments::{
    run_midpoint_scatter, run_shrinkage, run_sparsity_experiment, t_grid,
};
use spdgeo::geometry::{
    dist_hilbert, dist_riemannian, dist_thompson, dist_thompson_sparse, geodesic_euclidean,
    geodesic_euclidean_sparse, geodesic_riemannian, geodesic_star, geodesic_star_sparse,
};
use spdgeo::io::{read_matrix, write_dense, write_sparse, SpdMatrix};
use spdgeo::means::{arithmetic_mean, inductive_mean, karcher_mean, MeanOptions, MeanReport};
use spdgeo::{DenseSpd, Result, SparseSpd, SpdError};

#[derive(Parser)]
#[command(
    name = "spdgeo",
    about = "Geometry of SPD matrices: Thompson/Hilbert/Riemannian distances, geodesics, means, and experiment drivers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Riemannian,
    Hilbert,
    Thompson,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Euclidean,
    Riemannian,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeanKind {
    Inductive,
    Karcher,
    Arithmetic,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two matrices (sparse files use the matrix-free path
    /// for the Thompson metric and are densified for the other two).
    Dist {
        #[arg(long, value_enum)]
        metric: Metric,
        file_x: PathBuf,
        file_y: PathBuf,
    },
    /// Interpolate between two matrices, writing one matrix file per grid
    /// point plus det.csv with the log-determinant trace.
    Interpolate {
        #[arg(long, value_enum)]
        kind: Kind,
        file_x: PathBuf,
        file_y: PathBuf,
        /// Number of evenly spaced t-values on [0, 1].
        #[arg(long, default_value_t = 21)]
        t_steps: usize,
        /// Explicit comma-separated t-values (overrides --t-steps).
        #[arg(long, value_delimiter = ',')]
        t_grid: Option<Vec<f64>>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Mean of one or more matrix files (all dense or all sparse).
    Mean {
        #[arg(long, value_enum)]
        kind: MeanKind,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_cycles: usize,
        /// Output matrix file.
        #[arg(long)]
        out: PathBuf,
        /// Convergence report (JSON); written next to --out by default.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Random SPD matrix to a file (dense JSON by default, Matrix Market
    /// with --sparse).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Normalize to unit determinant (dense only).
        #[arg(long)]
        unit_det: bool,
        #[arg(long)]
        sparse: bool,
        /// Stored-entry fraction for --sparse.
        #[arg(long, default_value_t = 0.02)]
        fill: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Log-determinants along the three interpolations of random
    /// unit-determinant pairs (CSV).
    ExpShrinkage {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 21)]
        t_steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalized midpoint-distance scatter with its upper bound (CSV); the
    /// final row is the bound-attaining marker spectrum.
    ExpMidpoint {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        r_max: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sparsity preservation of the inductive mean vs the Karcher mean on
    /// same-pattern and distinct-pattern sparse inputs (JSON + matrices).
    ExpSparsity {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.02)]
        fill: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_cycles: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &SpdError) -> u8 {
    match e {
        SpdError::NotSymmetric { .. }
        | SpdError::NotPositiveDefinite
        | SpdError::DimensionMismatch { .. }
        | SpdError::Parse(_)
        | SpdError::Io(_)
        | SpdError::InvalidArgument(_) => 2,
        SpdError::NoConvergence { .. }
        | SpdError::SolveFailure
        | SpdError::FactorizationFailure
        | SpdError::NonPositiveResult => 3,
        SpdError::MeanNoConvergence { .. } => 4,
    }
}

/// Plain decimal with 12 significant digits, scientific outside a sane range.
fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dist { metric, file_x, file_y } => cmd_dist(metric, &file_x, &file_y),
        Command::Interpolate {
            kind,
            file_x,
            file_y,
            t_steps,
            t_grid: grid,
            out_dir,
        } => cmd_interpolate(kind, &file_x, &file_y, t_steps, grid, &out_dir),
        Command::Mean {
            kind,
            tol,
            max_cycles,
            out,
            report,
            files,
        } => cmd_mean(kind, tol, max_cycles, &out, report.as_deref(), &files),
        Command::Gen {
            n,
            seed,
            unit_det,
            sparse,
            fill,
            out,
        } => cmd_gen(n, seed, unit_det, sparse, fill, &out),
        Command::ExpShrinkage {
            n,
            count,
            seed,
            t_steps,
            out,
        } => cmd_exp_shrinkage(n, count, seed, t_steps, &out),
        Command::ExpMidpoint {
            n,
            count,
            seed,
            r_max,
            out,
        } => cmd_exp_midpoint(n, count, seed, r_max, &out),
        Command::ExpSparsity {
            n,
            k,
            fill,
            seed,
            tol,
            max_cycles,
            out_dir,
        } => cmd_exp_sparsity(n, k, fill, seed, tol, max_cycles, &out_dir),
    }
}

fn cmd_dist(metric: Metric, file_x: &Path, file_y: &Path) -> Result<()> {
    let x = read_matrix(file_x)?;
    let y = read_matrix(file_y)?;
    let d = match (metric, &x, &y) {
        (Metric::Thompson, SpdMatrix::Sparse(a), SpdMatrix::Sparse(b)) => {
            dist_thompson_sparse(a, b)?
        }
        (Metric::Thompson, _, _) => dist_thompson(&x.into_dense()?, &y.into_dense()?)?,
        (Metric::Riemannian, _, _) => dist_riemannian(&x.into_dense()?, &y.into_dense()?)?,
        (Metric::Hilbert, _, _) => dist_hilbert(&x.into_dense()?, &y.into_dense()?)?,
    };
    println!("{}", fmt_sig(d));
    Ok(())
}

fn cmd_interpolate(
    kind: Kind,
    file_x: &Path,
    file_y: &Path,
    t_steps: usize,
    grid: Option<Vec<f64>>,
    out_dir: &Path,
) -> Result<()> {
    let ts = match grid {
        Some(g) => {
            if g.is_empty() || g.windows(2).any(|w| w[0] > w[1]) || g.iter().any(|t| !(0.0..=1.0).contains(t)) {
                return Err(SpdError::InvalidArgument(
                    "--t-grid must be sorted within [0, 1]".into(),
                ));
            }
            g
        }
        None => {
            if t_steps < 2 {
                return Err(SpdError::InvalidArgument("--t-steps must be at least 2".into()));
            }
            t_grid(t_steps)
        }
    };
    fs::create_dir_all(out_dir)?;
    let x = read_matrix(file_x)?;
    let y = read_matrix(file_y)?;
    let mut det = String::from("t,log_det\n");
    match (&x, &y, kind) {
        (SpdMatrix::Sparse(a), SpdMatrix::Sparse(b), Kind::Star) => {
            for (idx, &t) in ts.iter().enumerate() {
                let g = geodesic_star_sparse(a, b, t)?;
                write_sparse(&g, out_dir.join(format!("point_{idx:03}.mtx")))?;
                det.push_str(&format!(
                    "{},{}\n",
                    fmt_sig(t),
                    fmt_sig(g.to_dense()?.log_det())
                ));
            }
        }
        (SpdMatrix::Sparse(a), SpdMatrix::Sparse(b), Kind::Euclidean) => {
            for (idx, &t) in ts.iter().enumerate() {
                let g = geodesic_euclidean_sparse(a, b, t)?;
                write_sparse(&g, out_dir.join(format!("point_{idx:03}.mtx")))?;
                det.push_str(&format!(
                    "{},{}\n",
                    fmt_sig(t),
                    fmt_sig(g.to_dense()?.log_det())
                ));
            }
        }
        _ => {
            let xd = x.into_dense()?;
            let yd = y.into_dense()?;
            for (idx, &t) in ts.iter().enumerate() {
                let g = match kind {
                    Kind::Euclidean => geodesic_euclidean(&xd, &yd, t)?,
                    Kind::Riemannian => geodesic_riemannian(&xd, &yd, t)?,
                    Kind::Star => geodesic_star(&xd, &yd, t)?,
                };
                write_dense(&g, out_dir.join(format!("point_{idx:03}.json")))?;
                det.push_str(&format!("{},{}\n", fmt_sig(t), fmt_sig(g.log_det())));
            }
        }
    }
    fs::write(out_dir.join("det.csv"), det)?;
    Ok(())
}

#[derive(Serialize)]
struct MeanReportJson {
    kind: String,
    cycles: usize,
    final_gap: f64,
    converged: bool,
}

fn write_report<M>(
    kind: &str,
    rep: &MeanReport<M>,
    out: &Path,
    report: Option<&Path>,
) -> Result<()> {
    let path = report
        .map(PathBuf::from)
        .unwrap_or_else(|| out.with_extension("report.json"));
    let body = serde_json::to_string_pretty(&MeanReportJson {
        kind: kind.to_string(),
        cycles: rep.cycles,
        final_gap: rep.final_gap,
        converged: rep.converged,
    })
    .map_err(|e| SpdError::Parse(e.to_string()))?;
    let mut f = fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

fn cmd_mean(
    kind: MeanKind,
    tol: f64,
    max_cycles: usize,
    out: &Path,
    report: Option<&Path>,
    files: &[PathBuf],
) -> Result<()> {
    let inputs: Vec<SpdMatrix> = files.iter().map(read_matrix).collect::<Result<_>>()?;
    let all_sparse = inputs.iter().all(|m| matches!(m, SpdMatrix::Sparse(_)));
    let all_dense = inputs.iter().all(|m| matches!(m, SpdMatrix::Dense(_)));
    if !all_sparse && !all_dense {
        return Err(SpdError::InvalidArgument(
            "mean inputs must be all dense or all sparse".into(),
        ));
    }
    let opts = MeanOptions { tol, max_cycles };
    if all_sparse {
        let ys: Vec<SparseSpd> = inputs
            .into_iter()
            .map(|m| match m {
                SpdMatrix::Sparse(s) => s,
                _ => unreachable!(),
            })
            .collect();
        match kind {
            MeanKind::Inductive => {
                let rep = inductive_mean(&ys, None, &opts)?;
                write_sparse(&rep.result, out)?;
                write_report("inductive", &rep, out, report)?;
            }
            MeanKind::Arithmetic => {
                let m = arithmetic_mean(&ys)?;
                write_sparse(&m, out)?;
            }
            MeanKind::Karcher => {
                return Err(SpdError::InvalidArgument(
                    "the karcher mean runs on dense inputs only".into(),
                ))
            }
        }
    } else {
        let ys: Vec<DenseSpd> = inputs
            .into_iter()
            .map(|m| match m {
                SpdMatrix::Dense(d) => d,
                _ => unreachable!(),
            })
            .collect();
        match kind {
            MeanKind::Inductive => {
                let rep = inductive_mean(&ys, None, &opts)?;
                write_dense(&rep.result, out)?;
                write_report("inductive", &rep, out, report)?;
            }
            MeanKind::Karcher => {
                let rep = karcher_mean(&ys, &opts)?;
                write_dense(&rep.result, out)?;
                write_report("karcher", &rep, out, report)?;
            }
            MeanKind::Arithmetic => {
                let m = arithmetic_mean(&ys)?;
                write_dense(&m, out)?;
            }
        }
    }
    Ok(())
}

fn cmd_gen(n: usize, seed: u64, unit_det: bool, sparse: bool, fill: f64, out: &Path) -> Result<()> {
    if n == 0 {
        return Err(SpdError::InvalidArgument("--n must be positive".into()));
    }
    if sparse {
        let pattern = spdgeo::experiments::random_pattern(n, fill, seed);
        let m = spdgeo::experiments::random_sparse_spd(n, &pattern, seed);
        write_sparse(&m, out)?;
    } else {
        let m = DenseSpd::random(n, seed, unit_det);
        write_dense(&m, out)?;
    }
    Ok(())
}

fn cmd_exp_shrinkage(n: usize, count: usize, seed: u64, t_steps: usize, out: &Path) -> Result<()> {
    if t_steps < 2 {
        return Err(SpdError::InvalidArgument("--t-steps must be at least 2".into()));
    }
    let rows = run_shrinkage(n, count, seed, &t_grid(t_steps))?;
    let mut body = String::from("pair_id,t,log_det_euclid,log_det_riem,log_det_star\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            r.pair_id,
            fmt_sig(r.t),
            fmt_sig(r.log_det_euclid),
            fmt_sig(r.log_det_riem),
            fmt_sig(r.log_det_star)
        ));
    }
    fs::write(out, body)?;
    Ok(())
}

fn cmd_exp_midpoint(n: usize, count: usize, seed: u64, r_max: f64, out: &Path) -> Result<()> {
    if n < 2 {
        return Err(SpdError::InvalidArgument("--n must be at least 2".into()));
    }
    if !(r_max > 0.0) {
        return Err(SpdError::InvalidArgument("--r-max must be positive".into()));
    }
    let rows = run_midpoint_scatter(n, count, seed, r_max);
    let mut body = String::from("r,f,bound\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{}\n",
            fmt_sig(r.r),
            fmt_sig(r.f),
            fmt_sig(r.bound)
        ));
    }
    fs::write(out, body)?;
    Ok(())
}

fn cmd_exp_sparsity(
    n: usize,
    k: usize,
    fill: f64,
    seed: u64,
    tol: f64,
    max_cycles: usize,
    out_dir: &Path,
) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let opts = MeanOptions { tol, max_cycles };
    let exp = run_sparsity_experiment(n, k, fill, seed, &opts)?;
    for (j, m) in exp.same_inputs.iter().enumerate() {
        write_sparse(m, out_dir.join(format!("same_input_{j}.mtx")))?;
    }
    for (j, m) in exp.distinct_inputs.iter().enumerate() {
        write_sparse(m, out_dir.join(format!("distinct_input_{j}.mtx")))?;
    }
    write_sparse(&exp.same_inductive.result, out_dir.join("same_inductive.mtx"))?;
    write_dense(&exp.same_karcher.result, out_dir.join("same_karcher.json"))?;
    write_sparse(
        &exp.distinct_inductive.result,
        out_dir.join("distinct_inductive.mtx"),
    )?;
    write_dense(
        &exp.distinct_karcher.result,
        out_dir.join("distinct_karcher.json"),
    )?;
    let body = serde_json::to_string_pretty(&exp.report)
        .map_err(|e| SpdError::Parse(e.to_string()))?;
    fs::write(out_dir.join("report.json"), body + "\n")?;
    Ok(())
}
