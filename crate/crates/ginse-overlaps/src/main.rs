//! Command-line interface: exact-formula evaluation, Monte Carlo
//! estimation and validation campaigns with reproducible configs and
//! CSV/JSON output.

use clap::{Args, Parser, Subcommand};
use ginse::ensemble::{sample_ginse, sample_t, EnsembleParams, RngStream};
use ginse::exact::{density_exact, diag_overlap_exact, offdiag_overlap_exact, ConditionalKind};
use ginse::{asymptotics, C64};
use ginse_overlaps::config::FileConfig;
use ginse_overlaps::estimate::{
    estimate_diag_mc, estimate_offdiag_mc, DiagRoute, EstimateMeta, EstimateRow, EstimateTable,
    OffdiagEstKind,
};
use ginse_overlaps::grid::BinGrid;
use ginse_overlaps::output::{report_to_json, tables_to_json, write_csv, write_output, Format};
use ginse_overlaps::suites::validate_all;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "ginse-overlaps",
    about = "Eigenvector overlap statistics for quaternionic Ginibre ensembles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Number of eigenvalue pairs N
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Zero-mode parameter alpha (> -1)
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Scale sigma^2 (> 0)
    #[arg(long = "sigma-sq", default_value_t = 1.0)]
    sigma_sq: f64,
    /// Use the bulk convention sigma^2 = 1/N (overrides --sigma-sq)
    #[arg(long = "bulk-scaling", default_value_t = false)]
    bulk_scaling: bool,
    /// Monte Carlo sample count
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Random seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sharded sampling
    #[arg(long)]
    threads: Option<usize>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<String>,
    /// Grid resolution per axis
    #[arg(long = "grid-n", default_value_t = 24)]
    grid_n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks on sampled matrices
    SampleCheck(Common),
    /// Exact conditional diagonal overlap on a grid or at --x1
    ExactDiag {
        #[command(flatten)]
        common: Common,
        /// Evaluation point "re,im" (grid over the bulk region when omitted)
        #[arg(long)]
        x1: Option<String>,
    },
    /// Exact conditional off-diagonal overlap against a fixed --x2
    ExactOffdiag {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x1: Option<String>,
        /// Second argument "re,im"
        #[arg(long, default_value = "-0.4,0.4")]
        x2: String,
        /// plain or barred
        #[arg(long, default_value = "plain")]
        kind: String,
    },
    /// Exact one-point density on a grid or at --x1
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x1: Option<String>,
    },
    /// Monte Carlo estimate of the diagonal overlap
    McDiag {
        #[command(flatten)]
        common: Common,
        /// direct, schur or jpdf
        #[arg(long, default_value = "direct")]
        route: String,
    },
    /// Monte Carlo estimate of the off-diagonal overlap
    McOffdiag {
        #[command(flatten)]
        common: Common,
        /// plain or barred
        #[arg(long, default_value = "plain")]
        kind: String,
    },
    /// Bulk-limit formulas on a grid
    Asym {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "-0.4,0.4")]
        x2: String,
    },
    /// Origin-limit ratio: closed form and extrapolated exact ratio
    Origin(Common),
    /// Run validation suites; nonzero exit on failure
    Validate {
        #[command(flatten)]
        common: Common,
        /// Suite name filters (substring match); all suites when empty
        #[arg(long)]
        suites: Vec<String>,
    },
}

fn parse_point(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"re,im\", got {s:?}"));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| format!("bad re in {s:?}: {e}"))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| format!("bad im in {s:?}: {e}"))?;
    Ok(C64::new(re, im))
}

struct Run {
    params: EnsembleParams,
    samples: u64,
    seed: u64,
    threads: usize,
    out: Option<String>,
    format: Format,
    grid_n: usize,
    suites: Vec<String>,
}

fn resolve(common: &Common) -> Result<Run, String> {
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    // flags at their defaults yield to config-file values
    let n = if common.n != 4 { common.n } else { file.n.unwrap_or(common.n) };
    let alpha = if common.alpha != 0.0 { common.alpha } else { file.alpha.unwrap_or(common.alpha) };
    let mut sigma_sq =
        if common.sigma_sq != 1.0 { common.sigma_sq } else { file.sigma_sq.unwrap_or(common.sigma_sq) };
    if common.bulk_scaling || file.bulk_scaling.unwrap_or(false) {
        sigma_sq = 1.0 / n as f64;
    }
    let samples =
        if common.samples != 10_000 { common.samples } else { file.samples.unwrap_or(common.samples) };
    let seed = if common.seed != 1 { common.seed } else { file.seed.unwrap_or(common.seed) };
    let threads = common
        .threads
        .or(file.threads)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    let out = common.out.clone().or(file.out.clone());
    let format: Format = common
        .format
        .parse()
        .or_else(|e: String| match &file.format {
            Some(f) if common.format == "csv" => f.parse(),
            _ => Err(e),
        })?;
    let params = EnsembleParams::induced(n, alpha, sigma_sq).map_err(|e| e.to_string())?;
    Ok(Run {
        params,
        samples,
        seed,
        threads,
        out,
        format,
        grid_n: common.grid_n,
        suites: file.suites.unwrap_or_default(),
    })
}

fn emit(run: &Run, tables: &[EstimateTable]) -> Result<(), String> {
    let text = match run.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(tables, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).unwrap()
        }
        Format::Json => {
            serde_json::to_string_pretty(&tables_to_json(tables)).map_err(|e| e.to_string())? + "\n"
        }
    };
    write_output(run.out.as_deref(), &text).map_err(|e| e.to_string())
}

fn point_table(
    run: &Run,
    quantity: &str,
    points: impl Iterator<Item = (C64, Option<C64>)>,
    mut f: impl FnMut(C64, Option<C64>) -> Result<C64, String>,
) -> Result<EstimateTable, String> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for (x1, x2) in points {
        let value = f(x1, x2)?;
        rows.push(EstimateRow { x1, x2, value, stderr: 0.0, count: 1 });
    }
    Ok(EstimateTable {
        meta: EstimateMeta {
            quantity: quantity.into(),
            n: run.params.n(),
            alpha: run.params.alpha(),
            sigma_sq: run.params.sigma_sq(),
            seed: run.seed,
            stream_id: 0,
            samples: 0,
            threads: 1,
            wall_ms: start.elapsed().as_millis(),
        },
        rows,
    })
}

fn grid_points(run: &Run) -> Vec<C64> {
    let grid = BinGrid::default_for(run.params.n(), run.params.sigma_sq(), run.grid_n, run.grid_n);
    (0..grid.bins()).map(|b| grid.center(b)).collect()
}

fn eval_points(run: &Run, x1: &Option<String>) -> Result<Vec<C64>, String> {
    match x1 {
        Some(s) => Ok(vec![parse_point(s)?]),
        None => Ok(grid_points(run)),
    }
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::SampleCheck(common) => {
            let run = resolve(&common)?;
            let mut worst_q: f64 = 0.0;
            let mut worst_conj: f64 = 0.0;
            let mut worst_t: f64 = 0.0;
            for s in 0..run.samples.min(10_000) {
                let g = sample_ginse(&run.params, RngStream::new(run.seed, s))
                    .map_err(|e| e.to_string())?;
                worst_q = worst_q.max(g.quaternion_reality_violation());
                if let Ok(p) = ginse::eigen::standard_eigenpairs(&g) {
                    let radius =
                        p.values().iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
                    worst_conj = worst_conj.max(p.residual(&g) / radius);
                }
                let t = sample_t(&run.params, RngStream::new(run.seed, s))
                    .map_err(|e| e.to_string())?;
                let (a, b) = if run.params.n() > 1 { t.block(0, 1) } else { (C64::ZERO, C64::ZERO) };
                let (abar, bbar) =
                    if run.params.n() > 1 { (t.entry(0, true, 1, true), t.entry(0, true, 1, false)) } else { (C64::ZERO, C64::ZERO) };
                worst_t = worst_t.max((abar - a.conj()).norm()).max((bbar + b.conj()).norm());
            }
            let table = point_table(
                &run,
                "sample_check",
                [
                    (C64::new(worst_q, 0.0), None),
                    (C64::new(worst_conj, 0.0), None),
                    (C64::new(worst_t, 0.0), None),
                ]
                .into_iter(),
                |x, _| Ok(x),
            )?;
            emit(&run, &[table])?;
            Ok(worst_q < 1e-14 && worst_t < 1e-14)
        }
        Command::ExactDiag { common, x1 } => {
            let run = resolve(&common)?;
            let pts = eval_points(&run, &x1)?;
            let table = point_table(&run, "diag_exact", pts.into_iter().map(|p| (p, None)), |x, _| {
                diag_overlap_exact(x, &run.params).map(C64::from).map_err(|e| e.to_string())
            })?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::ExactOffdiag { common, x1, x2, kind } => {
            let run = resolve(&common)?;
            let x2 = parse_point(&x2)?;
            let kind = match kind.as_str() {
                "plain" => ConditionalKind::Plain12,
                "barred" => ConditionalKind::Barred12,
                other => return Err(format!("unknown kind {other:?}")),
            };
            let pts = eval_points(&run, &x1)?;
            let quantity = match kind {
                ConditionalKind::Plain12 => "offdiag_exact_plain",
                ConditionalKind::Barred12 => "offdiag_exact_barred",
            };
            let table =
                point_table(&run, quantity, pts.into_iter().map(|p| (p, Some(x2))), |a, b| {
                    offdiag_overlap_exact(a, b.unwrap(), &run.params, kind)
                        .or_else(|e| match e {
                            ginse::GinseError::NearCollision(_) => Ok(C64::ZERO),
                            other => Err(other),
                        })
                        .map_err(|e| e.to_string())
                })?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::Density { common, x1 } => {
            let run = resolve(&common)?;
            let pts = eval_points(&run, &x1)?;
            let table = point_table(&run, "density_exact", pts.into_iter().map(|p| (p, None)), |x, _| {
                density_exact(x, &run.params).map(C64::from).map_err(|e| e.to_string())
            })?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::McDiag { common, route } => {
            let run = resolve(&common)?;
            let route = match route.as_str() {
                "direct" => DiagRoute::DirectEigen,
                "schur" => DiagRoute::SchurRecursion,
                "jpdf" => DiagRoute::JpdfTimesTavg,
                other => return Err(format!("unknown route {other:?}")),
            };
            let grid =
                BinGrid::default_for(run.params.n(), run.params.sigma_sq(), run.grid_n, run.grid_n);
            let table = estimate_diag_mc(
                &run.params,
                &grid,
                run.samples,
                route,
                RngStream::new(run.seed, 0),
                run.threads,
            )
            .map_err(|e| e.to_string())?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::McOffdiag { common, kind } => {
            let run = resolve(&common)?;
            let kind = match kind.as_str() {
                "plain" => OffdiagEstKind::Plain,
                "barred" => OffdiagEstKind::Barred,
                other => return Err(format!("unknown kind {other:?}")),
            };
            let g = BinGrid::default_for(
                run.params.n(),
                run.params.sigma_sq(),
                run.grid_n.min(8),
                run.grid_n.min(8),
            );
            let table = estimate_offdiag_mc(
                &run.params,
                &g,
                &g,
                run.samples,
                kind,
                RngStream::new(run.seed, 0),
                run.threads,
            )
            .map_err(|e| e.to_string())?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::Asym { common, x2 } => {
            let run = resolve(&common)?;
            let x2 = parse_point(&x2)?;
            let pts = grid_points(&run);
            let n = run.params.n();
            let law = point_table(&run, "circular_law", pts.iter().map(|p| (*p, None)), |x, _| {
                Ok(C64::from(asymptotics::circular_law(x)))
            })?;
            let diag = point_table(&run, "bulk_diag", pts.iter().map(|p| (*p, None)), |x, _| {
                Ok(C64::from(asymptotics::bulk_diag(x, n)))
            })?;
            let off = point_table(
                &run,
                "bulk_offdiag",
                pts.iter().filter(|p| **p != x2).map(|p| (*p, Some(x2))),
                |a, b| Ok(asymptotics::bulk_offdiag(a, b.unwrap())),
            )?;
            let rho2 = point_table(
                &run,
                "factorized_density2",
                pts.iter().map(|p| (*p, Some(x2))),
                |a, b| Ok(C64::from(asymptotics::factorized_density2(a, b.unwrap()))),
            )?;
            emit(&run, &[law, diag, off, rho2])?;
            Ok(true)
        }
        Command::Origin(common) => {
            let run = resolve(&common)?;
            let closed = ginse::exact::origin_limit_ratio(&run.params);
            let extrap = ginse::exact::origin_ratio_extrapolated(&run.params)
                .map_err(|e| e.to_string())?
                / std::f64::consts::PI;
            let table = point_table(
                &run,
                "origin_ratio",
                [(C64::from(closed), None), (C64::from(extrap), None)].into_iter(),
                |x, _| Ok(x),
            )?;
            emit(&run, &[table])?;
            Ok(true)
        }
        Command::Validate { common, suites } => {
            let run = resolve(&common)?;
            let filters = if suites.is_empty() { run.suites.clone() } else { suites };
            let report = validate_all(&filters, run.seed, run.threads);
            for s in &report.suites {
                for c in &s.checks {
                    eprintln!(
                        "[{}] {}::{} measured {:.6e} threshold {:.6e} {}",
                        if c.pass { "PASS" } else { "FAIL" },
                        s.name,
                        c.name,
                        c.measured,
                        c.threshold,
                        c.detail
                    );
                }
            }
            let text =
                serde_json::to_string_pretty(&report_to_json(&report)).map_err(|e| e.to_string())?
                    + "\n";
            write_output(run.out.as_deref(), &text).map_err(|e| e.to_string())?;
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
