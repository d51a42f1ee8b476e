//! Monte Carlo estimators of the conditional overlaps and the spectral
//! density, sharded over independent random streams.
//!
//! Sampling convention: eigenvalue representatives are binned in the upper
//! half-plane, which folds each Kramers pair onto its representative. The
//! estimators divide the folded counts back (factor 2 per conditioned
//! argument), so tables estimate the same conditional quantities as the
//! exact formulas, which are normalized over the full symmetric plane.

use crate::grid::{merge_shards, BinEstimate, BinGrid, ShardAccum};
use ginse::eigen::{overlap_matrix, standard_eigenpairs};
use ginse::ensemble::{
    sample_ginse, sample_jpdf_metropolis, EnsembleParams, MetropolisConfig, RngStream,
};
use ginse::schur::{diag_overlaps_from_schur, schur_decompose, t_avg_diag};
use ginse::{C64, GinseError};
use std::time::Instant;

/// How the diagonal estimator produces per-sample overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagRoute {
    /// Full-matrix sampling plus direct eigendecomposition (`alpha = 0`).
    DirectEigen,
    /// Full-matrix sampling plus Schur recursions (`alpha = 0`); identical
    /// draws to `DirectEigen` on identical streams.
    SchurRecursion,
    /// Eigenvalue-only sampling via Metropolis times the closed-form
    /// T-average; works for any `alpha > -1`.
    JpdfTimesTavg,
}

/// Which off-diagonal overlap the two-point estimator accumulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffdiagEstKind {
    Plain,
    Barred,
}

/// What the density estimator samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensitySource {
    Eigen,
    Jpdf,
}

/// Run provenance attached to every table.
#[derive(Debug, Clone)]
pub struct EstimateMeta {
    pub quantity: String,
    pub n: usize,
    pub alpha: f64,
    pub sigma_sq: f64,
    pub seed: u64,
    pub stream_id: u64,
    pub samples: u64,
    pub threads: usize,
    pub wall_ms: u128,
}

/// One bin of an estimate table.
#[derive(Debug, Clone, Copy)]
pub struct EstimateRow {
    pub x1: C64,
    pub x2: Option<C64>,
    pub value: C64,
    pub stderr: f64,
    pub count: u64,
}

/// Binned estimates with provenance; standard errors are per-sample
/// standard deviations divided by the square root of the sample count.
#[derive(Debug, Clone)]
pub struct EstimateTable {
    pub meta: EstimateMeta,
    pub rows: Vec<EstimateRow>,
}

fn shard_counts(total: u64, shards: usize) -> Vec<u64> {
    let base = total / shards as u64;
    let extra = (total % shards as u64) as usize;
    (0..shards).map(|s| base + u64::from(s < extra)).collect()
}

fn require_alpha_zero(params: &EnsembleParams, route: &str) -> Result<(), GinseError> {
    if params.alpha() != 0.0 {
        return Err(GinseError::InvalidParams(format!(
            "route {route} samples full matrices and requires alpha = 0"
        )));
    }
    Ok(())
}

/// Draws until the spectrum checks accept; Gaussian draws reject only on
/// measure-zero events.
fn draw_accepted<T>(
    mut attempt: impl FnMut(RngStream) -> Result<T, GinseError>,
    base: RngStream,
) -> Result<T, GinseError> {
    // a rejected draw advances the stream deterministically
    let mut stream = base;
    for k in 0..64 {
        match attempt(stream) {
            Ok(v) => return Ok(v),
            Err(
                GinseError::DegenerateSpectrum(_)
                | GinseError::RealEigenvalue(_)
                | GinseError::UnpairedEigenvalue(_)
                | GinseError::NearCollision(_),
            ) => {
                stream = RngStream::new(stream.seed.wrapping_add(0x9e37_79b9_7f4a_7c15), stream.stream_id ^ (k + 1) << 32);
            }
            Err(e) => return Err(e),
        }
    }
    Err(GinseError::InvalidParams("64 consecutive rejected draws".into()))
}

/// Binned estimator of the conditional diagonal overlap.
///
/// Each sample contributes `O_ll / (2 N a)` to the bin holding `z_l` (the
/// factor 2 undoes the half-plane folding).
pub fn estimate_diag_mc(
    params: &EnsembleParams,
    grid: &BinGrid,
    samples: u64,
    route: DiagRoute,
    rng: RngStream,
    threads: usize,
) -> Result<EstimateTable, GinseError> {
    estimate_diag_mc_with_chain(params, grid, samples, route, rng, threads, None)
}

/// [`estimate_diag_mc`] with an explicit Metropolis chain configuration for
/// the eigenvalue-sampler route.
pub fn estimate_diag_mc_with_chain(
    params: &EnsembleParams,
    grid: &BinGrid,
    samples: u64,
    route: DiagRoute,
    rng: RngStream,
    threads: usize,
    chain: Option<MetropolisConfig>,
) -> Result<EstimateTable, GinseError> {
    match route {
        DiagRoute::DirectEigen | DiagRoute::SchurRecursion => {
            require_alpha_zero(params, &format!("{route:?}"))?
        }
        DiagRoute::JpdfTimesTavg => params.require_induced()?,
    }
    let start = Instant::now();
    let threads = threads.max(1);
    let counts = shard_counts(samples, threads);
    let area = grid.bin_area();
    let norm = 2.0 * params.n() as f64 * area;

    let shards = run_shards(threads, |shard| {
        let my = counts[shard];
        let stream = rng.with_stream(rng.stream_id + shard as u64);
        let mut acc = ShardAccum::new(stream.stream_id, grid.bins());
        let mut scratch: Vec<(usize, C64, u64)> = Vec::new();
        match route {
            DiagRoute::DirectEigen | DiagRoute::SchurRecursion => {
                for k in 0..my {
                    let sub = RngStream::new(stream.seed, stream.stream_id)
                        .rng_substream(k);
                    let (zs, diags) = draw_accepted(
                        |st| {
                            let g = sample_ginse(params, st)?;
                            match route {
                                DiagRoute::DirectEigen => {
                                    let s = standard_eigenpairs(&g)?;
                                    let o = overlap_matrix(&s);
                                    let d = (0..params.n()).map(|l| o.diag(l)).collect::<Vec<_>>();
                                    Ok((s.values().to_vec(), d))
                                }
                                _ => {
                                    let f = schur_decompose(&g)?;
                                    let d = diag_overlaps_from_schur(&f)?;
                                    Ok((f.eigenvalues().points().to_vec(), d))
                                }
                            }
                        },
                        sub,
                    )?;
                    scratch.clear();
                    for (l, z) in zs.iter().enumerate() {
                        if let Some(bin) = grid.locate(*z) {
                            push_scratch(&mut scratch, bin, C64::from(diags[l] / norm));
                        }
                    }
                    acc.record(&scratch);
                }
            }
            DiagRoute::JpdfTimesTavg => {
                let cfg = chain.unwrap_or_default();
                let out = sample_jpdf_metropolis(params, &cfg, my as usize, stream)?;
                for config in &out.configs {
                    scratch.clear();
                    for (l, z) in config.points().iter().enumerate() {
                        if let Some(bin) = grid.locate(*z) {
                            let w = t_avg_diag(config, l, params.sigma_sq())?;
                            push_scratch(&mut scratch, bin, C64::from(w / norm));
                        }
                    }
                    acc.record(&scratch);
                }
            }
        }
        Ok(acc)
    })?;

    let (bins, total) = merge_shards(shards);
    Ok(table_from_bins(
        "mc_diag", params, rng, total, threads, start, grid, &bins, None,
    ))
}

/// Binned two-point estimator of the conditional off-diagonal overlap with
/// the `k != l` exclusion; `Barred` accumulates `O_{k lbar}`. Contributions
/// are `O / (4 N^2 a1 a2)` (two folded arguments).
pub fn estimate_offdiag_mc(
    params: &EnsembleParams,
    grid1: &BinGrid,
    grid2: &BinGrid,
    samples: u64,
    kind: OffdiagEstKind,
    rng: RngStream,
    threads: usize,
) -> Result<EstimateTable, GinseError> {
    require_alpha_zero(params, "offdiag")?;
    let start = Instant::now();
    let threads = threads.max(1);
    let counts = shard_counts(samples, threads);
    let n = params.n();
    let norm = 4.0 * (n * n) as f64 * grid1.bin_area() * grid2.bin_area();
    let nbins2 = grid2.bins();

    let shards = run_shards(threads, |shard| {
        let my = counts[shard];
        let stream = rng.with_stream(rng.stream_id + shard as u64);
        let mut acc = ShardAccum::new(stream.stream_id, grid1.bins() * nbins2);
        let mut scratch: Vec<(usize, C64, u64)> = Vec::new();
        for k in 0..my {
            let sub = RngStream::new(stream.seed, stream.stream_id).rng_substream(k);
            let (zs, o) = draw_accepted(
                |st| {
                    let g = sample_ginse(params, st)?;
                    let s = standard_eigenpairs(&g)?;
                    let o = overlap_matrix(&s);
                    Ok((s.values().to_vec(), o))
                },
                sub,
            )?;
            scratch.clear();
            for a in 0..n {
                let Some(b1) = grid1.locate(zs[a]) else { continue };
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    if let Some(b2) = grid2.locate(zs[b]) {
                        let v = match kind {
                            OffdiagEstKind::Plain => o.unbarred(a, b),
                            OffdiagEstKind::Barred => o.barred_col(a, b),
                        };
                        push_scratch(&mut scratch, b1 * nbins2 + b2, v / norm);
                    }
                }
            }
            acc.record(&scratch);
        }
        Ok(acc)
    })?;

    let (bins, total) = merge_shards(shards);
    let quantity = match kind {
        OffdiagEstKind::Plain => "mc_offdiag_plain",
        OffdiagEstKind::Barred => "mc_offdiag_barred",
    };
    let mut rows = Vec::with_capacity(bins.len());
    for (idx, be) in bins.iter().enumerate() {
        rows.push(EstimateRow {
            x1: grid1.center(idx / nbins2),
            x2: Some(grid2.center(idx % nbins2)),
            value: be.mean,
            stderr: be.stderr,
            count: be.hits,
        });
    }
    Ok(EstimateTable {
        meta: meta(quantity, params, rng, total, threads, start),
        rows,
    })
}

/// Binned estimator of the one-point spectral density (folded factor 2).
pub fn estimate_density_mc(
    params: &EnsembleParams,
    grid: &BinGrid,
    samples: u64,
    source: DensitySource,
    rng: RngStream,
    threads: usize,
) -> Result<EstimateTable, GinseError> {
    if source == DensitySource::Eigen {
        require_alpha_zero(params, "density (eigen source)")?;
    }
    let start = Instant::now();
    let threads = threads.max(1);
    let counts = shard_counts(samples, threads);
    let norm = 2.0 * params.n() as f64 * grid.bin_area();

    let shards = run_shards(threads, |shard| {
        let my = counts[shard];
        let stream = rng.with_stream(rng.stream_id + shard as u64);
        let mut acc = ShardAccum::new(stream.stream_id, grid.bins());
        let mut scratch: Vec<(usize, C64, u64)> = Vec::new();
        let record_points = |acc: &mut ShardAccum, scratch: &mut Vec<(usize, C64, u64)>, zs: &[C64]| {
            scratch.clear();
            for z in zs {
                if let Some(bin) = grid.locate(*z) {
                    push_scratch(scratch, bin, C64::from(1.0 / norm));
                }
            }
            acc.record(scratch);
        };
        match source {
            DensitySource::Eigen => {
                for k in 0..my {
                    let sub = RngStream::new(stream.seed, stream.stream_id).rng_substream(k);
                    let zs = draw_accepted(
                        |st| {
                            let g = sample_ginse(params, st)?;
                            Ok(standard_eigenpairs(&g)?.values().to_vec())
                        },
                        sub,
                    )?;
                    record_points(&mut acc, &mut scratch, &zs);
                }
            }
            DensitySource::Jpdf => {
                let out =
                    sample_jpdf_metropolis(params, &MetropolisConfig::default(), my as usize, stream)?;
                for config in &out.configs {
                    record_points(&mut acc, &mut scratch, config.points());
                }
            }
        }
        Ok(acc)
    })?;

    let (bins, total) = merge_shards(shards);
    Ok(table_from_bins(
        "mc_density", params, rng, total, threads, start, grid, &bins, None,
    ))
}

fn push_scratch(scratch: &mut Vec<(usize, C64, u64)>, bin: usize, v: C64) {
    for entry in scratch.iter_mut() {
        if entry.0 == bin {
            entry.1 += v;
            entry.2 += 1;
            return;
        }
    }
    scratch.push((bin, v, 1));
}

fn run_shards(
    threads: usize,
    work: impl Fn(usize) -> Result<ShardAccum, GinseError> + Sync,
) -> Result<Vec<ShardAccum>, GinseError> {
    if threads == 1 {
        return Ok(vec![work(0)?]);
    }
    let work_ref = &work;
    let results: Vec<Result<ShardAccum, GinseError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads).map(|s| scope.spawn(move || work_ref(s))).collect();
        handles.into_iter().map(|h| h.join().expect("estimator shard panicked")).collect()
    });
    results.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn table_from_bins(
    quantity: &str,
    params: &EnsembleParams,
    rng: RngStream,
    samples: u64,
    threads: usize,
    start: Instant,
    grid: &BinGrid,
    bins: &[BinEstimate],
    x2: Option<C64>,
) -> EstimateTable {
    let rows = bins
        .iter()
        .enumerate()
        .map(|(b, be)| EstimateRow {
            x1: grid.center(b),
            x2,
            value: be.mean,
            stderr: be.stderr,
            count: be.hits,
        })
        .collect();
    EstimateTable { meta: meta(quantity, params, rng, samples, threads, start), rows }
}

fn meta(
    quantity: &str,
    params: &EnsembleParams,
    rng: RngStream,
    samples: u64,
    threads: usize,
    start: Instant,
) -> EstimateMeta {
    EstimateMeta {
        quantity: quantity.to_string(),
        n: params.n(),
        alpha: params.alpha(),
        sigma_sq: params.sigma_sq(),
        seed: rng.seed,
        stream_id: rng.stream_id,
        samples,
        threads,
        wall_ms: start.elapsed().as_millis(),
    }
}

/// Extension used by the shard loops: a per-sample substream derived from
/// the shard stream, bit-stable across thread counts for a fixed shard
/// layout.
trait Substream {
    fn rng_substream(&self, k: u64) -> RngStream;
}

impl Substream for RngStream {
    fn rng_substream(&self, k: u64) -> RngStream {
        RngStream::new(self.seed ^ (k.wrapping_mul(0xd129_0d3b_3f6c_6f1d)), self.stream_id)
    }
}
