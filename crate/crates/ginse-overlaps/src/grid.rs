//! Bin grids and merge-deterministic accumulators for the Monte Carlo
//! estimators.

use ginse::eigen::Rect;
use ginse::C64;

/// Rectangular grid of bins over a region of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub nx: usize,
    pub ny: usize,
}

impl BinGrid {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, nx: usize, ny: usize) -> Self {
        assert!(x_hi > x_lo && y_hi > y_lo && nx > 0 && ny > 0);
        assert!(y_lo >= 0.0, "grid must live in the upper half-plane");
        Self { x_lo, x_hi, y_lo, y_hi, nx, ny }
    }

    /// Default estimator grid: `[-1.2, 1.2] x (0, 1.2]` in units of
    /// `sigma sqrt(N)`, which resolves the bulk at the default sample sizes.
    pub fn default_for(n: usize, sigma_sq: f64, nx: usize, ny: usize) -> Self {
        let u = (sigma_sq * n as f64).sqrt();
        Self::new(-1.2 * u, 1.2 * u, 0.0, 1.2 * u, nx, ny)
    }

    pub fn bins(&self) -> usize {
        self.nx * self.ny
    }

    pub fn bin_area(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.nx as f64 * (self.y_hi - self.y_lo) / self.ny as f64
    }

    /// Flat index of the bin containing `z`, if inside the region.
    pub fn locate(&self, z: C64) -> Option<usize> {
        if z.re < self.x_lo || z.re >= self.x_hi || z.im < self.y_lo || z.im >= self.y_hi {
            return None;
        }
        let ix = ((z.re - self.x_lo) / (self.x_hi - self.x_lo) * self.nx as f64) as usize;
        let iy = ((z.im - self.y_lo) / (self.y_hi - self.y_lo) * self.ny as f64) as usize;
        Some(iy.min(self.ny - 1) * self.nx + ix.min(self.nx - 1))
    }

    pub fn center(&self, bin: usize) -> C64 {
        let ix = bin % self.nx;
        let iy = bin / self.nx;
        C64::new(
            self.x_lo + (ix as f64 + 0.5) * (self.x_hi - self.x_lo) / self.nx as f64,
            self.y_lo + (iy as f64 + 0.5) * (self.y_hi - self.y_lo) / self.ny as f64,
        )
    }

    pub fn rect(&self, bin: usize) -> Rect {
        let ix = bin % self.nx;
        let iy = bin / self.nx;
        let dx = (self.x_hi - self.x_lo) / self.nx as f64;
        let dy = (self.y_hi - self.y_lo) / self.ny as f64;
        Rect {
            x_lo: self.x_lo + ix as f64 * dx,
            x_hi: self.x_lo + (ix + 1) as f64 * dx,
            y_lo: self.y_lo + iy as f64 * dy,
            y_hi: self.y_lo + (iy + 1) as f64 * dy,
        }
    }
}

/// Per-shard accumulator: per-bin sum, sum of squared moduli and hit count
/// of the per-sample contributions, plus the shard's sample count.
#[derive(Debug, Clone)]
pub struct ShardAccum {
    pub stream_id: u64,
    pub sum: Vec<C64>,
    pub sumsq: Vec<f64>,
    pub hits: Vec<u64>,
    pub samples: u64,
}

impl ShardAccum {
    pub fn new(stream_id: u64, bins: usize) -> Self {
        Self {
            stream_id,
            sum: vec![C64::ZERO; bins],
            sumsq: vec![0.0; bins],
            hits: vec![0; bins],
            samples: 0,
        }
    }

    /// Records one sample's per-bin contributions (`scratch` lists distinct
    /// bins with their totals for this sample).
    pub fn record(&mut self, scratch: &[(usize, C64, u64)]) {
        for &(bin, v, h) in scratch {
            self.sum[bin] += v;
            self.sumsq[bin] += v.norm_sqr();
            self.hits[bin] += h;
        }
        self.samples += 1;
    }
}

/// Merged estimate for one bin.
#[derive(Debug, Clone, Copy)]
pub struct BinEstimate {
    pub mean: C64,
    pub stderr: f64,
    pub hits: u64,
}

/// Merges shard accumulators into per-bin estimates. Shards are folded in
/// `stream_id` order, so any merge order produces bitwise-identical tables.
pub fn merge_shards(mut shards: Vec<ShardAccum>) -> (Vec<BinEstimate>, u64) {
    assert!(!shards.is_empty());
    shards.sort_by_key(|s| s.stream_id);
    let bins = shards[0].sum.len();
    let mut sum = vec![C64::ZERO; bins];
    let mut sumsq = vec![0.0; bins];
    let mut hits = vec![0u64; bins];
    let mut samples = 0u64;
    for s in &shards {
        assert_eq!(s.sum.len(), bins);
        for b in 0..bins {
            sum[b] += s.sum[b];
            sumsq[b] += s.sumsq[b];
            hits[b] += s.hits[b];
        }
        samples += s.samples;
    }
    let m = samples.max(1) as f64;
    let out = (0..bins)
        .map(|b| {
            let mean = sum[b] / m;
            let var = (sumsq[b] / m - mean.norm_sqr()).max(0.0);
            BinEstimate { mean, stderr: (var / m).sqrt(), hits: hits[b] }
        })
        .collect();
    (out, samples)
}
