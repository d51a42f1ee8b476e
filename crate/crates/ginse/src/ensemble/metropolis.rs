//! Metropolis sampling of the induced-ensemble eigenvalue joint density,
//! restricted to the upper half-plane (the density is invariant under
//! conjugating any single point, so the restriction loses nothing).
//!
//! Log-weight per configuration:
//! `sum_{i<j} [2 ln|z_i - z_j| + 2 ln|z_i - conj z_j|]`
//! `+ sum_i [2 ln|z_i - conj z_i| + 2 alpha ln|z_i| - 2 |z_i|^2 / sigma^2]`.

use super::{EigenvalueConfig, EnsembleParams, Potential, RngStream};
use crate::error::GinseError;
use crate::{C64, Result};
use rand::RngExt;
use rand_distr::StandardNormal;

/// Chain controls; the defaults keep autocorrelation small at desk scale.
#[derive(Debug, Clone, Copy)]
pub struct MetropolisConfig {
    /// Proposal standard deviation; `None` selects `0.3 sigma / sqrt(N)`.
    pub step_size: Option<f64>,
    /// Sweeps (N single-coordinate updates each) discarded up front.
    pub burn_in_sweeps: usize,
    /// Sweeps between kept samples; `None` selects `N` sweeps.
    pub thinning_sweeps: Option<usize>,
}

impl Default for MetropolisConfig {
    fn default() -> Self {
        Self { step_size: None, burn_in_sweeps: 10_000, thinning_sweeps: None }
    }
}

/// Chain health summary. An acceptance rate outside `[0.1, 0.9]` sets the
/// warning flag; it never fails the run.
#[derive(Debug, Clone, Copy)]
pub struct MetropolisDiagnostics {
    pub acceptance_rate: f64,
    pub warning: bool,
}

/// Thinned samples plus diagnostics.
#[derive(Debug, Clone)]
pub struct JpdfSample {
    pub configs: Vec<EigenvalueConfig>,
    pub diagnostics: MetropolisDiagnostics,
}

struct Chain<'a> {
    points: Vec<C64>,
    alpha: f64,
    sigma_sq: f64,
    step: f64,
    rng: &'a mut rand_chacha::ChaCha8Rng,
    accepted: u64,
    proposed: u64,
}

impl Chain<'_> {
    /// Interaction of point `z` at slot `k` with the rest of the gas plus its
    /// self terms.
    fn site_log_weight(&self, k: usize, z: C64) -> f64 {
        let mut lw = 2.0 * (2.0 * z.im).abs().ln() + 2.0 * self.alpha * z.norm().ln()
            - 2.0 * z.norm_sqr() / self.sigma_sq;
        for (l, &w) in self.points.iter().enumerate() {
            if l == k {
                continue;
            }
            let d1 = (z - w).norm_sqr();
            let d2 = (z - w.conj()).norm_sqr();
            if d1 == 0.0 || d2 == 0.0 {
                return f64::NEG_INFINITY;
            }
            lw += d1.ln() + d2.ln();
        }
        lw
    }

    fn sweep(&mut self) {
        for k in 0..self.points.len() {
            let old = self.points[k];
            let dx: f64 = self.rng.sample(StandardNormal);
            let dy: f64 = self.rng.sample(StandardNormal);
            let mut z = old + C64::new(self.step * dx, self.step * dy);
            // reflect across the real axis to stay in the upper half-plane
            if z.im < 0.0 {
                z = z.conj();
            }
            self.proposed += 1;
            if z.im == 0.0 {
                continue;
            }
            let delta = self.site_log_weight(k, z) - self.site_log_weight(k, old);
            if delta >= 0.0 || self.rng.random::<f64>() < delta.exp() {
                self.points[k] = z;
                self.accepted += 1;
            }
        }
    }
}

/// Draws `samples` thinned configurations from the induced-ensemble joint
/// density for any `alpha > -1`.
pub fn sample_jpdf_metropolis(
    params: &EnsembleParams,
    chain: &MetropolisConfig,
    samples: usize,
    rng: RngStream,
) -> Result<JpdfSample> {
    if params.potential() != Potential::InducedGinibre {
        return Err(GinseError::ExactFormulaUnsupported(
            "Metropolis eigenvalue sampler requires the induced potential".into(),
        ));
    }
    let n = params.n();
    let sigma = params.sigma_sq().sqrt();
    let step = chain.step_size.unwrap_or(0.3 * sigma / (n as f64).sqrt());
    let thin = chain.thinning_sweeps.unwrap_or(n).max(1);
    let mut r = rng.rng();

    // spread the initial configuration over the expected support
    let radius = sigma * (2.0 * n as f64).sqrt();
    let init: Vec<C64> = (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            C64::new(radius * (t - 0.5), radius * 0.5 * t.max(0.1))
        })
        .collect();

    let mut chain_state = Chain {
        points: init,
        alpha: params.alpha(),
        sigma_sq: params.sigma_sq(),
        step,
        rng: &mut r,
        accepted: 0,
        proposed: 0,
    };

    for _ in 0..chain.burn_in_sweeps {
        chain_state.sweep();
    }

    let mut configs = Vec::with_capacity(samples);
    while configs.len() < samples {
        for _ in 0..thin {
            chain_state.sweep();
        }
        // discard measure-zero near-real draws instead of emitting them
        if chain_state.points.iter().all(|z| z.im > 1e-12) {
            configs.push(EigenvalueConfig::new(chain_state.points.clone())?);
        }
    }

    let acceptance_rate = chain_state.accepted as f64 / chain_state.proposed.max(1) as f64;
    Ok(JpdfSample {
        configs,
        diagnostics: MetropolisDiagnostics {
            acceptance_rate,
            warning: !(0.1..=0.9).contains(&acceptance_rate),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Real;

    #[test]
    fn upper_half_plane_and_moment() {
        // N=1, alpha=0, sigma^2=1: E|z|^2 = 1
        let p = EnsembleParams::induced(1, 0.0, 1.0).unwrap();
        let cfg = MetropolisConfig { burn_in_sweeps: 2_000, ..Default::default() };
        let out = sample_jpdf_metropolis(&p, &cfg, 40_000, RngStream::new(1, 0)).unwrap();
        assert!(out.configs.iter().all(|c| c.points().iter().all(|z| z.im > 0.0)));
        let vals: Vec<f64> = out.configs.iter().map(|c| c.points()[0].norm_sqr()).collect();
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / vals.len() as f64;
        // inflate the naive SE for autocorrelation
        let se = (var / vals.len() as f64).sqrt() * 3.0;
        assert!((m - 1.0).abs() < 4.0 * se, "mean {m} se {se}");
        assert!(!out.diagnostics.warning, "acceptance {}", out.diagnostics.acceptance_rate);
    }

    #[test]
    fn stationarity_ks_imaginary_marginal() {
        // N=1 marginal of Im z: p(y) ~ y^2 exp(-2 y^2 / sigma^2);
        // CDF(y) = P(3/2, 2y^2/s2) = erf(t) - 2 t exp(-t^2)/sqrt(pi), t = y sqrt(2/s2)
        let p = EnsembleParams::induced(1, 0.0, 1.0).unwrap();
        let cfg = MetropolisConfig { burn_in_sweeps: 5_000, ..Default::default() };
        let out = sample_jpdf_metropolis(&p, &cfg, 1_000_000, RngStream::new(2, 0)).unwrap();
        let mut ys: Vec<f64> = out.configs.iter().map(|c| c.points()[0].im).collect();
        ys.sort_by(f64::total_cmp);
        let cdf = |y: f64| {
            let t = y * (2.0f64).sqrt();
            Real::erf(t) - 2.0 * t * (-t * t).exp() / std::f64::consts::PI.sqrt()
        };
        let n = ys.len() as f64;
        let mut ks: f64 = 0.0;
        for (i, &y) in ys.iter().enumerate() {
            let f = cdf(y);
            ks = ks.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
        }
        assert!(ks < 0.01, "KS distance {ks}");
    }
}
