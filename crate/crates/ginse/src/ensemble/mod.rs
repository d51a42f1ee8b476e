//! Ensemble parameters and random draws: full quaternionic Ginibre matrices,
//! strictly upper-triangular quaternionic matrices, and eigenvalue
//! configurations from the induced-ensemble joint density via Metropolis
//! sampling.

mod metropolis;
mod sampler;

pub use metropolis::{sample_jpdf_metropolis, JpdfSample, MetropolisConfig, MetropolisDiagnostics};
pub use sampler::{sample_ginse, sample_t};

use crate::cmat::CMat;
use crate::error::GinseError;
use crate::{C64, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Potential selecting the matrix weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// Rotationally invariant weight with `2 alpha` exact zero modes; the
    /// only potential with exact finite-N Pfaffian formulas.
    InducedGinibre,
    /// Gaussian weight correlating a matrix with its adjoint; `tau = 0`
    /// recovers the plain quaternionic Ginibre ensemble.
    EllipticGinibre { tau: f64 },
}

/// Parameters shared by every sampler and formula in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    n: usize,
    alpha: f64,
    sigma_sq: f64,
    potential: Potential,
}

impl EnsembleParams {
    pub fn new(n: usize, alpha: f64, sigma_sq: f64, potential: Potential) -> Result<Self> {
        if n < 1 {
            return Err(GinseError::InvalidParams("n must be >= 1".into()));
        }
        if !(alpha > -1.0) {
            return Err(GinseError::InvalidParams(format!("alpha = {alpha} must be > -1")));
        }
        if !(sigma_sq > 0.0) {
            return Err(GinseError::InvalidParams(format!("sigma_sq = {sigma_sq} must be > 0")));
        }
        if let Potential::EllipticGinibre { tau } = potential {
            if !(0.0..1.0).contains(&tau) {
                return Err(GinseError::InvalidParams(format!("tau = {tau} must be in [0, 1)")));
            }
        }
        Ok(Self { n, alpha, sigma_sq, potential })
    }

    /// Induced ensemble with the given zero-mode parameter.
    pub fn induced(n: usize, alpha: f64, sigma_sq: f64) -> Result<Self> {
        Self::new(n, alpha, sigma_sq, Potential::InducedGinibre)
    }

    /// Bulk scaling convention `sigma^2 = 1/N` used by the large-N formulas.
    pub fn bulk_scaled(n: usize, alpha: f64) -> Result<Self> {
        Self::induced(n, alpha, 1.0 / n as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    pub fn potential(&self) -> Potential {
        self.potential
    }

    /// Guard used by the exact-formula constructors.
    pub fn require_induced(&self) -> Result<()> {
        match self.potential {
            Potential::InducedGinibre => Ok(()),
            Potential::EllipticGinibre { tau } => Err(GinseError::ExactFormulaUnsupported(
                format!("elliptic ensemble (tau = {tau})"),
            )),
        }
    }
}

/// Reproducible random stream: identical `(seed, stream_id)` reproduces
/// identical draw sequences bit for bit within one build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Derived stream for sharded work.
    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { seed: self.seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id.into());
        rng
    }
}

/// Dense 2N x 2N complex matrix in the interleaved quaternion embedding:
/// rows and columns grouped as `(1, 1bar, 2, 2bar, ...)`, every 2x2 block of
/// the form `[[a, b], [-conj b, conj a]]`. The structure is enforced by
/// construction: only `(a, b)` per block are free.
#[derive(Debug, Clone)]
pub struct QuaternionMatrix {
    dim_pairs: usize,
    entries: CMat,
}

impl QuaternionMatrix {
    /// Builds from the free block entries `(a, b) = f(i, j)`.
    pub fn from_blocks(dim_pairs: usize, mut f: impl FnMut(usize, usize) -> (C64, C64)) -> Self {
        let mut entries = CMat::zeros(2 * dim_pairs, 2 * dim_pairs);
        for i in 0..dim_pairs {
            for j in 0..dim_pairs {
                let (a, b) = f(i, j);
                entries[(2 * i, 2 * j)] = a;
                entries[(2 * i, 2 * j + 1)] = b;
                entries[(2 * i + 1, 2 * j)] = -b.conj();
                entries[(2 * i + 1, 2 * j + 1)] = a.conj();
            }
        }
        Self { dim_pairs, entries }
    }

    pub fn dim_pairs(&self) -> usize {
        self.dim_pairs
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn block(&self, i: usize, j: usize) -> (C64, C64) {
        (self.entries[(2 * i, 2 * j)], self.entries[(2 * i, 2 * j + 1)])
    }

    /// Largest violation of the quaternion-reality condition
    /// `tau2 conj(M) tau2^{-1} = M`; zero for structurally built matrices.
    pub fn quaternion_reality_violation(&self) -> f64 {
        let n = self.dim_pairs;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = self.entries[(2 * i, 2 * j)];
                let b = self.entries[(2 * i, 2 * j + 1)];
                let c = self.entries[(2 * i + 1, 2 * j)];
                let d = self.entries[(2 * i + 1, 2 * j + 1)];
                worst = worst.max((c + b.conj()).norm()).max((d - a.conj()).norm());
            }
        }
        worst
    }
}

/// Strictly upper-triangular quaternionic matrix: one 2x2 quaternion block
/// `(a, b)` per pair index `(i, j)` with `i < j`. The block relations
/// `T_{i, j} = conj(T_{ibar, jbar})`, `T_{i, jbar} = -conj(T_{ibar, j})`
/// hold exactly because only `(a, b)` are stored.
#[derive(Debug, Clone)]
pub struct UpperTriangularT {
    dim_pairs: usize,
    /// block (i, j), i < j, at index i * n + j
    blocks: Vec<(C64, C64)>,
}

impl UpperTriangularT {
    pub fn from_blocks(dim_pairs: usize, mut f: impl FnMut(usize, usize) -> (C64, C64)) -> Self {
        let n = dim_pairs;
        let mut blocks = vec![(C64::ZERO, C64::ZERO); n * n];
        for i in 0..n {
            for j in i + 1..n {
                blocks[i * n + j] = f(i, j);
            }
        }
        Self { dim_pairs, blocks }
    }

    pub fn zero(dim_pairs: usize) -> Self {
        Self::from_blocks(dim_pairs, |_, _| (C64::ZERO, C64::ZERO))
    }

    pub fn dim_pairs(&self) -> usize {
        self.dim_pairs
    }

    /// The free entries `(T_{i,j}, T_{i,jbar})` of block `(i, j)`, `i < j`.
    pub fn block(&self, i: usize, j: usize) -> (C64, C64) {
        assert!(i < j && j < self.dim_pairs);
        self.blocks[i * self.dim_pairs + j]
    }

    /// Entry in the 2N x 2N embedding; `bar_r`/`bar_c` select the barred row
    /// and column of pair block `(i, j)`.
    pub fn entry(&self, i: usize, bar_r: bool, j: usize, bar_c: bool) -> C64 {
        if i >= j {
            return C64::ZERO;
        }
        let (a, b) = self.block(i, j);
        match (bar_r, bar_c) {
            (false, false) => a,
            (false, true) => b,
            (true, false) => -b.conj(),
            (true, true) => a.conj(),
        }
    }

    /// Embeds into the dense 2N x 2N complex matrix (strictly upper in pairs).
    pub fn to_cmat(&self) -> CMat {
        let n = self.dim_pairs;
        let mut m = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = self.block(i, j);
                m[(2 * i, 2 * j)] = a;
                m[(2 * i, 2 * j + 1)] = b;
                m[(2 * i + 1, 2 * j)] = -b.conj();
                m[(2 * i + 1, 2 * j + 1)] = a.conj();
            }
        }
        m
    }
}

/// N eigenvalue representatives, one per Kramers pair, all in the open upper
/// half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueConfig {
    points: Vec<C64>,
}

impl EigenvalueConfig {
    pub fn new(points: Vec<C64>) -> Result<Self> {
        if points.iter().any(|z| !(z.im > 0.0)) {
            return Err(GinseError::InvalidParams(
                "eigenvalue representatives must have Im z > 0".into(),
            ));
        }
        let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm() < 1e-12 * scale {
                    return Err(GinseError::DegenerateSpectrum(1e-12 * scale));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }
}
