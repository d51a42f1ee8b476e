//! Gaussian draws of full quaternionic matrices and strictly
//! upper-triangular quaternionic matrices.
//!
//! Variance convention: the matrix weight `exp[-Tr W]` at `tau = 0` fixes
//! `E|a|^2 = E|b|^2 = sigma^2 / 2` per independent complex block element;
//! the same moment governs the T blocks.

use super::{EnsembleParams, Potential, QuaternionMatrix, RngStream, UpperTriangularT};
use crate::error::GinseError;
use crate::{C64, Result};
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;

fn complex_gaussian(rng: &mut impl Rng, var: f64) -> C64 {
    // E|z|^2 = var: each real component has variance var/2
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// Draws a full quaternionic Ginibre matrix.
///
/// For the induced potential only `alpha = 0` is supported here; positive
/// `alpha` is reached through the eigenvalue sampler instead. The elliptic
/// potential correlates each block pair `(i, j) / (j, i)` so that
/// `E[a_ij a_ji] = tau sigma^2 / 2` and `E[b_ij conj(b_ji)] = -tau sigma^2 / 2`,
/// which reproduces the elliptic weight on the embedded matrix.
pub fn sample_ginse(params: &EnsembleParams, rng: RngStream) -> Result<QuaternionMatrix> {
    let mut r = rng.rng();
    let n = params.n();
    let s2 = params.sigma_sq();
    match params.potential() {
        Potential::InducedGinibre => {
            if params.alpha() != 0.0 {
                return Err(GinseError::InvalidParams(
                    "full-matrix sampling of the induced ensemble requires alpha = 0; \
                     use the eigenvalue sampler for alpha > 0"
                        .into(),
                ));
            }
            let mut draw = vec![(C64::ZERO, C64::ZERO); n * n];
            for block in draw.iter_mut() {
                *block = (complex_gaussian(&mut r, s2 / 2.0), complex_gaussian(&mut r, s2 / 2.0));
            }
            Ok(QuaternionMatrix::from_blocks(n, |i, j| draw[i * n + j]))
        }
        Potential::EllipticGinibre { tau } => {
            let cp = ((1.0 + tau) / 2.0).sqrt();
            let cm = ((1.0 - tau) / 2.0).sqrt();
            let mut draw = vec![(C64::ZERO, C64::ZERO); n * n];
            for i in 0..n {
                // diagonal block: Re a ~ N(0, (1+tau) s2/4), Im a ~ N(0, (1-tau) s2/4),
                // |b|^2 has mean (1-tau) s2/2
                let re: f64 = r.sample(StandardNormal);
                let im: f64 = r.sample(StandardNormal);
                let a = C64::new(
                    ((1.0 + tau) * s2 / 4.0).sqrt() * re,
                    ((1.0 - tau) * s2 / 4.0).sqrt() * im,
                );
                let b = complex_gaussian(&mut r, (1.0 - tau) * s2 / 2.0);
                draw[i * n + i] = (a, b);
                for j in i + 1..n {
                    let (g, h) = (complex_gaussian(&mut r, s2 / 2.0), complex_gaussian(&mut r, s2 / 2.0));
                    let a_ij = cp * g + cm * h;
                    let a_ji = cp * g.conj() - cm * h.conj();
                    let (g2, h2) =
                        (complex_gaussian(&mut r, s2 / 2.0), complex_gaussian(&mut r, s2 / 2.0));
                    let b_ij = cp * g2 + cm * h2;
                    let b_ji = -cp * g2 + cm * h2;
                    draw[i * n + j] = (a_ij, b_ij);
                    draw[j * n + i] = (a_ji, b_ji);
                }
            }
            Ok(QuaternionMatrix::from_blocks(n, |i, j| draw[i * n + j]))
        }
    }
}

/// Draws a strictly upper-triangular quaternionic matrix with i.i.d. block
/// entries of variance `sigma^2 / 2` per independent complex element.
pub fn sample_t(params: &EnsembleParams, rng: RngStream) -> Result<UpperTriangularT> {
    let mut r = rng.rng();
    let n = params.n();
    let s2 = params.sigma_sq();
    let mut draw = vec![(C64::ZERO, C64::ZERO); n * n];
    for i in 0..n {
        for j in i + 1..n {
            draw[i * n + j] =
                (complex_gaussian(&mut r, s2 / 2.0), complex_gaussian(&mut r, s2 / 2.0));
        }
    }
    Ok(UpperTriangularT::from_blocks(n, |i, j| draw[i * n + j]))
}
