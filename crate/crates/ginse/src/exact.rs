//! Exact finite-N formulas for the induced ensemble: the banded
//! skew-symmetric matrices behind the conditional overlaps, the overlaps and
//! one-point density themselves, and the origin-limit ratio.
//!
//! Every populated band entry has two routes: a closed form (implemented
//! here) and the moment-engine integration of the defining polynomial
//! integrand (exposed as [`d_integrand`] / [`h_integrand`] / wired into
//! [`density_exact`]); their agreement is the module's core self-test.

use crate::ensemble::EnsembleParams;
use crate::error::GinseError;
use crate::pfaffian::{integrate_poly, pfaffian, BandedSkew, LogComplex, ZPolynomial};
use crate::{Banded, LogC, Result, C64, ZPoly};

const LN_2PI: f64 = 1.8378770664093453;

/// Log-scaled normalization data shared by the exact formulas:
/// `C_N^{-1} = N! (2 pi)^N (sigma^2/2)^{N(N+alpha+1)} prod_j Gamma(alpha+2j)`
/// and the band prefactors `h_j = 2 pi Gamma(j+alpha+1) (sigma^2/2)^{j+alpha+2}`.
#[derive(Debug, Clone)]
pub struct NormalizationConstants {
    n: usize,
    alpha: f64,
    sigma_sq: f64,
    log_c_n: f64,
}

impl NormalizationConstants {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.require_induced()?;
        let n = params.n();
        let alpha = params.alpha();
        let s2 = params.sigma_sq();
        let mut log_inv = libm::lgamma(n as f64 + 1.0)
            + n as f64 * LN_2PI
            + (n as f64) * (n as f64 + alpha + 1.0) * (s2 / 2.0).ln();
        for j in 1..=n {
            log_inv += libm::lgamma(alpha + 2.0 * j as f64);
        }
        Ok(Self { n, alpha, sigma_sq: s2, log_c_n: -log_inv })
    }

    pub fn log_c_n(&self) -> f64 {
        self.log_c_n
    }

    /// `ln h_j` for 1-based `j`.
    pub fn log_h(&self, j: usize) -> f64 {
        let ja = j as f64 + self.alpha;
        LN_2PI + libm::lgamma(ja + 1.0) + (ja + 2.0) * (self.sigma_sq / 2.0).ln()
    }

    fn log_band_prefactor(&self, j: usize) -> f64 {
        // 2 pi Gamma(j + alpha) (sigma^2/2)^{j+alpha}
        let ja = j as f64 + self.alpha;
        LN_2PI + libm::lgamma(ja) + ja * (self.sigma_sq / 2.0).ln()
    }

    fn n_f(&self) -> f64 {
        self.n as f64
    }
}

/// Selects between the two conditional off-diagonal overlaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionalKind {
    /// Both arguments condition unbarred representatives.
    Plain12,
    /// The second argument conditions a barred representative; obtained by
    /// interchanging `x2 <-> conj x2` throughout.
    Barred12,
}

/// Closed-form band entry of the diagonal-overlap matrix, 1-based indices,
/// `k = j - i` in 1..=3.
fn d_entry(norm: &NormalizationConstants, i: usize, j: usize, x: C64) -> LogC {
    let k = j - i;
    let ja = j as f64 + norm.alpha;
    let h = norm.sigma_sq / 2.0;
    let ax2 = x.norm_sqr();
    let brace = match k {
        1 => C64::from(
            ax2 * ax2
                + norm.sigma_sq * ax2
                + ja * h * (ax2 + 2.0 * (x * x).re + (ja + 3.0) * h),
        ),
        2 => -C64::from(2.0 * x.re) * C64::from(ax2 + (ja + 1.0) * h),
        3 => C64::from(ax2),
        _ => C64::ZERO,
    };
    LogComplex::from_complex(brace).scale_log(norm.log_band_prefactor(j))
}

/// Closed-form band entry of the off-diagonal-overlap matrix, `k = j - i`
/// in 1..=5; transcribed band by band from the angular/radial reduction of
/// the defining integral.
fn h_entry(norm: &NormalizationConstants, i: usize, j: usize, x1: C64, x2: C64) -> LogC {
    let k = j - i;
    let ja = j as f64 + norm.alpha;
    let h = norm.sigma_sq / 2.0;
    let (x1b, x2b) = (x1.conj(), x2.conj());
    let (a1, a2) = (C64::from(x1.norm_sqr()), C64::from(x2.norm_sqr()));
    let s12 = C64::from((x1 + x2).norm_sqr());
    let brace = match k {
        1 => {
            a1 * a1 * a2 * a2
                + ja * h
                    * (2.0 * a1 * a2 * s12
                        + a1 * a1 * (x2 * x2 + x2b * x2b - a2)
                        + a2 * a2 * (x1 * x1 + x1b * x1b - a1)
                        + (x1 * x2 + x1b * x2b - x1 * x2b - x1b * x2) * a1 * a2)
                + ja * (ja + 1.0) * h * h
                    * (s12 * s12
                        + a1 * (2.0 * x2 * x2 + 2.0 * x2b * x2b - a2)
                        + a2 * (2.0 * x1 * x1 + 2.0 * x1b * x1b - a1)
                        + (x1 * x2 + x1b * x2b) * (2.0 * a1 + 2.0 * a2 - s12)
                        - (x1 * x2b + x1b * x2) * (a1 + a2)
                        + x1 * x1 * x2 * x2
                        + x1b * x1b * x2b * x2b)
                + ja * (ja + 1.0) * (ja + 2.0) * h * h * h
                    * (s12 + x2 * x2 + x2b * x2b + x1 * x1 + x1b * x1b + x1 * x2 + x1b * x2b)
                + C64::from(ja * (ja + 1.0) * (ja + 2.0) * (ja + 3.0) * h * h * h * h)
                + h * (2.0 * x1b * x2 * a1 * a2
                    + ja * h
                        * (2.0 * x1b * x2 * s12
                            + a1 * (2.0 * x1b * x2b + x2 * x2 - x1b * x2)
                            + a2 * (2.0 * x1 * x2 + x1b * x1b - x1b * x2))
                    + ja * (ja + 1.0) * h * h
                        * (2.0 * s12 + x1b * (2.0 * x1b + x2b) + x2 * (2.0 * x2 + x1) - a1 - a2)
                    + C64::from(2.0 * ja * (ja + 1.0) * (ja + 2.0) * h * h * h))
        }
        2 => {
            let sx = x1 + x1b + x2 + x2b;
            let mix = (x2 + x2b) * a1 + (x1 + x1b) * a2;
            let cubes = x1 * x2 * x2 + x1b * x2b * x2b + x1 * x1 * x2 + x1b * x1b * x2b;
            -(a1 * a2 * mix
                + ja * h * (s12 * mix + a1 * (x1 * x2 * x2 + x1b * x2b * x2b) + a2 * (x1 * x1 * x2 + x1b * x1b * x2b))
                + ja * (ja + 1.0) * h * h * (s12 * sx + cubes)
                + ja * (ja + 1.0) * (ja + 2.0) * h * h * h * sx
                + h * (x1b * x2 * mix
                    + (x1b + x2) * a1 * a2
                    + ja * h
                        * (x1b * x2 * sx
                            + (x1b + x2) * s12
                            + x1 * x2 * (x2 + x2b)
                            + x1b * x2b * (x1 + x1b))
                    + ja * (ja + 1.0) * h * h * (2.0 * (x2 + x1b) + x1 + x2b)))
        }
        3 => {
            (a1 * a2 + C64::from(ja * (ja + 1.0) * h * h)) * (x1b * x2b + x1 * x2 + s12)
                + ja * h
                    * (s12 * (x1b * x2b + x1 * x2)
                        + 3.0 * a1 * a2
                        + (x1b * x2 + x2b * x1) * (a1 + a2))
                + h * (2.0 * a1 * a2
                    + (a1 * x2 + a2 * x1b) * (x1b + x2)
                    + ja * h * (x1 * x2 + x1b * x2b + 2.0 * x1b * x2 + a1 + a2))
        }
        4 => {
            let sx = x1 + x1b + x2 + x2b;
            -(a1 * a2 * sx
                + ja * h * ((x1 + x1b) * a2 + (x2 + x2b) * a1)
                + h * x1b * x2 * (x1 + x2b))
        }
        5 => a1 * a2,
        _ => C64::ZERO,
    };
    LogComplex::from_complex(brace).scale_log(norm.log_band_prefactor(j))
}

/// Defining integrand of the diagonal-overlap band entry `(i, j)`, 1-based:
/// `(z^{i-1} conj z^{j-1} - z^{j-1} conj z^{i-1}) (z - conj z)
///  (|x - z|^2 |x - conj z|^2 + sigma^2 |x - z|^2)`.
pub fn d_integrand(i: usize, j: usize, x: C64, sigma_sq: f64) -> ZPoly {
    antisym_monomial(i, j)
        * ZPolynomial::z_minus_conj_z()
        * (ZPolynomial::abs_sq_minus_z(x) * ZPolynomial::abs_sq_minus_conj_z(x)
            + ZPolynomial::abs_sq_minus_z(x).scale(C64::from(sigma_sq)))
}

/// Defining integrand of the off-diagonal band entry `(i, j)`:
/// `(z^{i-1} conj z^{j-1} - z^{j-1} conj z^{i-1}) (z - conj z)
///  (|x1-z|^2 |x2-z|^2 + sigma^2 (conj x1 - conj z)(x2 - z))
///  |x1 - conj z|^2 |x2 - conj z|^2`.
pub fn h_integrand(i: usize, j: usize, x1: C64, x2: C64, sigma_sq: f64) -> ZPoly {
    let cross = (ZPolynomial::constant(x1.conj()) - ZPolynomial::conj_z())
        * (ZPolynomial::constant(x2) - ZPolynomial::z());
    antisym_monomial(i, j)
        * ZPolynomial::z_minus_conj_z()
        * (ZPolynomial::abs_sq_minus_z(x1) * ZPolynomial::abs_sq_minus_z(x2)
            + cross.scale(C64::from(sigma_sq)))
        * ZPolynomial::abs_sq_minus_conj_z(x1)
        * ZPolynomial::abs_sq_minus_conj_z(x2)
}

fn antisym_monomial(i: usize, j: usize) -> ZPoly {
    ZPolynomial::monomial(i as u32 - 1, j as u32 - 1, C64::ONE)
        - ZPolynomial::monomial(j as u32 - 1, i as u32 - 1, C64::ONE)
}

/// Banded matrix of the diagonal-overlap Pfaffian (dimension 2N-2,
/// bandwidth 3) from the closed-form band entries.
pub fn build_d_matrix(x: C64, params: &EnsembleParams) -> Result<Banded> {
    params.require_induced()?;
    if params.n() < 2 {
        return Err(GinseError::InvalidParams("D matrix needs N >= 2".into()));
    }
    let norm = NormalizationConstants::new(params)?;
    let dim = 2 * params.n() - 2;
    let mut m = BandedSkew::new(dim, 3);
    for j in 2..=dim {
        for k in 1..=3.min(j - 1) {
            m.set(j - k - 1, j - 1, d_entry(&norm, j - k, j, x));
        }
    }
    Ok(m)
}

/// Banded matrix of the off-diagonal-overlap Pfaffian (dimension 2N-4,
/// bandwidth 5); `Barred12` substitutes `x2 -> conj x2` in every entry.
pub fn build_h_matrix(
    x1: C64,
    x2: C64,
    params: &EnsembleParams,
    kind: ConditionalKind,
) -> Result<Banded> {
    params.require_induced()?;
    if params.n() < 3 {
        return Err(GinseError::InvalidParams("H matrix needs N >= 3".into()));
    }
    let w = match kind {
        ConditionalKind::Plain12 => x2,
        ConditionalKind::Barred12 => x2.conj(),
    };
    let norm = NormalizationConstants::new(params)?;
    let dim = 2 * params.n() - 4;
    let mut m = BandedSkew::new(dim, 5);
    for j in 2..=dim {
        for k in 1..=5.min(j - 1) {
            m.set(j - k - 1, j - 1, h_entry(&norm, j - k, j, x1, w));
        }
    }
    Ok(m)
}

fn finish_real(log_pref: f64, pf: LogC) -> Result<f64> {
    let total = log_pref + pf.log_abs();
    if total > 700.0 {
        return Err(GinseError::Overflow(total));
    }
    Ok(pf.phase().re * total.exp())
}

/// Conditional diagonal overlap
/// `O_N(x) = C_N (N-1)! |x|^{2 alpha} |x - conj x|^2 exp(-2|x|^2/sigma^2) Pf D`,
/// assembled in log scale; real and non-negative, vanishing on the real
/// axis. `N = 1` uses the empty Pfaffian.
pub fn diag_overlap_exact(x: C64, params: &EnsembleParams) -> Result<f64> {
    params.require_induced()?;
    if x.im == 0.0 {
        return Ok(0.0);
    }
    let norm = NormalizationConstants::new(params)?;
    let pf = if params.n() == 1 {
        LogComplex::one()
    } else {
        pfaffian(&build_d_matrix(x, params)?)?
    };
    let log_pref = norm.log_c_n
        + libm::lgamma(norm.n_f())
        + 2.0 * norm.alpha * x.norm().ln()
        + 2.0 * (2.0 * x.im).abs().ln()
        - 2.0 * x.norm_sqr() / norm.sigma_sq;
    finish_real(log_pref, pf)
}

/// Conditional off-diagonal overlap
/// `O_N(x1, x2) = -(N-1)! C_N sigma^2/(2N) |x1-conj x1|^2 |x1|^{2a}
///  |x2-conj x2|^2 |x2|^{2a} |x1-conj x2|^2 e^{-2(|x1|^2+|x2|^2)/s2} Pf H`
/// for `Plain12`; `Barred12` interchanges `x2 <-> conj x2`. `N = 2` uses the
/// empty Pfaffian.
pub fn offdiag_overlap_exact(
    x1: C64,
    x2: C64,
    params: &EnsembleParams,
    kind: ConditionalKind,
) -> Result<C64> {
    params.require_induced()?;
    if params.n() < 2 {
        return Err(GinseError::InvalidParams("off-diagonal overlap needs N >= 2".into()));
    }
    let w = match kind {
        ConditionalKind::Plain12 => x2,
        ConditionalKind::Barred12 => x2.conj(),
    };
    let scale = x1.norm().max(x2.norm()).max(1e-300);
    if (x1 - w).norm() < 1e-12 * scale {
        return Err(GinseError::NearCollision((x1 - w).norm()));
    }
    if x1.im == 0.0 || x2.im == 0.0 {
        return Ok(C64::ZERO);
    }
    let norm = NormalizationConstants::new(params)?;
    let pf = if params.n() == 2 {
        LogComplex::one()
    } else {
        pfaffian(&build_h_matrix(x1, x2, params, kind)?)?
    };
    let log_pref = libm::lgamma(norm.n_f())
        + norm.log_c_n
        + (norm.sigma_sq / (2.0 * norm.n_f())).ln()
        + 2.0 * (2.0 * x1.im).abs().ln()
        + 2.0 * norm.alpha * x1.norm().ln()
        + 2.0 * (2.0 * x2.im).abs().ln()
        + 2.0 * norm.alpha * x2.norm().ln()
        + 2.0 * (x1 - w.conj()).norm().ln()
        - 2.0 * (x1.norm_sqr() + x2.norm_sqr()) / norm.sigma_sq;
    let total = log_pref + pf.log_abs();
    if total > 700.0 {
        return Err(GinseError::Overflow(total));
    }
    Ok(-pf.phase() * total.exp())
}

/// Exact one-point density via the same prefactor-times-Pfaffian structure,
/// with the band entries generated by the moment engine on the reduced
/// integrand (the diagonal-overlap integrand without its `sigma^2 |x-z|^2`
/// term). At `x = 0` the matrix reduces to the tridiagonal
/// `h_j (j + alpha + 1)` form.
pub fn density_exact(x: C64, params: &EnsembleParams) -> Result<f64> {
    params.require_induced()?;
    if x.im == 0.0 {
        return Ok(0.0);
    }
    let norm = NormalizationConstants::new(params)?;
    let n = params.n();
    let pf = if n == 1 {
        LogComplex::one()
    } else {
        let dim = 2 * n - 2;
        let mut m = BandedSkew::new(dim, 3);
        for j in 2..=dim {
            for k in 1..=3.min(j - 1) {
                let i = j - k;
                let poly = antisym_monomial(i, j)
                    * ZPolynomial::z_minus_conj_z()
                    * ZPolynomial::abs_sq_minus_z(x)
                    * ZPolynomial::abs_sq_minus_conj_z(x);
                m.set(i - 1, j - 1, integrate_poly(&poly, norm.alpha, norm.sigma_sq));
            }
        }
        pfaffian(&m)?
    };
    let log_pref = norm.log_c_n
        + libm::lgamma(norm.n_f())
        + 2.0 * norm.alpha * x.norm().ln()
        + 2.0 * (2.0 * x.im).abs().ln()
        - 2.0 * x.norm_sqr() / norm.sigma_sq;
    finish_real(log_pref, pf)
}

/// Closed-form local diagonal overlap at the origin,
/// `(2N + alpha + 1) / (pi (3 + alpha))` (telescoped).
pub fn origin_limit_ratio(params: &EnsembleParams) -> f64 {
    (2.0 * params.n() as f64 + params.alpha() + 1.0)
        / (std::f64::consts::PI * (3.0 + params.alpha()))
}

/// Richardson extrapolation (quadratic in `t`) of
/// `diag_overlap_exact(it) / density_exact(it)` as `t -> 0`; converges to
/// `pi * origin_limit_ratio`. Direct evaluation at zero is 0/0 through the
/// `|x - conj x|^2` factors.
pub fn origin_ratio_extrapolated(params: &EnsembleParams) -> Result<f64> {
    let ratio = |t: f64| -> Result<f64> {
        let x = C64::new(0.0, t);
        Ok(diag_overlap_exact(x, params)? / density_exact(x, params)?)
    };
    let (t1, t2) = (1e-2, 1e-3);
    let (r1, r2) = (ratio(t1)?, ratio(t2)?);
    Ok(r2 + (r2 - r1) * t2 * t2 / (t1 * t1 - t2 * t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::LogComplex;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn induced(n: usize, alpha: f64, s2: f64) -> EnsembleParams {
        EnsembleParams::induced(n, alpha, s2).unwrap()
    }

    fn rand_point(rng: &mut ChaCha8Rng, spread: f64) -> C64 {
        C64::new(spread * (rng.random::<f64>() - 0.5), spread * (0.05 + rng.random::<f64>()))
    }

    #[test]
    fn elliptic_rejected() {
        use crate::ensemble::Potential;
        let p = EnsembleParams::new(4, 0.0, 1.0, Potential::EllipticGinibre { tau: 0.3 }).unwrap();
        assert!(build_d_matrix(C64::new(0.1, 0.5), &p).is_err());
        assert!(diag_overlap_exact(C64::new(0.1, 0.5), &p).is_err());
    }

    #[test]
    fn d_matrix_matches_moment_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for &alpha in &[0.0, 1.0, 2.5] {
            for &s2 in &[0.5, 1.0] {
                let p = induced(5, alpha, s2);
                let x = rand_point(&mut rng, 1.4);
                let m = build_d_matrix(x, &p).unwrap();
                for j in 2..=m.dim() {
                    for k in 1..=3.min(j - 1) {
                        let i = j - k;
                        let engine = integrate_poly(&d_integrand(i, j, x, s2), alpha, s2);
                        let rel = LogComplex::rel_diff(m.get(i - 1, j - 1), engine);
                        assert!(rel <= 1e-10, "D({i},{j}) rel {rel:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn d_special_points() {
        let p = induced(4, 0.7, 1.3);
        let norm = NormalizationConstants::new(&p).unwrap();
        // x = 0: only the k = 1 band survives, equal to h_j (j + alpha + 3)
        let m = build_d_matrix(C64::ZERO, &p).unwrap();
        for j in 2..=m.dim() {
            let want = norm.log_h(j) + (j as f64 + 0.7 + 3.0).ln();
            let got = m.get(j - 2, j - 1);
            assert!((got.log_abs() - want).abs() < 1e-12, "j={j}");
            if j >= 3 {
                assert!(m.get(j - 3, j - 1).is_zero());
            }
        }
        // purely imaginary x: k = 2 band vanishes
        let m = build_d_matrix(C64::new(0.0, 0.8), &p).unwrap();
        for j in 3..=m.dim() {
            assert!(m.get(j - 3, j - 1).is_zero(), "k=2 band at j={j}");
        }
    }

    #[test]
    fn h_matrix_matches_moment_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for &alpha in &[0.0, 1.0, 2.5] {
            let s2 = 1.0;
            let p = induced(5, alpha, s2);
            let x1 = rand_point(&mut rng, 1.2);
            let x2 = rand_point(&mut rng, 1.2);
            for kind in [ConditionalKind::Plain12, ConditionalKind::Barred12] {
                let w = match kind {
                    ConditionalKind::Plain12 => x2,
                    ConditionalKind::Barred12 => x2.conj(),
                };
                let m = build_h_matrix(x1, x2, &p, kind).unwrap();
                for j in 2..=m.dim() {
                    for k in 1..=5.min(j - 1) {
                        let i = j - k;
                        let engine = integrate_poly(&h_integrand(i, j, x1, w, s2), alpha, s2);
                        let rel = LogComplex::rel_diff(m.get(i - 1, j - 1), engine);
                        assert!(rel <= 1e-10, "H({i},{j}) {kind:?} rel {rel:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn h_bandwidths_are_sharp() {
        // entries beyond the band vanish under the moment engine
        let (alpha, s2) = (1.5, 0.8);
        let x1 = C64::new(0.4, 0.6);
        let x2 = C64::new(-0.3, 0.9);
        for k in 6..=8 {
            let v = integrate_poly(&h_integrand(1, 1 + k, x1, x2, s2), alpha, s2);
            assert!(v.is_zero() || v.log_abs() < -60.0, "H band k={k} leak");
        }
        for k in 4..=6 {
            let v = integrate_poly(&d_integrand(1, 1 + k, x1, s2), alpha, s2);
            assert!(v.is_zero() || v.log_abs() < -60.0, "D band k={k} leak");
        }
    }

    #[test]
    fn h_k5_band_closed_form() {
        // H_{j-5,j} = 2 pi Gamma(j+alpha) (s2/2)^{j+alpha} |x1|^2 |x2|^2
        let p = induced(5, 1.0, 1.0);
        let norm = NormalizationConstants::new(&p).unwrap();
        let x1 = C64::new(0.5, 0.7);
        let x2 = C64::new(-0.2, 0.4);
        let m = build_h_matrix(x1, x2, &p, ConditionalKind::Plain12).unwrap();
        let j = 6usize;
        let want = norm.log_band_prefactor(j) + (x1.norm_sqr() * x2.norm_sqr()).ln();
        let got = m.get(j - 6, j - 1);
        assert!((got.log_abs() - want).abs() < 1e-12);
    }

    #[test]
    fn h_at_origin_keeps_only_ladder() {
        let p = induced(5, 0.5, 1.2);
        let m = build_h_matrix(C64::ZERO, C64::ZERO, &p, ConditionalKind::Plain12).unwrap();
        for j in 2..=m.dim() {
            assert!(!m.get(j - 2, j - 1).is_zero(), "k=1 ladder at j={j}");
            for k in 2..=5.min(j - 1) {
                assert!(m.get(j - k - 1, j - 1).is_zero(), "k={k} at j={j}");
            }
        }
    }

    #[test]
    fn diag_overlap_basics() {
        let p = induced(3, 0.0, 1.0);
        assert_eq!(diag_overlap_exact(C64::new(0.7, 0.0), &p).unwrap(), 0.0);
        let v = diag_overlap_exact(C64::new(0.3, 0.6), &p).unwrap();
        assert!(v > 0.0);
        // swapping arguments conjugates the off-diagonal overlap
        let x1 = C64::new(0.3, 0.6);
        let x2 = C64::new(-0.4, 0.5);
        let a = offdiag_overlap_exact(x1, x2, &p, ConditionalKind::Plain12).unwrap();
        let b = offdiag_overlap_exact(x2, x1, &p, ConditionalKind::Plain12).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
        // real first argument kills it
        let r = offdiag_overlap_exact(C64::new(0.5, 0.0), x2, &p, ConditionalKind::Plain12)
            .unwrap();
        assert_eq!(r, C64::ZERO);
    }

    #[test]
    fn offdiag_rejects_coincident_arguments() {
        let p = induced(4, 0.0, 1.0);
        let x = C64::new(0.3, 0.4);
        assert!(offdiag_overlap_exact(x, x, &p, ConditionalKind::Plain12).is_err());
        assert!(offdiag_overlap_exact(x, x.conj(), &p, ConditionalKind::Barred12).is_err());
        assert!(offdiag_overlap_exact(x, x.conj(), &p, ConditionalKind::Plain12).is_ok());
    }

    #[test]
    fn density_tridiagonal_reduction_at_origin() {
        let p = induced(4, 1.0, 0.9);
        let norm = NormalizationConstants::new(&p).unwrap();
        let dim = 2 * 4 - 2;
        for j in 2..=dim {
            let i = j - 1;
            let poly = antisym_monomial(i, j)
                * ZPolynomial::z_minus_conj_z()
                * ZPolynomial::abs_sq_minus_z(C64::ZERO)
                * ZPolynomial::abs_sq_minus_conj_z(C64::ZERO);
            let v = integrate_poly(&poly, 1.0, 0.9);
            let want = norm.log_h(j) + (j as f64 + 1.0 + 1.0).ln();
            assert!((v.log_abs() - want).abs() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn density_positive_and_vanishes_on_axis() {
        let p = induced(3, 1.0, 0.8);
        assert_eq!(density_exact(C64::new(0.4, 0.0), &p).unwrap(), 0.0);
        assert!(density_exact(C64::new(0.4, 0.7), &p).unwrap() > 0.0);
    }

    #[test]
    fn origin_limit_closed_form_values() {
        // (2N + alpha + 1) / (pi (3 + alpha))
        let v = origin_limit_ratio(&induced(2, 0.0, 1.0));
        assert!((v - 5.0 / (3.0 * PI)).abs() < 1e-15);
        let v = origin_limit_ratio(&induced(1, 0.0, 1.0));
        assert!((v - 1.0 / PI).abs() < 1e-15);
        let v = origin_limit_ratio(&induced(10, 2.0, 1.0));
        assert!((v - 23.0 / (5.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn origin_extrapolation_matches_closed_form() {
        for (n, alpha) in [(1usize, 0.0), (2, 0.0), (3, 1.0), (6, 2.0)] {
            let p = induced(n, alpha, 1.0);
            let got = origin_ratio_extrapolated(&p).unwrap();
            let want = PI * origin_limit_ratio(&p);
            assert!(
                (got - want).abs() <= 1e-3 * want,
                "N={n} alpha={alpha}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn normalization_constant_n1_hand_value() {
        // C_1^{-1} = 2 pi Gamma(alpha + 2) (s2/2)^{alpha + 2}
        let p = induced(1, 0.7, 1.3);
        let norm = NormalizationConstants::new(&p).unwrap();
        let want = -(LN_2PI + libm::lgamma(2.7) + 2.7 * (1.3f64 / 2.0).ln());
        assert!((norm.log_c_n() - want).abs() < 1e-12);
    }
}
