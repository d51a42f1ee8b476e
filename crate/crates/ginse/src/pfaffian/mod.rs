//! Numerics backbone: log-magnitude/phase arithmetic, a symbolic moment
//! engine for integrals of polynomials in `(z, conj z)` against the radially
//! weighted Gaussian measure, and a numerically stable Pfaffian for banded
//! skew-symmetric matrices with extreme dynamic range.

mod banded;
mod log_complex;
mod poly;

pub use banded::BandedSkew;
pub use log_complex::LogComplex;
pub use poly::{gaussian_moment, integrate_poly, ZPolynomial};

use crate::error::GinseError;
use crate::scalar::Real;

/// Pivot magnitudes below this natural-log threshold (after row/column
/// balancing) are treated as exact zeros of the skew elimination.
const SINGULAR_LOG_PIVOT: f64 = -690.0; // ln(1e-300)

/// Pfaffian of a skew-symmetric matrix in log-scaled form.
///
/// The matrix is balanced by extracting per-row log factors, then reduced by
/// skew-symmetric (Parlett–Reid style) elimination with partial pivoting on
/// the balanced magnitudes. The Pfaffian is the signed product of the
/// even-position superdiagonal entries of the resulting tridiagonal form.
pub fn pfaffian<T: Real>(m: &BandedSkew<T>) -> Result<LogComplex<T>, GinseError> {
    let n = m.dim();
    if n == 0 {
        return Ok(LogComplex::one());
    }
    if n % 2 != 0 {
        return Err(GinseError::InvalidParams(format!(
            "pfaffian needs even dimension, got {n}"
        )));
    }

    // Dense working copy.
    let mut a = vec![LogComplex::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m.get(i, j);
        }
    }

    // Balance: divide row i and column i by exp(d_i) with d_i = half the
    // largest row log-magnitude, so the working entries are O(1) even when
    // the raw entries span hundreds of decades. Pf(M) = exp(sum d_i) Pf(M').
    let mut extracted = T::zero();
    for i in 0..n {
        let row_max = (0..n)
            .map(|j| a[i * n + j].log_abs())
            .fold(T::neg_infinity(), T::max);
        if row_max.is_finite() {
            let d = row_max / T::from_f(2.0);
            extracted += d;
            for j in 0..n {
                a[i * n + j] = a[i * n + j].scale_log(-d);
                a[j * n + i] = a[j * n + i].scale_log(-d);
            }
        }
    }

    let mut sign = 1.0f64;
    let mut prod = LogComplex::one();

    for k in (0..n - 1).step_by(2) {
        // Pivot: largest |a[i][k]| over i > k, swapped into row k+1.
        let mut best = k + 1;
        let mut best_mag = a[(k + 1) * n + k].log_abs();
        for i in k + 2..n {
            let mag = a[i * n + k].log_abs();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if !best_mag.is_finite() || best_mag < T::from_f(SINGULAR_LOG_PIVOT) {
            return Err(GinseError::SingularMatrix(
                best_mag.to_f64().unwrap_or(f64::NEG_INFINITY),
            ));
        }
        if best != k + 1 {
            swap_rows_cols(&mut a, n, k + 1, best);
            sign = -sign;
        }

        let pivot = a[k * n + (k + 1)];
        prod = prod * pivot;

        // Eliminate column k below row k+1 (and row k right of column k+1),
        // re-imposing skew symmetry on the updated trailing block.
        let piv_lower = a[(k + 1) * n + k];
        for i in k + 2..n {
            let f = a[i * n + k] / piv_lower;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let upd = a[i * n + j] - f * a[(k + 1) * n + j];
                a[i * n + j] = upd;
            }
            for j in k..n {
                a[j * n + i] = a[i * n + j].neg();
            }
            a[i * n + i] = LogComplex::zero();
        }
    }

    Ok(prod.scale_log(extracted).signed(sign))
}

fn swap_rows_cols<T: Real>(a: &mut [LogComplex<T>], n: usize, p: usize, q: usize) {
    for j in 0..n {
        a.swap(p * n + j, q * n + j);
    }
    for i in 0..n {
        a.swap(i * n + p, i * n + q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn banded_from_dense(d: &[Vec<Complex64>]) -> BandedSkew<f64> {
        let n = d.len();
        let bw = n - 1;
        let mut m = BandedSkew::new(n, bw);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, LogComplex::from_complex(d[i][j]));
            }
        }
        m
    }

    /// Plain complex LU determinant, independent of the log-scaled path.
    fn det_dense(d: &[Vec<Complex64>]) -> Complex64 {
        let n = d.len();
        let mut a: Vec<Vec<Complex64>> = d.to_vec();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (piv, _) = (k..n)
                .map(|i| (i, a[i][k].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if a[piv][k].norm() == 0.0 {
                return Complex64::ZERO;
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let sub = f * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det
    }

    fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
        let mut d = vec![vec![Complex64::ZERO; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                d[i][j] = z;
                d[j][i] = -z;
            }
        }
        d
    }

    #[test]
    fn base_case_2x2() {
        let a = Complex64::new(3.0, -2.0);
        let d = vec![vec![Complex64::ZERO, a], vec![-a, Complex64::ZERO]];
        let pf = pfaffian(&banded_from_dense(&d)).unwrap().to_complex();
        assert!((pf - a).norm() < 1e-14);
    }

    #[test]
    fn tridiagonal_odd_product() {
        // superdiagonal (2, 3, 5) -> Pf = 2 * 5
        let mut m = BandedSkew::new(4, 1);
        for (i, v) in [2.0, 3.0, 5.0].iter().enumerate() {
            m.set(i, i + 1, LogComplex::from_complex(Complex64::new(*v, 0.0)));
        }
        let pf = pfaffian(&m).unwrap().to_complex();
        assert!((pf - Complex64::new(10.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 2 * rng.random_range(1..=6usize);
            let d = random_skew(n, &mut rng);
            let pf = pfaffian(&banded_from_dense(&d)).unwrap().to_complex();
            let det = det_dense(&d);
            assert!(
                (pf * pf - det).norm() <= 1e-9 * det.norm().max(1e-30),
                "n={n} pf^2={:?} det={:?}",
                pf * pf,
                det
            );
        }
    }

    #[test]
    fn transposition_flips_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = random_skew(6, &mut rng);
        let mut swapped = d.clone();
        // swap rows and columns 1 <-> 4
        swapped.swap(1, 4);
        for row in swapped.iter_mut() {
            row.swap(1, 4);
        }
        let p0 = pfaffian(&banded_from_dense(&d)).unwrap().to_complex();
        let p1 = pfaffian(&banded_from_dense(&swapped)).unwrap().to_complex();
        assert!((p0 + p1).norm() < 1e-12 * p0.norm());
    }

    #[test]
    fn log_scale_soundness() {
        // Scaling every row/column pair by 10^{+-100} shifts the log-magnitude
        // by exactly the extracted factor and leaves the phase unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = random_skew(8, &mut rng);
        let base = pfaffian(&banded_from_dense(&d)).unwrap();
        for sgn in [1.0f64, -1.0] {
            let gamma = sgn * 100.0 * std::f64::consts::LN_10;
            let mut m = BandedSkew::new(8, 7);
            for i in 0..8 {
                for j in i + 1..8 {
                    m.set(i, j, LogComplex::from_complex(d[i][j]).scale_log(2.0 * gamma));
                }
            }
            let scaled = pfaffian(&m).unwrap();
            let shift = scaled.log_abs() - base.log_abs();
            // exact up to the last bits of the log bookkeeping (the 2*gamma
            // offset consumes low mantissa bits of the entry logs)
            assert!((shift - 8.0 * gamma).abs() < 1e-9, "log shift {shift} vs {}", 8.0 * gamma);
            assert!((scaled.phase() - base.phase()).norm() < 1e-12, "phase unchanged");
        }
        // Mixed per-pair scaling: same identity up to roundoff.
        let gammas = [100.0, -100.0, 60.0, -60.0].map(|g| g * std::f64::consts::LN_10);
        let mut m = BandedSkew::new(8, 7);
        for i in 0..8 {
            for j in i + 1..8 {
                let g = gammas[i / 2] + gammas[j / 2];
                m.set(i, j, LogComplex::from_complex(d[i][j]).scale_log(g));
            }
        }
        let scaled = pfaffian(&m).unwrap();
        let expect = base.log_abs() + 2.0 * gammas.iter().sum::<f64>();
        assert!((scaled.log_abs() - expect).abs() < 1e-9);
    }

    #[test]
    fn odd_dimension_rejected() {
        let m: BandedSkew<f64> = BandedSkew::new(3, 1);
        assert!(pfaffian(&m).is_err());
    }

    #[test]
    fn empty_matrix_pfaffian_is_one() {
        let m: BandedSkew<f64> = BandedSkew::new(0, 1);
        let pf = pfaffian(&m).unwrap();
        assert_eq!(pf.to_complex(), Complex64::ONE);
    }

    #[test]
    fn singular_matrix_detected() {
        let m: BandedSkew<f64> = BandedSkew::new(4, 3);
        // only entry (0,1): columns 2,3 identically zero
        let mut m = m;
        m.set(0, 1, LogComplex::from_complex(Complex64::ONE));
        assert!(matches!(pfaffian(&m), Err(GinseError::SingularMatrix(_))));
    }
}
