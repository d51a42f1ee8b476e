//! Large-N limits in the bulk of the spectrum under the `sigma^2 = 1/N`
//! scale convention: circular law, macroscopic diagonal and off-diagonal
//! overlaps, and the factorized two-point density.
//!
//! The bulk formulas presume a distance to the edge of support and to the
//! real axis larger than a few multiples of `1/sqrt(N)`; [`BulkPoint`]
//! carries that margin so callers can surface the restriction instead of
//! hiding it.

use crate::scalar::Real;
use num_complex::Complex;

/// Margin (in units of `1/sqrt(N)`) below which the bulk formulas are
/// flagged unreliable.
pub const BULK_MARGIN_THRESHOLD: f64 = 3.0;

/// A spectral point with its distance to the domain boundary of the bulk
/// formulas.
#[derive(Debug, Clone, Copy)]
pub struct BulkPoint<T> {
    pub x: Complex<T>,
    /// `min(1 - |x|, |Im x|) * sqrt(N)`
    pub margin: T,
}

impl<T: Real> BulkPoint<T> {
    pub fn new(x: Complex<T>, n: usize) -> Self {
        let sqrt_n = T::from_f(n as f64).sqrt();
        let margin = (T::one() - x.norm()).min(x.im.abs()) * sqrt_n;
        Self { x, margin }
    }

    /// Whether the bulk formulas are trustworthy at this point.
    pub fn reliable(&self) -> bool {
        self.margin >= T::from_f(BULK_MARGIN_THRESHOLD)
    }
}

/// Limiting spectral density: `1/pi` inside the open unit disc, else 0.
pub fn circular_law<T: Real>(x: Complex<T>) -> T {
    if x.norm() < T::one() {
        T::one() / T::PI()
    } else {
        T::zero()
    }
}

/// Macroscopic bulk limit of the conditional diagonal overlap:
/// `N (1 - |x|^2) / pi` inside the unit disc, else 0.
pub fn bulk_diag<T: Real>(x: Complex<T>, n: usize) -> T {
    if x.norm() < T::one() {
        T::from_f(n as f64) * (T::one() - x.norm_sqr()) / T::PI()
    } else {
        T::zero()
    }
}

/// Macroscopic bulk limit of the conditional off-diagonal overlap:
/// `-(1 - x1 conj x2) / (pi^2 |x1 - x2|^4)` when both arguments are inside
/// the unit disc, else 0. Coincident arguments are rejected: the limit
/// diverges there, so a silent value would be meaningless.
pub fn bulk_offdiag<T: Real>(x1: Complex<T>, x2: Complex<T>) -> Complex<T> {
    assert!(x1 != x2, "bulk off-diagonal overlap requires x1 != x2");
    let zero = Complex::new(T::zero(), T::zero());
    if x1.norm() >= T::one() || x2.norm() >= T::one() {
        return zero;
    }
    let num = Complex::new(T::one(), T::zero()) - x1 * x2.conj();
    let d = (x1 - x2).norm_sqr();
    -num / (T::PI() * T::PI() * d * d)
}

/// Factorized two-point density `circular_law(x1) circular_law(x2)` with the
/// coincident-argument exclusion.
pub fn factorized_density2<T: Real>(x1: Complex<T>, x2: Complex<T>) -> T {
    if x1 == x2 {
        T::zero()
    } else {
        circular_law(x1) * circular_law(x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn circular_law_values() {
        assert!((circular_law(Complex64::ZERO) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(circular_law(Complex64::new(2.0, 0.0)), 0.0);
        // area of disc times 1/pi integrates to 1 (midpoint grid)
        let m = 400;
        let h = 2.4 / m as f64;
        let mut total = 0.0;
        for a in 0..m {
            for b in 0..m {
                let x = Complex64::new(-1.2 + (a as f64 + 0.5) * h, -1.2 + (b as f64 + 0.5) * h);
                total += circular_law(x) * h * h;
            }
        }
        assert!((total - 1.0).abs() < 2e-3, "{total}");
    }

    #[test]
    fn bulk_diag_values() {
        assert!((bulk_diag(Complex64::ZERO, 100) - 100.0 / PI).abs() < 1e-12);
        assert_eq!(bulk_diag(Complex64::new(1.0, 0.0), 10), 0.0);
        assert_eq!(bulk_diag(Complex64::new(2.0, 0.0), 10), 0.0);
    }

    #[test]
    fn bulk_offdiag_values() {
        // x1 = 0.5i, x2 = -0.5i: x1 conj x2 = -0.25, |x1-x2| = 1
        let v = bulk_offdiag(Complex64::new(0.0, 0.5), Complex64::new(0.0, -0.5));
        assert!((v - Complex64::new(-1.25 / (PI * PI), 0.0)).norm() < 1e-12);
        assert_eq!(
            bulk_offdiag(Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.5)),
            Complex64::ZERO
        );
        // argument swap conjugates
        let a = bulk_offdiag(Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.5));
        let b = bulk_offdiag(Complex64::new(-0.2, 0.5), Complex64::new(0.3, 0.4));
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "x1 != x2")]
    fn bulk_offdiag_rejects_coincident_arguments() {
        let x = Complex64::new(0.2, 0.3);
        let _ = bulk_offdiag(x, x);
    }

    #[test]
    fn factorized_density_values() {
        let v = factorized_density2(Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0));
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-15);
        assert_eq!(factorized_density2(Complex64::new(1.5, 0.0), Complex64::ZERO), 0.0);
        let x = Complex64::new(0.1, 0.2);
        assert_eq!(factorized_density2(x, x), 0.0);
    }

    #[test]
    fn bulk_margin_flag() {
        let p = BulkPoint::new(Complex64::new(0.3, 0.5), 100);
        assert!(p.reliable());
        let edge = BulkPoint::new(Complex64::new(0.999, 0.01), 100);
        assert!(!edge.reliable());
    }
}
