//! Banded skew-symmetric matrices with log-scaled entries.

use super::LogComplex;
use crate::scalar::Real;

/// Skew-symmetric matrix with non-zero entries confined (at construction) to
/// `0 < j - i <= bandwidth`; the lower triangle is implied by skew symmetry
/// and the diagonal is structurally zero.
#[derive(Debug, Clone)]
pub struct BandedSkew<T> {
    dim: usize,
    bandwidth: usize,
    /// entry (i, i + 1 + k) at index i * bandwidth + k
    upper: Vec<LogComplex<T>>,
}

impl<T: Real> BandedSkew<T> {
    pub fn new(dim: usize, bandwidth: usize) -> Self {
        Self { dim, bandwidth, upper: vec![LogComplex::zero(); dim * bandwidth.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Sets the upper-triangle entry `(i, j)` with `0 < j - i <= bandwidth`;
    /// the transposed entry is implied.
    pub fn set(&mut self, i: usize, j: usize, v: LogComplex<T>) {
        assert!(j > i && j - i <= self.bandwidth && j < self.dim, "({i},{j}) outside band");
        self.upper[i * self.bandwidth + (j - i - 1)] = v;
    }

    /// Entry `(i, j)` with skew symmetry and band zeros materialized.
    pub fn get(&self, i: usize, j: usize) -> LogComplex<T> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => LogComplex::zero(),
            Less if j - i <= self.bandwidth => self.upper[i * self.bandwidth + (j - i - 1)],
            Greater if i - j <= self.bandwidth => {
                self.upper[j * self.bandwidth + (i - j - 1)].neg()
            }
            _ => LogComplex::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn skew_and_band_structure() {
        let mut m: BandedSkew<f64> = BandedSkew::new(6, 2);
        m.set(0, 1, LogComplex::from_complex(Complex64::new(2.0, 1.0)));
        m.set(1, 3, LogComplex::from_complex(Complex64::new(-0.5, 0.0)));
        assert_eq!(m.get(1, 0).to_complex(), Complex64::new(-2.0, -1.0));
        assert!(m.get(0, 3).is_zero(), "outside band is zero");
        assert!(m.get(2, 2).is_zero(), "diagonal is zero");
        assert_eq!(m.get(3, 1).to_complex(), Complex64::new(0.5, 0.0));
    }
}
