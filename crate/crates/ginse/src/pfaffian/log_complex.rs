//! Complex values in log-magnitude/phase form.
//!
//! Entries of the finite-N Pfaffian matrices carry factors like
//! `Gamma(j + alpha) (sigma^2/2)^{j+alpha}` that reach `1e-200` and beyond at
//! `sigma^2 = 1/N`; plain doubles annihilate them. A value is stored as
//! `exp(log_abs) * phase` with `|phase| = 1`, so products never over- or
//! underflow and sums lose precision only through genuine cancellation.

use crate::scalar::Real;
use num_complex::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex<T> {
    log_abs: T,
    phase: Complex<T>,
}

impl<T: Real> LogComplex<T> {
    pub fn zero() -> Self {
        Self { log_abs: T::neg_infinity(), phase: Complex::new(T::zero(), T::zero()) }
    }

    pub fn one() -> Self {
        Self { log_abs: T::zero(), phase: Complex::new(T::one(), T::zero()) }
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == T::neg_infinity()
    }

    pub fn log_abs(&self) -> T {
        self.log_abs
    }

    pub fn phase(&self) -> Complex<T> {
        self.phase
    }

    /// From natural log of the magnitude of a positive real value.
    pub fn from_log(log_abs: T) -> Self {
        Self { log_abs, phase: Complex::new(T::one(), T::zero()) }
    }

    pub fn from_complex(w: Complex<T>) -> Self {
        let r = w.norm();
        if r == T::zero() {
            Self::zero()
        } else {
            Self { log_abs: r.ln(), phase: w / r }
        }
    }

    pub fn from_real(x: T) -> Self {
        Self::from_complex(Complex::new(x, T::zero()))
    }

    /// Multiplies the magnitude by `exp(d)` exactly (log shift).
    pub fn scale_log(mut self, d: T) -> Self {
        if !self.is_zero() {
            self.log_abs += d;
        }
        self
    }

    /// Multiplies by a real sign (+1/-1) without touching the magnitude.
    pub fn signed(mut self, sign: f64) -> Self {
        if sign < 0.0 {
            self.phase = -self.phase;
        }
        self
    }

    pub fn conj(mut self) -> Self {
        self.phase = self.phase.conj();
        self
    }

    pub fn neg(mut self) -> Self {
        self.phase = -self.phase;
        self
    }

    /// Converts back to an ordinary complex number; overflows to infinity and
    /// underflows to zero like `exp` does.
    pub fn to_complex(&self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        self.phase * self.log_abs.exp()
    }

    /// Relative difference `|a - b| / max(|a|, |b|)` evaluated in log scale.
    pub fn rel_diff(a: Self, b: Self) -> T {
        if a.is_zero() && b.is_zero() {
            return T::zero();
        }
        let m = a.log_abs.max(b.log_abs);
        let d = a - b;
        if d.is_zero() {
            T::zero()
        } else {
            (d.log_abs - m).exp()
        }
    }
}

impl<T: Real> std::ops::Mul for LogComplex<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let phase = self.phase * rhs.phase;
        let r = phase.norm();
        Self { log_abs: self.log_abs + rhs.log_abs + r.ln(), phase: phase / r }
    }
}

impl<T: Real> std::ops::Div for LogComplex<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by log-zero");
        if self.is_zero() {
            return Self::zero();
        }
        let phase = self.phase / rhs.phase;
        let r = phase.norm();
        Self { log_abs: self.log_abs - rhs.log_abs + r.ln(), phase: phase / r }
    }
}

impl<T: Real> std::ops::Add for LogComplex<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        // factor out the larger magnitude
        let (big, small) = if self.log_abs >= rhs.log_abs { (self, rhs) } else { (rhs, self) };
        let delta = small.log_abs - big.log_abs;
        let s = big.phase + small.phase * delta.exp();
        let r = s.norm();
        if r == T::zero() {
            return Self::zero();
        }
        Self { log_abs: big.log_abs + r.ln(), phase: s / r }
    }
}

impl<T: Real> std::ops::Sub for LogComplex<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn round_trips_and_arithmetic() {
        let a = Complex64::new(-1.25, 0.5);
        let b = Complex64::new(0.3, -2.0);
        let (la, lb) = (LogComplex::from_complex(a), LogComplex::from_complex(b));
        assert!(close((la * lb).to_complex(), a * b, 1e-15));
        assert!(close((la / lb).to_complex(), a / b, 1e-15));
        assert!(close((la + lb).to_complex(), a + b, 1e-15));
        assert!(close((la - lb).to_complex(), a - b, 1e-15));
        assert!(close(la.conj().to_complex(), a.conj(), 1e-15));
    }

    #[test]
    fn extreme_ranges_survive() {
        // (1e-200 * 1e-180) / 1e-350 = 1e-30, all out of f64 product range
        let a = LogComplex::from_log(-200.0 * std::f64::consts::LN_10);
        let b = LogComplex::from_log(-180.0 * std::f64::consts::LN_10);
        let c = LogComplex::from_log(-350.0 * std::f64::consts::LN_10);
        let r = a * b / c;
        assert!((r.log_abs() + 30.0 * std::f64::consts::LN_10).abs() < 1e-9);
    }

    #[test]
    fn addition_with_huge_scale_gap() {
        let big = LogComplex::from_log(500.0);
        let tiny = LogComplex::from_log(-500.0);
        let s = big + tiny;
        assert_eq!(s.log_abs(), 500.0);
    }

    #[test]
    fn cancellation_to_zero() {
        let a = LogComplex::from_complex(Complex64::new(3.0, -1.0));
        let d = a - a;
        assert!(d.is_zero());
        assert_eq!(d.to_complex(), Complex64::ZERO);
    }
}
