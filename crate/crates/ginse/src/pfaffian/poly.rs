//! Polynomials in `(z, conj z)` and their exact integrals against the
//! radially weighted Gaussian measure `|z|^{2 alpha} exp(-2|z|^2 / sigma^2)`.
//!
//! The angular integral kills every monomial with unequal powers, so the
//! integral of a finite polynomial reduces to a Gamma-function sum that the
//! engine evaluates in log scale. This is what makes the banded-matrix
//! entries testable: every closed-form band entry must agree with the engine
//! applied to the defining integrand.

use super::LogComplex;
use crate::scalar::Real;
use num_complex::Complex;
use std::collections::BTreeMap;

/// `sum c_{m,n} z^m conj(z)^n` with finitely many terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPolynomial<T> {
    terms: BTreeMap<(u32, u32), Complex<T>>,
}

impl<T: Real> Default for ZPolynomial<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> ZPolynomial<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn monomial(m: u32, n: u32, c: Complex<T>) -> Self {
        let mut terms = BTreeMap::new();
        if c != Complex::new(T::zero(), T::zero()) {
            terms.insert((m, n), c);
        }
        Self { terms }
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, Complex::new(T::one(), T::zero()))
    }

    pub fn conj_z() -> Self {
        Self::monomial(0, 1, Complex::new(T::one(), T::zero()))
    }

    /// `z - conj z`
    pub fn z_minus_conj_z() -> Self {
        Self::z() - Self::conj_z()
    }

    /// `|x - z|^2 = (x - z)(conj x - conj z)` as a polynomial in `(z, conj z)`.
    pub fn abs_sq_minus_z(x: Complex<T>) -> Self {
        (Self::constant(x) - Self::z()) * (Self::constant(x.conj()) - Self::conj_z())
    }

    /// `|x - conj z|^2 = (x - conj z)(conj x - z)`.
    pub fn abs_sq_minus_conj_z(x: Complex<T>) -> Self {
        (Self::constant(x) - Self::conj_z()) * (Self::constant(x.conj()) - Self::z())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Complex<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(mut self, c: Complex<T>) -> Self {
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self
    }

    fn insert(&mut self, key: (u32, u32), c: Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let entry = self.terms.entry(key).or_insert(zero);
        *entry += c;
        if *entry == zero {
            self.terms.remove(&key);
        }
    }
}

impl<T: Real> std::ops::Add for ZPolynomial<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.insert(k, c);
        }
        self
    }
}

impl<T: Real> std::ops::Sub for ZPolynomial<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.insert(k, -c);
        }
        self
    }
}

impl<T: Real> std::ops::Mul for ZPolynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for ((m1, n1), c1) in &self.terms {
            for ((m2, n2), c2) in &rhs.terms {
                out.insert((m1 + m2, n1 + n2), *c1 * *c2);
            }
        }
        out
    }
}

/// `int z^m conj(z)^n |z|^{2 alpha} exp(-2 |z|^2 / sigma^2) d^2 z`
/// `= delta_{m,n} pi Gamma(m + alpha + 1) (sigma^2 / 2)^{m + alpha + 1}`
/// in log-scaled form.
pub fn gaussian_moment<T: Real>(m: u32, n: u32, alpha: T, sigma_sq: T) -> LogComplex<T> {
    if m != n {
        return LogComplex::zero();
    }
    let b = T::from_f(m as f64) + alpha + T::one();
    LogComplex::from_log(T::PI().ln() + b.ln_gamma() + b * (sigma_sq / T::from_f(2.0)).ln())
}

/// Integrates a polynomial term by term via [`gaussian_moment`]; exact up to
/// floating round-off.
pub fn integrate_poly<T: Real>(p: &ZPolynomial<T>, alpha: T, sigma_sq: T) -> LogComplex<T> {
    let mut acc = LogComplex::zero();
    for (&(m, n), &c) in p.terms() {
        if m == n {
            acc = acc + LogComplex::from_complex(c) * gaussian_moment(m, n, alpha, sigma_sq);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn moment_normalization() {
        // int exp(-2|z|^2) d^2 z = pi/2
        let m = gaussian_moment(0, 0, 0.0, 1.0).to_complex();
        assert!((m.re - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn angular_selection_rule() {
        assert!(gaussian_moment(1, 0, 0.7, 2.0).is_zero());
        assert!(gaussian_moment(3, 5, 0.0, 1.0).is_zero());
    }

    #[test]
    fn moment_with_zero_modes() {
        // (2,2, alpha=1, sigma^2=2) -> pi Gamma(4) 1^4 = 6 pi
        let m = gaussian_moment(2, 2, 1.0, 2.0).to_complex();
        assert!((m.re - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn integrate_single_term() {
        let p: ZPolynomial<f64> = ZPolynomial::one();
        let v = integrate_poly(&p, 0.3, 0.8);
        let m = gaussian_moment(0, 0, 0.3, 0.8);
        assert_eq!(v.to_complex(), m.to_complex());
    }

    #[test]
    fn integrate_two_term_hand_value() {
        // z conj z - 1 at alpha=0, sigma^2=1: pi Gamma(2) (1/2)^2 - pi/2 = -pi/4
        let p: ZPolynomial<f64> =
            ZPolynomial::z() * ZPolynomial::conj_z() - ZPolynomial::one();
        let v = integrate_poly(&p, 0.0, 1.0).to_complex();
        assert!((v.re + PI / 4.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn integrate_antisymmetric_combination() {
        // (z - conj z)(conj z - z) = -(z - conj z)^2 integrates to
        // 2 * moment(1,1): the z^2 and conj z^2 terms drop out.
        let zc: ZPolynomial<f64> = ZPolynomial::z_minus_conj_z();
        let p = zc.clone() * (ZPolynomial::conj_z() - ZPolynomial::z());
        let v = integrate_poly(&p, 0.4, 1.3).to_complex();
        let expect = 2.0 * gaussian_moment(1, 1, 0.4, 1.3).to_complex().re;
        assert!((v.re - expect).abs() < 1e-12 * expect.abs());
        assert!(v.im.abs() < 1e-15 * expect.abs());
    }

    #[test]
    fn polynomial_algebra() {
        let x = Complex64::new(0.3, -0.7);
        let p = ZPolynomial::abs_sq_minus_z(x);
        // evaluate at a point by brute force
        let z = Complex64::new(1.1, 0.4);
        let mut val = Complex64::ZERO;
        for (&(m, n), &c) in p.terms() {
            val += c * z.powu(m) * z.conj().powu(n);
        }
        let direct = (x - z) * (x - z).conj();
        assert!((val - direct).norm() < 1e-14);
    }
}
