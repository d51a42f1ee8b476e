//! Scalar abstraction for the numerical core.
//!
//! The log-scaled arithmetic, moment engine, Pfaffian elimination and the
//! eigenvalue-only overlap formulas only need ordinary float operations plus
//! `ln Gamma`. Bundling them behind one trait keeps those modules generic
//! over `f32`/`f64` while the concrete aliases live at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar with the special functions the core needs.
pub trait Real: Float + FloatConst + FromPrimitive + NumAssign + std::fmt::Debug + 'static {
    /// Natural log of the Gamma function, for strictly positive arguments.
    fn ln_gamma(self) -> Self;

    /// Error function (used by test oracles and sampler diagnostics).
    fn erf(self) -> Self;

    fn from_f(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Real for f64 {
    fn ln_gamma(self) -> Self {
        libm::lgamma(self)
    }
    fn erf(self) -> Self {
        libm::erf(self)
    }
}

impl Real for f32 {
    fn ln_gamma(self) -> Self {
        libm::lgammaf(self)
    }
    fn erf(self) -> Self {
        libm::erff(self)
    }
}
