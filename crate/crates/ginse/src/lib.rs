//! Eigenvector overlap statistics for the quaternionic (symplectic) Ginibre
//! ensemble.
//!
//! The crate computes left/right-eigenvector overlaps of 2N x 2N complex
//! matrices with quaternion block structure three independent ways:
//!
//! * [`eigen`] — direct non-Hermitian eigendecomposition of sampled matrices,
//! * [`schur`] — Schur-recursion overlaps and their closed-form averages over
//!   the strictly upper-triangular matrix at fixed eigenvalues,
//! * [`exact`] — finite-N Pfaffian formulas for the induced ensemble,
//!
//! together with the large-N bulk and origin limits in [`asymptotics`].
//! Everything with extreme dynamic range (Gamma-function ladders, Pfaffians
//! of banded matrices at `sigma^2 = 1/N`) runs in the log-magnitude/phase
//! arithmetic of [`pfaffian::LogComplex`].
//!
//! The scalar-agnostic numerical core (log-scaled arithmetic, the polynomial
//! moment engine, Pfaffian elimination, eigenvalue-only overlap averages, the
//! bulk formulas) is generic over [`scalar::Real`]; the concrete aliases below
//! fix `f64` for the sampling and eigendecomposition layers.

pub mod asymptotics;
pub mod cmat;
pub mod ensemble;
pub mod error;
pub mod eigen;
pub mod exact;
pub mod pfaffian;
pub mod scalar;
pub mod schur;

pub use error::GinseError;

/// Concrete scalar used by the sampling / eigendecomposition layers.
pub type Real = f64;
/// Complex number over [`Real`].
pub type C64 = num_complex::Complex<Real>;
/// Log-magnitude/phase value over [`Real`].
pub type LogC = pfaffian::LogComplex<Real>;
/// Banded skew-symmetric matrix over [`Real`].
pub type Banded = pfaffian::BandedSkew<Real>;
/// Polynomial in (z, conj z) over [`Real`].
pub type ZPoly = pfaffian::ZPolynomial<Real>;

/// Result alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, GinseError>;
