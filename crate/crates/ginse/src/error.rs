use thiserror::Error;

/// Errors produced by samplers, decompositions and exact-formula assembly.
#[derive(Debug, Clone, Error)]
pub enum GinseError {
    /// Parameter set violates a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two eigenvalues closer than the degeneracy tolerance; the draw is a
    /// measure-zero event and the caller should resample.
    #[error("degenerate spectrum: eigenvalue pair within {0:e} of each other")]
    DegenerateSpectrum(f64),

    /// An eigenvalue too close to the real axis to assign a Kramers pair.
    #[error("real eigenvalue: |Im z| = {0:e} below pairing tolerance")]
    RealEigenvalue(f64),

    /// Conjugate pairing failed: an eigenvalue has no partner within tolerance.
    #[error("unpaired eigenvalue: nearest conjugate partner at distance {0:e}")]
    UnpairedEigenvalue(f64),

    /// A denominator `z_i - z_j` (or `z_i - conj z_j`) underflowed.
    #[error("near collision: denominator magnitude {0:e} below threshold")]
    NearCollision(f64),

    /// Pfaffian elimination hit a pivot that underflowed after scaling.
    #[error("singular matrix: pivot log-magnitude {0} after scaling")]
    SingularMatrix(f64),

    /// Exact finite-N formulas are only defined for the induced ensemble.
    #[error("exact formulas unsupported for this potential: {0}")]
    ExactFormulaUnsupported(String),

    /// A log-scaled result exceeds the exponent range of double precision;
    /// reported rather than silently saturated.
    #[error("result overflows double precision: log magnitude {0}")]
    Overflow(f64),
}
