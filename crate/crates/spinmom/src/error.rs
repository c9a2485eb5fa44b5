use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical routines never panic on bad physics input; they return one of
/// these variants with enough context to diagnose the offending parameter.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Matrix or state dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix expected to be Hermitian is not, beyond tolerance.
    #[error("matrix not Hermitian: max |H - H^dagger| entry = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// A density matrix trace differs from one beyond tolerance.
    #[error("density matrix trace off by {deviation:.3e} from 1")]
    TraceNotOne { deviation: f64 },

    /// A density matrix has an eigenvalue below the positivity floor.
    #[error("density matrix not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    /// A state vector norm differs from one beyond tolerance.
    #[error("state norm off by {deviation:.3e} from 1")]
    NormNotOne { deviation: f64 },

    /// Adaptive quadrature ran out of depth or panel budget before reaching
    /// the requested tolerance. Carries the best value obtained so the caller
    /// can still inspect it.
    #[error("quadrature did not converge: requested tol {tol:.3e}, achieved {achieved:.3e} over {panels} panels")]
    QuadratureNoConverge {
        value: Complex64,
        achieved: f64,
        tol: f64,
        panels: usize,
    },

    /// The excised window around an oscillatory singularity would have to be
    /// wider than a quarter of the integration interval: the parameters are
    /// too singular for the requested tolerance.
    #[error("oscillatory window half-width {required:.3e} exceeds quarter-interval {limit:.3e}: parameters too singular for requested tolerance")]
    WindowTooWide { required: f64, limit: f64 },

    /// A momentum/frequency density failed its normalization check.
    #[error("density not normalized on the given domain: integral = {mass:.12e}")]
    UnnormalizedDensity { mass: f64 },

    /// A circular refraction index would be imaginary: 1 + chi11 +/- chi12
    /// is not positive at the reported frequency.
    #[error("refraction index undefined at w = {w:.12e}: radicand 1 + chi11 {branch} chi12 = {radicand:.6e} <= 0")]
    NonPositiveRadicand {
        w: f64,
        radicand: f64,
        /// "+" for the right-circular branch, "-" for the left.
        branch: char,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
