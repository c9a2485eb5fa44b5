//! Negativity of two-particle spin states whose momenta steer the spin
//! degrees of freedom.
//!
//! The crate covers three physical settings that share one question — how
//! much spin-spin entanglement survives when a particle's momentum controls
//! a local spin rotation or phase:
//!
//! * [`discrete`]: singlet pairs whose momentum modes each rotate the spin
//!   by a mode-dependent angle; closed forms for bimodal, n-mode uniform,
//!   and continuous momentum distributions, plus the brute-force state
//!   construction that validates all of them.
//! * [`fermion`]: a spin-1/2 wave packet crossing a uniform-field region
//!   that acts as a mesa for one spin and a well for the other; overlap
//!   integrals of the two transmission amplitudes give the post-selected
//!   spin state, its negativity, and the reduced states behind the
//!   no-signalling check.
//! * [`photon`]: circularly birefringent (Faraday-active) dispersion, where
//!   left/right polarizations accumulate different phases; both the exact
//!   phase integral and its resonance-singular approximation.
//!
//! Supporting layers: [`qmat`] (small complex matrices, partial trace and
//! transpose, a Jacobi eigensolver) and [`quad`] (adaptive Gauss-Kronrod
//! quadrature with Gaussian-weighted and oscillatory-window variants).

pub mod discrete;
pub mod error;
pub mod fermion;
pub mod photon;
pub mod qmat;
pub mod quad;

pub use error::{Error, Result};

/// A scalar result carrying an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Absolute error bound on `value` (quadrature truncation only).
    pub error: f64,
}
