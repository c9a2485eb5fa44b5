//! Spin-1/2 wave packet crossing a region of uniform magnetic field that
//! raises the potential for one spin component and lowers it for the other
//! (a mesa for spin-up, a well for spin-down).
//!
//! A packet entangled in spin with a distant partner is sent through the
//! region; keeping only the transmitted part leaves the pair's spin state
//! determined by overlap integrals of the two spin-resolved transmission
//! amplitudes. The module computes those overlaps, the resulting
//! negativity, and both reduced states of the distant partner — the
//! post-selected one, which is biased by the spin-dependent transmission,
//! and the unconditional one, which stays maximally mixed because the
//! region only acts locally on the transmitted particle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{self, ComplexMatrix, SpinDensity};
use crate::quad::{self, DEFAULT_MAX_DEPTH, GAUSSIAN_TAIL_WIDTHS};
use crate::Estimate;

/// Spin component along the field axis (0 = up, 1 = down in state indexing).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Spin projection quantum number: +1/2 for up, -1/2 for down.
    pub fn projection(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// Barrier and wave-packet parameters, in natural units (hbar = 1).
///
/// The incoming packet is Gaussian in momentum with center `p0` and width
/// `sigma` (momentum density exp(-(p-p0)^2/sigma^2), normalized); the field
/// region has length `length` and shifts the potential by +/- `mass *
/// gamma_b0` for spin up/down, so the momentum inside is
/// sqrt(p^2 - 2 s m gamma_b0).
#[derive(Debug, Clone)]
pub struct FermionBarrierParams {
    pub mass: f64,
    pub p0: f64,
    pub sigma: f64,
    pub length: f64,
    /// Gyromagnetic ratio times field strength.
    pub gamma_b0: f64,
    /// Absolute error target for the overlap quadratures.
    pub quad_tol: f64,
}

/// Default absolute quadrature tolerance for overlap integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

impl FermionBarrierParams {
    pub fn new(mass: f64, p0: f64, sigma: f64, length: f64, gamma_b0: f64) -> Result<Self> {
        let params = FermionBarrierParams {
            mass,
            p0,
            sigma,
            length,
            gamma_b0,
            quad_tol: DEFAULT_QUAD_TOL,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_quad_tol(mut self, quad_tol: f64) -> Result<Self> {
        self.quad_tol = quad_tol;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.mass,
            self.p0,
            self.sigma,
            self.length,
            self.gamma_b0,
            self.quad_tol,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "barrier parameters must be finite, got {self:?}"
            )));
        }
        if self.mass <= 0.0 || self.p0 <= 0.0 || self.sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mass, p0 and sigma must be positive, got mass={}, p0={}, sigma={}",
                self.mass, self.p0, self.sigma
            )));
        }
        if self.sigma >= self.p0 {
            return Err(Error::InvalidParameter(format!(
                "momentum width must satisfy sigma < p0 so the packet moves \
                 forward, got sigma={} p0={}",
                self.sigma, self.p0
            )));
        }
        if self.length < 0.0 || self.gamma_b0 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "length and gamma_b0 must be nonnegative, got length={}, gamma_b0={}",
                self.length, self.gamma_b0
            )));
        }
        if self.quad_tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "quad_tol must be positive, got {}",
                self.quad_tol
            )));
        }
        Ok(())
    }

    /// Integration window: the Gaussian support clipped to forward momenta.
    fn momentum_window(&self) -> (f64, f64) {
        let lo = (self.p0 - GAUSSIAN_TAIL_WIDTHS * self.sigma).max(0.0);
        let hi = self.p0 + GAUSSIAN_TAIL_WIDTHS * self.sigma;
        (lo, hi)
    }
}

/// Momentum inside the field region, sqrt(p^2 - 2 s m gamma_b0), on the
/// principal branch (imaginary part >= 0). Real for propagating waves,
/// purely imaginary for evanescent ones.
pub fn momentum_inside(p: f64, s: Spin, params: &FermionBarrierParams) -> Complex64 {
    let radicand = p * p - 2.0 * s.projection() * params.mass * params.gamma_b0;
    if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    }
}

/// Transmission amplitude for a plane wave of momentum `p > 0` hitting the
/// region, with the free propagation phase across the region included:
///
/// t = 2 p q e^{-ipL} / [2 p q cos(qL) - i (p^2 + q^2) sin(qL)],  q = momentum inside.
///
/// Exactly 1 when the field vanishes or the region has zero length.
pub fn transmission(p: f64, s: Spin, params: &FermionBarrierParams) -> Complex64 {
    let l = params.length;
    let q = momentum_inside(p, s, params);
    let pc = Complex64::new(p, 0.0);
    let phase = Complex64::new(0.0, -p * l).exp();
    if q == Complex64::new(0.0, 0.0) {
        // q -> 0 limit of the matching solution (incident momentum exactly
        // at the mesa threshold).
        return 2.0 * pc * phase / Complex64::new(2.0 * p, -p * p * l);
    }
    let arg = q * l;
    let denom = 2.0 * pc * q * arg.cos() - Complex64::i() * (pc * pc + q * q) * arg.sin();
    2.0 * pc * q * phase / denom
}

/// Reflection amplitude matching [`transmission`]:
///
/// r = i (q^2 - p^2) sin(qL) / [2 p q cos(qL) - i (p^2 + q^2) sin(qL)].
///
/// Satisfies |t|^2 + |r|^2 = 1 for propagating and evanescent interior
/// momenta alike.
pub fn reflection(p: f64, s: Spin, params: &FermionBarrierParams) -> Complex64 {
    let l = params.length;
    let q = momentum_inside(p, s, params);
    let pc = Complex64::new(p, 0.0);
    if q == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, -p * p * l) / Complex64::new(2.0 * p, -p * p * l);
    }
    let arg = q * l;
    let denom = 2.0 * pc * q * arg.cos() - Complex64::i() * (pc * pc + q * q) * arg.sin();
    Complex64::i() * (q * q - pc * pc) * arg.sin() / denom
}

/// Which stage of the calculation renormalizes the post-selected state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationConvention {
    /// Divide by the summed transmission probability pointwise inside the
    /// momentum integral (each momentum contributes a unit-trace
    /// conditional state).
    #[default]
    IntegrandWeighted,
    /// Integrate bare amplitude overlaps, then rescale the traced spin
    /// state to unit trace.
    NormalizeAfterTrace,
}

/// The four overlap integrals of the transmitted spin amplitudes:
///
/// I_{s s'} = Int rho(p) t_s(p) conj(t_{s'}(p)) / (|t_up(p)|^2 + |t_down(p)|^2) dp
///
/// (weight in the default convention; see [`NormalizationConvention`]),
/// with rho the forward-momentum-renormalized Gaussian density. The
/// diagonal sums to 1 and `du` is the conjugate of `ud`.
#[derive(Debug, Clone, Copy)]
pub struct TransmittedOverlaps {
    pub uu: Complex64,
    pub dd: Complex64,
    pub ud: Complex64,
    pub du: Complex64,
    /// Absolute error bound applying to each entry.
    pub error: f64,
}

/// Computes all four overlaps on one shared adaptive partition, so the
/// pointwise identities between the integrands (unit diagonal sum,
/// Cauchy-Schwarz of the cross term) survive discretization.
pub fn transmitted_overlaps(
    params: &FermionBarrierParams,
    convention: NormalizationConvention,
) -> Result<TransmittedOverlaps> {
    params.validate()?;
    let (lo, hi) = params.momentum_window();
    let tol = params.quad_tol / 8.0;
    let pointwise = convention == NormalizationConvention::IntegrandWeighted;
    // Components: [uu, dd, ud, du, bare density]; dividing by the last
    // renormalizes the clipped Gaussian.
    let res = quad::integrate_adaptive_multi::<5, _>(
        |p| {
            let w = quad::gaussian_density(p, params.p0, params.sigma);
            let tu = transmission(p, Spin::Up, params);
            let td = transmission(p, Spin::Down, params);
            let scale = if pointwise {
                w / (tu.norm_sqr() + td.norm_sqr())
            } else {
                w
            };
            let ud = tu * td.conj();
            [
                scale * Complex64::new(tu.norm_sqr(), 0.0),
                scale * Complex64::new(td.norm_sqr(), 0.0),
                scale * ud,
                scale * ud.conj(),
                Complex64::new(w, 0.0),
            ]
        },
        lo,
        hi,
        tol,
        DEFAULT_MAX_DEPTH,
    )?;
    let norm = if pointwise {
        res[4].value.re
    } else {
        res[0].value.re + res[1].value.re
    };
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "transmitted weight vanished (norm = {norm})"
        )));
    }
    // Each component error <= tol; dividing by the norm adds |I| * d(norm).
    let error = 2.0 * tol / norm;
    Ok(TransmittedOverlaps {
        uu: res[0].value / norm,
        dd: res[1].value / norm,
        ud: res[2].value / norm,
        du: res[3].value / norm,
        error,
    })
}

/// One overlap integral in the default (pointwise) convention; absolute
/// error at most `params.quad_tol`.
pub fn overlap_integral(s: Spin, s2: Spin, params: &FermionBarrierParams) -> Result<Complex64> {
    let o = transmitted_overlaps(params, NormalizationConvention::default())?;
    Ok(match (s, s2) {
        (Spin::Up, Spin::Up) => o.uu,
        (Spin::Down, Spin::Down) => o.dd,
        (Spin::Up, Spin::Down) => o.ud,
        (Spin::Down, Spin::Up) => o.du,
    })
}

/// Two-spin density matrix of the pair conditioned on transmission, in the
/// (up up, up down, down up, down down) product basis:
/// zero outside the central block, [[I_uu, -I_ud], [-I_du, I_dd]] inside.
pub fn postselected_spin_density(
    params: &FermionBarrierParams,
    convention: NormalizationConvention,
) -> Result<SpinDensity> {
    let o = transmitted_overlaps(params, convention)?;
    let z = Complex64::new(0.0, 0.0);
    let m = ComplexMatrix::from_rows(&[
        vec![z, z, z, z],
        vec![z, o.uu, -o.ud, z],
        vec![z, -o.du, o.dd, z],
        vec![z, z, z, z],
    ]);
    SpinDensity::new(m)
}

/// Negativity of the post-selected pair, 2 |I_ud|, with the propagated
/// quadrature error bound. 1 exactly when the field or region length is
/// zero.
pub fn negativity_fermion(params: &FermionBarrierParams) -> Result<Estimate> {
    let o = transmitted_overlaps(params, NormalizationConvention::default())?;
    Ok(Estimate {
        value: 2.0 * o.ud.norm(),
        error: 2.0 * o.error,
    })
}

/// Distant partner's spin state conditioned on transmission:
/// diag(I_dd, I_uu) — the spin anti-correlates with the transmitted one, so
/// the mesa/well asymmetry shows up as a population bias.
pub fn bob_reduced_postselected(
    params: &FermionBarrierParams,
    convention: NormalizationConvention,
) -> Result<ComplexMatrix> {
    let rho = postselected_spin_density(params, convention)?;
    qmat::partial_trace(rho.matrix(), &[2, 2], &[1])
}

/// Distant partner's spin state *without* conditioning, computed the long
/// way: each diagonal entry integrates the full scattered flux
/// (|t|^2 + |r|^2)/2 of the opposite spin, and the off-diagonal vanishes
/// because the two branches carry orthogonal transmitted-particle spins.
/// Flux conservation makes this the maximally mixed state — no local
/// action on the transmitted particle can signal through the pair.
pub fn bob_reduced_full(params: &FermionBarrierParams) -> Result<ComplexMatrix> {
    params.validate()?;
    let (lo, hi) = params.momentum_window();
    let tol = params.quad_tol / 8.0;
    // Components: [flux up, flux down, bare density].
    let res = quad::integrate_adaptive_multi::<3, _>(
        |p| {
            let w = quad::gaussian_density(p, params.p0, params.sigma);
            let flux = |s: Spin| {
                transmission(p, s, params).norm_sqr() + reflection(p, s, params).norm_sqr()
            };
            [
                Complex64::new(0.5 * w * flux(Spin::Up), 0.0),
                Complex64::new(0.5 * w * flux(Spin::Down), 0.0),
                Complex64::new(w, 0.0),
            ]
        },
        lo,
        hi,
        tol,
        DEFAULT_MAX_DEPTH,
    )?;
    let norm = res[2].value.re;
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = res[1].value / norm; // partner up <-> transmitted down
    m[(1, 1)] = res[0].value / norm;
    Ok(m)
}
