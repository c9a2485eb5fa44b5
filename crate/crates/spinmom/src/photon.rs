//! Photon pairs entangled in circular polarization, one of which crosses a
//! Faraday-active dielectric: the magnetized medium gives right- and
//! left-circular light different refraction indices, so a frequency-spread
//! packet picks up a frequency-dependent relative phase that dephases the
//! polarization entanglement.
//!
//! Two routes to the negativity are exposed: the full phase integral built
//! from the Lorentzian susceptibility (finite at resonance, where the
//! cyclotron term regularizes the denominator), and the small-field
//! approximation whose phase B~ L w^2/(w^2-w0^2)^2 is singular at the
//! resonance and is integrated with an analytically bounded excision
//! window. Their difference measures the quality of the approximation.

use std::cell::Cell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::ComplexMatrix;
use crate::quad::{self, DEFAULT_MAX_DEPTH, GAUSSIAN_TAIL_WIDTHS};
use crate::Estimate;

/// Circular polarization handedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Right,
    Left,
}

/// Default absolute quadrature tolerance for the negativity integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Packet and medium parameters, natural units (c = 1).
///
/// The packet is Gaussian in frequency with center `p0` and width `sigma`
/// (density exp(-(w-p0)^2/sigma^2), normalized). The medium of length
/// `length` has resonance frequency `w0`, cyclotron frequency `wc` and
/// plasma factor `plasma` = N e^2/(m eps0) (frequency squared); the
/// combination B~ = plasma * wc controls the circular birefringence, and
/// `btilde_l` = B~ L is the dimensionless phase scale the approximate
/// route consumes directly.
#[derive(Debug, Clone)]
pub struct PhotonMediumParams {
    pub p0: f64,
    pub sigma: f64,
    pub w0: f64,
    pub wc: f64,
    pub plasma: f64,
    pub length: f64,
    pub btilde_l: f64,
    pub quad_tol: f64,
}

impl PhotonMediumParams {
    /// Parameters for the approximate route, which needs only the packet,
    /// the resonance position, and the combined phase scale B~ L.
    pub fn for_approx(p0: f64, sigma: f64, w0: f64, btilde_l: f64) -> Result<Self> {
        let params = PhotonMediumParams {
            p0,
            sigma,
            w0,
            wc: 0.0,
            plasma: 0.0,
            length: 0.0,
            btilde_l,
            quad_tol: DEFAULT_QUAD_TOL,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters for the full route from physical medium constants;
    /// `btilde_l` is derived as plasma * wc * length for cross-route
    /// comparisons.
    pub fn for_full(
        p0: f64,
        sigma: f64,
        w0: f64,
        wc: f64,
        plasma: f64,
        length: f64,
    ) -> Result<Self> {
        let params = PhotonMediumParams {
            p0,
            sigma,
            w0,
            wc,
            plasma,
            length,
            btilde_l: plasma * wc * length,
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

    /// Circular birefringence scale B~ = plasma * wc.
    pub fn btilde(&self) -> f64 {
        self.plasma * self.wc
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.p0,
            self.sigma,
            self.w0,
            self.wc,
            self.plasma,
            self.length,
            self.btilde_l,
            self.quad_tol,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "medium parameters must be finite, got {self:?}"
            )));
        }
        if self.p0 <= 0.0 || self.sigma <= 0.0 || self.w0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "p0, sigma and w0 must be positive, got p0={}, sigma={}, w0={}",
                self.p0, self.sigma, self.w0
            )));
        }
        if self.length < 0.0 || self.wc < 0.0 || self.plasma < 0.0 || self.btilde_l < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "length, wc, plasma and btilde_l must be nonnegative, got \
                 length={}, wc={}, plasma={}, btilde_l={}",
                self.length, self.wc, self.plasma, self.btilde_l
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

    /// Integration window: Gaussian support clipped to positive frequency.
    fn frequency_window(&self) -> (f64, f64) {
        let lo = (self.p0 - GAUSSIAN_TAIL_WIDTHS * self.sigma).max(0.0);
        let hi = self.p0 + GAUSSIAN_TAIL_WIDTHS * self.sigma;
        (lo, hi)
    }
}

/// In-plane susceptibility elements of the magnetized Lorentzian medium:
///
/// chi11 = plasma (w0^2 - w^2) / D,  chi12 = plasma w wc / D,
/// D = (w0^2 - w^2)^2 + w^2 wc^2.
pub fn susceptibility(w: f64, params: &PhotonMediumParams) -> (f64, f64) {
    let detune = params.w0 * params.w0 - w * w;
    let d = detune * detune + w * w * params.wc * params.wc;
    (
        params.plasma * detune / d,
        params.plasma * w * params.wc / d,
    )
}

/// Full 3x3 susceptibility tensor for propagation along the field axis:
/// [[chi11, i chi12, 0], [-i chi12, chi11, 0], [0, 0, chi33]]. The zz
/// element does not couple to transverse propagation, so no dispersion
/// model fixes it here — it is accepted as given and carried only so the
/// tensor is complete.
pub fn susceptibility_matrix(w: f64, chi33: f64, params: &PhotonMediumParams) -> ComplexMatrix {
    let (chi11, chi12) = susceptibility(w, params);
    let mut m = ComplexMatrix::zeros(3);
    m[(0, 0)] = Complex64::new(chi11, 0.0);
    m[(0, 1)] = Complex64::new(0.0, chi12);
    m[(1, 0)] = Complex64::new(0.0, -chi12);
    m[(1, 1)] = Complex64::new(chi11, 0.0);
    m[(2, 2)] = Complex64::new(chi33, 0.0);
    m
}

/// Refraction indices for right/left circular polarization,
/// n_{R,L} = sqrt(1 + chi11 +/- chi12). A non-positive radicand means the
/// corresponding wave cannot propagate; that is reported, not clamped.
pub fn refraction_indices(w: f64, params: &PhotonMediumParams) -> Result<(f64, f64)> {
    let (chi11, chi12) = susceptibility(w, params);
    let right = 1.0 + chi11 + chi12;
    let left = 1.0 + chi11 - chi12;
    if right <= 0.0 {
        return Err(Error::NonPositiveRadicand {
            w,
            radicand: right,
            branch: 'R',
        });
    }
    if left <= 0.0 {
        return Err(Error::NonPositiveRadicand {
            w,
            radicand: left,
            branch: 'L',
        });
    }
    Ok((right.sqrt(), left.sqrt()))
}

/// Transmission phase exp(i w n_s(w) L) for handedness `s`: unit modulus,
/// 1 when the medium has zero length.
pub fn transmission_phase(
    w: f64,
    s: Handedness,
    params: &PhotonMediumParams,
) -> Result<Complex64> {
    let (nr, nl) = refraction_indices(w, params)?;
    let n = match s {
        Handedness::Right => nr,
        Handedness::Left => nl,
    };
    Ok(Complex64::new(0.0, w * n * params.length).exp())
}

/// Negativity from the full phase integral,
///
/// N = | Int rho(w) exp[i w L (nR(w) - nL(w))] dw |,
///
/// with rho the Gaussian density renormalized on the positive-frequency
/// window. The cyclotron term keeps the indices finite at resonance, so
/// plain adaptive quadrature resolves the (fast but bounded) oscillation.
/// Returns the value with a propagated absolute error bound.
pub fn negativity_photon_full(params: &PhotonMediumParams) -> Result<Estimate> {
    params.validate()?;
    let (lo, hi) = params.frequency_window();

    // Propagation must be possible across the whole window. A dense scan
    // (plus the resonance itself, where chi12 peaks) reports offending
    // frequencies even between eventual quadrature nodes.
    const SCAN: usize = 4096;
    for k in 0..=SCAN {
        let w = lo + (hi - lo) * (k as f64) / (SCAN as f64);
        refraction_indices(w, params)?;
    }
    if params.w0 > lo && params.w0 < hi {
        refraction_indices(params.w0, params)?;
    }

    let tol = params.quad_tol / 4.0;
    let bad = Cell::new(None);
    let res = quad::integrate_adaptive_multi::<2, _>(
        |w| {
            let dens = Complex64::new(quad::gaussian_density(w, params.p0, params.sigma), 0.0);
            match refraction_indices(w, params) {
                Ok((nr, nl)) => {
                    let phase = Complex64::new(0.0, w * params.length * (nr - nl)).exp();
                    [dens * phase, dens]
                }
                Err(_) => {
                    // Remember the node and poison the run; the scan above
                    // makes this a narrow-notch backstop.
                    bad.set(Some(w));
                    [Complex64::new(f64::NAN, 0.0); 2]
                }
            }
        },
        lo,
        hi,
        tol,
        DEFAULT_MAX_DEPTH,
    );
    if let Some(w) = bad.get() {
        let (chi11, chi12) = susceptibility(w, params);
        let (right, left) = (1.0 + chi11 + chi12, 1.0 + chi11 - chi12);
        let (radicand, branch) = if right <= left { (right, 'R') } else { (left, 'L') };
        return Err(Error::NonPositiveRadicand { w, radicand, branch });
    }
    let res = res?;
    let mass = res[1].value.re;
    let value = res[0].value.norm() / mass;
    Ok(Estimate {
        value,
        error: (res[0].error_estimate + value * res[1].error_estimate) / mass,
    })
}

/// Negativity in the small-field approximation, taken verbatim (no
/// renormalization of the clipped Gaussian):
///
/// N = (1/(sqrt(pi) sigma)) | Int_0^inf e^{-(w-p0)^2/sigma^2}
///                                e^{i B~L w^2/(w^2-w0^2)^2} dw |.
///
/// The phase diverges at w = w0; a window around the resonance is excised
/// and bounded analytically by the density sup, so the reported error is
/// the quadrature estimate plus that window bound.
pub fn negativity_photon_approx(params: &PhotonMediumParams) -> Result<Estimate> {
    params.validate()?;
    let (lo, hi) = params.frequency_window();
    let density_sup = 1.0 / (std::f64::consts::PI.sqrt() * params.sigma);
    let btl = params.btilde_l;
    let w0sq = params.w0 * params.w0;
    let res = quad::integrate_oscillatory_window(
        |w| {
            let detune = w * w - w0sq;
            let phase = Complex64::new(0.0, btl * w * w / (detune * detune)).exp();
            quad::gaussian_density(w, params.p0, params.sigma) * phase
        },
        lo,
        hi,
        params.w0,
        btl,
        density_sup,
        params.quad_tol,
    )?;
    Ok(Estimate {
        value: res.value.norm(),
        error: res.error_estimate,
    })
}
