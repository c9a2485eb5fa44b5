//! Singlet pairs whose momentum modes rotate the spins by mode-dependent
//! angles: closed-form negativities for bimodal, uniform n-mode, and
//! continuous momentum distributions, validated by brute-force state
//! construction.
//!
//! The rotation convention is the planar spinor rotation
//! up -> (cos t, sin t), down -> (-sin t, cos t); only angle *differences*
//! enter any observable.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{self, JointState, SpinDensity};
use crate::quad::{self, DEFAULT_MAX_DEPTH};

/// Largest per-particle mode count accepted by the brute-force reference
/// path (joint amplitude vector length 4 n^2 stays <= 1024).
pub const BRUTE_FORCE_MODE_CAP: usize = 16;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

enum AngleKind {
    Discrete(Vec<f64>),
    Continuous(RealFn),
}

/// Spin-rotation angle per momentum: a finite list for mode-resolved models
/// or a function theta(p) for continuous ones.
pub struct AngleProfile {
    kind: AngleKind,
}

impl AngleProfile {
    /// One angle (radians) per momentum label. Must be non-empty and finite.
    pub fn discrete(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidParameter(
                "angle profile must contain at least one mode".into(),
            ));
        }
        if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "angle profile contains non-finite angle {bad}"
            )));
        }
        Ok(AngleProfile {
            kind: AngleKind::Discrete(angles.to_vec()),
        })
    }

    /// Angle as a function of a scalar momentum.
    pub fn continuous<F>(theta: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        AngleProfile {
            kind: AngleKind::Continuous(Arc::new(theta)),
        }
    }

    pub fn discrete_angles(&self) -> Option<&[f64]> {
        match &self.kind {
            AngleKind::Discrete(a) => Some(a),
            AngleKind::Continuous(_) => None,
        }
    }

    fn continuous_fn(&self) -> Option<&RealFn> {
        match &self.kind {
            AngleKind::Continuous(f) => Some(f),
            AngleKind::Discrete(_) => None,
        }
    }
}

impl fmt::Debug for AngleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AngleKind::Discrete(a) => f.debug_tuple("AngleProfile::discrete").field(a).finish(),
            AngleKind::Continuous(_) => f.write_str("AngleProfile::continuous(<fn>)"),
        }
    }
}

enum WeightKind {
    Discrete(Vec<f64>),
    Continuous(RealFn),
}

/// Momentum distribution: normalized per-mode probabilities, or a
/// probability density for continuous momentum.
pub struct MomentumWeights {
    kind: WeightKind,
}

impl MomentumWeights {
    /// Nonnegative weights, normalized to unit sum on construction.
    pub fn discrete(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidParameter(
                "weight list must contain at least one mode".into(),
            ));
        }
        if let Some(bad) = raw.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weights must be finite and nonnegative, got {bad}"
            )));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidParameter(
                "weights must not all be zero".into(),
            ));
        }
        Ok(MomentumWeights {
            kind: WeightKind::Discrete(raw.iter().map(|w| w / sum).collect()),
        })
    }

    /// Equal weights over `n` modes.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::discrete(&vec![1.0; n.max(0)])
    }

    /// Probability density over a continuous momentum. The density is
    /// checked for unit mass (within 1e-8) where it is consumed.
    pub fn continuous<F>(density: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MomentumWeights {
            kind: WeightKind::Continuous(Arc::new(density)),
        }
    }

    pub fn discrete_weights(&self) -> Option<&[f64]> {
        match &self.kind {
            WeightKind::Discrete(w) => Some(w),
            WeightKind::Continuous(_) => None,
        }
    }

    fn continuous_fn(&self) -> Option<&RealFn> {
        match &self.kind {
            WeightKind::Continuous(f) => Some(f),
            WeightKind::Discrete(_) => None,
        }
    }
}

impl fmt::Debug for MomentumWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Discrete(w) => f.debug_tuple("MomentumWeights::discrete").field(w).finish(),
            WeightKind::Continuous(_) => f.write_str("MomentumWeights::continuous(<fn>)"),
        }
    }
}

/// Planar rotation image of the spin basis: up -> (cos t, sin t),
/// down -> (-sin t, cos t). Returns the component `s_out` of the rotated
/// basis spinor `s_in` (0 = up, 1 = down).
fn rotated_spinor(theta: f64, s_in: usize, s_out: usize) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    match (s_in, s_out) {
        (0, 0) => c,
        (0, 1) => s,
        (1, 0) => -s,
        (1, 1) => c,
        _ => unreachable!("spin index out of range"),
    }
}

/// Builds the two-particle state: a spin singlet dressed with momentum
/// amplitudes sqrt(w_a w_b), each spin rotated by the angle of its
/// particle's momentum mode — both particles when `rotate_both` is set,
/// particle A only otherwise. The output is normalized.
pub fn build_joint_state(
    angles: &AngleProfile,
    weights: &MomentumWeights,
    rotate_both: bool,
) -> Result<JointState> {
    let th = angles.discrete_angles().ok_or_else(|| {
        Error::InvalidParameter("build_joint_state requires a discrete angle profile".into())
    })?;
    let w = weights.discrete_weights().ok_or_else(|| {
        Error::InvalidParameter("build_joint_state requires discrete momentum weights".into())
    })?;
    if th.len() != w.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} angles vs {} weights",
            th.len(),
            w.len()
        )));
    }
    let n = th.len();
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 4 * n * n];
    for pa in 0..n {
        for pb in 0..n {
            let scale = (w[pa] * w[pb]).sqrt() * inv_sqrt2;
            if scale == 0.0 {
                continue;
            }
            let tb = if rotate_both { th[pb] } else { 0.0 };
            for sa in 0..2 {
                for sb in 0..2 {
                    // (U_a x U_b)(up down - down up)/sqrt(2)
                    let amp = rotated_spinor(th[pa], 0, sa) * rotated_spinor(tb, 1, sb)
                        - rotated_spinor(th[pa], 1, sa) * rotated_spinor(tb, 0, sb);
                    amps[((pa * 2 + sa) * n + pb) * 2 + sb] = Complex64::new(scale * amp, 0.0);
                }
            }
        }
    }
    JointState::from_unnormalized(n, n, amps)
}

/// Two-spin density matrix of the state, traced over both momenta.
pub fn spin_density_from_state(state: &JointState) -> Result<SpinDensity> {
    let rho = state.density();
    let reduced = qmat::partial_trace(&rho, &[state.n_a(), 2, state.n_b(), 2], &[1, 3])?;
    SpinDensity::new(reduced)
}

/// Closed-form negativity for the bimodal equal-weight distribution with
/// both spins rotated: cos^2(theta1 - theta2).
pub fn negativity_bimodal(theta1: f64, theta2: f64) -> f64 {
    let c = (theta1 - theta2).cos();
    c * c
}

/// Mean of cos^2(theta_i - theta_j) over all ordered mode pairs.
fn mean_cos_squared(angles: &[f64]) -> f64 {
    let n = angles.len();
    let mut acc = n as f64; // diagonal terms are cos^2(0) = 1
    for i in 0..n {
        for j in (i + 1)..n {
            let c = (angles[i] - angles[j]).cos();
            acc += 2.0 * c * c;
        }
    }
    acc / (n * n) as f64
}

/// Closed-form negativity for `n` equally weighted modes with both spins
/// rotated: |1 - (2/n^2) sum_ij cos^2(theta_i - theta_j)|. Coincides with
/// [`negativity_bimodal`] for n = 2.
pub fn negativity_uniform(angles: &[f64]) -> Result<f64> {
    if angles.is_empty() {
        return Err(Error::InvalidParameter(
            "angle list must be non-empty".into(),
        ));
    }
    Ok((1.0 - 2.0 * mean_cos_squared(angles)).abs())
}

/// Partial-transpose eigenvalues of the equal-weight n-mode spin state,
/// ascending: {1/2, 1/2, +/-(1/2 - mean cos^2)}.
pub fn pt_spectrum_uniform(angles: &[f64]) -> Result<[f64; 4]> {
    if angles.is_empty() {
        return Err(Error::InvalidParameter(
            "angle list must be non-empty".into(),
        ));
    }
    let lambda = 0.5 - mean_cos_squared(angles);
    let mut spec = [0.5, 0.5, lambda, -lambda];
    spec.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(spec)
}

/// Brute-force reference negativity: build the joint state, trace the
/// momenta, diagonalize the partial transpose. Capped at
/// [`BRUTE_FORCE_MODE_CAP`] modes per particle.
pub fn negativity_brute_force(
    angles: &AngleProfile,
    weights: &MomentumWeights,
    rotate_both: bool,
) -> Result<f64> {
    let rho = brute_force_density(angles, weights, rotate_both)?;
    qmat::negativity(&rho)
}

/// Brute-force partial-transpose spectrum (ascending) of the reduced state.
pub fn pt_spectrum_brute_force(
    angles: &AngleProfile,
    weights: &MomentumWeights,
    rotate_both: bool,
) -> Result<Vec<f64>> {
    let rho = brute_force_density(angles, weights, rotate_both)?;
    let pt = qmat::partial_transpose(rho.matrix(), (2, 2), qmat::Subsystem::B)?;
    qmat::hermitian_eigenvalues(&pt)
}

fn brute_force_density(
    angles: &AngleProfile,
    weights: &MomentumWeights,
    rotate_both: bool,
) -> Result<SpinDensity> {
    if let Some(a) = angles.discrete_angles() {
        if a.len() > BRUTE_FORCE_MODE_CAP {
            return Err(Error::InvalidParameter(format!(
                "brute-force path capped at {BRUTE_FORCE_MODE_CAP} modes, got {}",
                a.len()
            )));
        }
    }
    let state = build_joint_state(angles, weights, rotate_both)?;
    spin_density_from_state(&state)
}

/// Negativity for a continuous momentum density with both spins rotated by
/// theta(p):
///
/// N = |1 - 2 Int Int rho(p) rho(q) cos^2(theta(p) - theta(q)) dp dq|
///
/// evaluated as an iterated adaptive integral over the full square. The
/// inner integral always runs over the whole domain rather than a
/// p-dependent triangle: keeping its endpoints fixed lets repeated
/// bisection align panel edges with any jump discontinuities of the
/// profiles, which interior-node quadrature cannot certify otherwise.
/// Absolute error is kept below `tol`; the density must integrate to 1 on
/// `domain` within 1e-8.
pub fn negativity_continuous(
    weights: &MomentumWeights,
    theta: &AngleProfile,
    domain: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let rho = weights
        .continuous_fn()
        .ok_or_else(|| {
            Error::InvalidParameter(
                "negativity_continuous requires a continuous momentum density".into(),
            )
        })?
        .clone();
    let th = theta
        .continuous_fn()
        .ok_or_else(|| {
            Error::InvalidParameter("negativity_continuous requires a continuous angle profile".into())
        })?
        .clone();
    let (lo, hi) = domain;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "domain must be finite with low < high, got ({lo}, {hi})"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let mass = quad::integrate_adaptive(
        |p| Complex64::new(rho(p), 0.0),
        lo,
        hi,
        (tol * 0.01).min(1e-10),
        DEFAULT_MAX_DEPTH,
    )?
    .value
    .re;
    if (mass - 1.0).abs() > 1e-8 {
        return Err(Error::UnnormalizedDensity { mass });
    }

    // Budget: outer error <= tol/8 plus inner errors <= tol/16 integrated
    // against rho, and the factor 2 below keeps the total under (3/8) tol.
    let inner_tol = tol / 16.0;
    let outer_tol = tol / 8.0;
    let outer = quad::integrate_adaptive(
        |p| {
            let tp = th(p);
            let inner = quad::integrate_adaptive(
                |q| {
                    let c = (tp - th(q)).cos();
                    Complex64::new(rho(q) * c * c, 0.0)
                },
                lo,
                hi,
                inner_tol,
                DEFAULT_MAX_DEPTH,
            );
            match inner {
                Ok(r) => Complex64::new(rho(p) * r.value.re, 0.0),
                // Poisoning the outer integrand keeps the failure visible:
                // the outer pass then fails to converge as well.
                Err(_) => Complex64::new(f64::NAN, 0.0),
            }
        },
        lo,
        hi,
        outer_tol,
        DEFAULT_MAX_DEPTH,
    )?;
    Ok((1.0 - 2.0 * outer.value.re).abs())
}
