//! Built-in cross-checks: closed forms against brute-force state
//! construction, scattering unitarity, and route agreement. Deterministic,
//! so repeated runs produce identical output.

use std::fmt::Write as _;

use spinmom::discrete::{
    negativity_bimodal, negativity_brute_force, negativity_continuous, negativity_uniform,
    pt_spectrum_brute_force, pt_spectrum_uniform, AngleProfile, MomentumWeights,
};
use spinmom::fermion::{
    bob_reduced_full, reflection, transmission, transmitted_overlaps, FermionBarrierParams,
    NormalizationConvention, Spin,
};
use spinmom::photon::{
    negativity_photon_approx, negativity_photon_full, transmission_phase, Handedness,
    PhotonMediumParams,
};

use crate::nogo::max_deviation_from_half_identity;
use crate::Failure;

type Check = (&'static str, fn() -> Result<f64, String>);

const CHECKS: &[Check] = &[
    ("two-mode closed form vs state construction", two_mode_vs_states),
    ("n-mode closed form and spectrum vs state construction", n_mode_vs_states),
    ("gaussian drift profile vs characteristic closed form", gaussian_drift_closed_form),
    ("barrier flux conservation", barrier_flux),
    ("transmitted-overlap trace and symmetry identities", overlap_identities),
    ("optical phase unitarity and route agreement", optical_routes),
];

pub fn run() -> Result<String, Failure> {
    let mut out = String::new();
    writeln!(out, "running {} self-checks", CHECKS.len()).unwrap();
    let mut failed = 0usize;
    for (label, check) in CHECKS {
        match check() {
            Ok(dev) => writeln!(out, "ok   {label}  (max deviation {dev:.2e})").unwrap(),
            Err(msg) => {
                failed += 1;
                writeln!(out, "FAIL {label}: {msg}").unwrap();
            }
        }
    }
    if failed == 0 {
        writeln!(out, "self-check result: ok ({} passed)", CHECKS.len()).unwrap();
        Ok(out)
    } else {
        writeln!(out, "self-check result: FAILED ({failed} of {} failed)", CHECKS.len()).unwrap();
        Err(Failure::Numeric(out))
    }
}

fn bound(dev: f64, tol: f64, what: &str) -> Result<f64, String> {
    if dev <= tol {
        Ok(dev)
    } else {
        Err(format!("{what}: deviation {dev:.3e} exceeds {tol:.1e}"))
    }
}

fn two_mode_vs_states() -> Result<f64, String> {
    let mut dev: f64 = 0.0;
    let n = 13;
    for i in 0..n {
        for j in 0..n {
            let t1 = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            let t2 = std::f64::consts::PI * j as f64 / (n - 1) as f64;
            let profile = AngleProfile::discrete(&[t1, t2]).map_err(|e| e.to_string())?;
            let weights = MomentumWeights::uniform(2).map_err(|e| e.to_string())?;
            let brute =
                negativity_brute_force(&profile, &weights, true).map_err(|e| e.to_string())?;
            dev = dev.max((negativity_bimodal(t1, t2) - brute).abs());
        }
    }
    bound(dev, 1e-12, "closed form vs brute force")
}

fn n_mode_vs_states() -> Result<f64, String> {
    let lists: [&[f64]; 4] = [
        &[0.7],
        &[0.0, std::f64::consts::FRAC_PI_2],
        &[0.3, 1.1, 2.0, 2.9],
        &[0.1, 0.25, 0.45, 0.7, 1.0, 1.35],
    ];
    let mut dev: f64 = 0.0;
    for angles in lists {
        let profile = AngleProfile::discrete(angles).map_err(|e| e.to_string())?;
        let weights = MomentumWeights::uniform(angles.len()).map_err(|e| e.to_string())?;
        let brute = negativity_brute_force(&profile, &weights, true).map_err(|e| e.to_string())?;
        let closed = negativity_uniform(angles).map_err(|e| e.to_string())?;
        dev = dev.max((brute - closed).abs());

        let spectrum = pt_spectrum_uniform(angles).map_err(|e| e.to_string())?;
        let brute_spectrum =
            pt_spectrum_brute_force(&profile, &weights, true).map_err(|e| e.to_string())?;
        for (a, b) in spectrum.iter().zip(&brute_spectrum) {
            dev = dev.max((a - b).abs());
        }
    }
    bound(dev, 1e-10, "n-mode closed form vs brute force")
}

fn gaussian_drift_closed_form() -> Result<f64, String> {
    let mut dev: f64 = 0.0;
    for (alpha, sigma) in [(0.3, 1.0), (0.7, 0.5)] {
        let norm = 1.0 / (std::f64::consts::PI.sqrt() * sigma);
        let weights =
            MomentumWeights::continuous(move |p: f64| norm * (-(p / sigma).powi(2)).exp());
        let profile = AngleProfile::continuous(move |p: f64| alpha * p);
        let n = negativity_continuous(&weights, &profile, (-12.0 * sigma, 12.0 * sigma), 1e-8)
            .map_err(|e| e.to_string())?;
        let expect = (-2.0 * alpha * alpha * sigma * sigma).exp();
        dev = dev.max((n - expect).abs());
    }
    bound(dev, 1e-6, "gaussian drift vs characteristic value")
}

fn barrier_flux() -> Result<f64, String> {
    let mut dev: f64 = 0.0;
    for m in [1.0, 50.0, 100.0] {
        for gamma_b0 in [0.0, 0.3, 1.0] {
            for length in [0.5, 3.0] {
                let prm = FermionBarrierParams::new(m, 10.0, 1.0, length, gamma_b0)
                    .map_err(|e| e.to_string())?;
                for p in [0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0] {
                    for s in [Spin::Up, Spin::Down] {
                        let t = transmission(p, s, &prm);
                        let r = reflection(p, s, &prm);
                        dev = dev.max((t.norm_sqr() + r.norm_sqr() - 1.0).abs());
                    }
                }
            }
        }
    }
    bound(dev, 1e-12, "flux conservation")
}

fn overlap_identities() -> Result<f64, String> {
    let prm = FermionBarrierParams::new(100.0, 10.0, 2.0, 3.0, 0.6)
        .and_then(|p| p.with_quad_tol(1e-8))
        .map_err(|e| e.to_string())?;
    let o = transmitted_overlaps(&prm, NormalizationConvention::default())
        .map_err(|e| e.to_string())?;
    let mut dev = (o.uu + o.dd - 1.0).norm();
    dev = dev.max((o.du - o.ud.conj()).norm());
    let full = bob_reduced_full(&prm).map_err(|e| e.to_string())?;
    dev = dev.max(max_deviation_from_half_identity(&full));
    bound(dev, 10.0 * prm.quad_tol, "overlap identities")
}

fn optical_routes() -> Result<f64, String> {
    // Pure phases: |transmission| = 1 wherever the indices exist.
    let full = PhotonMediumParams::for_full(10.0, 1.0, 5.0, 0.05, 0.2, 100.0)
        .and_then(|p| p.with_quad_tol(1e-8))
        .map_err(|e| e.to_string())?;
    let mut phase_dev: f64 = 0.0;
    for w in [8.0, 10.0, 12.5] {
        for s in [Handedness::Right, Handedness::Left] {
            let t = transmission_phase(w, s, &full).map_err(|e| e.to_string())?;
            phase_dev = phase_dev.max((t.norm() - 1.0).abs());
        }
    }
    bound(phase_dev, 1e-12, "transmission modulus")?;

    // Zero field: the packet is far from the frequency cutoff, so the
    // negativity is the (unit) packet mass.
    let quiet = PhotonMediumParams::for_approx(10.0, 1.0, 10.0, 0.0)
        .and_then(|p| p.with_quad_tol(1e-9))
        .map_err(|e| e.to_string())?;
    let n = negativity_photon_approx(&quiet).map_err(|e| e.to_string())?;
    bound((n.value - 1.0).abs(), 1e-6, "zero-field packet mass")?;

    // Weak splitting far from resonance: both routes agree on the same
    // field-length product (btilde_l = plasma * wc * length = 1).
    let approx = PhotonMediumParams::for_approx(10.0, 1.0, 5.0, 1.0)
        .and_then(|p| p.with_quad_tol(1e-8))
        .map_err(|e| e.to_string())?;
    let na = negativity_photon_approx(&approx).map_err(|e| e.to_string())?;
    let nf = negativity_photon_full(&full).map_err(|e| e.to_string())?;
    bound((na.value - nf.value).abs(), 1e-3, "route agreement")
}
