//! Report comparing the distant partner's reduced spin state with and
//! without conditioning on transmission.

use std::fmt::Write as _;

use spinmom::fermion::{
    bob_reduced_full, bob_reduced_postselected, FermionBarrierParams, NormalizationConvention,
};
use spinmom::qmat::ComplexMatrix;

use crate::Failure;

/// Zero field (both states I/2) and a field tuned so the transmitted spin
/// populations split roughly 75/25.
pub fn default_sets(quad_tol: f64) -> Result<Vec<FermionBarrierParams>, Failure> {
    Ok(vec![build(100.0, 10.0, 2.0, 3.0, 0.0, quad_tol)?, build(100.0, 10.0, 2.0, 3.0, 0.92, quad_tol)?])
}

/// Parse `m,p0,sigma,length,gamma_b0`.
pub fn parse_set(text: &str, quad_tol: f64) -> Result<FermionBarrierParams, Failure> {
    let bad = || Failure::usage(format!("set `{text}` is not m,p0,sigma,length,gamma_b0"));
    let nums: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if nums.len() != 5 {
        return Err(bad());
    }
    build(nums[0], nums[1], nums[2], nums[3], nums[4], quad_tol)
}

fn build(
    m: f64,
    p0: f64,
    sigma: f64,
    length: f64,
    gamma_b0: f64,
    quad_tol: f64,
) -> Result<FermionBarrierParams, Failure> {
    FermionBarrierParams::new(m, p0, sigma, length, gamma_b0)
        .and_then(|p| p.with_quad_tol(quad_tol))
        .map_err(|e| Failure::usage(e.to_string()))
}

pub fn report(sets: &[FermionBarrierParams]) -> Result<String, Failure> {
    if sets.is_empty() {
        return Err(Failure::usage("no-go report needs at least one parameter set"));
    }
    let mut out = String::new();
    writeln!(
        out,
        "Partner spin state after the other particle scatters off the field region."
    )
    .unwrap();
    writeln!(
        out,
        "Conditioning on transmission biases the state; without conditioning it"
    )
    .unwrap();
    writeln!(
        out,
        "stays maximally mixed, so the scattering choice transmits no signal.\n"
    )
    .unwrap();

    for (idx, prm) in sets.iter().enumerate() {
        let post = bob_reduced_postselected(prm, NormalizationConvention::default())
            .map_err(|e| Failure::numeric(e.to_string()))?;
        let full = bob_reduced_full(prm).map_err(|e| Failure::numeric(e.to_string()))?;

        writeln!(
            out,
            "== set {}: m = {}, p0 = {}, sigma = {}, length = {}, gamma_b0 = {}, quad_tol = {} ==",
            idx + 1,
            prm.mass,
            prm.p0,
            prm.sigma,
            prm.length,
            prm.gamma_b0,
            prm.quad_tol
        )
        .unwrap();
        writeln!(out, "conditioned on transmission:").unwrap();
        write_matrix(&mut out, &post);
        writeln!(out, "unconditioned (transmitted + reflected):").unwrap();
        write_matrix(&mut out, &full);

        let deviation = max_deviation_from_half_identity(&full);
        let bias = (post[(0, 0)].re - 0.5).abs();
        writeln!(
            out,
            "max |unconditioned - I/2| = {:.3e}  (expected <= 10 * quad_tol = {:.3e})",
            deviation,
            10.0 * prm.quad_tol
        )
        .unwrap();
        writeln!(out, "conditioned bias |rho_00 - 1/2| = {bias:.6}\n").unwrap();
    }
    Ok(out)
}

pub fn max_deviation_from_half_identity(m: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { 0.5 } else { 0.0 };
            worst = worst.max((m[(i, j)].re - expect).abs().max(m[(i, j)].im.abs()));
        }
    }
    worst
}

fn write_matrix(out: &mut String, m: &ComplexMatrix) {
    for i in 0..2 {
        writeln!(
            out,
            "    [ {:>9.6} {:+.6}i   {:>9.6} {:+.6}i ]",
            m[(i, 0)].re,
            m[(i, 0)].im,
            m[(i, 1)].re,
            m[(i, 1)].im
        )
        .unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_report_shows_flat_states() {
        let sets = vec![build(100.0, 10.0, 2.0, 3.0, 0.0, 1e-7).unwrap()];
        let text = report(&sets).unwrap();
        assert!(text.contains("0.500000"));
        assert!(text.contains("conditioned bias |rho_00 - 1/2| = 0.000000"));
    }

    #[test]
    fn strong_field_biases_only_the_conditioned_state() {
        let sets = default_sets(1e-7).unwrap();
        let text = report(&sets).unwrap();
        // Tuned set: conditioned state near 75/25, unconditioned flat.
        assert!(text.contains("gamma_b0 = 0.92"));
        let bias: f64 = text
            .lines()
            .filter_map(|l| l.strip_prefix("conditioned bias |rho_00 - 1/2| = "))
            .last()
            .unwrap()
            .parse()
            .unwrap();
        assert!(bias > 0.2, "bias {bias}");
    }

    #[test]
    fn set_parsing_accepts_and_rejects() {
        assert!(parse_set("100,10,2,3,0.5", 1e-9).is_ok());
        assert!(parse_set("100,10,2,3", 1e-9).is_err());
        assert!(parse_set("a,b,c,d,e", 1e-9).is_err());
        assert!(parse_set("100,10,-2,3,0.5", 1e-9).is_err());
    }
}
