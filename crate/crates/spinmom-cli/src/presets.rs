//! Bundled figure datasets: fixed parameter sets with swept grids.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::sweep::{eval_fermion, run_sweep, Grid, Model, SweepSpec, Table};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Two-mode negativity surface over both rotation angles.
    Fig1,
    /// Barrier negativity vs field strength for three packet widths.
    Fig3,
    /// Barrier negativity vs barrier length.
    Fig4,
    /// Optical negativity vs field-length product.
    Fig5,
    /// Optical negativity vs packet width.
    Fig6,
    /// Optical negativity vs medium resonance for three packet widths.
    Fig7,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PresetOptions {
    /// Grid points per swept axis (presets default to 200; the angle
    /// surface defaults to 101 per axis).
    pub points: Option<usize>,
    pub quad_tol: Option<f64>,
}

pub fn figure_table(fig: Figure, opt: &PresetOptions) -> Result<Table, Failure> {
    let quad_tol = opt.quad_tol.unwrap_or(1e-9);
    if !(quad_tol.is_finite() && quad_tol > 0.0) {
        return Err(Failure::usage("quad_tol must be positive"));
    }
    let mut table = match fig {
        Figure::Fig1 => {
            let points = opt.points.unwrap_or(101);
            run_sweep(&spec(
                Model::DiscreteSurface,
                Grid::new(0.0, PI, points)?,
                &[],
            ))?
        }
        Figure::Fig3 => fermion_family_table(
            Grid::new(0.0, 1.0, opt.points.unwrap_or(200))?,
            quad_tol,
        ),
        Figure::Fig4 => run_sweep(&spec(
            Model::FermionLength,
            Grid::new(0.0, 10.0, opt.points.unwrap_or(200))?,
            &[
                ("m", 100.0),
                ("p0", 10.0),
                ("sigma", 2.0),
                ("gamma_b0", 0.2),
                ("quad_tol", quad_tol),
            ],
        ))?,
        Figure::Fig5 => run_sweep(&spec(
            Model::PhotonField,
            Grid::new(0.0, 10.0, opt.points.unwrap_or(200))?,
            &[
                ("p0", 10.0),
                ("sigma", 2.0),
                ("w0", 10.0),
                ("wc", 0.2),
                ("plasma", 0.5),
                ("quad_tol", quad_tol),
            ],
        ))?,
        Figure::Fig6 => run_sweep(&spec(
            Model::PhotonWidth,
            Grid::new(0.05, 5.0, opt.points.unwrap_or(200))?,
            &[
                ("p0", 10.0),
                ("w0", 10.0),
                ("btilde_l", 4.0),
                ("wc", 0.2),
                ("plasma", 0.5),
                ("quad_tol", quad_tol),
            ],
        ))?,
        Figure::Fig7 => photon_family_table(
            Grid::new(5.0, 15.0, opt.points.unwrap_or(200))?,
            quad_tol,
        ),
    };
    table
        .meta
        .insert(0, ("preset".to_string(), fig.name().to_string()));
    Ok(table)
}

fn spec(model: Model, grid: Grid, fixed: &[(&str, f64)]) -> SweepSpec {
    let fixed: BTreeMap<String, f64> = fixed
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    SweepSpec {
        model,
        swept: model.swept_name().to_string(),
        grid,
        fixed,
        output: None,
    }
}

/// Field sweep with one curve per packet width (m=100, p0=10, L=3).
fn fermion_family_table(grid: Grid, quad_tol: f64) -> Table {
    let sigmas = [1.0, 2.0, 3.0];
    let values = grid.values();
    let evaluated: Vec<(Vec<f64>, Vec<String>)> = values
        .par_iter()
        .map(|&gamma_b0| {
            let mut cells = Vec::new();
            let mut errs = Vec::new();
            for &sigma in &sigmas {
                match eval_fermion(100.0, 10.0, sigma, 3.0, gamma_b0, quad_tol) {
                    Ok(est) => cells.extend([est.value, est.error]),
                    Err(msg) => {
                        cells.extend([f64::NAN, f64::NAN]);
                        errs.push(format!("gamma_b0 = {gamma_b0}, sigma = {sigma}: {msg}"));
                    }
                }
            }
            (cells, errs)
        })
        .collect();

    let mut columns = vec!["gamma_b0".to_string()];
    for sigma in sigmas {
        columns.push(format!("n_sigma{sigma}"));
        columns.push(format!("err_sigma{sigma}"));
    }
    assemble(
        Model::FermionField,
        grid,
        quad_tol,
        &[("m", "100"), ("p0", "10"), ("length", "3"), ("sigma", "1, 2, 3")],
        columns,
        values,
        evaluated,
    )
}

/// Resonance sweep with approximate and dispersive curves per packet width
/// (p0=10, btilde_l=2; dispersive route factored as wc=0.2, plasma=0.5).
fn photon_family_table(grid: Grid, quad_tol: f64) -> Table {
    let sigmas = [0.5, 1.0, 2.0];
    let (wc, plasma, btilde_l) = (0.2, 0.5, 2.0);
    let values = grid.values();
    let evaluated: Vec<(Vec<f64>, Vec<String>)> = values
        .par_iter()
        .map(|&w0| {
            let mut cells = Vec::new();
            let mut errs = Vec::new();
            for &sigma in &sigmas {
                match crate::sweep::eval_photon_approx(10.0, sigma, w0, btilde_l, quad_tol) {
                    Ok(est) => cells.extend([est.value, est.error]),
                    Err(msg) => {
                        cells.extend([f64::NAN, f64::NAN]);
                        errs.push(format!("w0 = {w0}, sigma = {sigma} (approx): {msg}"));
                    }
                }
                match crate::sweep::eval_photon_full(
                    10.0, sigma, w0, wc, plasma, btilde_l, quad_tol,
                ) {
                    Ok(est) => cells.extend([est.value, est.error]),
                    Err(msg) => {
                        cells.extend([f64::NAN, f64::NAN]);
                        errs.push(format!("w0 = {w0}, sigma = {sigma} (full): {msg}"));
                    }
                }
            }
            (cells, errs)
        })
        .collect();

    let mut columns = vec!["w0".to_string()];
    for sigma in sigmas {
        columns.push(format!("n_approx_sigma{sigma}"));
        columns.push(format!("err_approx_sigma{sigma}"));
        columns.push(format!("n_full_sigma{sigma}"));
        columns.push(format!("err_full_sigma{sigma}"));
    }
    assemble(
        Model::PhotonResonance,
        grid,
        quad_tol,
        &[
            ("p0", "10"),
            ("btilde_l", "2"),
            ("wc", "0.2"),
            ("plasma", "0.5"),
            ("sigma", "0.5, 1, 2"),
        ],
        columns,
        values,
        evaluated,
    )
}

fn assemble(
    model: Model,
    grid: Grid,
    quad_tol: f64,
    fixed: &[(&str, &str)],
    columns: Vec<String>,
    values: Vec<f64>,
    evaluated: Vec<(Vec<f64>, Vec<String>)>,
) -> Table {
    let mut meta = vec![
        ("spinmom".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("units".to_string(), "natural (hbar = c = 1)".to_string()),
        ("model".to_string(), model.name().to_string()),
        ("swept".to_string(), model.swept_name().to_string()),
        ("grid".to_string(), grid.to_string()),
    ];
    for (key, value) in fixed {
        meta.push((format!("fixed {key}"), value.to_string()));
    }
    meta.push(("fixed quad_tol".to_string(), format!("{quad_tol}")));

    let mut rows = Vec::with_capacity(values.len());
    let mut failures = Vec::new();
    for (x, (cells, errs)) in values.iter().zip(evaluated) {
        let mut row = vec![*x];
        row.extend(cells);
        rows.push(row);
        failures.extend(errs);
    }
    Table {
        meta,
        columns,
        rows,
        failures,
    }
}
