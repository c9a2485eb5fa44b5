//! Sweep engine: grid handling, parameter resolution, parallel point
//! evaluation, and CSV serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use spinmom::discrete::negativity_bimodal;
use spinmom::fermion::{negativity_fermion, FermionBarrierParams};
use spinmom::photon::{negativity_photon_approx, negativity_photon_full, PhotonMediumParams};
use spinmom::Estimate;

use crate::Failure;

/// Which observable a sweep tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Two-mode negativity surface over both rotation angles.
    DiscreteSurface,
    /// Barrier negativity as a function of field strength.
    FermionField,
    /// Barrier negativity as a function of barrier length.
    FermionLength,
    /// Optical negativity as a function of the field-length product.
    PhotonField,
    /// Optical negativity as a function of packet width.
    PhotonWidth,
    /// Optical negativity as a function of the medium resonance.
    PhotonResonance,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::DiscreteSurface => "discrete-surface",
            Model::FermionField => "fermion-field",
            Model::FermionLength => "fermion-length",
            Model::PhotonField => "photon-field",
            Model::PhotonWidth => "photon-width",
            Model::PhotonResonance => "photon-resonance",
        }
    }

    /// Name of the parameter the grid runs over.
    pub fn swept_name(self) -> &'static str {
        match self {
            Model::DiscreteSurface => "theta1,theta2",
            Model::FermionField => "gamma_b0",
            Model::FermionLength => "length",
            Model::PhotonField => "btilde_l",
            Model::PhotonWidth => "sigma",
            Model::PhotonResonance => "w0",
        }
    }

    /// Parameters that must be pinned for a sweep of this model.
    pub fn required_fixed(self) -> &'static [&'static str] {
        match self {
            Model::DiscreteSurface => &[],
            Model::FermionField => &["m", "p0", "sigma", "length", "quad_tol"],
            Model::FermionLength => &["m", "p0", "sigma", "gamma_b0", "quad_tol"],
            Model::PhotonField => &["p0", "sigma", "w0", "quad_tol"],
            Model::PhotonWidth => &["p0", "w0", "btilde_l", "quad_tol"],
            Model::PhotonResonance => &["p0", "sigma", "btilde_l", "quad_tol"],
        }
    }

    /// Optional parameters (the dispersive-route pair for photon models).
    pub fn optional_fixed(self) -> &'static [&'static str] {
        match self {
            Model::PhotonField | Model::PhotonWidth | Model::PhotonResonance => &["wc", "plasma"],
            _ => &[],
        }
    }
}

/// Uniform grid; both endpoints are sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self, Failure> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Failure::usage("grid endpoints must be finite"));
        }
        if points < 2 {
            return Err(Failure::usage("grid needs at least 2 points"));
        }
        if start >= stop {
            return Err(Failure::usage("grid start must be below stop"));
        }
        Ok(Grid { start, stop, points })
    }

    /// Parse `start:stop:points`.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Failure::usage(format!("grid `{text}` is not start:stop:points"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(start, stop, points)
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

/// A fully resolved sweep: what to evaluate, where, and where to put it.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub model: Model,
    pub swept: String,
    pub grid: Grid,
    pub fixed: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.swept != self.model.swept_name() {
            return Err(Failure::usage(format!(
                "model {} sweeps `{}`, not `{}`",
                self.model.name(),
                self.model.swept_name(),
                self.swept
            )));
        }
        if self.fixed.contains_key(&self.swept) {
            return Err(Failure::usage(format!(
                "swept parameter `{}` must not also be fixed",
                self.swept
            )));
        }
        for key in self.model.required_fixed() {
            if !self.fixed.contains_key(*key) {
                return Err(Failure::usage(format!(
                    "model {} needs fixed parameter `{key}`",
                    self.model.name()
                )));
            }
        }
        for (key, value) in &self.fixed {
            let known = self.model.required_fixed().contains(&key.as_str())
                || self.model.optional_fixed().contains(&key.as_str());
            if !known {
                return Err(Failure::usage(format!(
                    "model {} does not take parameter `{key}` (allowed: {}, {})",
                    self.model.name(),
                    self.model.required_fixed().join(", "),
                    self.model.optional_fixed().join(", ")
                )));
            }
            if !value.is_finite() {
                return Err(Failure::usage(format!("parameter `{key}` must be finite")));
            }
        }
        let wc = self.fixed.get("wc");
        let plasma = self.fixed.get("plasma");
        match (wc, plasma) {
            (Some(&wc), Some(&plasma)) if wc <= 0.0 || plasma <= 0.0 => {
                return Err(Failure::usage("wc and plasma must both be positive"));
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(Failure::usage(
                    "wc and plasma must be given together to enable the dispersive route",
                ));
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether photon sweeps also evaluate the dispersive (finite-wc) route.
    pub fn has_full_route(&self) -> bool {
        self.fixed.contains_key("wc") && self.fixed.contains_key("plasma")
    }
}

/// Result of a sweep, ready for serialization.
#[derive(Debug, Clone)]
pub struct Table {
    /// Emitted as `# key = value` header lines.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// One message per failed point; emitted as trailing comments.
    pub failures: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            writeln!(out, "# {key} = {value}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_cell(*v)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        for failure in &self.failures {
            writeln!(out, "# failed: {failure}").unwrap();
        }
        out
    }
}

fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.14e}")
    }
}

fn meta_common(spec: &SweepSpec) -> Vec<(String, String)> {
    let mut meta = vec![
        ("spinmom".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("units".to_string(), "natural (hbar = c = 1)".to_string()),
        ("model".to_string(), spec.model.name().to_string()),
        ("swept".to_string(), spec.swept.clone()),
        ("grid".to_string(), spec.grid.to_string()),
    ];
    for (key, value) in &spec.fixed {
        meta.push((format!("fixed {key}"), format!("{value}")));
    }
    meta
}

/// Evaluate a sweep. Points that fail numerically produce NaN cells and a
/// trailing comment; the sweep itself still completes.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table, Failure> {
    spec.validate()?;
    match spec.model {
        Model::DiscreteSurface => Ok(surface_table(spec)),
        Model::FermionField | Model::FermionLength => Ok(line_table(spec, fermion_point)),
        Model::PhotonField | Model::PhotonWidth | Model::PhotonResonance => {
            Ok(line_table(spec, photon_point))
        }
    }
}

/// 2D surface: both angles run over the same grid, one row per pair.
fn surface_table(spec: &SweepSpec) -> Table {
    let axis = spec.grid.values();
    let rows: Vec<Vec<f64>> = axis
        .par_iter()
        .flat_map_iter(|&t1| {
            axis.iter()
                .map(move |&t2| vec![t1, t2, negativity_bimodal(t1, t2), 0.0])
        })
        .collect();
    Table {
        meta: meta_common(spec),
        columns: vec![
            "theta1".to_string(),
            "theta2".to_string(),
            "negativity".to_string(),
            "error".to_string(),
        ],
        rows,
        failures: Vec::new(),
    }
}

/// One row per grid point; `point` yields the non-swept cells.
fn line_table(
    spec: &SweepSpec,
    point: fn(&SweepSpec, f64) -> (Vec<f64>, Vec<String>),
) -> Table {
    let values = spec.grid.values();
    let evaluated: Vec<(Vec<f64>, Vec<String>)> =
        values.par_iter().map(|&x| point(spec, x)).collect();

    let mut rows = Vec::with_capacity(values.len());
    let mut failures = Vec::new();
    for (x, (cells, errs)) in values.iter().zip(evaluated) {
        let mut row = vec![*x];
        row.extend(cells);
        rows.push(row);
        failures.extend(errs);
    }

    let mut columns = vec![spec.swept.clone()];
    match spec.model {
        Model::FermionField | Model::FermionLength => {
            columns.push("negativity".to_string());
            columns.push("error".to_string());
        }
        _ => {
            columns.push("n_approx".to_string());
            columns.push("err_approx".to_string());
            if spec.has_full_route() {
                columns.push("n_full".to_string());
                columns.push("err_full".to_string());
            }
        }
    }

    Table {
        meta: meta_common(spec),
        columns,
        rows,
        failures,
    }
}

fn fermion_point(spec: &SweepSpec, x: f64) -> (Vec<f64>, Vec<String>) {
    let f = &spec.fixed;
    let (length, gamma_b0) = match spec.model {
        Model::FermionField => (f["length"], x),
        _ => (x, f["gamma_b0"]),
    };
    match eval_fermion(f["m"], f["p0"], f["sigma"], length, gamma_b0, f["quad_tol"]) {
        Ok(est) => (vec![est.value, est.error], Vec::new()),
        Err(msg) => (
            vec![f64::NAN, f64::NAN],
            vec![format!("{} = {x}: {msg}", spec.swept)],
        ),
    }
}

fn photon_point(spec: &SweepSpec, x: f64) -> (Vec<f64>, Vec<String>) {
    let f = &spec.fixed;
    let (sigma, w0, btilde_l) = match spec.model {
        Model::PhotonField => (f["sigma"], f["w0"], x),
        Model::PhotonWidth => (x, f["w0"], f["btilde_l"]),
        _ => (f["sigma"], x, f["btilde_l"]),
    };
    let mut cells = Vec::new();
    let mut errs = Vec::new();

    match eval_photon_approx(f["p0"], sigma, w0, btilde_l, f["quad_tol"]) {
        Ok(est) => cells.extend([est.value, est.error]),
        Err(msg) => {
            cells.extend([f64::NAN, f64::NAN]);
            errs.push(format!("{} = {x} (approx): {msg}", spec.swept));
        }
    }

    if spec.has_full_route() {
        match eval_photon_full(f["p0"], sigma, w0, f["wc"], f["plasma"], btilde_l, f["quad_tol"]) {
            Ok(est) => cells.extend([est.value, est.error]),
            Err(msg) => {
                cells.extend([f64::NAN, f64::NAN]);
                errs.push(format!("{} = {x} (full): {msg}", spec.swept));
            }
        }
    }

    (cells, errs)
}

pub fn eval_fermion(
    m: f64,
    p0: f64,
    sigma: f64,
    length: f64,
    gamma_b0: f64,
    quad_tol: f64,
) -> Result<Estimate, String> {
    FermionBarrierParams::new(m, p0, sigma, length, gamma_b0)
        .and_then(|p| p.with_quad_tol(quad_tol))
        .and_then(|p| negativity_fermion(&p))
        .map_err(|e| e.to_string())
}

pub fn eval_photon_approx(
    p0: f64,
    sigma: f64,
    w0: f64,
    btilde_l: f64,
    quad_tol: f64,
) -> Result<Estimate, String> {
    PhotonMediumParams::for_approx(p0, sigma, w0, btilde_l)
        .and_then(|p| p.with_quad_tol(quad_tol))
        .and_then(|p| negativity_photon_approx(&p))
        .map_err(|e| e.to_string())
}

/// Dispersive route: the sweep fixes the field-length product, so the
/// medium length is recovered as btilde_l / (wc * plasma).
pub fn eval_photon_full(
    p0: f64,
    sigma: f64,
    w0: f64,
    wc: f64,
    plasma: f64,
    btilde_l: f64,
    quad_tol: f64,
) -> Result<Estimate, String> {
    let length = btilde_l / (wc * plasma);
    PhotonMediumParams::for_full(p0, sigma, w0, wc, plasma, length)
        .and_then(|p| p.with_quad_tol(quad_tol))
        .and_then(|p| negativity_photon_full(&p))
        .map_err(|e| e.to_string())
}
