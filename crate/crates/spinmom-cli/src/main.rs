//! `spinmom`: sweep the spin-momentum entanglement models and emit CSV.
//!
//! Subcommands: `discrete`, `fermion`, `photon` run configurable sweeps;
//! `figures` regenerates bundled datasets; `nogo` prints the
//! post-selection report; `selftest` cross-checks the closed forms
//! against brute-force references.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod config;
mod nogo;
mod presets;
mod selftest;
mod sweep;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use presets::{figure_table, Figure, PresetOptions};
use sweep::{run_sweep, Grid, Model, SweepSpec, Table};

/// Why a run could not complete: bad invocation vs numerical trouble.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Failure::Numeric(msg.into())
    }
}

#[derive(Parser)]
#[command(
    name = "spinmom",
    version,
    about = "Entanglement sweeps for spin-momentum models: rotation-angle \
             surfaces, spin-dependent barrier scattering, and magneto-optical \
             dispersion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the two-mode negativity surface over both rotation angles
    Discrete(SweepArgs),
    /// Sweep the spin-dependent barrier model (field strength or length)
    Fermion(SweepArgs),
    /// Sweep the magneto-optical model (field-length product, width, or resonance)
    Photon(SweepArgs),
    /// Regenerate a bundled figure dataset
    Figures(FiguresArgs),
    /// Report the partner spin state with and without post-selection
    Nogo(NogoArgs),
    /// Run built-in cross-checks against brute-force references
    Selftest,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter to sweep (fermion: gamma_b0 or length; photon: btilde_l,
    /// sigma, or w0)
    #[arg(long)]
    swept: Option<String>,

    /// Sweep grid as start:stop:points
    #[arg(long)]
    grid: Option<String>,

    /// Pin a model parameter, e.g. --fixed sigma=2 (repeatable)
    #[arg(long, value_name = "NAME=VALUE")]
    fixed: Vec<String>,

    /// Write CSV here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,

    /// Read defaults from a key=value file (flags win on conflict)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the resolved sweep configuration and exit
    #[arg(long)]
    show_config: bool,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which figure dataset to regenerate
    #[arg(value_enum)]
    figure: Figure,

    /// Write CSV here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,

    /// Grid points per swept axis (default 200; 101 for the angle surface)
    #[arg(long)]
    points: Option<usize>,

    /// Absolute quadrature tolerance (default 1e-9)
    #[arg(long)]
    quad_tol: Option<f64>,
}

#[derive(Args)]
struct NogoArgs {
    /// Barrier parameter set m,p0,sigma,length,gamma_b0 (repeatable;
    /// defaults to a zero-field set and a strong-field set)
    #[arg(long = "set", value_name = "m,p0,sigma,length,gamma_b0")]
    sets: Vec<String>,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-9)]
    quad_tol: f64,
}

/// Model family selected by the subcommand; the swept parameter picks the
/// concrete model within it.
#[derive(Debug, Clone, Copy)]
enum Family {
    Discrete,
    Fermion,
    Photon,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Returns whether any sweep point failed numerically (exit code 2).
fn dispatch(cli: &Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Discrete(args) => sweep_command(Family::Discrete, args),
        Command::Fermion(args) => sweep_command(Family::Fermion, args),
        Command::Photon(args) => sweep_command(Family::Photon, args),
        Command::Figures(args) => {
            let opt = PresetOptions {
                points: args.points,
                quad_tol: args.quad_tol,
            };
            let table = figure_table(args.figure, &opt)?;
            emit(&table, args.output.as_deref())?;
            Ok(!table.failures.is_empty())
        }
        Command::Nogo(args) => {
            let sets = if args.sets.is_empty() {
                nogo::default_sets(args.quad_tol)?
            } else {
                args.sets
                    .iter()
                    .map(|s| nogo::parse_set(s, args.quad_tol))
                    .collect::<Result<Vec<_>, _>>()?
            };
            print!("{}", nogo::report(&sets)?);
            Ok(false)
        }
        Command::Selftest => {
            let text = selftest::run()?;
            print!("{text}");
            Ok(false)
        }
    }
}

fn sweep_command(family: Family, args: &SweepArgs) -> Result<bool, Failure> {
    let spec = resolve_spec(family, args)?;
    if args.show_config {
        print_config(&spec);
        return Ok(false);
    }
    let table = run_sweep(&spec)?;
    emit(&table, spec.output.as_deref())?;
    Ok(!table.failures.is_empty())
}

fn emit(table: &Table, output: Option<&Path>) -> Result<(), Failure> {
    let csv = table.to_csv();
    match output {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn print_config(spec: &SweepSpec) {
    println!("model = {}", spec.model.name());
    println!("swept = {}", spec.swept);
    println!("grid = {}", spec.grid);
    println!(
        "output = {}",
        spec.output
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "(stdout)".to_string())
    );
    for (key, value) in &spec.fixed {
        println!("{key} = {value}");
    }
}

fn default_swept(family: Family) -> &'static str {
    match family {
        Family::Discrete => "theta1,theta2",
        Family::Fermion => "gamma_b0",
        Family::Photon => "btilde_l",
    }
}

fn model_for(family: Family, swept: &str) -> Result<Model, Failure> {
    match (family, swept) {
        (Family::Discrete, "theta1,theta2") => Ok(Model::DiscreteSurface),
        (Family::Fermion, "gamma_b0") => Ok(Model::FermionField),
        (Family::Fermion, "length") => Ok(Model::FermionLength),
        (Family::Photon, "btilde_l") => Ok(Model::PhotonField),
        (Family::Photon, "sigma") => Ok(Model::PhotonWidth),
        (Family::Photon, "w0") => Ok(Model::PhotonResonance),
        _ => Err(Failure::usage(format!(
            "`{swept}` cannot be swept here (discrete: theta1,theta2; \
             fermion: gamma_b0, length; photon: btilde_l, sigma, w0)"
        ))),
    }
}

fn default_grid(model: Model) -> Grid {
    let (start, stop, points) = match model {
        Model::DiscreteSurface => (0.0, PI, 101),
        Model::FermionField => (0.0, 1.0, 200),
        Model::FermionLength => (0.0, 10.0, 200),
        Model::PhotonField => (0.0, 10.0, 200),
        Model::PhotonWidth => (0.05, 5.0, 200),
        Model::PhotonResonance => (5.0, 15.0, 200),
    };
    Grid::new(start, stop, points).expect("default grids are valid")
}

fn default_fixed(model: Model) -> BTreeMap<String, f64> {
    let pairs: &[(&str, f64)] = match model {
        Model::DiscreteSurface => &[],
        Model::FermionField => &[
            ("m", 100.0),
            ("p0", 10.0),
            ("sigma", 2.0),
            ("length", 3.0),
            ("quad_tol", 1e-9),
        ],
        Model::FermionLength => &[
            ("m", 100.0),
            ("p0", 10.0),
            ("sigma", 2.0),
            ("gamma_b0", 0.2),
            ("quad_tol", 1e-9),
        ],
        Model::PhotonField => &[
            ("p0", 10.0),
            ("sigma", 2.0),
            ("w0", 10.0),
            ("quad_tol", 1e-9),
        ],
        Model::PhotonWidth => &[
            ("p0", 10.0),
            ("w0", 10.0),
            ("btilde_l", 4.0),
            ("quad_tol", 1e-9),
        ],
        Model::PhotonResonance => &[
            ("p0", 10.0),
            ("sigma", 2.0),
            ("btilde_l", 2.0),
            ("quad_tol", 1e-9),
        ],
    };
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn resolve_spec(family: Family, args: &SweepArgs) -> Result<SweepSpec, Failure> {
    let cfg = match &args.config {
        Some(path) => config::parse_file(path)?,
        None => BTreeMap::new(),
    };

    let swept = args
        .swept
        .clone()
        .or_else(|| cfg.get("swept").cloned())
        .unwrap_or_else(|| default_swept(family).to_string());
    let model = model_for(family, &swept)?;

    let grid = if let Some(text) = &args.grid {
        Grid::parse(text)?
    } else if let Some(text) = cfg.get("grid") {
        Grid::parse(text)?
    } else {
        default_grid(model)
    };

    let output = args
        .output
        .clone()
        .or_else(|| cfg.get("output").map(PathBuf::from));

    let mut fixed = default_fixed(model);
    for (key, value) in &cfg {
        if matches!(key.as_str(), "swept" | "grid" | "output") {
            continue;
        }
        let parsed: f64 = value.parse().map_err(|_| {
            Failure::usage(format!("config parameter `{key}` has non-numeric value `{value}`"))
        })?;
        fixed.insert(key.clone(), parsed);
    }
    for entry in &args.fixed {
        let Some((key, value)) = entry.split_once('=') else {
            return Err(Failure::usage(format!("--fixed `{entry}` is not name=value")));
        };
        let parsed: f64 = value.trim().parse().map_err(|_| {
            Failure::usage(format!("--fixed `{entry}` has a non-numeric value"))
        })?;
        fixed.insert(key.trim().to_string(), parsed);
    }

    let spec = SweepSpec {
        model,
        swept,
        grid,
        fixed,
        output,
    };
    spec.validate()?;
    Ok(spec)
}
