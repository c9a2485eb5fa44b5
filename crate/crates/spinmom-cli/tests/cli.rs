//! End-to-end checks of the `spinmom` binary: exit codes, CSV shape,
//! determinism, configuration precedence, and the report subcommands.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output};

fn spinmom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmom"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|c| c.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect()
}

#[test]
fn help_and_version_exit_zero() {
    let help = spinmom(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout_of(&help).contains("spinmom"));
    assert_eq!(spinmom(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["fermion", "--grid", "1:0:5"][..],
        &["fermion", "--swept", "bogus"][..],
        &["fermion", "--fixed", "gamma_b0=0.1"][..],
        &["fermion", "--fixed", "sigma"][..],
        &["figures", "fig2"][..],
        &["frobnicate"][..],
    ] {
        let out = spinmom(args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}: {}", stderr_of(&out));
    }
}

#[test]
fn figure_surface_writes_expected_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = spinmom(&[
        "figures",
        "fig1",
        "--points",
        "21",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.contains("# preset = fig1"));
    assert!(csv.contains("# units = natural"));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "theta1,theta2,negativity,error");

    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 21 * 21);
    for row in &rows {
        let expect = (row[0] - row[1]).cos().powi(2);
        assert!((row[2] - expect).abs() < 1e-14);
        assert_eq!(row[3], 0.0);
    }
}

#[test]
fn fermion_sweep_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> String {
        let path = dir.path().join(name);
        let out = spinmom(&[
            "fermion",
            "--grid",
            "0:0.6:3",
            "--fixed",
            "quad_tol=1e-7",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
        std::fs::read_to_string(&path).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    assert_eq!(first, second, "reruns must be byte-identical");

    let rows = data_rows(&first);
    assert_eq!(rows.len(), 3);
    assert!((rows[0][0] - 0.0).abs() < 1e-15 && (rows[2][0] - 0.6).abs() < 1e-15);
    for row in &rows {
        assert!(row[1] >= 0.0 && row[1] <= 1.0 + 1e-7, "negativity {row:?}");
    }
    // Cells use scientific notation with plenty of digits.
    let cell = first
        .lines()
        .find(|l| l.starts_with('0') || l.starts_with('1'))
        .unwrap()
        .split(',')
        .next()
        .unwrap();
    assert!(cell.contains("e"), "cell {cell} should be scientific");
}

#[test]
fn photon_preset_emits_both_routes() {
    let out = spinmom(&["figures", "fig5", "--points", "3", "--quad-tol", "1e-6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let csv = stdout_of(&out);
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "btilde_l,n_approx,err_approx,n_full,err_full");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 3);
    assert!(rows[0][1] > 0.99 && rows[0][3] > 0.99, "free propagation keeps N = 1");
}

#[test]
fn numerical_failures_flag_rows_and_exit_two() {
    // Tiny cyclotron splitting with strong plasma coupling: the refraction
    // radicand goes negative near the resonance, so the dispersive route
    // fails pointwise while the approximate route still evaluates.
    let out = spinmom(&[
        "photon",
        "--swept",
        "w0",
        "--grid",
        "9.8:10.2:3",
        "--fixed",
        "wc=1e-6",
        "--fixed",
        "plasma=5",
        "--fixed",
        "quad_tol=1e-6",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr_of(&out));
    let csv = stdout_of(&out);
    assert!(csv.contains("# failed:"));
    let rows: Vec<&str> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 5);
        assert!(cells[1].contains('e'), "approx cell still numeric: {row}");
        assert_eq!(cells[3], "nan", "dispersive cell flagged: {row}");
    }
}

#[test]
fn config_file_feeds_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("sweep.cfg");
    let mut cfg = std::fs::File::create(&cfg_path).unwrap();
    writeln!(cfg, "# example sweep configuration").unwrap();
    writeln!(cfg, "sigma = 3").unwrap();
    writeln!(cfg, "grid = 0:1:7").unwrap();
    drop(cfg);

    let out = spinmom(&[
        "fermion",
        "--config",
        cfg_path.to_str().unwrap(),
        "--fixed",
        "sigma=1",
        "--show-config",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("model = fermion-field"));
    assert!(text.contains("grid = 0:1:7"), "config grid used: {text}");
    assert!(text.contains("sigma = 1"), "flag beats config: {text}");
    assert!(text.contains("m = 100"), "defaults fill the rest: {text}");
}

#[test]
fn nogo_report_contrasts_conditioned_and_unconditioned_states() {
    let out = spinmom(&["nogo", "--quad-tol", "1e-7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("gamma_b0 = 0,"), "zero-field set present");
    assert!(text.contains("gamma_b0 = 0.92"), "strong-field set present");
    assert!(text.contains("conditioned on transmission:"));
    assert!(text.contains("unconditioned (transmitted + reflected):"));

    let biases: Vec<f64> = text
        .lines()
        .filter_map(|l| l.strip_prefix("conditioned bias |rho_00 - 1/2| = "))
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(biases.len(), 2);
    assert!(biases[0] < 1e-6, "zero field leaves no bias");
    assert!(biases[1] > 0.2, "strong field biases the conditioned state");
}

#[test]
fn nogo_rejects_malformed_sets() {
    let out = spinmom(&["nogo", "--set", "100,10,2,3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("m,p0,sigma,length,gamma_b0"));
}

#[test]
fn selftest_passes_and_reports_each_check() {
    let out = spinmom(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("self-check result: ok"));
    assert!(text.matches("\nok   ").count() >= 5);
}

#[test]
fn output_path_errors_are_usage_errors() {
    let bad = Path::new("/nonexistent-dir-for-sure/out.csv");
    let out = spinmom(&[
        "fermion",
        "--grid",
        "0:0.1:2",
        "--fixed",
        "quad_tol=1e-6",
        "--output",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("cannot write"));
}
