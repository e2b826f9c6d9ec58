use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sharpk(args: &[&str]) -> Output {
    sharpk_env(args, &[])
}

fn sharpk_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sharpk"));
    cmd.args(args);
    for var in [
        "SHARPK_FORMAT",
        "SHARPK_QUAD_TOL",
        "SHARPK_GRID",
        "SHARPK_RADIUS_FACTOR",
        "SHARPK_SUP_TOL",
        "SHARPK_EXTREMAL_SLACK",
        "SHARPK_MAX_SUBDIVISIONS",
        "SHARPK_ELLIPTICITY_SAMPLES",
        "SHARPK_CRITERIA_GRID",
        "SHARPK_FACTOR_TOL",
    ] {
        cmd.env_remove(var);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn primary_value(report: &Value) -> f64 {
    report["results"][0]["value"].as_f64().unwrap()
}

#[test]
fn constant_examples() {
    let cases: [(&[&str], f64); 4] = [
        (&["constant", "stokes", "--n", "3"], 1.5),
        (&["constant", "stokes", "--n", "2"], 4.0 / PI),
        (&["constant", "biharmonic-gradient", "--n", "4"], 2.0),
        (&["constant", "lame", "--n", "2", "--kappa", "0"], 1.0),
    ];
    for (args, expected) in cases {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let out = sharpk(&full);
        assert_eq!(code(&out), 0, "{args:?}");
        let report = json(&out);
        assert_eq!(report["report_version"], 1);
        assert_eq!(report["pass"], true);
        assert!(
            (primary_value(&report) - expected).abs() < 1e-10,
            "{args:?}: {report}"
        );
    }
}

#[test]
fn lame_from_lame_parameters() {
    let out = sharpk(&[
        "--json", "constant", "lame", "--n", "3", "--lambda", "1", "--mu", "1",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    // κ = 1/2
    assert!((primary_value(&report) - 1.133_194_290_062_992_5).abs() < 1e-10);
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["constant", "lame", "--n", "2", "--kappa", "1.5"][..],
        &["constant", "lame", "--n", "2"],
        &["constant", "harmonic", "--n", "2", "--kappa", "0.5"],
        &["constant", "stokes", "--n", "1"],
        &["constant", "planar-deformed", "--n", "3"],
        &["constant", "warp-drive", "--n", "3"],
        &["verify", "biharmonic-gradient", "--n", "3"],
        &["criteria", "/nonexistent/input.json"],
    ] {
        let out = sharpk(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_passes_and_fails_on_tolerance() {
    let out = sharpk(&["--json", "verify", "stokes", "--n", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert!(report["cross_checks"].as_array().unwrap().len() >= 2);

    let out = sharpk(&[
        "verify",
        "stokes",
        "--n",
        "2",
        "--level",
        "sup",
        "--sup-tol",
        "1e-30",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout)
        .trim_end()
        .ends_with("FAIL"));
}

fn read_sweep(path: &std::path::Path) -> Vec<(f64, f64)> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["parameter", "value", "err_est", "method"]
    );
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn sweep_rows_end_at_the_stokes_values() {
    let dir = tempfile::tempdir().unwrap();
    for (n, stokes) in [("2", 4.0 / PI), ("3", 1.5)] {
        let path = dir.path().join(format!("kappa_{n}.csv"));
        let out = sharpk(&[
            "sweep",
            "lame",
            "--n",
            n,
            "--param",
            "kappa",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let rows = read_sweep(&path);
        assert_eq!(rows.len(), 11);
        assert!((rows[0].1 - 1.0).abs() < 1e-10);
        assert!((rows[10].0 - 1.0).abs() < 1e-15 && (rows[10].1 - stokes).abs() < 1e-10);
        assert!(
            rows.windows(2).all(|w| w[1].1 > w[0].1),
            "K increases with kappa on [0, 1]"
        );
    }
    let path = dir.path().join("n.csv");
    let out = sharpk(&[
        "sweep",
        "stokes",
        "--param",
        "n",
        "--from",
        "2",
        "--to",
        "4",
        "--steps",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let rows = read_sweep(&path);
    assert!((rows[1].1 - 1.5).abs() < 1e-10);
}

#[test]
fn sweep_rejects_bad_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let p = path.to_str().unwrap();
    for extra in [
        &["--from", "0.5", "--to", "0.5", "--steps", "4"][..],
        &["--from", "0", "--to", "1", "--steps", "1"],
        &["--from", "0", "--to", "2", "--steps", "5"],
    ] {
        let mut args = vec!["sweep", "lame", "--n", "2", "--param", "kappa", "--out", p];
        args.extend_from_slice(extra);
        assert_eq!(code(&sharpk(&args)), 2, "{extra:?}");
    }
    let out = sharpk(&[
        "sweep", "stokes", "--param", "n", "--from", "2", "--to", "3", "--steps", "3", "--out", p,
    ]);
    assert_eq!(code(&out), 2, "non-integer n");
}

#[test]
fn criteria_fixtures() {
    let cases = [
        ("laplacian.json", 0, None),
        ("lame.json", 1, Some("condition_i")),
        ("scalar_complex_boundary.json", 0, None),
        ("scalar_complex_violation.json", 1, Some("condition_ii")),
        ("sampled_points.json", 0, None),
    ];
    for (name, expected, failing) in cases {
        let out = sharpk(&["--json", "criteria", &fixture(name)]);
        assert_eq!(
            code(&out),
            expected,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let report = json(&out);
        assert_eq!(report["pass"], expected == 0);
        if let Some(cond) = failing {
            let v = &report["verdicts"][0]["verdict"];
            assert_eq!(v[cond]["status"], "fails", "{name}");
        }
    }
    let out = sharpk(&[
        "--json",
        "criteria",
        &fixture("scalar_complex_boundary.json"),
    ]);
    let cii = &json(&out)["verdicts"][0]["verdict"]["condition_ii"];
    assert_eq!(cii["status"], "holds");
    assert_eq!(cii["boundary"], true);
    let out = sharpk(&["criteria", &fixture("scalar_complex_violation.json")]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("witness zeta"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["--json", "constant", "lame", "--n", "3", "--kappa", "0.3"][..],
        &[
            "--json",
            "criteria",
            "--doubled",
            &fixture("scalar_complex_violation.json"),
        ],
        &[
            "--json", "verify", "lame", "--n", "2", "--kappa", "0.5", "--level", "sup",
        ],
    ] {
        let first = sharpk(args);
        let second = sharpk(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(json(&first).get("wall_time_seconds").is_none());
    }
    let timed = sharpk(&["--json", "--timing", "constant", "stokes", "--n", "3"]);
    assert!(json(&timed)["wall_time_seconds"].is_number());
}

#[test]
fn flags_take_precedence_over_environment() {
    let out = sharpk_env(
        &["constant", "stokes", "--n", "3"],
        &[("SHARPK_FORMAT", "json")],
    );
    assert_eq!(json(&out)["command"], "constant");
    let out = sharpk_env(
        &["--format", "text", "constant", "stokes", "--n", "3"],
        &[("SHARPK_FORMAT", "json")],
    );
    assert!(serde_json::from_slice::<Value>(&out.stdout).is_err());

    let input = fixture("laplacian.json");
    let low = [("SHARPK_ELLIPTICITY_SAMPLES", "10")];
    assert_eq!(code(&sharpk_env(&["criteria", &input], &low)), 2);
    assert_eq!(
        code(&sharpk_env(&["criteria", "--samples", "500", &input], &low)),
        0
    );

    let tight = [("SHARPK_SUP_TOL", "1e-30")];
    let args = ["verify", "stokes", "--n", "2", "--level", "sup"];
    assert_eq!(code(&sharpk_env(&args, &tight)), 1);
    let mut relaxed = args.to_vec();
    relaxed.extend(["--sup-tol", "1e-6"]);
    assert_eq!(code(&sharpk_env(&relaxed, &tight)), 0);
}
