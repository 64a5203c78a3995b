//! End-to-end tests of the binary: subcommands, file formats, exit codes,
//! and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PATH3: &str = r#"{
  "vertices": [{"id": "a", "mu": 1.0}, {"id": "b", "mu": 1.0}, {"id": "c", "mu": 1.0}],
  "edges": [{"a": "a", "b": "b", "rho": 1.0}, {"a": "b", "b": "c", "rho": 1.0}],
  "boundary": ["a", "c"]
}"#;

/// A second 3-path over the same boundary {a, c} with a distinct inner
/// vertex, glueable against PATH3.
const PATH3_SIDE2: &str = r#"{
  "vertices": [{"id": "a", "mu": 1.0}, {"id": "b2", "mu": 1.0}, {"id": "c", "mu": 1.0}],
  "edges": [{"a": "a", "b": "b2", "rho": 1.0}, {"a": "b2", "b": "c", "rho": 1.5}],
  "boundary": ["a", "c"]
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boundary-pairs"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boundary-pairs-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

fn json_of(output: &Output) -> serde_json::Value {
    assert!(
        !output.stdout.is_empty(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_graph_reports_spectrum_and_passes() {
    let dir = workdir("analyze-graph");
    write(&dir, "path3.json", PATH3);
    let out = run(
        &["analyze", "graph", "--input", "path3.json", "--window", "-0.5", "4"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let spectra = report["spectra"].as_array().unwrap();
    let zeros = spectra
        .iter()
        .find(|t| t["label"] == "neumann_pencil_zeros")
        .unwrap();
    let values: Vec<f64> = zeros["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    for (got, want) in values.iter().zip([0.0, 1.0, 3.0]) {
        assert!((got - want).abs() < 1e-8);
    }
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["verdict"], "pass", "{}", check["name"]);
    }
    // Constants include the two-route boundary norm.
    let gamma = report["constants"]["gamma_norm"].as_f64().unwrap();
    assert!((gamma - 0.75f64.sqrt()).abs() < 1e-10);
}

#[test]
fn analyze_chain_matches_closed_form() {
    let dir = workdir("analyze-chain");
    let lengths: Vec<String> = (0..16).map(|_| "0.0625".to_string()).collect();
    write(
        &dir,
        "uniform16.json",
        &format!(
            r#"{{"lengths": [{0}], "rhos": [{0}]}}"#,
            lengths.join(", ")
        ),
    );
    let out = run(
        &["analyze", "chain", "--input", "uniform16.json", "--window", "0", "2500"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let zeros = &report["spectra"][0]["values"];
    for (k, entry) in zeros.as_array().unwrap().iter().take(5).enumerate() {
        let want = ((k as f64 + 0.5) * std::f64::consts::PI).powi(2);
        let got = entry["value"].as_f64().unwrap();
        assert!((got - want).abs() / want < 1e-8, "k = {k}: {got} vs {want}");
    }
}

#[test]
fn analyze_interval_recovers_collision_hits() {
    let dir = workdir("analyze-interval");
    write(&dir, "interval.json", r#"{"length": 1.0}"#);
    let out = run(
        &["analyze", "interval", "--input", "interval.json", "--window", "-0.5", "100"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let zeros = report["spectra"][0]["values"].as_array().unwrap();
    assert_eq!(zeros.len(), 4);
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    for (entry, want) in zeros.iter().zip([0.0, pi2, 4.0 * pi2, 9.0 * pi2]) {
        let got = entry["value"].as_f64().unwrap();
        assert!((got - want).abs() < 1e-5 * (1.0 + want));
    }
}

#[test]
fn verify_graph_with_explicit_samples() {
    let dir = workdir("verify-graph");
    write(&dir, "path3.json", PATH3);
    let out = run(
        &[
            "verify", "graph", "--input", "path3.json", "--z", "-1", "--z", "0.5+1i", "--seed",
            "7",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for expected in [
        "krein_resolvent_formula",
        "green_identity",
        "schur_vs_weak_dtn",
        "gamma_norm_route_agreement",
        "branch_monotonicity_max_increase",
    ] {
        assert!(names.contains(&expected), "missing check {expected}");
    }
}

#[test]
fn verify_random_is_seeded() {
    let dir = workdir("verify-random");
    let out = run(
        &["verify", "random", "--n", "10", "--m", "3", "--seed", "5"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["meta"]["input_digest"], "random:n=10,m=3,seed=5");
}

#[test]
fn schema_violations_exit_2_with_named_invariant() {
    let dir = workdir("schema");
    write(&dir, "bad_chain.json", r#"{"lengths": [-1.0], "rhos": [1.0]}"#);
    let out = run(
        &["analyze", "chain", "--input", "bad_chain.json", "--window", "0", "10"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lengths must be positive"), "stderr: {err}");

    write(&dir, "broken.json", r#"{"length": "#);
    let out = run(
        &["analyze", "interval", "--input", "broken.json", "--window", "0", "10"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "parse errors carry a location: {err}");
}

#[test]
fn failing_checks_exit_1() {
    // Samples within rounding distance of the Dirichlet pole make the
    // identity residuals blow up: a genuine numerical failure must surface
    // as verdict fail and exit code 1.
    let dir = workdir("exit1");
    write(&dir, "path3.json", PATH3);
    let out = run(
        &[
            "verify", "graph", "--input", "path3.json", "--z", "2.00000002", "--z", "2.0000001",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["verdict"] == "fail"));
}

#[test]
fn reports_are_deterministic_modulo_timestamp() {
    let dir = workdir("determinism");
    write(&dir, "path3.json", PATH3);
    let args = [
        "verify", "graph", "--input", "path3.json", "--seed", "11",
    ];
    let a = run(&args, &dir);
    let b = run(&args, &dir);
    let strip = |o: &Output| -> String {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn construct_glue_writes_model_atomically() {
    let dir = workdir("glue");
    write(&dir, "g1.json", PATH3);
    write(&dir, "g2.json", PATH3_SIDE2);
    let out = run(
        &[
            "construct", "glue", "--input", "g1.json", "--input2", "g2.json", "--out",
            "glued.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(dir.join("glued.json")).unwrap();
    let model: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(model["vertices"].as_array().unwrap().len(), 4);
    // Shared boundary vertices carry added weights.
    let mu_a = model["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["id"] == "a")
        .unwrap()["mu"]
        .as_f64()
        .unwrap();
    assert_eq!(mu_a, 2.0);
    // No stray temp files behind the atomic rename.
    let leftovers: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn construct_robin_emits_shifted_table() {
    let dir = workdir("robin");
    write(&dir, "path3.json", PATH3);
    let out = run(
        &[
            "construct", "robin", "--input", "path3.json", "--a", "1", "--z", "0",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    let table = &report["tables"][0];
    let entries = table["entries"].as_array().unwrap();
    // Lambda_1(0) = Lambda(0) + Id = [[1.5, -0.5], [-0.5, 1.5]].
    let want = [1.5, -0.5, -0.5, 1.5];
    for (e, w) in entries.iter().zip(want) {
        assert!((e[0].as_f64().unwrap() - w).abs() < 1e-12);
        assert!(e[1].as_f64().unwrap().abs() < 1e-14);
    }
    // Negative parameter is an input error.
    let out = run(
        &[
            "construct", "robin", "--input", "path3.json", "--a", "-1", "--z", "0",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_dcouple_checks_sum_law() {
    let dir = workdir("dcouple");
    write(&dir, "g1.json", PATH3);
    write(&dir, "g2.json", PATH3_SIDE2);
    let out = run(
        &[
            "construct", "dcouple", "--input", "g1.json", "--input2", "g2.json", "--z", "-1",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["checks"][0]["name"], "ntd_sum_law_vs_direct");
    assert_eq!(report["checks"][0]["verdict"], "pass");
}

#[test]
fn csv_format_emits_eigenvalue_table() {
    let dir = workdir("csv");
    write(&dir, "path3.json", PATH3);
    let out = run(
        &[
            "analyze", "graph", "--input", "path3.json", "--window", "-0.5", "4", "--format",
            "csv",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "label,value,multiplicity");
    assert!(text.contains("neumann_pencil_zeros"));
}
