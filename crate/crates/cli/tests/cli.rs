use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SHIFT: &str = r#"{"m": 1, "kind": "entrywise", "entries": [[{"num": [["0","0"],["1","0"]], "den": [["1","0"]]}]]}"#;

fn qdom(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdom"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", String::from_utf8_lossy(&o.stderr)))
}

fn polylines(dir: &Path) -> usize {
    std::fs::read_to_string(dir.join("curve.svg")).unwrap().matches("<polyline").count()
}

#[test]
fn example2_trace_and_verify() {
    let dir = TempDir::new().unwrap();
    let o = qdom(&["scenario", "ex2", "--trace", "--verify"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["ok"], true);
    assert_eq!(r["sections"]["trace"]["component_count"], 2);
    let domain = &r["sections"]["domain"];
    assert_eq!(domain["passes"], true);
    assert_eq!(domain["connectivity_estimate"], 1);
    assert_eq!(domain["univalence"]["pass"], true);
    assert_eq!(domain["spot_checks"]["mismatches"].as_array().unwrap().len(), 0);
    // One outer and one inner curve, one CSV branch each.
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let branches: std::collections::BTreeSet<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(branches.len(), 2);
    assert_eq!(polylines(dir.path()), 2);
    assert!(Path::new(&dir.path().join("domain.json")).exists());
}

#[test]
fn example1_params_and_quadrature() {
    let dir = TempDir::new().unwrap();
    let o = qdom(&["scenario", "ex1", "--params", "--quadrature"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    let params = &r["sections"]["params"];
    assert_eq!(params["dimM"], 2);
    assert_eq!(params["commutator_rank"], 2);
    // F(0) = -β/a and F(1/a) = 1/a + β/(1/a - a) for a = 2, β = 0.3.
    let mut want = [-0.15, 0.5 + 0.3 / (0.5 - 2.0)];
    want.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = params["nodes"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    got.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-8, "{g} vs {w}");
    }
    for res in r["sections"]["quadrature"]["residuals"].as_array().unwrap() {
        assert!(res["residual"].as_f64().unwrap() < 1e-3, "{res}");
    }
    let nw: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("nodes_weights.json")).unwrap()).unwrap();
    assert_eq!(nw["nodes"].as_array().unwrap().len(), 2);
}

#[test]
fn example3_has_three_components() {
    let dir = TempDir::new().unwrap();
    let o = qdom(&["scenario", "ex3", "--trace"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(report(dir.path())["sections"]["trace"]["component_count"], 3);
    assert_eq!(polylines(dir.path()), 3);
}

#[test]
fn shift_from_file() {
    let dir = TempDir::new().unwrap();
    let sym = dir.path().join("shift.json");
    std::fs::write(&sym, SHIFT).unwrap();
    let o = qdom(&["domain-verify", sym.to_str().unwrap(), "--grid", "128", "128"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["sections"]["domain"]["passes"], true);
    assert_eq!(r["sections"]["trace"]["component_count"], 1);
    let svg = std::fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(svg.contains(r#"viewBox="-1.200000 -1.200000 2.400000 2.400000""#));

    let o = qdom(&["params-compute", sym.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    assert_eq!(report(dir.path())["sections"]["params"]["dimM"], 1);
}

#[test]
fn symbol_build_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = qdom(&["symbol-build", "ex1"], dir.path());
    assert!(o.status.success());
    let sym = dir.path().join("symbol.json");
    let first = report(dir.path());
    let o = qdom(&["symbol-build", sym.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let second = report(dir.path());
    assert_eq!(first["sections"]["classification"], second["sections"]["classification"]);
    assert_eq!(second["sections"]["classification"]["ndarn_member"], "true");
}

#[test]
fn same_config_same_report() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["scenario", "ex1", "--trace", "--verify", "--params", "--grid", "128", "128"];
    assert!(qdom(&args, a.path()).status.success());
    assert!(qdom(&args, b.path()).status.success());
    for f in ["report.json", "trace.csv", "params.json", "curve.svg"] {
        let (x, y) = (std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
        assert!(x == y, "{f} differs between runs");
    }
}

#[test]
fn exact_defining_equation_is_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["defining-eq", "ex1", "--backend", "exact"];
    assert!(qdom(&args, a.path()).status.success());
    assert!(qdom(&args, b.path()).status.success());
    let x = std::fs::read(a.path().join("defining_eq.json")).unwrap();
    assert_eq!(x, std::fs::read(b.path().join("defining_eq.json")).unwrap());
    let v: Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["real_type_defect"], 0.0);
    assert!(v["exact_coeffs"].is_array());
}

#[test]
fn failed_invariant_exits_nonzero_unless_report_only() {
    let dir = TempDir::new().unwrap();
    // With the pole this close to the circle the boundary crosses itself.
    let args = ["domain-verify", "ex1", "--a", "1.05", "--beta", "0.5", "--grid", "128", "128"];
    let o = qdom(&args, dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "InvariantFailure");
    assert_eq!(report(dir.path())["ok"], false);

    let mut relaxed = args.to_vec();
    relaxed.push("--report-only");
    assert!(qdom(&relaxed, dir.path()).status.success());
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"m": 2, "kind": "entrywise", "entries": []}"#).unwrap();
    let o = qdom(&["curve-trace", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "SchemaError");

    let o = qdom(&["curve-trace", dir.path().join("missing.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "IoError");

    let o = qdom(&["curve-trace", "ex1", "--tol-root", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "UsageError");

    let o = qdom(&["quadrature-check", "ex3"], dir.path());
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr_json(&o)["message"].as_str().unwrap().contains("ex1"));
}
