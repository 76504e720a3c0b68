use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_clarke-kit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CLARKE_KIT_THREADS", t),
        None => cmd.env_remove("CLARKE_KIT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args, None);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn f(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "inf" => f64::INFINITY,
        _ => v.as_f64().unwrap(),
    }
}

#[test]
fn abs_estimate_matches_reference() {
    let (r, code) = report(&["estimate", "--fn", "abs", "--center", "0", "--radius", "0.01", "--samples", "500", "--seed", "7"]);
    assert_eq!(code, 0);
    let hull: Vec<f64> = r["outputs"]["hull_vertices"].as_array().unwrap().iter().map(|p| f(&p[0])).collect();
    assert!(hull.contains(&-1.0) && hull.contains(&1.0));
    assert!(f(&r["outputs"]["hausdorff_vs_reference"]) <= 0.01);
    assert_eq!(r["pass_fail"], Value::Bool(true));
}

#[test]
fn quartic_vertical_support_is_infinite() {
    let (r, _) = report(&["estimate", "--fn", "quartic_root", "--center", "0,0", "--radius", "0.01", "--samples", "4000", "--seed", "7"]);
    assert_eq!(r["outputs"]["axis_support"]["+e1"], "inf");
    assert_eq!(r["outputs"]["axis_support"]["-e1"], "inf");
}

#[test]
fn halfplane_cone_contains_normal() {
    let (r, _) = report(&["estimate", "--fn", "halfplane_smooth", "--center", "0,0"]);
    let gens = r["outputs"]["cone_generators"].as_array().unwrap();
    assert!(gens.iter().any(|g| f(&g[0]) == -1.0 && f(&g[1]) == 0.0));
}

#[test]
fn stationarity_examples() {
    let (abs, _) = report(&["stationarity", "--fn", "abs", "--center", "0"]);
    assert_eq!(abs["outputs"]["is_stationary"], true);
    let (lin, code) = report(&["stationarity", "--fn", "linear", "--center", "0"]);
    assert_eq!(lin["outputs"]["is_stationary"], false);
    assert!((f(&lin["outputs"]["distance_to_zero"]) - 1.0).abs() < 1e-9);
    assert_eq!(code, 0);
    let (hp, _) = report(&["stationarity", "--fn", "halfplane_smooth", "--center", "0,0"]);
    assert_eq!(hp["outputs"]["is_stationary"], true);
    let (hp, code) = report(&["stationarity", "--fn", "halfplane_smooth", "--center", "0,0", "--no-normals"]);
    assert_eq!(hp["outputs"]["is_stationary"], false);
    assert_eq!(code, 1, "disagrees with the reference");
}

#[test]
fn default_seed_is_echoed() {
    let (r, _) = report(&["estimate", "--fn", "abs"]);
    assert_eq!(r["inputs"]["seed"], 0);
    assert_eq!(r["inputs"]["center"][0], 0.0);
}

#[test]
fn echoed_inputs_reproduce_bytes() {
    let first = run(&["estimate", "--fn", "quartic_root", "--samples", "2000", "--seed", "3"], None);
    let r: Value = serde_json::from_slice(&first.stdout).unwrap();
    let i = &r["inputs"];
    let center = i["center"].as_array().unwrap().iter().map(|x| f(x).to_string()).collect::<Vec<_>>().join(",");
    let again = run(
        &[
            "estimate",
            "--fn",
            i["fn"].as_str().unwrap(),
            "--center",
            &center,
            "--radius",
            &f(&i["radius"]).to_string(),
            "--samples",
            &i["samples"].to_string(),
            "--seed",
            &i["seed"].to_string(),
            "--horizon-threshold",
            &f(&i["horizon_threshold"]).to_string(),
        ],
        None,
    );
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    for args in [
        &["estimate", "--fn", "parabola_fraction", "--samples", "3000"][..],
        &["density", "--scenario", "cusp", "--samples", "20000"][..],
        &["access", "--scenario", "abs_corner"][..],
    ] {
        let one = run(args, Some("1"));
        let four = run(args, Some("4"));
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("g.csv");
    let out = run(
        &["estimate", "--fn", "parabola_fraction", "--samples", "100", "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let kept = r["outputs"]["kept"].as_u64().unwrap() as usize;
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("index,coord_0,coord_1"));
    assert_eq!(text.lines().count(), kept + 1);
}

#[test]
fn density_curve_report() {
    let (r, code) = report(&["density", "--scenario", "halfplane", "--samples", "10000"]);
    assert_eq!(code, 0);
    for x in r["outputs"]["ratios"].as_array().unwrap() {
        assert!((f(x) - 0.5).abs() <= 0.02);
    }
}

#[test]
fn verify_subset_and_tampering() {
    let (r, code) = report(&["verify", "--only", "density"]);
    assert_eq!(code, 0);
    let crit = r["outputs"]["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0]["name"], "density");

    let dir = tempfile::tempdir().unwrap();
    let tol = dir.path().join("tol.json");
    std::fs::write(&tol, r#"{"halfplane_ratio": 0.0}"#).unwrap();
    let (r, code) = report(&["verify", "--only", "density", "--tolerances", tol.to_str().unwrap()]);
    assert_eq!(code, 1);
    let c = &r["outputs"]["criteria"][0];
    assert_eq!(c["passed"], false);
    assert!(c["measured"]["halfplane_ratios"].is_array());
    assert_eq!(c["expected"]["halfplane_ratio"][1], 0.0);
}

#[test]
fn catalog_lists_metadata() {
    let (r, code) = report(&["catalog"]);
    assert_eq!(code, 0);
    let fns = r["outputs"]["functions"].as_array().unwrap();
    assert!(fns.len() >= 9);
    let quartic = fns.iter().find(|e| e["name"] == "quartic_root").unwrap();
    assert_eq!(quartic["metadata"]["directionally_lipschitzian"], true);
    let step = fns.iter().find(|e| e["name"] == "step_jump").unwrap();
    assert_eq!(step["metadata"]["vertically_continuous"], false);
    assert!(step["references"].as_array().unwrap().is_empty());
}

#[test]
fn errors_exit_with_two() {
    for args in [
        &["estimate", "--fn", "nope"][..],
        &["estimate", "--fn", "abs", "--center", "0,0"][..],
        &["estimate", "--fn", "abs", "--center", "1, 2"][..],
        &["estimate", "--fn", "halfplane_smooth", "--center", "-1,0"][..],
        &["density", "--scenario", "cusp", "--samples", "10"][..],
        &["verify", "--only", "nonsense"][..],
    ] {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
