use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use forge_core::arithmetic::{FunctionSpec, PrimeSystem};
use forge_core::cones::DualCone;
use forge_core::density::DensitySearchReport;
use forge_core::json::ElementJson;
use forge_core::scalar::{q, qi};
use serde_json::Value;
use tempfile::TempDir;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

const GEOMETRIC: &str = r#"{"basis":{"preset":"naturals"},"coeffs":[
  {"element":{"exponents":{}},"re":"2"},
  {"element":{"exponents":{"0":1}},"re":"-1"}]}"#;

const DIVERGENT: &str = r#"{"basis":{"preset":"naturals"},"coeffs":[
  {"element":{"exponents":{}},"re":1},
  {"element":{"exponents":{"0":1}},"re":-2}]}"#;

#[test]
fn convolve_exact_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", GEOMETRIC);
    let o = forge(&["convolve", s(&a), s(&a), "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: ElementJson = serde_json::from_slice(&o.stdout).unwrap();
    let c = parsed.to_exact().unwrap();
    let coeff = |n: u64| c.coeff(&forge_core::SemigroupElement::free([(0, n)])).re;
    assert_eq!((coeff(0), coeff(1), coeff(2)), (qi(4), qi(-4), qi(1)));
    // emitted JSON re-parses into an equal object
    assert_eq!(serde_json::from_value::<ElementJson>(serde_json::to_value(&parsed).unwrap()).unwrap(), parsed);
}

#[test]
fn invert_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", GEOMETRIC);
    let bad = write(&dir, "bad.json", DIVERGENT);
    let o = forge(&["invert", "--method", "neumann", s(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["certificate"]["q"], 0.5);

    let o = forge(&["invert", "--method", "neumann", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let v = json_out(&o);
    assert_eq!(v["error"]["kind"], "neumann_inapplicable");
    assert!(v["error"]["message"].as_str().unwrap().contains("neumann inapplicable"));

    // graded recursion still works where the Neumann series does not
    let o = forge(&["invert", "--method", "graded", "--truncate", "10", "--exact", s(&bad)]);
    assert_eq!(o.status.code(), Some(0));
    let inv = serde_json::from_value::<ElementJson>(json_out(&o)["element"].clone()).unwrap().to_exact().unwrap();
    assert_eq!(inv.coeff(&forge_core::SemigroupElement::free([(0, 10)])).re, qi(1024));

    let o = forge(&["invert", "--method", "graded", "--truncate", "1000", "--cap", "5", s(&a)]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_out(&o)["error"]["kind"], "budget_exhausted");
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", GEOMETRIC);
    let junk = write(&dir, "junk.json", "{not json");
    assert_eq!(forge(&["convolve", "--frobnicate", s(&a), s(&a)]).status.code(), Some(1));
    assert_eq!(forge(&["convolve", s(&junk), s(&a)]).status.code(), Some(1));
    assert_eq!(forge(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(forge(&["eval", s(&a), "--s", "1,2,3"]).status.code(), Some(1));
    assert_eq!(forge(&["--help"]).status.code(), Some(0));
}

const LOG_ELEMENT: &str = r#"{"basis":{"preset":"log_integers","x":30},"coeffs":[
  {"element":{"exponents":{}},"re":0.2},
  {"element":{"exponents":{"0":1}},"re":1.0,"im":0.3},
  {"element":{"exponents":{"1":1}},"re":-1.0},
  {"element":{"exponents":{"2":1}},"re":0.7},
  {"element":{"exponents":{"0":1,"1":1}},"re":0.4}]}"#;

fn psi_json() -> String {
    let basis = forge_core::semigroup::LogIntegers::new(30);
    let values: Vec<String> = basis
        .basis()
        .generators()
        .iter()
        .map(|g| format!("\"{}\":{{\"re\":{},\"im\":{}}}", g.id, 0.8 * (g.id as f64).cos(), 0.8 * (g.id as f64).sin()))
        .collect();
    format!("{{\"values\":{{{}}},\"provenance\":{{\"kind\":\"explicit\"}}}}", values.join(","))
}

#[test]
fn density_search_budget_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", LOG_ELEMENT);
    let psi = write(&dir, "psi.json", &psi_json());
    let o = forge(&["density-search", s(&a), s(&psi), "--theta", "1e-6", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let r: DensitySearchReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!r.success);

    let run = || forge(&["density-search", s(&a), s(&psi), "--theta", "1e-2", "--seed", "7"]);
    let (x, y) = (run(), run());
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    let r: DensitySearchReport = serde_json::from_slice(&x.stdout).unwrap();
    assert!(r.success && r.achieved_error < 3e-2);
    assert_eq!(serde_json::from_value::<DensitySearchReport>(serde_json::to_value(&r).unwrap()).unwrap(), r);
}

#[test]
fn kronecker_success_and_exhaustion() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "k.json",
        &format!(
            r#"{{"betas":[{},{}],"targets":[{{"re":-1}},{{"re":1}}],"theta":0.01,"budget":1000000}}"#,
            2f64.ln(),
            3f64.ln()
        ),
    );
    let o = forge(&["kronecker", s(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    let t = v["t"].as_f64().unwrap();
    assert!((num_complex::Complex64::from_polar(1.0, -2f64.ln() * t) + 1.0).norm() < 0.01);
    let o = forge(&["kronecker", s(&inst), "--theta", "1e-9", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_out(&o)["success"], false);
}

#[test]
fn cones_round_trip() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e.json", r#"[["1","0"],["1","1"],["-1/2","1"]]"#);
    let o = forge(&["dual", s(&e)]);
    assert_eq!(o.status.code(), Some(0));
    let d: DualCone = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::from_value::<DualCone>(serde_json::to_value(&d).unwrap()).unwrap(), d);
    assert!(d.lineality.is_empty());

    let o = forge(&["separate", s(&e)]);
    let v = json_out(&o);
    assert_eq!(v["result"], "separated");
    let zero = write(&dir, "z.json", r#"[["1","0"],["-1","0"]]"#);
    let v = json_out(&forge(&["separate", s(&zero)]));
    assert_eq!(v["result"], "contains");
    assert_eq!(v["coeffs"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn extend_character_cli() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", r#"{"gamma":[["1"],["2"]],"psi":[{"re":0.5},{"re":0.25}]}"#);
    let o = forge(&["extend-character", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["basis"], serde_json::json!([["1"]]));
    assert_eq!(v["exponent_maps"], serde_json::json!([[1], [2]]));
    let bad = write(&dir, "bad.json", r#"{"gamma":[["1"],["2"]],"psi":[{"re":0.5},{"re":0.3}]}"#);
    assert_eq!(forge(&["extend-character", s(&bad)]).status.code(), Some(2));
}

#[test]
fn arithmetic_commands() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.json", r#"{"default":"one"}"#);
    let o = forge(&["euler-invert", s(&one), "--x", "100", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    let spec: FunctionSpec = serde_json::from_value(v["inverse"].clone()).unwrap();
    let mu = spec.build(PrimeSystem::rational(100)).unwrap();
    assert_eq!((mu.at(30), mu.at(12), mu.at(7)), (Some(qi(-1)), Some(qi(0)), Some(qi(-1))));
    // 1 + z + … + z^k vanishes at roots of unity on the unit circle
    assert_eq!(v["certificate"]["uncertified_primes"].as_array().unwrap().len(), 25);

    let o = forge(&["p3-decompose", s(&one), "--x", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"]["kind"], "unachievable");

    let mut values = Vec::new();
    for p in forge_core::sieve::primes_up_to(1000) {
        values.push(format!(r#"{{"p":{p},"k":1,"value":"1/{p}"}}"#));
        values.push(format!(r#"{{"p":{p},"k":2,"value":"1/{}"}}"#, p * p * p));
    }
    let f = write(&dir, "f.json", &format!(r#"{{"values":[{}]}}"#, values.join(",")));
    let o = forge(&["p3-decompose", s(&f), "--x", "1000", "--omega", r#"{"kind":"one"}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["p0"], Value::Null);
    assert_eq!(v["certificates"]["reconstruction_exact"], true);
    let h: FunctionSpec = serde_json::from_value(v["h"].clone()).unwrap();
    let h = h.build(PrimeSystem::rational(1000)).unwrap();
    assert_eq!(h.at(9), Some(q(1, 27) - q(1, 9)));
    assert_eq!(h.at(3), Some(qi(0)));
}

#[test]
fn check_weight_and_eval() {
    let o = forge(&["check-weight", "--weight", r#"{"kind":"poly","c":2}"#, "--theta", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["condition_a"], true);
    assert_eq!(v["condition_b"]["passed"], true);
    assert_eq!(v["submultiplicative"], true);
    let o = forge(&["check-weight", "--weight", r#"{"kind":"exp","rho":1}"#]);
    assert_eq!(json_out(&o)["condition_a"], false);

    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", GEOMETRIC);
    let v = json_out(&forge(&["eval", s(&a), "--s", "0,0"]));
    assert_eq!(v["value"], serde_json::json!([1.0, 0.0]));
    let o = forge(&["compose", s(&a), "--series", r#"{"kind":"reciprocal"}"#]);
    assert_eq!(o.status.code(), Some(0));
    let o = forge(&["compose", s(&a), "--series", r#"{"kind":"log"}"#, "--center", "0.5,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"]["kind"], "out_of_radius");
    let o = forge(&["witness", s(&a), "--n-t", "21", "--disk-radial", "16", "--disk-angular", "64"]);
    let v = json_out(&o);
    assert!((v["min_modulus"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn schema_and_report_modes() {
    for cmd in [
        "convolve",
        "invert",
        "eval",
        "witness",
        "compose",
        "separate",
        "dual",
        "extend-character",
        "density-search",
        "kronecker",
        "euler-invert",
        "p3-decompose",
        "check-weight",
    ] {
        let o = forge(&[cmd, "--schema"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert_eq!(json_out(&o)["command"], cmd);
    }
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", GEOMETRIC);
    let o = forge(&["invert", s(&a), "--report"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("forge invert\n"));
    assert!(text.contains("certificate.q: 0.5"));
    let out = dir.path().join("out.json");
    assert_eq!(forge(&["invert", s(&a), "--output", s(&out)]).status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["certificate"]["terms"].as_u64().is_some(), true);
}
