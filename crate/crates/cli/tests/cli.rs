use std::path::PathBuf;
use std::process::{Command, Output};

use aglsm_cli::config::{parse, Kind};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aglsm"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn coefficients(v: &Value) -> Vec<String> {
    v["series"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["coefficient"].as_str().unwrap().to_string())
        .collect()
}

fn temp_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aglsm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn quintic_series() {
    let out = run(&["correlate", "--config", &cfg("quintic.toml")]);
    assert!(out.status.success());
    let v = json(&out);
    let want: Vec<String> = [1u32, 6, 11, 16].iter().map(|&e| num_pow(5, e)).collect();
    assert_eq!(coefficients(&v), want);
    assert_eq!(v["dictionary"], "q = -e^{t'}; overall sign -1");
    assert_eq!(v["insertion"], "x^3");
}

fn num_pow(b: u64, e: u32) -> String {
    (b as u128).pow(e).to_string()
}

#[test]
fn cutoff_flag_overrides_config() {
    let out = run(&["correlate", "--config", &cfg("quintic.toml"), "--cutoff", "1"]);
    assert_eq!(coefficients(&json(&out)), ["5", "15625"]);
}

#[test]
fn grassmannian_ci_series() {
    let out = run(&["correlate", "--config", &cfg("gr35_ci.toml")]);
    assert!(out.status.success());
    // 25(1 - q) / ((1 + q)(1 - 123 q + q^2))
    assert_eq!(coefficients(&json(&out)), ["25", "3025", "372100", "45765225", "5628750625", "692290561600"]);
}

#[test]
fn raw_model_matches_projective_integral() {
    let out = run(&["correlate", "--config", &cfg("p2_glsm.toml")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(coefficients(&v), ["1", "0", "0"]);
    assert!(v["dictionary"].is_null());
}

#[test]
fn tstar_config_runs() {
    let out = run(&["correlate", "--config", &cfg("tstar_p1.toml")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_insertion_is_a_config_error() {
    let p = temp_config("empty.toml", "insertion = \"\"\n[target]\nkind = \"projective\"\nn = 2\n");
    let out = run(&["correlate", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("insertion required"));
}

#[test]
fn validation_errors_name_the_line() {
    let text = "insertion = \"x^3\"\n\n[target]\nkind = \"projective-ci\"\nn = 5\ndegrees = [4]\ncalabi_yau = true\n";
    let p = temp_config("bad_ci.toml", text);
    let out = run(&["correlate", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    let p = temp_config("typo.toml", "insertion = \"x\"\n[target]\nkind = \"projective\"\nm = 2\n");
    let out = run(&["correlate", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn ifunction_coefficients() {
    let out = run(&["ifunction", "--config", &cfg("gr24_ifunction.toml")]);
    assert!(out.status.success());
    let v = json(&out);
    let cs = v["coefficients"].as_array().unwrap();
    assert_eq!(cs.len(), 6);
    assert_eq!(cs[0]["value"], "1");
    assert_eq!(v["ring"], "nilpotent");
    // P^1 at z = 1/2: 1/(x + z)^2 = 4 - 16x modulo x^2
    let p = temp_config("p1i.toml", "cutoff = 1\n[target]\nkind = \"projective\"\nn = 2\n[params]\nz = \"1/2\"\n");
    let v = json(&run(&["ifunction", "--config", p.to_str().unwrap()]));
    assert_eq!(v["coefficients"][1]["value"], "-16*x + 4");
}

#[test]
fn check_suites_pass() {
    for suite in ["martin", "selection-rules", "hori-vafa", "vi", "z-limit", "factorization"] {
        let out = run(&["check", suite, "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["pass"], true);
        assert_eq!(v["failed"], 0);
        assert!(v["passed"].as_u64().unwrap() > 0);
    }
}

#[test]
fn martin_seed_changes_samples_not_outcome() {
    let a = json(&run(&["check", "martin", "--seed", "1"]));
    let b = json(&run(&["check", "martin", "--seed", "2"]));
    assert_eq!(a["pass"], true);
    assert_eq!(b["pass"], true);
    assert_ne!(a["results"], b["results"]);
}

#[test]
fn impossible_float_tolerance_fails() {
    let out = run(&["check", "factorization", "--float-tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn unknown_suite_lists_the_suites() {
    let out = run(&["check", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for s in ["factorization", "hori-vafa", "martin", "vi", "z-limit", "selection-rules", "all"] {
        assert!(err.contains(s), "{err}");
    }
    let p = temp_config("checks.toml", "checks = [\"martn\"]\n[target]\nkind = \"projective\"\nn = 2\n");
    let out = run(&["check", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("selection-rules"));
}

#[test]
fn checks_from_config() {
    let p = temp_config("checks_ok.toml", "checks = [\"vi\", \"martin\"]\n[target]\nkind = \"projective\"\nn = 2\n");
    let out = run(&["check", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let suites: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert!(suites.contains(&"vi") && suites.contains(&"martin"));
}

#[test]
fn reconstruct_grassmannian_ci() {
    let out = run(&["reconstruct", "--config", &cfg("gr35_ci.toml"), "--num-deg", "1", "--den-deg", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["numerator"], serde_json::json!(["25", "-25"]));
    assert_eq!(v["denominator"], serde_json::json!(["1", "-122", "-122", "1"]));
    assert_eq!(v["matches_all_terms"], true);
}

#[test]
fn reconstruct_quintic() {
    let out = run(&["reconstruct", "--config", &cfg("quintic.toml"), "--num-deg", "0", "--den-deg", "1"]);
    let v = json(&out);
    assert_eq!(v["numerator"], serde_json::json!(["5"]));
    assert_eq!(v["denominator"], serde_json::json!(["1", "-3125"]));
    let out = run(&["reconstruct", "--series", "5, 15625, 48828125", "--num-deg", "0", "--den-deg", "1"]);
    assert_eq!(json(&out)["denominator"], serde_json::json!(["1", "-3125"]));
}

#[test]
fn reconstruct_needs_enough_terms() {
    let out = run(&["reconstruct", "--series", "5,15625", "--num-deg", "1", "--den-deg", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("need >= 3 terms"));
}

#[test]
fn output_flag_and_determinism() {
    let dir = std::env::temp_dir().join(format!("aglsm-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let out = run(&["correlate", "--config", &cfg("gr35_ci.toml"), "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_round_trip() {
    for name in ["quintic.toml", "gr35_ci.toml", "p2_glsm.toml", "tstar_p1.toml", "gr24_ifunction.toml"] {
        let text = std::fs::read_to_string(configs().join(name)).unwrap();
        let a = parse(&text).unwrap();
        let b = parse(&a.to_toml()).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(a.to_toml(), b.to_toml());
    }
    let a = parse(&std::fs::read_to_string(configs().join("p2_glsm.toml")).unwrap()).unwrap();
    assert_eq!(a.target.kind, Kind::Glsm);
    assert_eq!(a.matter.len(), 3);
    assert_eq!(a.params.lambda, ["0", "1/2", "-3"]);
}
