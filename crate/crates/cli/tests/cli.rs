use std::process::{Command, Output};

use serde_json::Value;

fn haarlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haarlie")).args(args).output().expect("run haarlie")
}

fn json(args: &[&str]) -> Value {
    let out = haarlie(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn rational(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

#[test]
fn measure_su3() {
    let v = json(&["measure", "--group", "SU(3)"]);
    assert_eq!(v["schema"], "haarlie.measure.v1");
    assert_eq!(v["N"], 3);
    assert_eq!(v["M"], 5);
    assert_eq!(v["word"], serde_json::json!([1, 2, 1]));
    let mut e: Vec<i64> = v["exponents"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    e.sort();
    assert_eq!(e, vec![1, 1, 2]);
    // 2 * 2 * 4
    assert_eq!(rational(&v["constant"]), (16, 1));
}

#[test]
fn integrate_schur_pair() {
    let v = json(&["integrate", "--group", "SU(2)", "--expr", "a[1,1]*c[1,1]"]);
    assert_eq!(v["schema"], "haarlie.integrate.v1");
    assert_eq!(rational(&v["re"]), (1, 2));
    assert_eq!(rational(&v["im"]), (0, 1));
}

#[test]
fn integrate_with_explicit_word() {
    let v = json(&["integrate", "--group", "SU(3)", "--word", "2,1,2", "--expr", "a[2,3]*c[2,3]"]);
    assert_eq!(rational(&v["re"]), (1, 3));
}

#[test]
fn hull_inside_and_outside() {
    let v = json(&["hull", "--spectrum", "[(1,0),(-1,0)]"]);
    assert_eq!(v["verdict"], "origin_inside");
    assert!(v["weights"].is_array());
    let v = json(&["hull", "--spectrum", "[(1,0),(0,1)]"]);
    assert_eq!(v["verdict"], "origin_outside");
    assert!(v["separating_vector"].is_array());
}

#[test]
fn mathieu_report_threshold() {
    let v = json(&["mathieu", "--group", "SU(2)", "--f", "a[1,1]", "--g", "c[1,1]", "--n-max", "5"]);
    assert_eq!(v["conclusion"]["threshold"], 2);
    assert_eq!(v["conclusion"]["all_zero"], true);
}

#[test]
fn quadrature_matches_exact() {
    let v = json(&["quad", "--group", "SU(2)", "--expr", "a[1,1]^2*c[1,1]^2"]);
    let re = v["estimate"]["re"].as_f64().unwrap();
    assert!((re - 1.0 / 3.0).abs() < 1e-12, "{re}");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("haarlie-cli-test-{}.json", std::process::id()));
    let out = haarlie(&["integrate", "--group", "T^2", "--expr", "u[1]*u[1]^-1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(rational(&v["re"]), (1, 1));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["integrate", "--group", "SU(x)", "--expr", "1"][..],
        &["integrate", "--group", "SU(2)", "--expr", "a[1,1"],
        &["integrate", "--group", "SU(2)", "--expr", "a[3,1]"],
        &["hull", "--spectrum", "[(1,0),(1)]"],
        &["measure", "--group", "SU(3)", "--word", "1,2"],
    ] {
        let out = haarlie(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_fast_suite() {
    let v = json(&["verify", "--suite", "normalization"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"][0]["id"], 1);
}
