use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metahecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(verb: &str, name: &str) -> Output {
    let path = fixture(name);
    run(&[verb, path.to_str().unwrap()])
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn hecke_check_b2_passes() {
    let out = run_fixture("hecke-check", "b2.json");
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["ok"], true);
    assert_eq!(v["braid"][0]["m"], 4);
    assert_eq!(v["associativity"]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn hecke_check_extended_d3() {
    let out = run_fixture("hecke-check", "d3_extended.json");
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["r_group_order"], 2);
}

#[test]
fn hecke_check_rejects_unequal_conjugate_parameters() {
    let out = run_fixture("hecke-check", "a2_unequal.json");
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"].as_str().unwrap().contains("conjugate"));
}

#[test]
fn float_literal_rejected_with_path() {
    let out = run_fixture("hecke-check", "float_exponent.json");
    assert_eq!(code(&out), 2);
    let err = json(&out)["error"].as_str().unwrap().to_string();
    assert!(err.contains("params.alpha_exponents[0]"), "{err}");
    assert!(err.contains("0.3"), "{err}");
}

#[test]
fn unknown_schema_version_rejected() {
    let out = run_fixture("hecke-check", "wrong_schema.json");
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_is_malformed_input() {
    let out = run(&["blocks-classify", "/nonexistent/descriptor.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn rankone_grid_sweep() {
    let out = run(&["rankone-verify", "--grid", "0.5..3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    // 21 pairs with a ≥ b, four sign pairs each.
    assert_eq!(results.len(), 84);
    assert!(results.iter().all(|r| r["quadratic_ok"] == true));
    assert_eq!(results[0]["a"], "1/2");
}

#[test]
fn rankone_bad_grid() {
    let out = run(&["rankone-verify", "--grid", "1/0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn blocks_classify_reports_orders() {
    let out = run_fixture("blocks-classify", "block_sp.json");
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let o = &v["orders"];
    assert_eq!(
        o["w_o"].as_u64().unwrap() * o["r"].as_u64().unwrap(),
        o["w_m_o"].as_u64().unwrap()
    );
}

#[test]
fn blocks_classify_rejects_even_orthogonal_pole() {
    let out = run_fixture("blocks-classify", "block_bad.json");
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"]
        .as_str()
        .unwrap()
        .contains("even orthogonal"));
}

#[test]
fn mp_enumerate_trivial_class() {
    let out = run_fixture("mp-enumerate", "phi0_trivial.json");
    assert_eq!(code(&out), 0);
    let blocks = json(&out)["blocks"].as_array().unwrap().clone();
    // S ∈ {(0,0,2), (1,0,1), (0,1,1), (1,1,0)}; no free signs.
    assert_eq!(blocks.len(), 4);
    let split: Vec<i64> = blocks
        .iter()
        .map(|b| b["epsilon_Z"].as_i64().unwrap())
        .collect();
    assert_eq!(split.iter().filter(|&&e| e == 1).count(), 2);
}

#[test]
fn mp_enumerate_rejects_bad_dimension() {
    let out = run_fixture("mp-enumerate", "phi0_bad_dimension.json");
    assert_eq!(code(&out), 2);
    assert!(json(&out)["error"].as_str().unwrap().contains("dimension"));
}

#[test]
fn mp_match_single_and_sweep() {
    let out = run_fixture("mp-match", "phi0_mixed.json");
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["mismatches"], 0);

    let out = run(&["mp-match", "--max-rank", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["parameters"].as_u64().unwrap() > 10);
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn weil_example_n2() {
    let out = run(&["weil-example", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let plus = &v["blocks"][0];
    assert_eq!(plus["hecke"]["size"], 5);
    assert_eq!(plus["hecke"]["param_exponents"], serde_json::json!([1, 1]));
    assert_eq!(plus["hecke"]["qi_exponent"], 0);
    assert_eq!(plus["epsilon_Z"], 1);
    let minus = &v["blocks"][1];
    assert_eq!(minus["hecke"]["size"], 3);
    assert_eq!(minus["hecke"]["special_exponent"], 2);
    assert_eq!(minus["hecke"]["qi_exponent"], 1);
    assert_eq!(minus["epsilon_Z"], -1);
    assert_eq!(minus["matches_reference"], false);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec![
            "hecke-check".to_string(),
            fixture("b2.json").display().to_string(),
        ],
        vec![
            "mp-enumerate".to_string(),
            fixture("phi0_mixed.json").display().to_string(),
        ],
        vec![
            "blocks-classify".to_string(),
            fixture("block_sp.json").display().to_string(),
        ],
        vec![
            "weil-example".to_string(),
            "--n".to_string(),
            "3".to_string(),
        ],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("metahecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("weil.json");
    let out = run(&[
        "weil-example",
        "--n",
        "1",
        "--pretty",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\n  "));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verb"], "weil-example");
    std::fs::remove_dir_all(&dir).unwrap();
}
