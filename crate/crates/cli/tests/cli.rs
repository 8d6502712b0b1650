use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};
use toric_dioph::{corpus, Fan};

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run_with(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_toric-dioph"));
    cmd.current_dir(workspace()).args(args).env_remove("TORIC_DIOPH_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    })
}

#[test]
fn analyze_s7_finds_two_locus_lines() {
    let out = run(&["analyze", "fans/s7.json", "--divisor", "anticanonical"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["beta"]["beta"], 2);
    assert_eq!(r["result"]["locus"]["status"], "exact");
    assert_eq!(r["result"]["locus"]["locus"]["components"].as_array().unwrap().len(), 2);
    assert_eq!(r["result"]["diagnostics"]["relations_bounded"]["pass"], true);
    assert_eq!(r["tool"], "toric-dioph");
    assert_eq!(r["fan_hash"].as_str().unwrap().len(), 64);
    assert_eq!(r["config"]["command"]["divisor"], "anticanonical");
}

#[test]
fn broken_fan_fails_validation() {
    let out = run(&["validate", "fans/broken.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["status"], "fail");
    let kinds: Vec<&str> = r["result"]["report"]["issues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"FacetUnpaired"), "{kinds:?}");
    // downstream commands refuse the same fan
    assert_eq!(run(&["analyze", "fans/broken.json"]).status.code(), Some(1));
}

#[test]
fn hirzebruch_one_essential_constant() {
    let out = run(&["kleinschmidt", "1", "1", "1", "--divisor", "anticanonical"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["ess_constant"]["value"], 3);
    assert_eq!(r["result"]["ess_constant"]["class_name"], "C3");
    assert_eq!(r["result"]["analysis"]["beta"]["beta"], 2);
    let fan: Fan = serde_json::from_value(r["result"]["fan"].clone()).unwrap();
    assert_eq!(fan, corpus::by_name("f1").unwrap().fan);
}

#[test]
fn bad_input_exits_two_and_names_the_field() {
    let cases: [&[&str]; 4] = [
        &["analyze", "no-such-fan"],
        &["divisor", "s7", "--divisor", "1,2"],
        &["approx", "search", "s7", "--place", "4"],
        &["approx", "search", "s7", "--bound", "0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    let err = String::from_utf8(run(&["divisor", "s7", "--divisor", "1,2"]).stderr).unwrap();
    assert!(err.contains("--divisor"), "{err}");
    // the locus needs an ample divisor on a non-projective-space fan
    assert_eq!(run(&["approx", "verify", "p2"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["curve", "s7", "--bound", "1"][..],
        &["analyze", "k_1_2_0_1", "--format", "markdown"],
        &["approx", "search", "s7", "--bound", "6", "--format", "csv"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let args = ["curve", "f1", "--relation", "1,0,1,1"];
    let env_seed = report(&run_with(&args, &[("TORIC_DIOPH_SEED", "77")]));
    assert_eq!(env_seed["config"]["seed"], 77);
    let flag = report(&run_with(&[&args[..], &["--seed", "5"]].concat(), &[("TORIC_DIOPH_SEED", "77")]));
    assert_eq!(flag["config"]["seed"], 5);
    assert_eq!(
        env_seed["result"]["relations"][0]["splitting_type"],
        flag["result"]["relations"][0]["splitting_type"]
    );
    assert_eq!(flag["result"]["relations"][0]["splitting_type"]["degrees"], serde_json::json!([1, 2]));
}

#[test]
fn search_csv_has_a_row_per_point() {
    let out = run(&["approx", "search", "p2", "--divisor", "0,0,1", "--bound", "2", "--format", "csv", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# toric-dioph"));
    assert_eq!(lines.next().unwrap(), "point,distance,height,value");
    // levels 1 and 2 give the fractions -2, -1, -1/2, 1/2, 1, 2 per coordinate, minus the base point
    assert_eq!(lines.count(), 6 * 6 - 1);
}

#[test]
fn bundled_fans_match_the_corpus() {
    for e in corpus::all() {
        let path = workspace().join("fans").join(format!("{}.json", e.name));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(Fan::from_json(&text).unwrap(), e.fan, "{}", e.name);
        let by_path = report(&run(&["validate", path.to_str().unwrap()]));
        let by_name = report(&run(&["validate", e.name]));
        assert_eq!(by_path["fan_hash"], by_name["fan_hash"]);
    }
}

#[test]
fn corpus_suite_passes() {
    let out = run(&["corpus", "--bound", "8"]);
    let r = report(&out);
    assert_eq!(out.status.code(), Some(0), "{r}");
    assert_eq!(r["result"]["entries"].as_array().unwrap().len(), corpus::all().len());
}
