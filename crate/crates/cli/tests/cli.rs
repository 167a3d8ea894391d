use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

fn slicetool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicetool")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(o: &Output) -> Vec<Vec<f64>> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn forward_constant_f_column() {
    let o = slicetool(&["forward", "--transform", "F", "--n", "2", "--a", "0.5", "--field", "const1", "--grid", "5x7"]);
    assert_eq!(code(&o), 0);
    let r = rows(&o);
    assert_eq!(r.len(), 35);
    for row in r {
        let want = 2.0 * PI * (1.0 - 0.25 * row[2] * row[2]).sqrt();
        assert!((row[3] - want).abs() < 1e-12);
    }
}

#[test]
fn forward_constant_s_column_is_pi() {
    let o = slicetool(&["forward", "--transform", "S", "--a", "0", "--field", "const1", "--random", "12", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let r = rows(&o);
    assert_eq!(r.len(), 12);
    assert!(r.iter().all(|row| row[2] >= 0.0 && (row[3] - PI).abs() < 1e-12));
}

#[test]
fn empty_grid_gives_header_only() {
    let o = slicetool(&["forward", "--transform", "F", "--a", "0", "--field", "const1", "--grid", "0x8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "x1,x2,x3,value\n");
}

#[test]
fn forward_from_grid_file() {
    let dir = std::env::temp_dir().join(format!("slicetool-grid-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("one.txt");
    let mut text = String::from("n=2 kind=latlon dims=6x8 a=1\n");
    for _ in 0..48 {
        text.push_str("1\n");
    }
    fs::write(&path, text).unwrap();
    let o = slicetool(&["forward", "--transform", "F", "--a", "0.5", "--grid-file", path.to_str().unwrap(), "--grid", "3x4"]);
    assert_eq!(code(&o), 0);
    for row in rows(&o) {
        assert!((row[3] - 2.0 * PI * (1.0 - 0.25 * row[2] * row[2]).sqrt()).abs() < 1e-12);
    }
    fs::write(&path, "n=2 kind=latlon dims=6x8 a=1\n1\n").unwrap();
    let o = slicetool(&["forward", "--transform", "F", "--a", "0.5", "--grid-file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["forward", "--transform", "F", "--a", "1.5", "--field", "const1"],
        &["forward", "--transform", "F", "--a", "0", "--field", "gaussian"],
        &["forward", "--transform", "F", "--a", "0", "--field", "nope"],
        &["forward", "--transform", "F", "--n", "4", "--a", "0", "--field", "const1"],
        &["reconstruct", "--transform", "F", "--a", "1", "--field", "sym_even"],
        &["reconstruct", "--transform", "S", "--a", "0.5", "--field", "const1"],
    ];
    for args in cases {
        let o = slicetool(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&slicetool(&["forward", "--transform", "Q", "--a", "0", "--field", "const1"])), 2);
    assert_eq!(code(&slicetool(&["selftest", "--suite", "nope"])), 2);
}

#[test]
fn numerical_failure_exits_three() {
    // the slice through the pole at a = 1 degenerates to a point
    let o = slicetool(&["forward", "--transform", "F", "--a", "1", "--field", "const1", "--xi", "0,0,1"]);
    assert_eq!(code(&o), 3);
    let o = slicetool(&["forward", "--transform", "S", "--a", "1", "--field", "const1", "--xi", "0,0,1"]);
    assert_eq!(code(&o), 3);
    let o = slicetool(&["forward", "--transform", "F", "--a", "0", "--field", "const1", "--xi", "0,0,2", "--xi", "1,0,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&o).len(), 2);
    let o = slicetool(&["forward", "--transform", "F", "--a", "0", "--field", "const1", "--xi", "0,1"]);
    assert_eq!(code(&o), 2);
    let dir = std::env::temp_dir().join(format!("slicetool-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let o = slicetool(&[
        "forward", "--transform", "F", "--a", "0", "--field", "const1", "--out",
        dir.join("missing").join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reconstruct_round_trips() {
    let o = slicetool(&["reconstruct", "--transform", "F", "--a", "0.5", "--field", "sym_even", "--random", "20", "--omit-timing"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["metrics"]["rel_l2"].as_f64().unwrap() <= 1e-2);
    assert_eq!(v["pass"], true);
    let o = slicetool(&["reconstruct", "--transform", "S", "--a", "1", "--field", "cap_bump", "--grid", "6x12"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["metrics"]["rel_l2"].as_f64().unwrap() <= 2e-2);
    assert!(v["metrics"]["runtime_s"].is_number());
    assert_eq!(v["config"]["transform"], "S");
}

#[test]
fn reconstruct_outside_kernel_complement_fails_invariant() {
    // a non-symmetric field is only recovered up to its kernel component
    let o = slicetool(&["reconstruct", "--transform", "F", "--a", "0.5", "--field", "sym_odd", "--random", "10", "--omit-timing"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn outputs_are_byte_stable() {
    let args = ["reconstruct", "--transform", "S", "--a", "0", "--field", "cap_bump", "--random", "15", "--seed", "9", "--omit-timing"];
    let (a, b) = (slicetool(&args), slicetool(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let args = ["forward", "--transform", "S", "--n", "3", "--a", "0.5", "--field", "exp_mix", "--random", "6", "--seed", "2"];
    assert_eq!(slicetool(&args).stdout, slicetool(&args).stdout);
    let args = ["selftest", "--suite", "geometry", "--suite", "identities", "--omit-timing"];
    assert_eq!(slicetool(&args).stdout, slicetool(&args).stdout);
}

#[test]
fn selftest_suite_filter_and_perturbation() {
    let o = slicetool(&["selftest", "--suite", "zonal", "--omit-timing"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], "zonal");
    assert!(v["metrics"].get("runtime_s").is_none());

    let o = slicetool(&["selftest", "--suite", "zonal", "--perturb", "closed_form_vs_pipeline"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["metrics"]["failed"][0], "zonal/closed_form_vs_pipeline");
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed_form_vs_pipeline"));
    assert_eq!(code(&slicetool(&["selftest", "--perturb", "no_such_check"])), 2);
}

#[test]
fn full_selftest_passes() {
    let o = slicetool(&["selftest", "--omit-timing"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    assert_eq!(v["suites"].as_array().unwrap().len(), 8);
    assert_eq!(v["pass"], true);
}
