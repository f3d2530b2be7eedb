use std::process::{Command, Output};

use serde_json::Value;

fn l2lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2lab")).args(args).env_remove("L2LAB_MAX_BALL_RADIUS").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn dim_of_singleton_set() {
    let v = json_of(&l2lab(&["--index-set", "[2]", "dim"]));
    assert_eq!(v["closed_form"]["lower"], "3/261121");
    assert_eq!(v["closed_form"]["width"], "0");
    assert_eq!(v["beta_printed"]["beta2"], "6144/261121");
    assert_eq!(v["agree"], false);
    let corrected = json_of(&l2lab(&["--index-set", "[2,5]", "dim", "--hook-sum"]));
    assert_eq!(corrected["agree"], true);
}

#[test]
fn dim_with_factorial_rule_reports_width() {
    let v = json_of(&l2lab(&["--index-set", r#"{"kind":"factorial"}"#, "dim", "--terms", "4"]));
    assert_ne!(v["closed_form"]["width"], "0");
}

#[test]
fn malformed_index_set_is_a_validation_error() {
    for set in ["[2,4]", "[3]", "[5,2]", "not json"] {
        let out = l2lab(&["--index-set", set, "dim"]);
        assert_eq!(out.status.code(), Some(1), "{set}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn models_table() {
    let out = l2lab(&["models", "--l-max", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "l,i,j,dim");
    assert!(lines.contains(&"4,1,1,1"));
    assert!(lines.contains(&"6,1,1,0"));
    assert!(lines.contains(&"7,1,1,1"));
    for row in &lines[1..] {
        let f: Vec<&str> = row.split(',').collect();
        if f[2] == "2" {
            assert_eq!(f[3], "0", "{row}");
        }
    }
    let v = json_of(&l2lab(&["models", "--l-max", "4", "--format", "json"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn measure_and_window_count() {
    let v = json_of(&l2lab(&["measure", "--legs", "1", "1"]));
    assert_eq!(v["hook_measure"]["rational"], "1/16384");
    assert_eq!(v["agree"], true);
    let w = json_of(&l2lab(&["--group", "wreath", "measure", "--window", r#"["e","s1","s1^2","s2","s2 s1"]"#]));
    assert_eq!(w["agree"], true);
    assert_eq!(w["count_extendable"]["rational"], "32");
    let out = l2lab(&["measure", "--window", r#"["e","s1^2"]"#]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sampling_is_deterministic() {
    let args = ["--group", "wreath", "--seed", "7", "sample", "--legs", "1", "1", "--samples", "5000"];
    let a = l2lab(&args);
    let b = l2lab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["within_4_sigma"], true);
}

#[test]
fn member_verdicts() {
    let yes = json_of(&l2lab(&["--index-set", "[2,5]", "member", "--vector", r#"["s1^-1","e","s1","t5 s1^-1","t5","t5 s1"]"#]));
    assert_eq!(yes["member"], true);
    assert_eq!(yes["certificate"].as_array().unwrap().len(), 1);
    let no = json_of(&l2lab(&["--index-set", "[2,5]", "member", "--vector", r#"["s1^-1","e","s1","t3 s1^-1","t3","t3 s1"]"#]));
    assert_eq!(no["member"], false);
    let delta = json_of(&l2lab(&["member", "--vector", r#"["e"]"#]));
    assert_eq!(delta["rejection"]["reason"], "short_interval");
    assert_eq!(json_of(&l2lab(&["member", "--vector", "[]"]))["member"], true);
    assert_eq!(l2lab(&["member", "--vector", r#"["q7"]"#]).status.code(), Some(1));
}

#[test]
fn relations_stream() {
    let v = json_of(&l2lab(&["--group", "wreath", "relations", "--count", "5"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["word"], "τ τ");
    assert_eq!(rows[1]["word"], "[s2 s1 s2^-1, s1]");
    let csv = l2lab(&["relations", "--count", "3", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("family,index,word\n"));
}

#[test]
fn target_is_exact() {
    let v = json_of(&l2lab(&["target", "--value", "0.1011", "--precision", "8"]));
    assert_eq!(v["exact"], true);
    assert_eq!(v["target"]["rational"], "11/16");
    let q = json_of(&l2lab(&["target", "--value", "1/3", "--precision", "40"]));
    assert_eq!(q["exact"], true);
    assert_eq!(l2lab(&["target", "--value", "0.12"]).status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let ok = l2lab(&["verify", "--suite", "models", "--l-max", "60"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["passed"], true);
    let route = l2lab(&["verify", "--suite", "route"]);
    assert_eq!(route.status.code(), Some(2));
    assert_eq!(l2lab(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn radius_cap_from_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_l2lab"))
            .args(["relations", "--count", "100000"])
            .env("L2LAB_MAX_BALL_RADIUS", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(3));
    assert_eq!(run("two").status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_validation_code() {
    assert_eq!(l2lab(&["dim", "--terms", "x"]).status.code(), Some(1));
    assert_eq!(l2lab(&["--group", "z3", "dim"]).status.code(), Some(1));
    assert_eq!(l2lab(&["--help"]).status.code(), Some(0));
}
