use std::process::{Command, Output};

fn bvcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvcalc")).args(args).env_remove("BVCALC_SEED").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = bvcalc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "laplacian", "q1*p1", "--pairs", "1"]), "1");
    assert_eq!(stdout(&["eval", "bracket", "q1", "p1", "--pairs", "1"]), "-1");
    assert_eq!(stdout(&["eval", "laplacian", "1", "--pairs", "1"]), "0");
    assert_eq!(stdout(&["eval", "integrate", "p1*exp(-q1^2/2)", "--pairs", "1"]), "G(1)");
}

#[test]
fn exit_codes() {
    assert_eq!(bvcalc(&["eval", "laplacian", "q1*", "--pairs", "1"]).status.code(), Some(2));
    assert_eq!(bvcalc(&["eval", "laplacian", "z9", "--pairs", "1"]).status.code(), Some(2));
    assert_eq!(bvcalc(&["check", "nope"]).status.code(), Some(2));
    assert_eq!(bvcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bvcalc(&["check", "gaugefix", "--size", "3"]).status.code(), Some(0));
}

#[test]
fn spec_files_replay_json_records() {
    let record = stdout(&["eval", "ham", "q1*q2", "--pairs", "2", "--json"]);
    let dir = std::env::temp_dir().join(format!("bvcalc-spec-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("req.json");
    std::fs::write(&path, &record).unwrap();
    assert_eq!(stdout(&["eval", "--spec", path.to_str().unwrap(), "--json"]), record);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_bvcalc"));
        c.args(["check", "cotangent", "--size", "2", "--json"]).args(args).env_remove("BVCALC_SEED");
        if let Some(s) = env {
            c.env("BVCALC_SEED", s);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), &[]), run(None, &["--seed", "9"]));
    assert_ne!(run(None, &["--seed", "9"]), run(None, &["--seed", "10"]));
}
