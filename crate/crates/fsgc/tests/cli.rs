use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fsgc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsgc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_with_verification() {
    let g = fixture("gamma1.json");
    let o = run(&["count", "--graph", &g, "--prime", "3", "--alpha", "4", "--from", "1", "--to", "10", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "1 16");
    assert_eq!(lines[2], "3 63");
}

#[test]
fn count_methods_agree() {
    let g = fixture("hecke7.json");
    let mut outs = Vec::new();
    for m in ["direct", "lifted", "recurrence"] {
        let o = run(&["count", "--graph", &g, "--prime", "7", "--alpha", "3", "--from", "1", "--to", "40", "--method", m]);
        assert_eq!(o.status.code(), Some(0), "{m}");
        outs.push(stdout(&o));
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[1], outs[2]);
}

#[test]
fn recurrence_needs_a_proper_y() {
    let g = fixture("gamma1.json");
    let o = run(&["count", "--graph", &g, "--prime", "3", "--alpha", "4", "--from", "1", "--to", "5", "--method", "recurrence"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hypothesis_failure_exit_code() {
    let o = run(&["check-mup0", "--graph", &fixture("gamma1.json"), "--prime", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p does not divide m"));
}

#[test]
fn malformed_input_exit_code() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{").unwrap();
    let o = run(&["invariants", "--graph", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--json", "invariants", "--graph", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["code"], 2);
    assert_eq!(v["error"]["kind"], "invalid_input");
}

#[test]
fn json_invariants() {
    let o = run(&["--json", "invariants", "--graph", &fixture("gamma1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["data"]["m"], 6);
    assert_eq!(v["data"]["mu"], 12);
    assert_eq!(v["data"]["zeta"]["6"], -1);
}

#[test]
fn generate_then_check() {
    let out = scratch("tree.json");
    let o = run(&["generate", "--divisor-tree", &fixture("divisor_tree_p5.json"), "--prime", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check-mup0", "--graph", out.to_str().unwrap(), "--prime", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn lift_then_congruence() {
    let rep = scratch("h7.rep.json");
    let o = run(&["lift", "--graph", &fixture("hecke7.json"), "--prime", "7", "--alpha", "3", "-o", rep.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["congruence", "--rep", rep.to_str().unwrap(), "--residue", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1, -6, 12, -8"), "{text}");
    let o = run(&["congruence", "--rep", rep.to_str().unwrap(), "--residue", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ode_reduction() {
    let o = run(&["ode", "--graph", &fixture("gamma1.json"), "--mod", "3^4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).trim().is_empty());
    let o = run(&["ode", "--graph", &fixture("gamma1.json"), "--mod", "6^2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_covers_examples() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for n in 1..=3 {
        assert!(text.contains(&format!("Example {n}")), "{text}");
    }
}
