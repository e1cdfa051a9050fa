use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gkcheck"));
    c.env_remove("GKERNEL_THREADS");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn pentagon_script() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scripts/pentagon.script")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("suite.toml");
    std::fs::write(&p, text).unwrap();
    p
}

const TRIVIAL_HEAD: &str = r#"
[group]
cyclic = 3

[model]
kind = "trivial"
d = 1
"#;

#[test]
fn trivial_cocycle_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{TRIVIAL_HEAD}\n[[checks]]\nname = \"is-cocycle\"\n"));
    let report = dir.path().join("r.json");
    let o = run(&["check", cfg.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
    assert_eq!(v["summary"]["passed"], true);
    assert!(gkernel_cli::report::timing_path(&report).exists());
}

#[test]
fn undeclared_object_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{TRIVIAL_HEAD}\n[objects]\nX = [[\"a\", 1.0, 1]]\n\n[[checks]]\nname = \"sigma-tensor\"\nobjects = [\"X\", \"Q\"]\n"
    );
    let cfg = write_config(dir.path(), &text);
    let o = run(&["check", cfg.to_str().unwrap(), "--report", dir.path().join("r.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    let line = text.lines().position(|l| l.contains("\"Q\"")).unwrap() + 1;
    let col = text.lines().nth(line - 1).unwrap().find("\"Q\"").unwrap() + 1;
    assert!(err.contains(&format!(":{line}:{col}: undeclared object \"Q\"")), "{err}");
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "[group]\ncyclic = \n".to_string(),
        format!("{TRIVIAL_HEAD}\n[[checks]]\nname = \"no-such-check\"\n"),
        format!("{TRIVIAL_HEAD}\n[[checks]]\nname = \"cuntz-equals\"\nlhs = \"v1 +\"\n"),
        format!("{TRIVIAL_HEAD}\nunknown_key = 1\n"),
        "[group]\ncyclic = 2\n[model]\nkind = \"diag\"\nphases = [\"0\", \"x\"]\n".to_string(),
    ] {
        let cfg = write_config(dir.path(), &text);
        let o = run(&["check", cfg.to_str().unwrap(), "--report", dir.path().join("r.json").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}\n{}", stderr(&o));
    }
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{TRIVIAL_HEAD}\n[[checks]]\nname = \"cuntz-equals\"\nlhs = \"v1 v1*\"\nrhs = \"1\"\n");
    let cfg = write_config(dir.path(), &text);
    let report = dir.path().join("r.json");
    let o = run(&["check", cfg.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] cuntz-equals not equal"), "{}", stdout(&o));
    assert!(report.exists());
}

#[test]
fn z2_suite_passes_with_small_pentagon_residual() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("z2.json");
    let o = run(&["check", fixture("z2_diag.toml").to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let pent: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["name"] == "pentagon-sigma").collect();
    assert!(!pent.is_empty());
    for c in pent {
        assert!(c["residual"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn overrides_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let cfg = fixture("z3_random.toml");
    let o = run(&["check", cfg.to_str().unwrap(), "--report", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--seed", "99", "check", cfg.to_str().unwrap(), "--report", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let (ra, rb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_ne!(ra, rb);
    assert!(rb.contains("\"seed\": 99"));
    // an absurdly small tolerance makes floating-point checks fail
    let o = run(&["--tolerance", "1e-40", "check", cfg.to_str().unwrap(), "--report", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("z2_diag.toml");
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let report = dir.path().join(format!("t{threads}.json"));
        let o = bin()
            .env("GKERNEL_THREADS", threads)
            .args(["check", cfg.to_str().unwrap(), "--report", report.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        reports.push(std::fs::read(&report).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let o = bin().env("GKERNEL_THREADS", "zero").args(["check", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explain_known_and_unknown() {
    for name in gkernel_cli::explain::CHECK_NAMES {
        let o = run(&["explain", name]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with(name));
    }
    let o = run(&["explain", "pentagon-sigma"]);
    assert!(stdout(&o).contains("(u_{X,Y} ⊗ 1_Z) u_{X×Y,Z}"));
    let o = run(&["explain", "minimality"]);
    assert!(stdout(&o).contains("disjoint"));
    assert_eq!(run(&["explain", "nope"]).status.code(), Some(2));
}

#[test]
fn cuntz_verb() {
    let o = run(&["cuntz", "v1 v1* + v2 v2*", "==", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "equal");
    let o = run(&["cuntz", "v1 v1* == 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not equal");
    let o = run(&["cuntz", "--n", "3", "v3* v3 == 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["cuntz", "v1 +", "==", "1"]).status.code(), Some(2));
    assert_eq!(run(&["cuntz", "v1"]).status.code(), Some(2));
}

#[test]
fn prove_verb() {
    let script = pentagon_script();
    let o = run(&["prove", script.to_str().unwrap(), "--trace"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("proved"));
    let text = std::fs::read_to_string(&script).unwrap();
    let steps = text.lines().filter(|l| l.trim_start().starts_with("step")).count();
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit())).count(), steps + 1);

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("b.script");
    std::fs::write(&broken, text.replacen("R5 -> at 0", "R5 <- at 0", 1)).unwrap();
    let o = run(&["prove", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("stuck at step 1"), "{}", stdout(&o));
    std::fs::write(&broken, "objects X\nstart U[Q]\ngoal U[X]\n").unwrap();
    let o = run(&["prove", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b.script:2:"), "{}", stderr(&o));
}

#[test]
fn minimality_verb() {
    let o = run(&["minimality", fixture("z3_random.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("not minimal") && out.contains("F is not full"), "{out}");
    let o = run(&["minimality", fixture("z3_random.toml").to_str().unwrap(), "--mu", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("support: [0, 2]"));
    let o = run(&["minimality", fixture("z3_random.toml").to_str().unwrap(), "--mu", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
}
