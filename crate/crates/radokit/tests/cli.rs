//! Behavior of the command-line interface: exit codes, report stability,
//! environment overrides, and worker-count determinism.

use std::process::{Command, Output};

const PAPER_SYSTEM: &str = r#"{"d":2,"k":2,"blocks":[[[2,1],[2,3]],[[-5,7],[10,-2]]]}"#;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_radokit")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("radokit-cli-{name}"));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("run binary")
}

#[test]
fn smod_prints_one_residue_per_line() {
    let out = run(&["smod", "3", "6", "-6", "2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "2\n1\n2\n1\n");

    // Rationals are accepted; 50/3 = 5^2 * (2/3), 2 * 3^{-1} = 4 mod 5.
    let out = run(&["smod", "5", "50/3"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "4\n");

    let out = run(&["smod", "4", "1"]);
    assert_eq!(out.status.code(), Some(2), "non-prime modulus is an input error");
}

#[test]
fn unknown_subcommands_and_flags_exit_2() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radokit <subcommand>"));

    let path = write_temp("paper.json", PAPER_SYSTEM);
    let out = run(&["check-kcolumns", path.to_str().unwrap(), "--frob", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["check-kcolumns", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_offending_path() {
    let bad = write_temp("bad.json", r#"{"d":2,"k":1,"blocks":[[[1]]]}"#);
    let out = run(&["check-kcolumns", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("blocks[0][0]"), "stderr was: {stderr}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = write_temp("paper.json", PAPER_SYSTEM);
    let a = run(&["check-kcolumns", path.to_str().unwrap()]);
    let b = run(&["check-kcolumns", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));

    let a = run(&["extract-cert", path.to_str().unwrap(), "--primes-up-to", "13", "--window", "60"]);
    let b = run(&["extract-cert", path.to_str().unwrap(), "--primes-up-to", "13", "--window", "60"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jobs_flag_reproduces_parallel_output() {
    let path = write_temp("paper.json", PAPER_SYSTEM);
    let parallel = run(&["falsify", path.to_str().unwrap(), "--primes-up-to", "13", "--window", "50"]);
    let serial = run(&[
        "--jobs",
        "1",
        "falsify",
        path.to_str().unwrap(),
        "--primes-up-to",
        "13",
        "--window",
        "50",
    ]);
    assert_eq!(parallel.stdout, serial.stdout);
    assert_eq!(parallel.status.code(), serial.status.code());
}

#[test]
fn node_budget_env_var_caps_the_search() {
    let path = write_temp("paper.json", PAPER_SYSTEM);
    let out = Command::new(bin())
        .args(["check-kcolumns", path.to_str().unwrap()])
        .env("RADOKIT_NODE_BUDGET", "1")
        .output()
        .expect("run binary");
    assert_eq!(out.status.code(), Some(3), "budget of 1 node must exhaust");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"]["status"], "exhausted");

    // An explicit flag overrides the environment.
    let out = Command::new(bin())
        .args([
            "check-kcolumns",
            path.to_str().unwrap(),
            "--node-budget",
            "100000",
        ])
        .env("RADOKIT_NODE_BUDGET", "1")
        .output()
        .expect("run binary");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn find_solution_not_found_exits_1() {
    // x1 + x2 = 0 under a sign-separating coloring has no witness.
    let sys = write_temp("xplus.json", r#"{"d":1,"k":1,"blocks":[[[1],[1]]]}"#);
    let mut colors = String::new();
    for z in -5..=5i64 {
        if !colors.is_empty() {
            colors.push(',');
        }
        let c = match z.signum() {
            1 => 1,
            -1 => 2,
            _ => 0,
        };
        colors.push_str(&format!("\"{z}\":{c}"));
    }
    let coloring = write_temp(
        "sign.json",
        &format!("{{\"window\":[-5,5],\"colors\":{{{colors}}}}}"),
    );
    let out = run(&[
        "find-solution",
        sys.to_str().unwrap(),
        "--coloring",
        &format!("file:{}", coloring.display()),
        "--window",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"]["status"], "not_found");
    assert!(report["outcome"]["note"]
        .as_str()
        .unwrap()
        .contains("window"));

    // A window wider than the coloring is an input error.
    let out = run(&[
        "find-solution",
        sys.to_str().unwrap(),
        "--coloring",
        &format!("file:{}", coloring.display()),
        "--window",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn extract_cert_writes_report_file() {
    let path = write_temp("paper.json", PAPER_SYSTEM);
    let report_path = std::env::temp_dir().join("radokit-cli-provenance.json");
    let _ = std::fs::remove_file(&report_path);
    let out = run(&[
        "extract-cert",
        path.to_str().unwrap(),
        "--primes-up-to",
        "13",
        "--window",
        "60",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();
    let stdout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(file, stdout["outcome"]["provenance"]);
    assert_eq!(stdout["outcome"]["certificate"]["delta"], serde_json::json!([5, -4]));
}

#[test]
fn semi_rado_cli_on_schur() {
    let path = write_temp("schur.json", r#"{"d":1,"k":1,"blocks":[[[1],[1],[-1]]]}"#);
    let out = run(&["semi-rado", path.to_str().unwrap(), "--colors", "1", "--max-window", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"]["semi_rado_number"], 1);
}

#[test]
fn degenerate_systems_are_input_errors() {
    let path = write_temp("degenerate.json", r#"{"d":1,"k":1,"blocks":[[[0],[0]]]}"#);
    let out = run(&["check-kcolumns", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["find-solution", path.to_str().unwrap(), "--coloring", "smod:3", "--window", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn smod_coloring_rejects_composite_modulus() {
    let path = write_temp("paper.json", PAPER_SYSTEM);
    let out = run(&["find-solution", path.to_str().unwrap(), "--coloring", "smod:6", "--window", "5"]);
    assert_eq!(out.status.code(), Some(2));
}
