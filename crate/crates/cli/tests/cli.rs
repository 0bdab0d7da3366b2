use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vasreach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reach_finds_seven_step_witness() {
    let o = run(&["reach", &fixture("fig1.vas"), "--from", "0,2", "--to", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness aaaabbb"), "{}", stdout(&o));
}

#[test]
fn reach_porcelain_is_json() {
    let o = run(&["--porcelain", "reach", &fixture("fig1.vas"), "--from", "0,2", "--to", "1,0"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "reachable");
    assert_eq!(v["length"], 7);
}

#[test]
fn unreachable_certificate_round_trips_through_check_cert() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.txt");
    let cert_s = cert.to_string_lossy().into_owned();
    let vas = fixture("fig1.vas");
    let o = run(&["reach", &vas, "--from", "0,2", "--to", "0,3", "--templates", "--cert-out", &cert_s]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = run(&["check-cert", &vas, "--from", "0,2", "--to", "0,3", "--cert", &cert_s]);
    assert_eq!(o.status.code(), Some(0));
    // The same formula does not separate a reachable pair.
    let o = run(&["check-cert", &vas, "--from", "0,2", "--to", "1,0", "--cert", &cert_s]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_cert_lists_every_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bad.txt");
    std::fs::write(&cert, "x1 >= 5\n").unwrap();
    let o = run(&[
        "check-cert",
        &fixture("fig1.vas"),
        "--from",
        "0,2",
        "--to",
        "7,0",
        "--cert",
        &cert.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().count() >= 3, "{out}");
}

#[test]
fn budget_exhaustion_exits_two() {
    let o = run(&[
        "reach",
        &fixture("hp79.vass"),
        "--from",
        "p:1,0,0",
        "--to",
        "p:0,0,5",
        "--rounds",
        "2",
        "--steps",
        "500",
        "--formulas",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vass_state_prefix() {
    let o = run(&["reach", &fixture("hp79.vass"), "--from", "p:1,0,0", "--to", "q:2,0,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["reach", &fixture("hp79.vass"), "--from", "r:1,0,0", "--to", "q:2,0,0"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn malformed_input_exits_64() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.vas");
    std::fs::write(&f, "vas\ndim 2\naction a 1\n").unwrap();
    let o = run(&["reach", &f.to_string_lossy(), "--from", "0,0", "--to", "0,0"]);
    assert_eq!(o.status.code(), Some(64));
    let o = run(&["reach", &fixture("fig1.vas"), "--from", "0,2,1", "--to", "0,0"]);
    assert_eq!(o.status.code(), Some(64));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn covers_with_top() {
    let o = run(&["covers", &fixture("fig1.vas"), "--from", "0,2", "--to", "T,5"]);
    assert_eq!(o.status.code(), Some(0));
    // With both counters empty only the third coordinate can grow.
    let o = run(&["covers", &fixture("hp79.vass"), "--from", "p:0,0,0", "--to", "q:1,0,T"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn semilinear_intersection_of_lines() {
    let o = run(&["semilinear", "intersect", &fixture("fig5.sl")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for b in ["(8,2)", "(11,1)", "(14,0)"] {
        assert!(out.contains(&format!("base {b} periods {{(1,0)}}")), "{out}");
    }
    assert!(out.contains("dim 1"));
}

#[test]
fn semilinear_dims_and_interior() {
    let o = run(&["semilinear", "dim", &fixture("fig6.sl")]);
    assert_eq!(stdout(&o).trim(), "dim 0\ndim 1\ndim 2");
    let fig4 = fixture("fig4.sl");
    assert_eq!(run(&["semilinear", "interior", &fig4, "--point", "0,2"]).status.code(), Some(0));
    assert_eq!(run(&["semilinear", "interior", &fig4, "--point", "0,1"]).status.code(), Some(1));
    assert_eq!(run(&["semilinear", "interior", &fig4, "--point", "3,3"]).status.code(), Some(1));
}

#[test]
fn mrgs_check_reports_conditions() {
    let o = run(&["mrgs-check", &fixture("mrgs/all_top_fig1.mrgs"), "--realize", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("large_solution=true") && out.contains("perfect=true"), "{out}");
    assert!(out.contains("realized level 3"));

    let o = run(&["--porcelain", "mrgs-check", &fixture("mrgs/decrement_pinned.mrgs")]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["large_solution"], false);
    assert_eq!(v["loops"][0]["input"], false);
    assert_eq!(v["loops"][0]["output"], true);
}
