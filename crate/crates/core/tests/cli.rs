use std::path::PathBuf;
use std::process::{Command, Output};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn topical(args: &[&str]) -> (i32, String, String) {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_topical"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        status.code().expect("exit code"),
        String::from_utf8(stdout).expect("utf-8"),
        String::from_utf8(stderr).expect("utf-8"),
    )
}

#[test]
fn check_all_on_e1() {
    let (code, out, _) = topical(&["check", "--all", &example("e1.map")]);
    assert_eq!(code, 1);
    assert!(out.contains("facial: holds"));
    assert!(out.contains("graphical: fails"));
    assert!(out.contains("indecomposable: holds"));
}

#[test]
fn check_partial_on_matrix() {
    let (code, out, _) = topical(&["check", "--partial", &example("matrix_A.map")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("partial: holds"));
}

#[test]
fn check_all_on_identity_fails_everything() {
    let (code, out, _) = topical(&["check", "--all", "--format", "structured", &example("identity3.map")]);
    assert_eq!(code, 1);
    assert_eq!(out.matches("verdict: fails").count(), 5);
    assert_eq!(out.matches("record: check\n").count(), 5);
}

#[test]
fn check_e2_with_each_engine() {
    for engine in ["sat", "brute", "auto"] {
        let (code, out, _) = topical(&[
            "check",
            "--partial",
            "--facial",
            "--engine",
            engine,
            "--format",
            "structured",
            &example("e2.map"),
        ]);
        assert_eq!(code, 1, "{engine}");
        assert!(out.contains("condition: facial\nverdict: fails\n"));
        assert!(out.contains("condition: partial\nverdict: fails\n"));
    }
    let (code, out, _) = topical(&["check", "--graphical", "--indecomposable", "--engine", "graph", &example("e2.map")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn check_reports_unknown_and_usage_errors() {
    let (code, _, err) = topical(&["check", &example("e1.map")]);
    assert_eq!(code, 2);
    assert!(err.contains("select conditions"));
    let (code, _, err) = topical(&["check", "--facial", "--engine", "graph", &example("e1.map")]);
    assert_eq!(code, 2);
    assert!(err.contains("does not decide"));
    let (code, _, _) = topical(&["check", "--facial", "--bogus", &example("e1.map")]);
    assert_eq!(code, 2);
}

#[test]
fn signatures_of_e2() {
    let (code, out, _) = topical(&["signature", "--upper", &example("e2.map")]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("(or (x 1) (x 2))").count(), 2);
    let (_, out, _) = topical(&["signature", "--lower", "--format", "structured", &example("e2.map")]);
    assert_eq!(out, "record: signature\nkind: lower\nentry_1: (x 1)\nentry_2: (x 2)\n\n");
    let (_, out, _) = topical(&["signature", "--upper", &example("identity3.map")]);
    assert!(out.contains("1: (x 1)\n  2: (x 2)\n  3: (x 3)\n"));
}

#[test]
fn local_signatures_report_ties() {
    let (code, out, _) = topical(&["signature", "--point", "1,1", &example("e4.map")]);
    assert_eq!(code, 0);
    assert!(out.contains("2: (and (x 1) (x 2))"));
    assert!(out.contains("tie at map.entry[2]"));
    let (code, _, err) = topical(&["signature", "--point", "1,0", &example("e4.map")]);
    assert_eq!(code, 2);
    assert!(err.contains("positive"));
}

#[test]
fn eigen_examples() {
    let (code, out, _) = topical(&["eigen", &example("e2.map")]);
    assert_eq!(code, 0);
    assert!(out.contains("eigenvalue: 2\n"));
    assert!(out.contains("eigenvector: (1,1)\n"));
    let (code, out, _) = topical(&["eigen", "--point", "1,2", &example("ones.map")]);
    assert_eq!(code, 0);
    assert!(out.contains("eigenvalue: 2\n"));
    let (code, out, _) = topical(&["eigen", "--point", "2,1", "--max-iter", "500", &example("swap.map")]);
    assert_eq!(code, 3);
    assert!(out.contains("converged: false"));
    let (code, _, _) = topical(&["eigen", "--tol", "0", &example("e2.map")]);
    assert_eq!(code, 2);
}

#[test]
fn unique_examples() {
    let (code, out, _) = topical(&["unique", "--condition", "n", &example("e2.map")]);
    assert_eq!(code, 0);
    assert!(out.contains("condition N: certified"));
    let (code, out, _) = topical(&["unique", "--point", "1,2", &example("e4.map")]);
    assert_eq!(code, 1);
    assert!(out.contains("witness I = {1}, J = {2}"));
    let (code, _, _) = topical(&["unique", "--point", "1,1", &example("identity3.map")]);
    assert_eq!(code, 2, "wrong point dimension is a usage error");
    let (code, out, _) = topical(&["unique", "--point", "1,1,1", &example("identity3.map")]);
    assert_eq!(code, 1);
    assert!(out.contains("refuted"));
}

#[test]
fn export_writes_dimacs_and_dot() {
    let dir = tempfile::tempdir().expect("temp dir");
    let cnf = dir.path().join("e1.cnf");
    let dot = dir.path().join("e1.dot");
    let (code, _, err) = topical(&[
        "export",
        "--indecomposable",
        "--dimacs",
        cnf.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        &example("e1.map"),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&cnf).unwrap();
    assert!(text.starts_with("c x1 = 1\nc x2 = 2\nc x3 = 3\np cnf "));
    let f = topical::sat::parse_dimacs(&text).unwrap();
    assert_eq!(topical::sat::solve(&f), topical::sat::SolveOutcome::Unsat);
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.matches("->").count(), 4);
    assert!(dot.contains("3 [peripheries=2];"));
}

#[test]
fn export_errors() {
    let dir = tempfile::tempdir().expect("temp dir");
    let bad = dir.path().join("bad.map");
    std::fs::write(&bad, "(entries (x 1)").unwrap();
    let out = dir.path().join("x.dot");
    let (code, _, err) = topical(&["export", "--dot", out.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.map:1:"));
    let (code, _, _) = topical(&["export", "--dot", "/nonexistent/dir/x.dot", &example("e1.map")]);
    assert_eq!(code, 2);
    let (code, _, err) = topical(&["export", "--all", "--dimacs", out.to_str().unwrap(), &example("e1.map")]);
    assert_eq!(code, 2);
    assert!(err.contains("exactly one"));
    let (code, _, _) = topical(&["check", "--all", "/nonexistent.map"]);
    assert_eq!(code, 2);
}
