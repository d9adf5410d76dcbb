use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_agenda-control"));
    cmd.args(args).env_remove("AGENDA_CONTROL_CAPS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn winner_on_example1() {
    let e = fixture("example1.election");
    let o = run(&["winner", "--election", &e, "--agenda", "a b c d", "--procedure", "amendment h=2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "b\n"));
    let o = run(&["winner", "--election", &e, "--agenda", "b a d c", "--procedure", "successive"]);
    assert_eq!(stdout(&o), "d\n");
}

#[test]
fn winner_trace_ends_with_winner() {
    let e = fixture("example1.election");
    let o = run(&["winner", "--election", &e, "--agenda", "a b c d", "--procedure", "amendment h=2", "--trace"]);
    let out = stdout(&o);
    assert!(out.starts_with("round 1: a is eliminated\n"), "{out}");
    assert!(out.ends_with("winner b\n"), "{out}");
}

#[test]
fn solve_example2() {
    let o = run(&["solve", "--instance", &fixture("example2.instance")]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "YES");
    assert_eq!(lines[1], "delete-candidate b");
    assert!(lines.contains(&"algorithm: brute-force (OPEN cell)"));
}

#[test]
fn porcelain_solve_is_key_value() {
    let o = run(&["--porcelain", "solve", "--instance", &fixture("example2.instance")]);
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.contains('=')), "{out}");
    assert!(out.contains("decision=YES\n") && out.contains("witness=delete-candidate b\n"));
}

#[test]
fn no_answer_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no.instance");
    let text = std::fs::read_to_string(fixture("example2.instance")).unwrap().replace("dc=1", "dc=0");
    std::fs::write(&path, text).unwrap();
    let o = run(&["oracle", "--instance", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().next(), Some("NO"));
}

#[test]
fn report_file_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.report");
    let o = run(&["solve", "--instance", &fixture("example2.instance"), "--report", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = agenda_control::io::parse_report(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.decision);
    assert_eq!(r.witness, vec!["delete-candidate b".to_string()]);
}

#[test]
fn verify_reduction_on_triangle() {
    let o = run(&["verify-reduction", "--kind", "ccdc_succ_clique", "--graph", &fixture("triangle_clique.graph")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("AGREE"));
}

#[test]
fn graph_solve_reports_witness() {
    let o = run(&["graph-solve", "--problem", "clique", "--graph", &fixture("triangle_clique.graph"), "--kappa", "3"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "YES\nset u v w\n"));
    let o = run(&["graph-solve", "--graph", &fixture("triangle_clique.graph"), "--kappa", "4"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn generated_reduction_solves_like_its_source() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.instance");
    let o = run(&[
        "generate", "reduction", "--kind", "ccav_amd", "--graph", &fixture("single_edge_rbds.graph"),
        "--h", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["oracle", "--instance", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let random = ["generate", "random", "--candidates", "5", "--votes", "4", "--problem", "DCAV", "--seed", "11"];
    assert_eq!(run(&random).stdout, run(&random).stdout);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.graph");
    std::fs::write(&g, "format graph v1\nproblem perfect-code\nkappa 2\nvertex a b c d\nedge a b\nedge c d\n").unwrap();
    let seeded = ["generate", "reduction", "--kind", "dcav_mh", "--graph", g.to_str().unwrap(), "--h", "2", "--seed", "5"];
    let first = run(&seeded);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, run(&seeded).stdout);
}

#[test]
fn fixtures_are_canonical() {
    for name in ["example1.election", "e_extension.election", "condorcet_split.election", "example2.instance", "triangle_clique.graph", "single_edge_rbds.graph"] {
        let o = run(&["canonicalize", "--check", &fixture(name)]);
        assert_eq!(code(&o), 0, "{name}");
    }
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&run(&["solve", "--instance", "/nonexistent/file"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["canonicalize", &fixture("example1.election"), "--check", "--out", "x"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("empty.graph");
    std::fs::write(&g, "format graph v1\nkappa 1\nred r\nblue b\n").unwrap();
    let o = run(&["generate", "reduction", "--kind", "ccav_amd", "--graph", g.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("isolated"));
}

#[test]
fn cap_overrun_exits_three() {
    let o = run_env(&["oracle", "--instance", &fixture("example2.instance")], &[("AGENDA_CONTROL_CAPS", "m=3,n=8,k=4")]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("|C ∪ D| <= 3"));
}
