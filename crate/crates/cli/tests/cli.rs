//! End-to-end checks of the command-line surface: output schema and exit
//! codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pa-mincsp"))
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pa-mincsp-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_reports_solution_schema() {
    let file = write_temp("cycle.pa", "k 1\nlt x y soft\nlt y x soft\n");
    let out = run(&["solve", file.to_str().unwrap(), "--rational"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("YES cost=1 weight=1"));
    assert!(text.contains("delete 0"));
    assert!(text.contains("assign x "));
    assert!(text.contains("value x "));
}

#[test]
fn solve_distinguishes_no_and_crisp_unsat() {
    let no = write_temp("no.pa", "k 0\nlt x y soft\nlt y x soft\n");
    let out = run(&["solve", no.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "NO");

    let unsat = write_temp("unsat.pa", "k 3\neq x y crisp\nneq x y crisp\n");
    let out = run(&["solve", unsat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "UNSAT-CRISP");
}

#[test]
fn parse_errors_exit_2_with_line_number() {
    let bad = write_temp("bad.pa", "k 2\nzz x y soft\n");
    let out = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn oracle_guard_exits_3() {
    let mut text = String::from("k 1\n");
    for i in 0..10 {
        text.push_str(&format!("lt a{i} b{i} soft\n"));
    }
    let big = write_temp("big.pa", &text);
    let out = run(&["solve", big.to_str().unwrap(), "--engine", "oracle"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sat_and_classify() {
    let file = write_temp("sat.pa", "k 0\nleq x y crisp\nleq y x crisp\nneq x y crisp\n");
    let out = run(&["sat", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["classify", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("W1Hard"));
}

#[test]
fn reduce_emits_graph_format_with_backmap() {
    let file = write_temp("red.pa", "k 1\nleq x y soft\nneq x y crisp\n");
    let out = run(&["reduce", file.to_str().unwrap(), "--to", "dsmc"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("arc x y soft 1"));
    assert!(text.contains("pair x y crisp"));
    assert!(text.contains("# backmap 1 1"));

    let out = run(&["reduce", file.to_str().unwrap(), "--to", "dfas"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn booleanize_dumps_encoding() {
    let file = write_temp("bool.pa", "k 1\nlt u1 u2 crisp\neq v u1 soft\n");
    let out = run(&["booleanize", file.to_str().unwrap(), "--u", "u1,u2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("bvar c u1 1"));
    assert!(text.contains("bvar p v 5"));
    assert!(text.contains("bcons crisp 1 - : T>c:u1:1"));
    assert!(text.contains("bcons soft 1 1 :"));
}

#[test]
fn oracle_autodetects_formats() {
    let csp = write_temp("o1.pa", "k 1\nlt x y soft\nlt y x soft\n");
    let out = run(&["oracle", csp.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("YES cost=1"));

    let dsmc = write_temp("o2.pa", "k 1\narc x y soft\narc y x soft\npair x y crisp\n");
    let out = run(&["oracle", dsmc.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("YES cost=1"));

    let clique = write_temp("o3.pa", "k 2\npart 1 a b\npart 2 c d\nedge a d\n");
    let out = run(&["oracle", clique.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.starts_with("YES"));
    assert!(text.contains("select a") && text.contains("select d"));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let args = ["gen", "--seed", "7", "--vars", "5", "--constraints", "9", "--relations", "eq,neq"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.lines().skip(1).all(|l| l.starts_with("eq") || l.starts_with("neq")));
    pa_mincsp::format::parse_instance(&text).unwrap();
}

#[test]
fn gadget_build_writes_map_file() {
    let clique = write_temp("g.pa", "k 2\npart 1 a1 a2\npart 2 b1 b2\nedge a1 b1\n");
    let map_path = std::env::temp_dir()
        .join(format!("pa-mincsp-test-{}-g.map", std::process::id()));
    let out = run(&[
        "gadget",
        "build",
        clique.to_str().unwrap(),
        "--map",
        map_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("k 12\n"));
    assert!(text.contains("arc nk1.s1.d1.n nk1.s1.d1.s soft 1"));
    let map = std::fs::read_to_string(&map_path).unwrap();
    assert!(map.starts_with("# gadget map v1"));
    assert!(map.contains("budget 12"));
    assert!(map.contains("coord 1 2 "));
}

#[test]
fn bench_rejects_unknown_suite() {
    let out = run(&["bench", "unknown-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_small_run_passes() {
    let out = run(&["bench", "pipeline-vs-oracle", "--count", "5", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("pipeline-vs-oracle #0: pass"));
    assert!(text.contains("suite pipeline-vs-oracle: 5/5 passed"));
}
