use std::fs;
use std::process::{Command, Output};

fn hrgpsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrgpsr")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("hrgpsr-cli-{}-{name}", std::process::id()));
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn cfa_reports_states_and_conflicts() {
    let o = hrgpsr(&["cfa", "sierpinski"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("# 8 states"), "{s}");
    assert!(s.contains("# 2 conflict states"));
    assert!(s.contains("conflict q3 (5 params)"));
    assert!(stdout(&hrgpsr(&["cfa", "sp", "--dot"])).starts_with("digraph"));
}

#[test]
fn parse_worked_example() {
    let g = temp_file("worked_example", "t(1,2,3) t(2,4,5) t(3,6,7) t(4,8,9) t(5,9,10) t(6,10,11) t(7,11,12)\n");
    let plain = stdout(&hrgpsr(&["parse", "sierpinski", &g]));
    assert!(plain.starts_with("accepted steps=24"), "{plain}");
    let memo = hrgpsr(&["parse", "sierpinski", &g, "--memo", "--trace", "--dump-memo"]);
    let memo = stdout(&memo);
    assert!(memo.contains("memo D(3,10,12) <- {2,5,6}"));
    assert!(memo.lines().any(|l| l.trim() == "accept"));
    assert!(memo.lines().last().unwrap().starts_with("accepted steps=18"));
    let cyk = stdout(&hrgpsr(&["parse", "sierpinski", &g, "--engine", "cyk"]));
    assert!(cyk.starts_with("accepted"));
}

#[test]
fn rejection_sets_exit_status() {
    let g = temp_file("two", "t(1,2,3) t(2,4,5)\n");
    let o = hrgpsr(&["parse", "sierpinski", &g, "--strategy", "bfs"]);
    assert!(!o.status.success());
    assert!(stdout(&o).starts_with("rejected"));
}

#[test]
fn grammar_files_are_accepted() {
    let grammar = temp_file("toy.hrg", hrgpsr::bundled::SIERPINSKI);
    let o = hrgpsr(&["gen", "--grammar", "sierpinski", "--n", "4"]);
    let g = temp_file("t4", &stdout(&o));
    assert!(hrgpsr(&["parse", &grammar, &g, "--strategy", "prio"]).status.success());
    assert!(!hrgpsr(&["parse", "/nonexistent.hrg", &g]).status.success());
}

#[test]
fn bench_writes_csv() {
    let out = std::env::temp_dir().join(format!("hrgpsr-cli-{}-bench.csv", std::process::id()));
    let o = hrgpsr(&[
        "bench", "--grammar", "flowchart", "--n", "0..4/2", "--engines", "gpsr-dfs,cyk", "--reps", "1",
        "--no-timings", "--csv", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "parser,grammar,n,status,elapsed_ms,steps,memo_pairs,created");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("gpsr-dfs,flowchart,0,accepted,,"));
}
