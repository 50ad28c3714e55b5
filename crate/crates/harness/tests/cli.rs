use daride_harness::format::{read_instance, read_schedule};
use std::path::Path;
use std::process::{Command, Output};

fn daride(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_daride")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_validate_star() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("star.txt");
    let sched = dir.path().join("star.sched");
    assert!(daride(&["gen", "--kind", "star-gap", "--q", "8", "--out", s(&inst)]).status.success());
    let out = daride(&["solve", "--algo", "uncap", "--in", s(&inst), "--out", s(&sched)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("makespan\t4\n"));
    let out = daride(&["validate", "--in", s(&inst), "--schedule", s(&sched)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&sched).unwrap();
    let parsed = read_instance(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(read_schedule(&text, parsed.q()).unwrap().num_rounds(), 2);
}

#[test]
fn gen_is_deterministic_on_stdout() {
    let a = daride(&["gen", "--kind", "random-metric", "--n", "6", "--seed", "1"]);
    let b = daride(&["gen", "--kind", "random-metric", "--n", "6", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("DARIDE 1\nn 6\nmode metric\n"));
}

#[test]
fn infeasible_schedule_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    let sched = dir.path().join("bad.sched");
    assert!(daride(&["gen", "--n", "4", "--m", "2", "--q", "1", "--k", "1", "--out", s(&inst)]).status.success());
    std::fs::write(&sched, "SCHED 1\nrounds 1\nv0:\n").unwrap();
    let out = daride(&["validate", "--in", s(&inst), "--schedule", s(&sched)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NotDelivered"));
}

#[test]
fn oracle_size_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.txt");
    assert!(daride(&["gen", "--n", "8", "--m", "2", "--out", s(&inst)]).status.success());
    assert_eq!(daride(&["oracle", "--in", s(&inst)]).status.code(), Some(3));
}

#[test]
fn oracle_witness_validates() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("tiny.txt");
    let wit = dir.path().join("tiny.sched");
    assert!(daride(&["gen", "--n", "5", "--m", "3", "--q", "2", "--k", "2", "--seed", "9", "--out", s(&inst)]).status.success());
    let out = daride(&["oracle", "--in", s(&inst), "--out", s(&wit)]);
    assert_eq!(out.status.code(), Some(0));
    let opt = String::from_utf8_lossy(&out.stdout).lines().next().unwrap().to_string();
    let out = daride(&["validate", "--in", s(&inst), "--schedule", s(&wit)]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains(&opt.replace("optimum", "makespan")), "{stdout} vs {opt}");
}

#[test]
fn bench_table_is_sorted_and_reproducible() {
    let args = ["bench", "--count", "3", "--n", "5", "--m", "2", "--q", "2", "--k", "2", "--oracle", "--no-timing", "--algos", "weighted,cap,uncap"];
    let a = daride(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, daride(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "id\talgorithm\tmakespan\tlb_max\tratio\toracle");
    assert_eq!(lines.len(), 1 + 3 * 3);
    assert!(lines[1].starts_with("gen00000\tuncap\t"));
}

#[test]
fn solve_rejects_unsupported_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m.txt");
    let out_path = dir.path().join("o.sched");
    assert!(daride(&["gen", "--n", "5", "--m", "2", "--out", s(&inst)]).status.success());
    let out = daride(&["solve", "--algo", "uncap-mf", "--in", s(&inst), "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lb_prints_every_field() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("p.txt");
    assert!(daride(&["gen", "--kind", "girth-gap", "--cage", "petersen", "--out", s(&inst)]).status.success());
    let out = daride(&["lb", "--in", s(&inst)]);
    let text = String::from_utf8(out.stdout).unwrap();
    for f in ["flow", "nsl", "max_pair", "max_src", "max_dst"] {
        assert!(text.contains(&format!("{f}\t")));
    }
    assert!(text.contains("combined\t1\n"));
}
