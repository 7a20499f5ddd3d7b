use std::fs;
use std::process::{Command, Output};

fn adasub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adasub"))
        .args(args)
        .env_remove("ADASUB_NODE_LIMIT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The data row of a single-row report, split into fields.
fn row(o: &Output) -> Vec<String> {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let fields: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    assert_eq!(header.len(), fields.len());
    fields
}

#[test]
fn certify_single_edge_passes() {
    let o = adasub(&[
        "certify",
        "--instance",
        "graph_cut_edge.toy",
        "--policy",
        "arg",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = row(&o);
    assert_eq!(r[0], "graph_cut_edge");
    assert_eq!(r[8], "1", "achieved_ratio");
    assert_eq!(r[9], "true", "pass");
}

#[test]
fn bound_at_half() {
    let o = adasub(&["bound", "--m", "0.5", "--constraint", "cardinality"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0.5");
}

#[test]
fn monte_carlo_matches_exact_on_edge() {
    let o = adasub(&[
        "evaluate",
        "--instance",
        "graph_cut_edge",
        "--policy",
        "sad",
        "--samples",
        "100000",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = row(&o);
    let value: f64 = r[6].parse().unwrap();
    let se: f64 = r[12].parse().unwrap();
    assert_eq!(r[10], "monte-carlo");
    assert!((value - 0.8).abs() <= 4.0 * se, "{value} ± {se}");
}

#[test]
fn instance_file_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.toy");
    fs::write(
        &path,
        "[items]\na 1\n[states]\n0 1\n[prior]\nindependent\na 0:0.5 1:0.5\n[utility]\nstochastic-modular active=1 weights=a:2\n[constraint]\ncardinality 1\n",
    )
    .unwrap();
    let o = adasub(&[
        "evaluate",
        "--instance",
        path.to_str().unwrap(),
        "--policy",
        "greedy",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = row(&o);
    assert_eq!(r[0], "one");
    assert_eq!(r[6], "1");
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toy");
    fs::write(
        &path,
        "[items]\na 1\n[states]\n0 1\n[prior]\nindependent\na 0:0.5 1:0.4\n[utility]\nzero\n[constraint]\ncardinality 1\n",
    )
    .unwrap();
    let o = adasub(&["opt", "--instance", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error kind=validation"), "{err}");
    assert!(err.contains('a'));
    assert!(o.stdout.is_empty());

    assert_eq!(adasub(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        adasub(&["ratio", "--instance", "missing_instance"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn guard_exceeded_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_adasub"))
        .args(["evaluate", "--instance", "modular_4", "--policy", "arg"])
        .env("ADASUB_NODE_LIMIT", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .starts_with("error kind=too-large"));
    let o = adasub(&["ratio", "--instance", "modular_4", "--max-items", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn failed_certification_exits_one() {
    // a tolerance this negative demands strictly more than the bound allows
    let o = adasub(&[
        "certify",
        "--instance",
        "graph_cut_edge",
        "--policy",
        "arg",
        "--tolerance=-1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(row(&o)[9], "false");
}

#[test]
fn check_reports_witness() {
    let o = adasub(&["check", "--instance", "graph_cut_edge"]);
    let text = stdout(&o);
    assert!(text.contains("adaptive-submodular,true,"));
    assert!(text.contains("adaptive-monotone,false,Δ(b|{a:0}) = -1 < 0"));
}

#[test]
fn run_ends_with_stop_row() {
    let o = adasub(&[
        "run",
        "--instance",
        "knapsack_cut",
        "--policy",
        "dg",
        "--sample-set",
        "a,c",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.contains(",stop,"), "{last}");
    for line in text.lines().skip(1) {
        assert!(!line.contains(",b,") && !line.contains(",d,"), "{line}");
    }
    assert_eq!(
        adasub(&["run", "--instance", "knapsack_cut", "--policy", "dg"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = adasub(&["bench", "--seed", "42", "--output", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\r\n"));
    assert!(!text.contains(",false,"));
    assert_eq!(text.lines().count(), 1 + 3 * 11);
}
