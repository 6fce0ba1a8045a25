use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::{NamedTempFile, TempDir};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathweave")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn fixture() -> String {
    data("fixture1.tsv").to_str().unwrap().to_string()
}

#[test]
fn eval_prints_nonzero_entries() {
    let o = run(&["eval", "--graph", &fixture(), "--expr", "A[authored] . A[authored]' & not(I)"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "h1\th2\t1\nh2\th1\t1\n");
}

#[test]
fn eval_json() {
    let o = run(&["eval", "--graph", &fixture(), "--expr", "A[cites]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 7);
    assert_eq!(v["nnz"], 1);
    assert_eq!(v["entries"][0], serde_json::json!(["a1", "a3", 1]));
}

#[test]
fn simplify_flag_keeps_result() {
    let expr = "A[authored] . A[cites] . A[authored]' & not(clip(A[authored] . A[authored]' & not(I))) & not(I)";
    let plain = run(&["eval", "--graph", &fixture(), "--expr", expr]);
    let simplified = run(&["eval", "--graph", &fixture(), "--expr", expr, "--simplify"]);
    assert!(plain.status.success() && simplified.status.success());
    assert_eq!(stdout(&plain), stdout(&simplified));
    assert!(stderr(&simplified).contains("clip-split"));
}

#[test]
fn simplify_prints_expression() {
    let o = run(&["simplify", "--graph", &fixture(), "--expr", "A[cites] & A[cites] + ZERO"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "A[cites]");
    assert!(stderr(&o).contains("| add-zero: A + 0 = A"));
}

#[test]
fn expression_from_file_and_default_slice() {
    let expr = file("A[contains]'\n");
    let o = run(&["eval", "--graph", &fixture(), "--expr-file", expr.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "a1\tj1\t1\na3\tj1\t1\n");
    let g = file("x\tknows\ty\ny\tknows\tz\n");
    let o = run(&["eval", "--graph", g.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "x\ty\t1\ny\tz\t1\n");
    let o = run(&["eval", "--graph", &fixture()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["eval", "--graph", "/nonexistent/graph.tsv", "--expr", "A[x]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["eval", "--graph", &fixture(), "--expr", "A[cites] . "]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("--expr:1:12:"), "{err}");
    assert!(err.contains('^'));
    let bad = file("a\tb\n");
    let o = run(&["eval", "--graph", bad.path().to_str().unwrap(), "--expr", "A[b]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["eval", "--graph", &fixture(), "--expr", "A[nope]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cites"));
}

#[test]
fn domain_errors_exit_one() {
    let o = run(&["eval", "--graph", &fixture(), "--expr", "not(A[authored] . A[authored]')"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("clip"));
    let o = run(&["pagerank", "--graph", &fixture(), "--expr", "A[cites]", "--delta", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn signature_violations_warn() {
    let sigs = data("signatures.tsv");
    let o = run(&[
        "eval",
        "--graph",
        &fixture(),
        "--signatures",
        sigs.to_str().unwrap(),
        "--expr",
        "A[authored] . A[authored]",
    ]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    let o = run(&["eval", "--graph", &fixture(), "--signatures", sigs.to_str().unwrap(), "--expr", "A[authored] . A[cites]"]);
    assert!(stderr(&o).is_empty(), "{}", stderr(&o));
}

#[test]
fn pagerank_on_cycle_is_uniform() {
    let g = file("a\tnext\tb\nb\tnext\tc\nc\tnext\ta\n");
    let o = run(&["pagerank", "--graph", g.path().to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for name in ["a", "b", "c"] {
        assert!((v["vertices"][name].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }
}

#[test]
fn geodesic_report() {
    let o = run(&["geodesic", "--graph", &fixture(), "--expr", "A[cites]"]);
    let out = stdout(&o);
    assert!(out.starts_with("vertex\teccentricity\tcloseness\treach\n"), "{out}");
    assert!(out.contains("a1\tNA\t1\t1\n"));
    assert!(out.ends_with("tail\thead\tdistance\na1\ta3\t1\n"));
}

#[test]
fn spread_from_seed() {
    let o = run(&["spread", "--graph", &fixture(), "--expr", "A[authored] . A[authored]'", "--seed", "h1"]);
    let out = stdout(&o);
    assert!(out.contains("h1\t2.74074074074\n"), "{out}");
    assert!(out.contains("h2\t1.25925925926\n"));
    let o = run(&["spread", "--graph", &fixture(), "--expr", "A[cites]", "--seed", "ghost"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn categorical_assortativity() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.tsv");
    let props = dir.path().join("p.tsv");
    std::fs::write(&graph, "a\tlink\tb\nb\tlink\ta\nc\tlink\td\nd\tlink\tc\n").unwrap();
    std::fs::write(&props, "a\tx\nb\tx\nc\ty\nd\ty\n").unwrap();
    let o = run(&[
        "assort",
        "--graph",
        graph.to_str().unwrap(),
        "--property",
        props.to_str().unwrap(),
        "--kind",
        "categorical",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "scalar\tvalue\nr\t1\n");
    std::fs::write(&props, "a\t1\nb\t1\nc\t1\nd\t1\n").unwrap();
    let o = run(&["assort", "--graph", graph.to_str().unwrap(), "--property", props.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn load_check_lists_labels() {
    let sigs = data("signatures.tsv");
    let o = run(&["load-check", "--graph", &fixture(), "--signatures", sigs.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.starts_with("vertices\t7\nlabels\t5\nedges\t8\n"));
    assert!(out.contains("developed\t0\tH -> P\n"));
}

#[test]
fn thread_count_does_not_change_output() {
    let expr = "0.5 * (A[authored] . A[authored]') + A[authored] . A[cites] . A[authored]'";
    let outs: Vec<String> = ["1", "4"]
        .iter()
        .map(|k| {
            let o = Command::new(env!("CARGO_BIN_EXE_pathweave"))
                .env("PATHWEAVE_THREADS", k)
                .args(["eval", "--graph", &fixture(), "--expr", expr])
                .output()
                .unwrap();
            stdout(&o)
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert!(!outs[0].is_empty());
}
