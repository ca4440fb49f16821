use std::process::{Command, Output};

use treeconn::export::tree_from_dot;
use treeconn::tree::OrderedTree;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeconn")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enum_counts() {
    for (args, expect) in [
        (["enum", "embeddings", "chain2", "chain3", "--count"], "2"),
        (["enum", "rigid", "chain3", "chain2", "--count"], "3"),
        (["enum", "conn", "chain2", "chain3", "--count"], "4"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), expect, "{args:?}");
    }
}

#[test]
fn enum_trees_lists_in_order() {
    let o = run(&["enum", "trees", "3"]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["(()())", "((()))"]);
}

#[test]
fn bad_input_exits_three() {
    let o = run(&["enum", "conn", "(()", "chain3", "--count"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn budget_overrun_exits_two() {
    let o = run(&["--budget-hom", "3", "enum", "conn", "chain2", "chain3", "--count"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construct_writes_tree_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = run(&["construct", "doubling", "chain2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let tree: OrderedTree = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(tree.len(), 4);
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.table.json")).unwrap()).unwrap();
    assert_eq!(table["embeddings"].as_array().unwrap().len(), 2);
    assert_eq!(table["surj"], serde_json::json!([0, 1, 1, 1]));

    let o = run(&["construct", "plus-leaf", "chain2"]);
    assert_eq!(stdout(&o).lines().next(), Some("((()))"));
    let o = run(&["construct", "add-root", "empty"]);
    assert_eq!(stdout(&o).lines().next(), Some("()"));
}

#[test]
fn arrow_exit_codes() {
    let o = run(&["arrow", "--cat", "incinj", "chain2", "chain3", "chain6", "-r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&["arrow", "--cat", "incinj", "chain2", "chain3", "chain5", "-r", "2", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["verdict"], "fails");
    assert_eq!(v["coloring"].as_array().unwrap().len(), 10);
}

#[test]
fn verify_commands_pass() {
    let o = run(&["verify", "lower-bound", "chain2", "--witness", "self"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "no-ramsey", "chain2", "-x", "1", "--witness", "doubling"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn degree_at_doubling_of_two_chain() {
    let o = run(&["--format", "structured", "degree", "chain2", "((()()))", "((()()))", "-r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 2);
}

#[test]
fn export_reparses() {
    for t in ["()", "(()())", "((()(()))())"] {
        let o = run(&["export", "--dot", t]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(tree_from_dot(&stdout(&o)).unwrap(), OrderedTree::parse(t).unwrap());
    }
    let dot = stdout(&run(&["export", "--dot", "(()())"]));
    assert_eq!(dot.matches("[label=").count(), 3);
    assert_eq!(dot.matches("->").count(), 2);
    let dot = stdout(&run(&["export", "--dot", "--doubling", "chain2"]));
    assert!(dot.contains("\"1_1\"") && dot.contains("\"1_2\""));
    assert_eq!(tree_from_dot(&dot).unwrap(), OrderedTree::parse("((()()))").unwrap());
}

#[test]
fn canonical_runs_are_byte_identical() {
    let args = ["arrow", "--cat", "incinj", "chain2", "chain3", "chain5", "-r", "2", "--format", "structured"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let args = ["enum", "conn", "(()())", "((()()))"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "format = \"structured\"\n[budget]\nmax_hom = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["--config", c, "enum", "conn", "chain2", "chain3", "--count"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--config", c, "--budget-hom", "100", "enum", "conn", "chain2", "chain3", "--count"]);
    assert_eq!(o.status.code(), Some(0));
}
