//! Exit codes and diagnostics of the `evtree` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn evtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evtree")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn marginal_matches_combine() {
    let via_tree = evtree(&["marginal", &fixture("two_node.ev"), "x"]);
    let direct = evtree(&["combine", &fixture("e1e2.ev"), "E1", "E2", "--strategy", "brute"]);
    assert!(via_tree.status.success());
    assert_eq!(via_tree.stdout, direct.stdout);
}

#[test]
fn invalid_markov_tree_exits_2() {
    let o = evtree(&["marginal", &fixture("bad_markov.ev"), "x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("running intersection violated: x2"), "{}", stderr(&o));
}

#[test]
fn uncovered_target_exits_2() {
    let o = evtree(&["marginal", &fixture("chain.ev"), "x", "z"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no covering node"));
    let o = evtree(&["marginal", &fixture("e1e2.ev"), "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unnormalized_pl_exits_3() {
    let o = evtree(&["measure", &fixture("e1e2.ev"), "U", "pl", "{a}", "--strategy", "partition"]);
    assert_eq!(o.status.code(), Some(3));
    let o = evtree(&["measure", &fixture("e1e2.ev"), "U", "pl", "{a}", "--strategy", "brute"]);
    assert!(o.status.success());
}

#[test]
fn total_conflict_exits_3_only_when_normalizing() {
    let plain = evtree(&["combine", &fixture("e1e2.ev"), "A", "B"]);
    assert!(plain.status.success());
    assert!(String::from_utf8_lossy(&plain.stdout).ends_with("conflict 1.000000000\n"));
    let o = evtree(&["combine", &fixture("e1e2.ev"), "A", "B", "--normalize"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("total conflict"));
}

#[test]
fn input_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("evtree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.ev");
    std::fs::write(&bad, "frame x: a b c\nbody E over x:\n  {a q} 0.5\n  {b} 0.5\n").unwrap();
    let o = evtree(&["measure", bad.to_str().unwrap(), "E", "q", "{a}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3: unknown label q"), "{}", stderr(&o));

    let o = evtree(&["measure", "/nonexistent/file.ev", "E", "q", "{a}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = evtree(&["measure", &fixture("e1e2.ev"), "E1", "q", "{z}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = evtree(&["measure", &fixture("e1e2.ev"), "nope", "q", "{a}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = evtree(&["combine", &fixture("e1e2.ev"), "E1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = evtree(&["bench", "--omega", "5"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn auto_combination_on_complete_bodies() {
    let dir = std::env::temp_dir().join(format!("evtree-auto-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let labels = ["a", "b", "c", "d", "e"];
    let mut text = format!("frame w: {}\nbody C over w:\n", labels.join(" "));
    for mask in 1u32..32 {
        let set: Vec<&str> = (0..5).filter(|i| mask & (1 << i) != 0).map(|i| labels[i]).collect();
        text.push_str(&format!("  {{{}}} {}\n", set.join(" "), 1.0 / 31.0));
    }
    let path = dir.join("complete.ev");
    std::fs::write(&path, text).unwrap();
    let o = evtree(&["combine", path.to_str().unwrap(), "C", "C", "--count"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    let total: u64 = out
        .lines()
        .find_map(|l| l.strip_prefix("total  "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(total <= 496, "{out}");
    assert!(!out.contains("strategy  brute"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_exits_0() {
    assert!(evtree(&["--help"]).status.success());
    assert!(evtree(&["bench", "--help"]).status.success());
}
