//! End-to-end runs of the command-line front end through its library entry
//! point: file loading, exit codes, text and JSON output shapes.

use std::io::Write as _;
use std::path::PathBuf;

use serde_json::Value;
use tempfile::TempDir;

use traversync::cli::{run, EXIT_ERROR, EXIT_NO, EXIT_YES};

const FUNNEL: &str = r#"{
  "states": ["p", "q", "r"],
  "alphabet": ["a", "b", "c", "d"],
  "transitions": {
    "p": {"a": "q", "b": "p", "c": "p", "d": "r"},
    "q": {"a": "p", "b": "q", "c": "r", "d": "q"},
    "r": {"a": "r", "b": "r", "c": "r", "d": "r"}
  }
}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path = self.dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("traversync")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_prints_the_shortest_witness() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "check",
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
    ]);
    assert_eq!(code, EXIT_YES);
    assert_eq!(out, "yes\nd c\n");
}

#[test]
fn witness_is_an_alias_of_check() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let args = [
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        dfa.as_str(),
        "--pairs",
        r#"[["p","q"]]"#,
    ];
    let checked = invoke(&[&["check"], &args[..]].concat());
    let aliased = invoke(&[&["witness"], &args[..]].concat());
    assert_eq!(checked, aliased);
}

#[test]
fn json_reports_carry_verdict_witness_and_stats() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "check",
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--json",
    ]);
    assert_eq!(code, EXIT_YES);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["verdict"], "yes");
    assert_eq!(report["witness"], serde_json::json!(["d", "c"]));
    assert!(report["stats"]["explored"].as_u64().unwrap() > 0);
}

#[test]
fn unsatisfiable_formulas_exit_with_no() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "check",
        "--problem",
        "mc-paths",
        "--formula",
        "G false",
        "--dfa",
        &dfa,
    ]);
    assert_eq!(code, EXIT_NO);
    assert_eq!(out, "no\n");
}

#[test]
fn a_tiny_node_cap_reports_the_resource_limit() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "check",
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--cap",
        "1",
    ]);
    assert_eq!(code, traversync::cli::EXIT_LIMIT);
    assert_eq!(out, "limit\n");
}

#[test]
fn relations_tabulates_the_figure_rows() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "relations",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--word",
        "d c",
        "--variant",
        "vacuous",
    ]);
    assert_eq!(code, EXIT_YES);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("word"));
    let marks: Vec<&str> = lines[1].split_whitespace().collect();
    assert_eq!(marks, ["d", "c", "+", "+", "-", "+", "+"]);
}

#[test]
fn relations_reads_the_literal_variant_by_default() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (_, out, _) = invoke(&[
        "relations",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--word",
        "d c",
    ]);
    let marks: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(marks, ["d", "c", "+", "+", "-", "-", "+"]);
}

#[test]
fn relations_enumerates_words_up_to_the_bound() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "relations",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--max-len",
        "1",
    ]);
    assert_eq!(code, EXIT_YES);
    // Header, the empty word, then one row per letter.
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("eps"));
}

#[test]
fn cnf_bundles_solve_to_the_first_branch_assignment() {
    let ws = Workspace::new();
    let cnf = ws.file("eq.cnf", "p cnf 2 2\n-1 2 0\n1 -2 0\n");
    let bundle = ws.path("eq-bundle.json");
    let (code, _, _) = invoke(&["reduce", "cnf", "--in", &cnf, "--out", &bundle]);
    assert_eq!(code, EXIT_YES);
    let (code, out, _) = invoke(&["solve-traversal", "fvt", "--in", &bundle]);
    assert_eq!(code, EXIT_YES);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "yes");
    assert_eq!(lines[2], "x1=0 x2=0");
}

#[test]
fn careful_bundles_check_back_through_the_engine() {
    let ws = Workspace::new();
    let source = ws.file(
        "merge.json",
        r#"{
  "states": ["1", "2"],
  "alphabet": ["a"],
  "partial": true,
  "transitions": {"1": {"a": "2"}, "2": {"a": "2"}}
}"#,
    );
    let bundle = ws.path("orz.json");
    let (code, _, _) = invoke(&[
        "reduce", "careful", "--variant", "orz", "--in", &source, "--out", &bundle,
    ]);
    assert_eq!(code, EXIT_YES);
    let (code, out, _) = invoke(&["check", "--in", &bundle]);
    assert_eq!(code, EXIT_YES);
    assert_eq!(out, "yes\na\n");
}

#[test]
fn reduce_without_an_output_file_prints_the_bundle() {
    let ws = Workspace::new();
    let cnf = ws.file("one.cnf", "p cnf 1 1\n1 0\n");
    let (code, out, _) = invoke(&["reduce", "cnf", "--in", &cnf]);
    assert_eq!(code, EXIT_YES);
    let bundle: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(bundle["problem"], "fvt");
    assert!(bundle["digraph"]["vertices"].is_array());
}

#[test]
fn bare_digraph_files_are_accepted() {
    let ws = Workspace::new();
    let digraph = ws.file(
        "triangle.json",
        r#"{
  "vertices": ["u", "v", "w"],
  "edges": [["u", "v"], ["v", "w"], ["w", "u"]],
  "pairs": [["u", "w"]]
}"#,
    );
    let (code, out, _) = invoke(&["solve-traversal", "lvt", "--in", &digraph, "--json"]);
    assert_eq!(code, EXIT_YES);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["verdict"], "yes");
    assert!(report.get("assignment").is_none());
}

#[test]
fn oracle_confirms_the_engine_on_a_fixture() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, out, _) = invoke(&[
        "oracle",
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
    ]);
    assert_eq!(code, EXIT_YES);
    assert!(out.ends_with("oracle: agree\n"));
}

#[test]
fn oracle_corpus_mode_summarizes_agreement() {
    let (code, out, _) = invoke(&["oracle", "--random", "20", "--seed", "3"]);
    assert_eq!(code, EXIT_YES);
    assert!(out.starts_with("checked 20 instances:"));
    assert!(out.contains("0 failures"));
}

#[test]
fn conflicting_sync_flags_are_rejected() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, _, err) = invoke(&[
        "check",
        "--problem",
        "cs",
        "--relation",
        "lt-ll-sets",
        "--dfa",
        &dfa,
        "--pairs",
        r#"[["p","q"]]"#,
        "--sync",
        "--no-sync",
    ]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("--sync"));
}

#[test]
fn unknown_problem_ids_are_rejected() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    let (code, _, err) = invoke(&["check", "--problem", "nonsense", "--dfa", &dfa]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("unknown problem id"));
}

#[test]
fn malformed_input_files_are_reported_with_their_path() {
    let ws = Workspace::new();
    let broken = ws.file("broken.json", "{ not json");
    let (code, _, err) = invoke(&["check", "--in", &broken]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.starts_with("error:"));

    let missing = PathBuf::from(ws.path("absent.json"));
    let (code, _, err) = invoke(&["check", "--in", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("absent.json"));
}

#[test]
fn subset_flag_restricts_the_start_states() {
    let ws = Workspace::new();
    let dfa = ws.file("funnel.json", FUNNEL);
    // From q alone the first letter c already reaches the absorbing state.
    let (code, out, _) = invoke(&[
        "check",
        "--problem",
        "mc-paths-sync",
        "--formula",
        "F r",
        "--dfa",
        &dfa,
        "--subset",
        "q",
    ]);
    assert_eq!(code, EXIT_YES);
    assert_eq!(out, "yes\nc\n");
}
