//! End-to-end runs of the binary: exit codes, file outputs, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cutpoint::construction::{forward_pfa, ForwardOptions};
use cutpoint::pfa::Pfa;
use cutpoint::verify::classic_toy;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutpoint"))
}

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn build_then_eval_matches_the_in_process_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("toy.pfa.json");
    let report = dir.path().join("toy.report.json");
    let classic = instances().join("classic-pcp.json");

    let output = run(&[
        "build",
        "--variant",
        "forward7",
        "--input",
        classic.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("7-state"));
    let report_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report_json["alpha"], "1/100");
    assert_eq!(report_json["cutpoint"], "1/7");
    assert_eq!(report_json["normalization_constant"], "2/1");
    assert!(report_json["matrix_checksums"].is_object());
    assert_eq!(report_json["stages"].as_array().unwrap().len(), 5);

    let loaded = Pfa::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let direct = forward_pfa(&classic_toy(), &ForwardOptions::default())
        .unwrap()
        .pfa;
    assert_eq!(loaded, direct);

    let eval = run(&["eval", "--pfa", out.to_str().unwrap(), "--word", "1323"]);
    assert!(eval.status.success());
    let text = stdout(&eval);
    let expected = direct.value("1323").unwrap();
    assert!(text.contains(&format!("value = {expected}")));
    assert!(text.contains("accept"));

    let eval = run(&["eval", "--pfa", out.to_str().unwrap(), "--word", "12"]);
    assert!(eval.status.success());
    assert!(stdout(&eval).contains("reject"));

    // Unknown symbol in the word: invalid input, exit 2.
    let eval = run(&["eval", "--pfa", out.to_str().unwrap(), "--word", "9"]);
    assert_eq!(eval.status.code(), Some(2));
}

#[test]
fn backward_variant_rejects_empty_words_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"alphabet":["0","1"],"pairs":[{"top":"1","bottom":"101"},{"top":"","bottom":"0"}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let output = run(&[
        "build",
        "--variant",
        "backward6",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("nonempty"));
    assert!(!out.exists());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = dir.path().join("out.json");
    let output = run(&[
        "build",
        "--variant",
        "forward7",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn two_matrix_build_reports_18_states_for_the_structured_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("two.pfa.json");
    let output = run(&[
        "build",
        "--variant",
        "two-matrix",
        "--input",
        instances().join("structured-5pair.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(stdout(&output).contains("18-state"));
    let pfa = Pfa::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(pfa.automaton.dim(), 18);
    assert_eq!(pfa.automaton.alphabet(), ['a', 'b']);
}

#[test]
fn solve_finds_the_classic_solution() {
    let output = run(&[
        "solve",
        "--pcp",
        instances().join("classic-pcp.json").to_str().unwrap(),
        "--max-steps",
        "6",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("solution: [1, 3, 2, 3]"));
}

#[test]
fn solve_reports_closure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("closed.json");
    std::fs::write(
        &path,
        r#"{"alphabet":["a","b"],"pairs":[{"top":"a","bottom":"b"}]}"#,
    )
    .unwrap();
    let output = run(&["solve", "--pcp", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("closed"));
}

#[test]
fn solve_runs_the_rewriting_search_and_the_emptiness_search() {
    let output = run(&[
        "solve",
        "--semithue",
        instances().join("toy-semithue.json").to_str().unwrap(),
        "--depth",
        "4",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("derivation: ab -> ba"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("toy.pfa.json");
    let build = run(&[
        "build",
        "--variant",
        "forward7",
        "--input",
        instances().join("classic-pcp.json").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(build.status.success());
    let output = run(&[
        "solve",
        "--pfa",
        out.to_str().unwrap(),
        "--max-len",
        "4",
        "--exclude-empty",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("accepted word: 1323"));
}

#[test]
fn solve_requires_exactly_one_input() {
    let output = run(&["solve", "--max-steps", "5"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn check_passes_and_prints_one_line_per_invariant() {
    let output = run(&["check", "multiplicative", "--trials", "200"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("PASS multiplicative"));

    let output = run(&["check", "counterexample"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("[2, 1, 3]"));

    let output = run(&["check", "no-such-suite"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn check_all_emits_json_when_asked() {
    let output = run(&["check", "all", "--trials", "50", "--max-len", "4", "--json"]);
    assert!(output.status.success(), "{}", stderr(&output));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let outcomes = parsed.as_array().unwrap();
    assert_eq!(outcomes.len(), 8);
    assert!(outcomes.iter().all(|o| o["passed"].as_bool().unwrap()));
}

#[test]
fn convert_emits_the_whole_chain_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("chain");
    let problem = instances().join("toy-semithue.json");
    let args = [
        "convert",
        "--semithue",
        problem.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--emit-all",
    ];
    let output = run(&args);
    assert!(output.status.success(), "{}", stderr(&output));
    let gpcp = std::fs::read(out_dir.join("gpcp.json")).unwrap();
    let five = std::fs::read(out_dir.join("pcp5.json")).unwrap();
    let binary = std::fs::read(out_dir.join("pcp2.json")).unwrap();
    assert!(String::from_utf8_lossy(&gpcp).contains("\"kind\": \"gpcp\""));
    assert!(String::from_utf8_lossy(&five).contains("\"start_index\": 1"));

    // Second run produces byte-identical files.
    let rerun = run(&args);
    assert!(rerun.status.success());
    assert_eq!(std::fs::read(out_dir.join("gpcp.json")).unwrap(), gpcp);
    assert_eq!(std::fs::read(out_dir.join("pcp5.json")).unwrap(), five);
    assert_eq!(std::fs::read(out_dir.join("pcp2.json")).unwrap(), binary);

    // The emitted binary instance is solvable by the solver.
    let solve = run(&[
        "solve",
        "--pcp",
        out_dir.join("pcp2.json").to_str().unwrap(),
        "--max-steps",
        "20",
        "--max-overhang",
        "384",
    ]);
    assert!(solve.status.success());
    assert!(stdout(&solve).contains("solution: [1, "));
}

#[test]
fn convert_closed_direction_still_converts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("chain");
    let output = run(&[
        "convert",
        "--semithue",
        instances()
            .join("unreachable-semithue.json")
            .to_str()
            .unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let solve = run(&[
        "solve",
        "--pcp",
        out_dir.join("pcp2.json").to_str().unwrap(),
        "--max-steps",
        "24",
        "--max-overhang",
        "384",
    ]);
    assert!(solve.status.success());
    assert!(stdout(&solve).contains("closed"));
}

#[test]
fn counterexample_subcommand_verifies_the_witness() {
    let output = run(&["counterexample"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("witness [2, 1, 3]"));
    assert!(text.contains("verified: true"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{ "max_steps": 2 }"#).unwrap();
    // With max_steps 2 from the config, the classic instance is out of reach.
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "solve",
        "--pcp",
        instances().join("classic-pcp.json").to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("exhausted"));
    // The explicit flag wins over the config value.
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "solve",
        "--pcp",
        instances().join("classic-pcp.json").to_str().unwrap(),
        "--max-steps",
        "6",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("solution: [1, 3, 2, 3]"));
}
