use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    root().join("data").join(format!("{name}.dkb")).display().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("defeasor-cli-{}-{name}.dkb", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defeasor"))
        .args(args)
        .env_remove("DEFEASOR_NODE_BUDGET")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

/// Runs with `--json`, checks the output against the named schema and returns it.
fn json(schema: &str, args: &[&str]) -> (i32, Value) {
    let mut args = args.to_vec();
    args.push("--json");
    let out = run(&args);
    let value: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    let path = root().join("docs/schema").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{value:#}");
    (out.status.code().unwrap(), value)
}

#[test]
fn rank_reports_student_ranks() {
    let (status, v) = json("rank", &["rank", &data("student")]);
    assert_eq!(status, 0);
    assert_eq!(v["ranks"]["Student"], 0);
    assert_eq!(v["ranks"]["WStudent"], 1);
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    assert_eq!(v["levels"][1], serde_json::json!(["WStudent ~> Pay_Taxes"]));
}

#[test]
fn rank_of_empty_kb() {
    let (status, v) = json("rank", &["rank", &scratch("empty", "# nothing here\n")]);
    assert_eq!(status, 0);
    assert_eq!(v["levels"], serde_json::json!([[]]));
}

#[test]
fn rank_errors() {
    assert_eq!(code(&["rank", &scratch("typicality", "A ~> T(B)\n")]), 2);
    assert_eq!(code(&["rank", &scratch("inconsistent", "A => Bot\nA(x)\n")]), 3);
    assert_eq!(code(&["rank", "/nonexistent/kb.dkb"]), 2);
}

#[test]
fn rank_warns_on_infinite_antecedent() {
    let out = run(&["rank", &scratch("infinite", "A ~> B\nA ~> !B\n")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infinite rank"));
}

#[test]
fn query_exit_codes() {
    assert_eq!(code(&["query", &data("student"), "--mode", "sk", "WStudent ~> Smart"]), 0);
    assert_eq!(code(&["query", &data("weak"), "--mode", "sk", "Student & Employee ~> Young"]), 1);
    assert_eq!(code(&["query", &data("weak"), "--mode", "lex", "Student & Employee ~> Young"]), 0);
    assert_eq!(code(&["query", &data("student"), "--mode", "rc", "Bot ~> A"]), 0);
    assert_eq!(code(&["query", &data("student"), "--mode", "rc", "WStudent ~> Smart"]), 1);
    assert_eq!(code(&["query", &data("student"), "--mode", "rc", "WStudent => Student"]), 0);
    assert_eq!(code(&["query", &data("student"), "--mode", "rc", "A & ~> B"]), 2);
}

#[test]
fn query_json_carries_bases_and_stats() {
    let (status, v) = json("query", &["query", &data("student"), "--mode", "sk", "WStudent ~> Smart", "--stats"]);
    assert_eq!(status, 0);
    assert_eq!(v["answer"], true);
    assert_eq!(v["skeptical"]["cutoff"], 0);
    assert!(v["skeptical"]["base"].as_array().unwrap().contains(&Value::from("Student ~> Smart")));

    let (status, v) =
        json("query", &["query", &data("ssn"), "--mode", "mp", "Student & Employee ~> some hasSSN. Top"]);
    assert_eq!(status, 0);
    assert_eq!(v["bases"].as_array().unwrap().len(), 2);

    let (_, v) = json("query", &["query", &data("student"), "--mode", "rc", "WStudent ~> Smart"]);
    assert_eq!((v["rank"].clone(), v["counter_rank"].clone()), (Value::from(1), Value::from(1)));

    let (_, v) = json("query", &["query", &data("student"), "--mode", "lex", "Bot ~> A"]);
    assert_eq!(v["rank"], "inf");
}

#[test]
fn sk_stats_stay_within_twice_the_defaults() {
    for (kb, query, defaults) in [
        ("student", "WStudent ~> Smart", 3),
        ("employed_student", "Student & Employee ~> Young", 4),
        ("penguins", "BabyPenguin ~> NiceFeather", 5),
        ("weak", "Student & Employee ~> Young", 3),
        ("ssn_smart", "Student & Employee ~> Smart", 5),
    ] {
        let (_, v) = json("query", &["query", &data(kb), "--mode", "sk", query, "--stats"]);
        let checks = v["stats"]["entailment_checks"].as_u64().unwrap();
        assert!(checks <= 2 * defaults, "{kb}: {checks}");
        assert_eq!(v["stats"]["entailment_checks"], v["skeptical"]["call_count"]);
    }
}

#[test]
fn bases_counts() {
    let (status, v) = json("bases", &["bases", &data("ssn"), "--concept", "Student & Employee", "--order", "mp"]);
    assert_eq!(status, 0);
    assert_eq!(v["bases"].as_array().unwrap().len(), 2);

    let (_, v) = json("bases", &["bases", &data("ssn_smart"), "--concept", "Student & Employee", "--order", "lex"]);
    assert_eq!(v["bases"].as_array().unwrap().len(), 1);

    let kb = scratch("conflict_free", "A ~> B\nC ~> D\n");
    let (_, v) = json("bases", &["bases", &kb, "--concept", "Top", "--order", "mp"]);
    assert_eq!(v["bases"], serde_json::json!([{ "strata": [["A ~> B", "C ~> D"]] }]));
}

#[test]
fn bases_errors() {
    assert_eq!(code(&["bases", &data("student"), "--concept", "WStudent & !Student", "--order", "mp"]), 5);
    assert_eq!(code(&["bases", &data("student"), "--concept", "T(A)", "--order", "mp"]), 2);
}

#[test]
fn oracle_checks() {
    let (status, v) = json("oracle", &["oracle", &data("student"), "--check", "rc-vs-models"]);
    assert_eq!((status, v["verdict"].as_str()), (0, Some("agree")));
    let (status, _) = json("oracle", &["oracle", &data("employed_student"), "--check", "sk-vs-disk"]);
    assert_eq!(status, 0);
    let (status, _) = json("oracle", &["oracle", &data("ssn_atomized"), "--check", "mp-vs-bp"]);
    assert_eq!(status, 0);
    let (status, _) = json("oracle", &["oracle", &data("penguins"), "--check", "exceptional"]);
    assert_eq!(status, 0);
    let (status, v) = json("oracle", &["oracle", &data("ssn"), "--check", "rc-vs-models"]);
    assert_eq!((status, v["verdict"].as_str()), (7, Some("unknown")));
}

#[test]
fn oracle_bounds_flags() {
    // five atoms do not fit in four
    let (status, v) =
        json("oracle", &["oracle", &data("penguins"), "--check", "rc-vs-models", "--max-atoms", "4"]);
    assert_eq!(status, 7);
    assert_eq!(v["bounds"]["max_atoms"], 4);
    assert_eq!(code(&["oracle", &data("student"), "--check", "mp-vs-bp", "--max-rank", "0"]), 2);
    assert_eq!(code(&["oracle", &data("student"), "--check", "mp-vs-bp", "--max-domain", "4"]), 7);
}

#[test]
fn node_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_defeasor"))
        .args(["query", &data("penguins"), "--mode", "sk", "BabyPenguin ~> NiceFeather"])
        .env("DEFEASOR_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert_eq!(code(&["--node-budget", "1000000", "query", &data("penguins"), "--mode", "sk", "BabyPenguin ~> NiceFeather"]), 0);
}

#[test]
fn text_output() {
    let out = run(&["bases", &data("ssn"), "--concept", "Student & Employee", "--order", "mp"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("2 mp bases for Employee & Student (rank 1)"), "{text}");
    let out = run(&["query", &data("student"), "--mode", "sk", "WStudent ~> Smart"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("WStudent ~> Smart: entailed (sk)"));
}
