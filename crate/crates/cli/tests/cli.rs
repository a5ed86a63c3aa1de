use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsplit"))
        .args(args)
        .env_remove("FSPLIT_WORKERS")
        .env_remove("FSPLIT_RANK_CEILING")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(schema_name: &str, value: &Value) {
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_name}: {msgs:?}");
}

#[test]
fn enum_lists_28_partitions() {
    let out = fsplit(&["enum", "--rank", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["count"], 28);
    assert_valid("enum_output.schema.json", &v);
    for p in v["partitions"].as_array().unwrap() {
        assert_valid("partition.schema.json", p);
    }
    let thick = json_of(&fsplit(&["enum", "--rank", "3", "--thick-only"]));
    assert_eq!(thick["count"], 22);
}

#[test]
fn pair_verdicts() {
    let out = fsplit(&["pair", "--rank", "3", "--p", "x2+,x3-", "--q", "x1-,x2+"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_valid("pair_output.schema.json", &v);
    assert_eq!(v["crosses"], true);
    assert_eq!(v["cagey"], true);
    assert_eq!(v["boundary"]["type"], "cage-3");
    assert_valid("graph_of_groups.schema.json", &v["boundary"]["graph"]);

    let compatible = json_of(&fsplit(&["pair", "--rank", "3", "--p", "x1-,x2+", "--q", "x2-,x3+"]));
    assert_valid("pair_output.schema.json", &compatible);
    assert_eq!(compatible["rose_compatible"], true);
    assert_eq!(compatible["boundary"], Value::Null);
}

#[test]
fn blowup_from_file_and_random() {
    let dir = std::env::temp_dir().join(format!("fsplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("family.json");
    std::fs::write(&file, r#"["x1-,x2+", "x2-,x3+", "x3"]"#).unwrap();
    let out = fsplit(&["blowup", "--rank", "3", "--family", file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_valid("blowup_output.schema.json", &v);
    assert_eq!(v["shape"]["rose_petals"], 3);

    let lines = dir.join("family.txt");
    std::fs::write(&lines, "# two petals\nx1\nx2\n").unwrap();
    let v = json_of(&fsplit(&["blowup", "--rank", "3", "--family", lines.to_str().unwrap()]));
    assert_eq!(v["shape"]["vertex_ranks"], serde_json::json!([1]));

    let a = fsplit(&["--seed", "11", "blowup", "--rank", "5", "--random"]);
    let b = fsplit(&["--seed", "11", "blowup", "--rank", "5", "--random"]);
    assert_eq!(a.stdout, b.stdout);
    assert_valid("blowup_output.schema.json", &json_of(&a));

    let dot = fsplit(&["--format", "dot", "blowup", "--rank", "3", "--family", file.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("graph G {"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_validate() {
    let out = fsplit(&["verify", "clique-rank-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_valid("verification_report.schema.json", &v);
    assert!(v.get("elapsed_ms").is_none());

    let timed = json_of(&fsplit(&["--timings", "verify", "three-rose", "--rank", "4"]));
    assert_valid("verification_report.schema.json", &timed);
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn whitehead_simple_output() {
    let v = json_of(&fsplit(&["whitehead", "simple", "--rank", "2", "--word", "x1x2X1X2"]));
    assert_valid("whitehead_output.schema.json", &v);
    assert_eq!(v["simple"], false);
    let v = json_of(&fsplit(&["whitehead", "simple", "--rank", "3", "--word", "x1x2"]));
    assert_eq!(v["simple"], true);
}

#[test]
fn kgraph_output() {
    let out = fsplit(&["kgraph", "--rank", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_valid("kgraph_output.schema.json", &v);
    assert!(!v["vertices"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(fsplit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fsplit(&["pair", "--rank", "3", "--p", "x1+", "--q", "y2-"]).status.code(), Some(2));
    assert_eq!(fsplit(&["whitehead", "simple", "--rank", "2", "--word", "x3"]).status.code(), Some(2));
    assert_eq!(fsplit(&["verify", "no-such-lemma"]).status.code(), Some(2));
    assert_eq!(fsplit(&["verify", "three-rose", "--rank", "5"]).status.code(), Some(2));
    assert_eq!(fsplit(&["--format", "xml", "enum", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(fsplit(&["--workers", "0", "enum", "--rank", "3"]).status.code(), Some(2));
    assert_eq!(fsplit(&["--rank-ceiling", "8", "enum", "--rank", "3"]).status.code(), Some(2));
}

#[test]
fn flags_override_environment() {
    let env_only = Command::new(env!("CARGO_BIN_EXE_fsplit"))
        .args(["enum", "--rank", "5"])
        .env("FSPLIT_RANK_CEILING", "4")
        .output()
        .unwrap();
    assert_eq!(env_only.status.code(), Some(2));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_fsplit"))
        .args(["--rank-ceiling", "5", "enum", "--rank", "5"])
        .env("FSPLIT_RANK_CEILING", "4")
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
    let workers = Command::new(env!("CARGO_BIN_EXE_fsplit"))
        .args(["verify", "three-rose"])
        .env("FSPLIT_WORKERS", "3")
        .output()
        .unwrap();
    assert!(workers.status.success());
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["pair", "--rank", "4", "--p", "x1-,x2-", "--q", "x2+,x3+"];
    assert_eq!(fsplit(&args).stdout, fsplit(&args).stdout);
}
