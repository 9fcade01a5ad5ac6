#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cspace(args: &[&str]) -> Run {
    cspace_env(args, &[])
}

pub fn cspace_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cspace"));
    cmd.args(args).env_remove("CSPACE_MAX_POINTS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("cspace binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn formula_fixtures() -> PathBuf {
    repo_root().join("crates/core/tests/fixtures/formulas")
}

/// Errors from validating `instance` against `docs/schema/<name>.schema.json`.
pub fn schema_errors(name: &str, instance: &Value) -> Vec<String> {
    let path = repo_root().join(format!("docs/schema/{name}.schema.json"));
    let schema: Value = serde_json::from_str(&fs::read_to_string(&path).expect("schema file")).expect("schema JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator
        .iter_errors(instance)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect()
}

/// Whether every object in `v` lists its keys in sorted order.
pub fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(items) => items.iter().all(keys_sorted),
        _ => true,
    }
}

/// Checks the raw text too, since `serde_json` may sort keys on parse.
pub fn text_keys_sorted(text: &str) -> bool {
    let mut last_key: Vec<Option<String>> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'{' => last_key.push(None),
            b'}' => {
                last_key.pop();
            }
            b'"' => {
                let start = i + 1;
                i += 1;
                while bytes[i] != b'"' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
                let s = &text[start..i];
                let rest = text[i + 1..].trim_start();
                if rest.starts_with(':') {
                    if let Some(Some(prev)) = last_key.last() {
                        if prev.as_str() >= s {
                            return false;
                        }
                    }
                    if let Some(slot) = last_key.last_mut() {
                        *slot = Some(s.to_string());
                    }
                }
            }
            _ => {}
        }
        i += 1;
    }
    true
}

/// Byte-exact comparison with `tests/golden/<name>`; `UPDATE_GOLDEN=1`
/// rewrites the file instead.
pub fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "golden mismatch for {name}\n--- expected\n{expected}\n--- actual\n{actual}"
        ))
    }
}

pub struct Fixtures {
    pub dir: TempDir,
}

impl Fixtures {
    pub fn new() -> Self {
        let dir = TempDir::new().unwrap();
        for (name, args) in [
            ("l2.json", vec!["build", "literal", "--vars", "2"]),
            ("b2.json", vec!["build", "boolean", "--vars", "2"]),
        ] {
            let out = dir.path().join(name);
            let mut a = args.clone();
            a.extend(["-o", out.to_str().unwrap()]);
            assert_eq!(cspace(&a).code, 0);
        }
        fs::write(
            dir.path().join("bad.json"),
            r#"{"points":["p","q"],"maximal_consistent":[["p","q"]]}"#,
        )
        .unwrap();
        Fixtures { dir }
    }

    pub fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

/// (golden file, schema or "" for text output, arguments with `@file`
/// standing for a fixture path)
pub const CASES: &[(&str, &str, &[&str])] = &[
    ("build_literal_2.json", "space", &["build", "literal", "--vars", "2"]),
    ("build_boolean_1.json", "space", &["build", "boolean", "--vars", "1"]),
    (
        "build_random_5_3_seed7.json",
        "space",
        &["build", "random", "--points", "5", "--maximal", "3", "--seed", "7"],
    ),
    ("validate_l2.json", "validate", &["validate", "@l2.json", "--json"]),
    ("validate_l2.txt", "", &["validate", "@l2.json"]),
    (
        "classes_l2_max1.json",
        "classes",
        &["classes", "@l2.json", "--max-size", "1", "--json"],
    ),
    ("classes_l2.txt", "", &["classes", "@l2.json"]),
    (
        "negate_l2_pair.json",
        "negate",
        &["negate", "@l2.json", "--set", "not_v1,not_v2", "--json"],
    ),
    (
        "negate_b2_a.json",
        "negate",
        &["negate", "@b2.json", "--set", "a", "--json"],
    ),
    (
        "negate_b2_not_a_not_b.txt",
        "",
        &["negate", "@b2.json", "--set", "!a,!b"],
    ),
    (
        "implies_b2.json",
        "implies",
        &["implies", "@b2.json", "--lhs", "a&b", "--rhs", "a", "--json"],
    ),
    (
        "implies_b2_top.json",
        "implies",
        &["implies", "@b2.json", "--lhs", "a", "--rhs", "1", "--json"],
    ),
    (
        "implies_l2.txt",
        "",
        &[
            "implies", "@l2.json", "--lhs", "v1", "--rhs", "v2", "--z-mode", "elements",
        ],
    ),
    (
        "join_b2_a_b.json",
        "join",
        &["join", "@b2.json", "--x", "a", "--y", "b", "--json"],
    ),
    (
        "join_l2_v1_v2.json",
        "join",
        &["join", "@l2.json", "--x", "v1", "--y", "v2", "--json"],
    ),
    ("join_l2_v1_v2.txt", "", &["join", "@l2.json", "--x", "v1", "--y", "v2"]),
    (
        "meet_b2.json",
        "meet",
        &["meet", "@b2.json", "--lhs", "a", "--rhs", "b", "--json"],
    ),
    (
        "minimal_inconsistent_l2.json",
        "minimal_inconsistent",
        &["minimal-inconsistent", "@l2.json", "--json"],
    ),
    ("minimal_inconsistent_b2.txt", "", &["minimal-inconsistent", "@b2.json"]),
    (
        "detect_boolean_l2.json",
        "detect_boolean",
        &["detect-boolean", "@l2.json", "--json"],
    ),
    (
        "detect_boolean_b2.json",
        "detect_boolean",
        &["detect-boolean", "@b2.json", "--json"],
    ),
    ("detect_boolean_b2.txt", "", &["detect-boolean", "@b2.json"]),
    ("audit_l2.json", "audit", &["audit", "@l2.json", "--json"]),
    ("audit_l2.txt", "", &["audit", "@l2.json"]),
    (
        "audit_b2_elements.txt",
        "",
        &["audit", "@b2.json", "--z-mode", "elements"],
    ),
    (
        "audit_campaign_small.json",
        "campaign",
        &[
            "audit",
            "--campaign",
            "--random-spaces",
            "3",
            "--props",
            "P01,P03,P07",
            "--json",
        ],
    ),
];

/// Runs every case against its golden file and schema; returns the
/// failures.
pub fn check_cases(fx: &Fixtures) -> Vec<String> {
    let mut failures = Vec::new();
    for (name, schema, args) in CASES {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix('@').map_or(a.to_string(), |f| fx.path(f)))
            .collect();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let run = cspace(&argv);
        if run.code != 0 {
            failures.push(format!("{name}: exit {} ({})", run.code, run.stderr));
            continue;
        }
        // Paths to the temporary fixtures never appear in outputs.
        if run.stdout.contains(fx.dir.path().to_str().unwrap()) {
            failures.push(format!("{name}: output leaks a temporary path"));
        }
        if !schema.is_empty() {
            let v: Value = serde_json::from_str(&run.stdout).unwrap();
            let errs = schema_errors(schema, &v);
            if !errs.is_empty() {
                failures.push(format!("{name}: schema {schema}: {errs:?}"));
            }
            if !keys_sorted(&v) || !text_keys_sorted(&run.stdout) {
                failures.push(format!("{name}: keys not sorted"));
            }
        }
        if let Err(e) = golden(name, &run.stdout) {
            failures.push(e);
        }
    }
    failures
}
