//! Shared helpers for the CLI integration tests: running the binary and a
//! minimal JSON-Schema validator covering exactly the draft-07 subset the
//! shipped schema uses (`type`, `enum`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `oneOf`, local `#/$defs` refs).

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn greensign(args: &[&str]) -> Run {
    greensign_with(args, &[])
}

pub fn greensign_with(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_greensign"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().expect("binary runs");
    Run {
        code: status.code().expect("no signal"),
        stdout: String::from_utf8(stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(stderr).expect("utf-8 stderr"),
    }
}

pub fn shipped_schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/greensign.schema.json");
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema is valid JSON")
}

/// Validates stdout of a `--json` run against the shipped schema.
pub fn assert_valid_json(stdout: &str) -> Value {
    let doc: Value = serde_json::from_str(stdout).expect("stdout is one JSON document");
    let schema = shipped_schema();
    if let Err(why) = validate(&schema, &schema, &doc, "$") {
        panic!("schema violation: {why}\ndocument: {doc:#}");
    }
    doc
}

pub fn validate(root: &Value, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let target =
            resolve(root, r).ok_or_else(|| format!("{path}: unresolvable $ref {r}"))?;
        return validate(root, target, value, path);
    }
    if let Some(alternatives) = schema.get("oneOf").and_then(Value::as_array) {
        let hits = alternatives
            .iter()
            .filter(|s| validate(root, s, value, path).is_ok())
            .count();
        if hits != 1 {
            return Err(format!("{path}: matched {hits} oneOf alternatives, want 1"));
        }
    }
    if let Some(ty) = schema.get("type") {
        check_type(ty, value, path)?;
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.iter().any(|cand| cand == value) {
            return Err(format!("{path}: {value} not in enum {allowed:?}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        let obj = value
            .as_object()
            .ok_or_else(|| format!("{path}: required on a non-object"))?;
        for key in required {
            let key = key.as_str().expect("required entries are strings");
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing required property {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(obj) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate(root, sub, v, &format!("{path}.{key}"))?;
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in obj.keys() {
                    if !props.contains_key(key) {
                        return Err(format!("{path}: unexpected property {key}"));
                    }
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(root, items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Option<&'a Value> {
    let rest = reference.strip_prefix("#/")?;
    let mut cur = root;
    for seg in rest.split('/') {
        cur = cur.get(seg)?;
    }
    Some(cur)
}

fn check_type(ty: &Value, value: &Value, path: &str) -> Result<(), String> {
    let names: Vec<&str> = match ty {
        Value::String(s) => vec![s.as_str()],
        Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
        _ => return Err(format!("{path}: malformed type keyword")),
    };
    if names.iter().any(|n| matches_type(n, value)) {
        Ok(())
    } else {
        Err(format!("{path}: {value} is not of type {names:?}"))
    }
}

fn matches_type(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}
