//! Every JSON report validates against the shipped schema file. The
//! validator below covers the schema subset the file uses: type, required,
//! properties, additionalProperties, items, enum, const, oneOf.

use degenlab::report::REPORT_SCHEMA;
use serde_json::Value;
use std::io::Write;
use std::process::Command;
use tempfile::NamedTempFile;

fn type_matches(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "integer" => value.is_i64() || value.is_u64(),
        "number" => value.is_number(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(c) = schema.get("const") {
        if c != value {
            return Err(format!("{path}: expected const {c}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(value) {
            return Err(format!("{path}: value {value} not in enum"));
        }
    }
    if let Some(one_of) = schema.get("oneOf").and_then(|v| v.as_array()) {
        let hits = one_of
            .iter()
            .filter(|s| validate(s, value, path).is_ok())
            .count();
        if hits != 1 {
            return Err(format!("{path}: {hits} oneOf branches matched"));
        }
        return Ok(());
    }
    match schema.get("type") {
        Some(Value::String(ty)) => {
            if !type_matches(ty, value) {
                return Err(format!("{path}: expected type {ty}, got {value}"));
            }
        }
        Some(Value::Array(tys)) => {
            if !tys
                .iter()
                .filter_map(|t| t.as_str())
                .any(|t| type_matches(t, value))
            {
                return Err(format!("{path}: no type in {tys:?} matches"));
            }
        }
        _ => {}
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(|v| v.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required key {key}"));
                }
            }
        }
        let props = schema.get("properties").and_then(|v| v.as_object());
        if let Some(props) = props {
            for (key, sub) in obj {
                match props.get(key) {
                    Some(subschema) => {
                        validate(subschema, sub, &format!("{path}.{key}"))?;
                    }
                    None => {
                        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                            return Err(format!("{path}: unexpected key {key}"));
                        }
                    }
                }
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(items) = schema.get("items") {
            for (i, sub) in arr.iter().enumerate() {
                validate(items, sub, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn write_temp(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn run_and_validate(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_degenlab"))
        .args(args)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    if let Err(e) = validate(&schema, &report, "$") {
        panic!("schema violation: {e}\nreport: {report}");
    }
}

#[test]
fn reports_validate_against_shipped_schema() {
    let loop_arrow_alg = "\
[quiver]
vertex 1
vertex 2
arrow w 1 1
arrow a 1 2
[relations]
1 w*w
[options]
max_len 2
field rational
";
    let jz2 = "[module]\ntop 1\ntop 1\ngen 1 w z2\ngen 1 a z2\n";
    let a2_alg = "\
[quiver]
vertex 1
vertex 2
arrow a 1 2
[options]
max_len 1
field rational
";
    let a2_jz2 = "[module]\ntop 1\ntop 1\ngen 1 a z2\n";
    let kron_alg = "\
[quiver]
vertex 1
vertex 2
arrow a 1 2
arrow b 1 2
[options]
max_len 1
field rational
";
    let kron_mod = "[module]\ntop 1\ntop 1\ngen 1 a z1\ngen 1 b z2\n";

    let cases: Vec<(&str, &str, Vec<&str>)> = vec![
        (loop_arrow_alg, jz2, vec!["check"]),
        (loop_arrow_alg, jz2, vec!["check", "--mode", "unipotent"]),
        (a2_alg, a2_jz2, vec!["check"]),
        (a2_alg, a2_jz2, vec!["invariants"]),
        (kron_alg, kron_mod, vec!["check", "--mode", "torus"]),
        (kron_alg, kron_mod, vec!["check"]),
    ];
    for (alg_text, mod_text, mut args) in cases {
        let alg = write_temp(alg_text);
        let module = write_temp(mod_text);
        let alg_path = alg.path().to_str().unwrap().to_string();
        let mod_path = module.path().to_str().unwrap().to_string();
        args.extend(["--algebra", &alg_path, "--module", &mod_path]);
        run_and_validate(&args.iter().map(|s| *s).collect::<Vec<_>>());
    }
}

#[test]
fn validator_rejects_corrupted_reports() {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let bad = serde_json::json!({
        "tool": "degenlab",
        "command": "check",
        "field": "rational",
        "seed": 0,
        "mode": "full",
        "dimension_vector": [1, "two"],
        "radical_layering": [],
        "m": 0,
        "top_count": 1,
        "summand_count": null,
        "orbit_dim": 0,
        "verdicts": null,
        "certificate": null
    });
    assert!(validate(&schema, &bad, "$").is_err());
    let missing = serde_json::json!({ "tool": "degenlab" });
    assert!(validate(&schema, &missing, "$").is_err());
}
