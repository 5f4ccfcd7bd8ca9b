use std::path::PathBuf;

use jsonschema::Validator;
use serde_json::Value;

pub fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name)
}

/// Validator for `schemas/<name>` with format assertions on.
pub fn validator(name: &str) -> Validator {
    let text = std::fs::read_to_string(schema_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let schema: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    jsonschema::options()
        .should_validate_formats(true)
        .build(&schema)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every violation of `instance` against `schemas/<name>`, rendered.
pub fn violations(name: &str, instance: &Value) -> Vec<String> {
    validator(name)
        .iter_errors(instance)
        .map(|e| format!("{}: {e}", e.instance_path))
        .collect()
}

pub fn assert_valid(name: &str, instance: &Value) {
    let errs = violations(name, instance);
    assert!(errs.is_empty(), "{name} rejected instance:\n{}\n{instance:#}", errs.join("\n"));
}
