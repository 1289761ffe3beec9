//! Validator for the subset of JSON Schema the report schema uses:
//! `type`, `enum`, `minimum`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `oneOf` and local `$ref`s.

use serde_json::Value;

/// The published report schema.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/analysis-report.schema.json");

/// Validates `value` against [`REPORT_SCHEMA`]; errors carry a JSON pointer.
pub fn validate_report(value: &Value) -> Result<(), Vec<String>> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is valid JSON");
    validate(&schema, value)
}

pub fn validate(schema: &Value, value: &Value) -> Result<(), Vec<String>> {
    let mut errors = Vec::new();
    check(schema, schema, value, "", &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check(root: &Value, schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        match resolve(root, r) {
            Some(target) => check(root, target, value, path, errors),
            None => errors.push(format!("{path}: unresolvable reference {r}")),
        }
        return;
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matching = options
            .iter()
            .filter(|s| {
                let mut sub = Vec::new();
                check(root, s, value, path, &mut sub);
                sub.is_empty()
            })
            .count();
        if matching != 1 {
            errors.push(format!("{path}: matches {matching} alternatives of oneOf, expected 1"));
        }
    }
    if let Some(t) = schema.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => Vec::new(),
        };
        if !allowed.iter().any(|t| has_type(value, t)) {
            errors.push(format!("{path}: expected {}, found {}", allowed.join(" or "), type_name(value)));
            return;
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: {value} is not one of the allowed values"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), value.as_f64()) {
        if x < min {
            errors.push(format!("{path}: {x} is below the minimum {min}"));
        }
    }
    if let Value::Object(obj) = value {
        let props = schema.get("properties").and_then(Value::as_object);
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required key '{key}'"));
                }
            }
        }
        let closed = schema.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, v) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => check(root, sub, v, &format!("{path}/{key}"), errors),
                None if closed => errors.push(format!("{path}: unexpected key '{key}'")),
                None => {}
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (value, schema.get("items")) {
        for (i, v) in items.iter().enumerate() {
            check(root, sub, v, &format!("{path}/{i}"), errors);
        }
    }
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Option<&'a Value> {
    root.pointer(reference.strip_prefix('#')?)
}

fn has_type(v: &Value, t: &str) -> bool {
    match t {
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        "string" => v.is_string(),
        "array" => v.is_array(),
        "object" => v.is_object(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        _ => false,
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn schema_parses_and_rejects_shapes() {
        let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
        assert!(validate(&schema, &json!({})).unwrap_err().iter().any(|e| e.contains("'rank'")));
        let ratio = json!({ "$ref": "#/definitions/ratio" });
        let mut errs = Vec::new();
        check(&schema, &ratio, &json!({ "num": 1, "den": 0 }), "", &mut errs);
        assert_eq!(errs.len(), 1);
        errs.clear();
        check(&schema, &ratio, &json!({ "num": 1, "den": 2, "x": 1 }), "", &mut errs);
        assert!(errs[0].contains("unexpected key"));
    }

    #[test]
    fn one_of_and_types() {
        let s = json!({ "oneOf": [{ "type": "null" }, { "type": "integer", "minimum": 1 }] });
        assert!(validate(&s, &Value::Null).is_ok());
        assert!(validate(&s, &json!(3)).is_ok());
        assert!(validate(&s, &json!(0)).is_err());
        assert!(validate(&json!({ "type": "integer" }), &json!(1.5)).is_err());
    }
}
