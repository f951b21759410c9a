//! Plain-text rendering of a JSON report. Numbers are printed from the same
//! serialized values as `--format json`, so both formats agree digit for digit.

use std::fmt::Write;

use serde_json::Value;

pub fn text(value: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, "", value);
    out
}

fn scalar_list(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn walk(out: &mut String, path: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(out, &p, v);
            }
        }
        Value::Array(items) if !scalar_list(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(out, &format!("{path}[{i}]"), v);
            }
        }
        _ => {
            let _ = writeln!(out, "{path}: {}", inline(value));
        }
    }
}

fn inline(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
