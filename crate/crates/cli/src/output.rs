use std::io::Write;
use std::path::Path;

use measdep_core::{format_sig, Scalar};
use serde_json::Value;

/// Exact values become `"p/q"` strings so no precision is lost.
pub fn json_value<T: Scalar>(x: &T) -> Value {
    if T::EXACT {
        Value::String(x.to_string())
    } else {
        serde_json::json!(x.to_f64())
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Renders an ordered list of named values as `name: value` lines, CSV or
/// a flat JSON object.
pub fn render_table(rows: &[(String, Value)], format: Option<crate::Format>) -> String {
    let plain = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => "NA".to_string(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| format_sig(x, 10)),
        other => other.to_string(),
    };
    match format {
        None => rows.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect(),
        Some(crate::Format::Csv) => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},{}\n", plain(v)));
            }
            s
        }
        Some(crate::Format::Json) => {
            let obj: serde_json::Map<String, Value> = rows.iter().cloned().collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON serializes");
            s.push('\n');
            s
        }
    }
}
