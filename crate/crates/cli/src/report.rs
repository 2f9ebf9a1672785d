//! JSON documents with sorted keys.

use serde::Serialize;
use serde_json::{Map, Value};

pub const TOOL: &str = "groupapprox";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rebuilds every object with its keys in lexicographic order, whatever
/// map ordering serde_json was compiled with.
pub fn sorted(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

/// A document of the given kind: `fields` plus the tool name and version.
pub fn document(kind: &str, fields: Value) -> Value {
    let mut map = match fields {
        Value::Object(map) => map,
        other => panic!("document fields must be an object, got {other}"),
    };
    map.insert("tool".into(), TOOL.into());
    map.insert("version".into(), VERSION.into());
    map.insert("kind".into(), kind.into());
    sorted(Value::Object(map))
}

/// Pretty-printed UTF-8 with a trailing newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(doc.clone())).expect("json");
    s.push('\n');
    s
}
