//! Output documents: JSON objects with a fixed key order, one top-level key
//! per line and compact nested values.

use serde_json::Value;
use torwidth_core::LatticeVector;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Doc {
    entries: Vec<(String, Value)>,
}

impl Doc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.entries.iter().enumerate() {
            out.push_str("  ");
            out.push_str(&Value::String(k.clone()).to_string());
            out.push_str(": ");
            compact(v, &mut out);
            if i + 1 < self.entries.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }
}

fn compact(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                compact(x, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                compact(x, out);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn vector(v: &LatticeVector) -> Value {
    Value::from(v.coords().to_vec())
}

pub fn vectors(vs: &[LatticeVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}
