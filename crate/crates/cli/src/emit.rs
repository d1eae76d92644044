//! Result documents and their JSON and text renderings.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    /// Module operations this invocation ran.
    pub operations: Vec<String>,
    pub inputs: Value,
    pub result: Value,
    pub provenance: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub error_bounds: BTreeMap<String, f64>,
}

impl ResultDocument {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// Aligned `key  value` lines, with arrays of records as column tables.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut head = vec![
            ("command".to_string(), self.command.clone()),
            ("operations".to_string(), self.operations.join(", ")),
            ("provenance".to_string(), self.provenance.clone()),
        ];
        for (k, v) in &self.error_bounds {
            head.push((format!("bound.{k}"), format_scalar(&serde_json::json!(v))));
        }
        push_pairs(&mut out, &head);
        out.push('\n');
        let mut pairs = Vec::new();
        let mut tables = Vec::new();
        flatten("", &self.result, &mut pairs, &mut tables);
        push_pairs(&mut out, &pairs);
        for (name, rows) in tables {
            out.push('\n');
            out.push_str(&name);
            out.push('\n');
            push_table(&mut out, &rows);
        }
        out
    }

    pub fn write(&self, json: bool, w: &mut impl Write) -> Result<(), CliError> {
        let text = if json { self.to_json_string() } else { self.to_text() };
        w.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn complex(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

fn push_pairs(out: &mut String, pairs: &[(String, String)]) {
    let width = pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in pairs {
        let pad = width - k.chars().count();
        out.push_str(k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(v);
        out.push('\n');
    }
}

fn push_table(out: &mut String, rows: &[Map<String, Value>]) {
    let cols: Vec<&String> = rows[0].keys().collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(*c).map(format_scalar).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap())
        .collect();
    let line = |vals: Vec<&str>| -> String {
        let parts: Vec<String> =
            vals.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}", w = *w)).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    out.push_str(&line(cols.iter().map(|c| c.as_str()).collect()));
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
}

fn is_record_array(v: &Value) -> bool {
    match v {
        Value::Array(a) if !a.is_empty() => {
            let first = match &a[0] {
                Value::Object(o) => o.keys().collect::<Vec<_>>(),
                _ => return false,
            };
            a.iter().all(|x| matches!(x, Value::Object(o) if o.keys().collect::<Vec<_>>() == first))
                && a.iter().all(|x| x.as_object().unwrap().values().all(|y| !y.is_object()))
        }
        _ => false,
    }
}

type Tables = Vec<(String, Vec<Map<String, Value>>)>;

fn flatten(prefix: &str, v: &Value, pairs: &mut Vec<(String, String)>, tables: &mut Tables) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(o) if !is_pole(v) => {
            for (k, x) in o {
                flatten(&key(k), x, pairs, tables);
            }
        }
        _ if is_record_array(v) => {
            let rows = v.as_array().unwrap().iter().map(|r| r.as_object().unwrap().clone()).collect();
            tables.push((prefix.to_string(), rows));
        }
        _ => pairs.push((if prefix.is_empty() { "value".into() } else { prefix.to_string() }, format_scalar(v))),
    }
}

fn is_pole(v: &Value) -> bool {
    v.get("pole") == Some(&Value::Bool(true))
}

fn format_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_f64) => {
            let re = a[0].as_f64().unwrap();
            let im = a[1].as_f64().unwrap();
            if im == 0.0 {
                format!("{re:e}")
            } else {
                format!("{re:e} {} {:e}i", if im < 0.0 { '-' } else { '+' }, im.abs())
            }
        }
        _ if is_pole(v) => format!("pole at {}", format_scalar(&v["location"])),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn doc(result: Value) -> ResultDocument {
        ResultDocument {
            command: "demo".into(),
            operations: vec!["op".into()],
            inputs: json!({"x": "1/2"}),
            result,
            provenance: "test".into(),
            error_bounds: BTreeMap::from([("abs".to_string(), 1e-9)]),
        }
    }

    #[test]
    fn json_is_deterministic_and_round_trips() {
        let d = doc(json!({"z": complex(Complex64::new(1.5, -2.0)), "a": 3}));
        let a = d.to_json_string();
        assert_eq!(a, d.to_json_string());
        let back: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(back["result"]["z"], json!([1.5, -2.0]));
        assert_eq!(back, serde_json::to_value(&d).unwrap());
    }

    #[test]
    fn text_tables() {
        let d = doc(json!({"rows": [{"power": 1, "digit": 2}, {"power": 10, "digit": 0}], "v": 1}));
        let t = d.to_text();
        assert!(t.contains("digit  power"), "{t}");
        assert!(t.contains("    0     10"), "{t}");
        assert!(t.contains("v  1"));
    }

    #[test]
    fn poles_render() {
        let d = doc(json!({"value": {"pole": true, "location": [0.0, 0.0]}}));
        assert!(d.to_text().contains("pole at 0e0"));
    }
}
