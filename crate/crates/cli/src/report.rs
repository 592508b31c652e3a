//! The JSON envelope every subcommand prints, and its table rendering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperExample,
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    /// One entry per top-level output key.
    pub provenance: BTreeMap<String, Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut rows = vec![("command".to_string(), self.command.clone())];
        flatten("inputs", &self.inputs, &mut rows);
        flatten("outputs", &self.outputs, &mut rows);
        for (k, v) in &self.provenance {
            let tag = match v {
                Provenance::PaperExample => "paper-example",
                Provenance::Computed => "computed",
            };
            rows.push((format!("provenance.{k}"), tag.to_string()));
        }
        if let Some(e) = &self.error {
            rows.push(("error".into(), e.clone()));
        }
        render(&rows)
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_flattens_nested_values() {
        let env = ReportEnvelope {
            command: "nu".into(),
            inputs: json!({"e": 2}),
            outputs: json!({"nu": 2, "bracket": {"lower": "2/9", "upper": "1/3"}, "w": ["1/2", "2/3"]}),
            provenance: BTreeMap::from([("nu".into(), Provenance::Computed)]),
            error: None,
        };
        let t = env.to_table();
        assert!(t.contains("outputs.bracket.lower"));
        assert!(t.contains("[1/2, 2/3]"));
        assert!(t.contains("provenance.nu"));
    }
}
