//! Command reports, rendered either as JSON or as indented text with the
//! same facts.

use serde::Serialize;
use serde_json::{Map, Value as Json};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(source: impl Into<String>, bytes: &[u8]) -> InputDigest {
        InputDigest {
            source: source.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: Map<String, Json>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_status: i32,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            command,
            inputs: Vec::new(),
            results: Map::new(),
            warnings: Vec::new(),
            error: None,
            exit_status: 0,
        }
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), value);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        if !self.warnings.contains(&message) {
            self.warnings.push(message);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command.join(" ")));
        for input in &self.inputs {
            out.push_str(&format!(
                "input: {} sha256={}\n",
                input.source, input.sha256
            ));
        }
        for (key, value) in &self.results {
            render(&mut out, key, value, 0);
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!("exit status: {}\n", self.exit_status));
        out
    }
}

fn scalar(v: &Json) -> Option<String> {
    match v {
        Json::Null => Some("none".to_string()),
        Json::Bool(b) => Some(b.to_string()),
        Json::Number(n) => Some(n.to_string()),
        Json::String(s) => Some(s.clone()),
        Json::Array(items) => items
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .map(|parts| format!("[{}]", parts.join(", "))),
        Json::Object(_) => None,
    }
}

fn inline(map: &Map<String, Json>) -> Option<String> {
    map.iter()
        .map(|(k, v)| scalar(v).map(|s| format!("{k}={s}")))
        .collect::<Option<Vec<_>>>()
        .map(|parts| parts.join("  "))
}

fn render(out: &mut String, key: &str, value: &Json, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(value) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match value {
        Json::Object(map) => match inline(map) {
            Some(line) => out.push_str(&format!("{pad}{key}: {line}\n")),
            None => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (k, v) in map {
                    render(out, k, v, depth + 1);
                }
            }
        },
        Json::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
