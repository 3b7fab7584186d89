use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{RunConfig, VERSION};
use crate::error::CliError;

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn render(&self, config: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# gitenergy {VERSION}");
        let _ = writeln!(s, "# config: {}", serde_json::to_string(config).unwrap());
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(cell).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.header.iter().zip(r).map(|(h, v)| (h.to_string(), v.clone())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes `<command>.json` (and `<command>.csv`) under `--out`, or the JSON
/// document to stdout. The table is also embedded as `rows` in the JSON.
pub fn emit(config: &RunConfig, body: Value, table: Option<&Table>) -> Result<(), CliError> {
    let mut doc = Map::new();
    doc.insert("version".into(), Value::String(VERSION.into()));
    doc.insert("config".into(), serde_json::to_value(config).unwrap());
    if let Value::Object(m) = body {
        doc.extend(m);
    }
    if let Some(t) = table {
        doc.insert("rows".into(), t.to_json());
    }
    let json = serde_json::to_string_pretty(&Value::Object(doc)).unwrap() + "\n";
    match &config.settings.out {
        Some(dir) => {
            let dir = Path::new(dir);
            let io = |e: std::io::Error| CliError::Io { path: dir.display().to_string(), msg: e.to_string() };
            fs::create_dir_all(dir).map_err(io)?;
            fs::write(dir.join(format!("{}.json", config.command)), json).map_err(io)?;
            if let Some(t) = table {
                fs::write(dir.join(format!("{}.csv", config.command)), t.render(config)).map_err(io)?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(json.as_bytes());
        }
    }
    Ok(())
}
