use crate::{CliError, RunConfig, TOOL, VERSION};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;
use toric_dioph::approx::SearchRow;
use toric_dioph::Fan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// What a command produced, before formatting.
pub struct Outcome {
    pub fan_hash: String,
    pub result: Value,
    pub passed: bool,
    /// Per-point rows, emitted as the body of CSV reports.
    pub rows: Option<Vec<SearchRow>>,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: String,
    config: &'a RunConfig,
    fan_hash: &'a str,
    status: &'static str,
    result: &'a Value,
}

/// SHA-256 of the canonical fan JSON, hex encoded.
pub fn fan_hash(fan: &Fan) -> String {
    hex::encode(Sha256::digest(fan.to_json().as_bytes()))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(Value::is_object) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        _ => out.push((prefix.to_string(), v.to_string())),
    }
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

pub fn render(cfg: &RunConfig, o: &Outcome) -> Result<String, CliError> {
    let report = Report {
        tool: TOOL,
        version: VERSION,
        command: cfg.command.to_string(),
        config: cfg,
        fan_hash: &o.fan_hash,
        status: if o.passed { "pass" } else { "fail" },
        result: &o.result,
    };
    let value = serde_json::to_value(&report).expect("report serializes");
    match cfg.format {
        Format::Json => Ok(serde_json::to_string_pretty(&value).expect("report serializes") + "\n"),
        Format::Markdown => {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let mut s = format!("# {TOOL} {}\n\n| key | value |\n| --- | --- |\n", report.command);
            for (k, v) in rows {
                s.push_str(&format!("| {k} | {} |\n", v.replace('|', "\\|")));
            }
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut head = String::new();
            match &o.rows {
                Some(rows) => {
                    head = format!(
                        "# {TOOL} {VERSION} {} fan_hash={} config={}\n",
                        report.command,
                        o.fan_hash,
                        serde_json::to_string(cfg).expect("config serializes")
                    );
                    for r in rows {
                        w.serialize(r).map_err(csv_error)?;
                    }
                }
                None => {
                    let mut rows = Vec::new();
                    flatten("", &value, &mut rows);
                    w.write_record(["key", "value"]).map_err(csv_error)?;
                    for (k, v) in rows {
                        w.write_record([k, v]).map_err(csv_error)?;
                    }
                }
            }
            let body = w.into_inner().map_err(csv_error)?;
            Ok(head + &String::from_utf8(body).expect("csv output is utf-8"))
        }
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.map_or("<stdout>".into(), |p| p.display().to_string()),
        message: e.to_string(),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}
