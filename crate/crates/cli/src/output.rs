//! CSV and JSON writers. Floats are printed with 9 significant digits and
//! rows keep their input order, so identical runs give identical bytes.

use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.8e}")
}

/// Columns of numbers plus the metadata echoed in front of them.
pub struct Table<'a> {
    pub columns: &'a [&'a str],
    pub rows: Vec<Vec<f64>>,
}

fn header_lines(meta: &[(&str, Value)]) -> String {
    let mut out = format!("# schema_version={SCHEMA_VERSION}\n");
    for (key, value) in meta {
        let text = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("# {key}={text}\n"));
    }
    out
}

pub fn csv_string(meta: &[(&str, Value)], table: &Table) -> String {
    let mut out = header_lines(meta);
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// Writes `<dir>/<stem>.csv` or `<dir>/<stem>.json` and returns the file name.
pub fn write_table(
    dir: &Path,
    stem: &str,
    format: Format,
    meta: &[(&str, Value)],
    table: &Table,
) -> Result<String, CliError> {
    let name = match format {
        Format::Csv => format!("{stem}.csv"),
        Format::Json => format!("{stem}.json"),
    };
    let contents = match format {
        Format::Csv => csv_string(meta, table),
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
            for (key, value) in meta {
                doc.insert((*key).into(), value.clone());
            }
            doc.insert("columns".into(), json!(table.columns));
            doc.insert("rows".into(), json!(table.rows));
            pretty(&Value::Object(doc))?
        }
    };
    write_file(&dir.join(&name), &contents)?;
    Ok(name)
}

fn pretty(value: &impl Serialize) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `<dir>/<name>` as pretty JSON with the schema version in front.
pub fn write_json(dir: &Path, name: &str, body: Value) -> Result<PathBuf, CliError> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    if let Value::Object(fields) = body {
        doc.extend(fields);
    } else {
        doc.insert("body".into(), body);
    }
    let path = dir.join(name);
    write_file(&path, &pretty(&Value::Object(doc))?)?;
    Ok(path)
}

/// NaN and infinities have no JSON form; they become `null`.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
