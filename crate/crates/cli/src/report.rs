//! Report emission. Every command builds a JSON value; CSV and the human
//! format are rendered from it.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::Failure;

#[derive(Debug)]
pub struct Report {
    pub value: Value,
    /// Array field exported by `--format csv`.
    pub table: Option<&'static str>,
}

impl Report {
    /// `schema` goes first, then the fields of `body`.
    pub fn new<T: Serialize>(schema: &str, body: &T, table: Option<&'static str>) -> Report {
        let mut map = Map::new();
        map.insert("schema".into(), Value::String(format!("xeig/{}/v1", schema)));
        match serde_json::to_value(body).expect("report bodies serialize") {
            Value::Object(fields) => map.extend(fields),
            other => {
                map.insert("value".into(), other);
            }
        }
        Report { value: Value::Object(map), table }
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value).expect("json values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let field = self.table.ok_or_else(|| Failure::Usage("this report has no table; use --format json or human".into()))?;
                csv(self.value.get(field).and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]))
            }
            Format::Human => {
                let mut out = String::new();
                human(&self.value, 0, &mut out);
                Ok(out)
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

/// Flattens nested objects into `outer.inner` columns.
fn flatten(prefix: &str, v: &Value, row: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let name = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                flatten(&name, inner, row);
            }
        }
        other => row.push((prefix.to_string(), scalar(other))),
    }
}

fn csv(rows: &[Value]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Option<Vec<String>> = None;
    for row in rows {
        let mut cells = Vec::new();
        flatten("", row, &mut cells);
        if header.is_none() {
            let names: Vec<String> = cells.iter().map(|c| c.0.clone()).collect();
            w.write_record(&names).map_err(|e| Failure::Compute(e.to_string()))?;
            header = Some(names);
        }
        w.write_record(cells.iter().map(|c| &c.1)).map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Compute(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn human(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let Value::Object(map) = v else {
        out.push_str(&format!("{}{}\n", pad, scalar(v)));
        return;
    };
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (k, inner) in map {
        match inner {
            Value::Object(_) => {
                out.push_str(&format!("{}{}:\n", pad, k));
                human(inner, indent + 2, out);
            }
            Value::Array(items) if !items.is_empty() && items.iter().all(|i| i.is_object()) => {
                out.push_str(&format!("{}{}:\n", pad, k));
                table(items, indent + 2, out);
            }
            Value::Array(items) if items.iter().all(is_scalar) => {
                let text = items.iter().map(scalar).collect::<Vec<_>>().join(", ");
                out.push_str(&format!("{}{:<width$}  {}\n", pad, k, text, width = width));
            }
            other => out.push_str(&format!("{}{:<width$}  {}\n", pad, k, scalar(other), width = width)),
        }
    }
}

fn table(items: &[Value], indent: usize, out: &mut String) {
    let rows: Vec<Vec<(String, String)>> = items
        .iter()
        .map(|item| {
            let mut cells = Vec::new();
            flatten("", item, &mut cells);
            cells
        })
        .collect();
    let header: Vec<String> = rows[0].iter().map(|c| c.0.clone()).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate().take(widths.len()) {
            widths[i] = widths[i].max(cell.1.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let text: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c, w = w)).collect();
        format!("{}{}\n", " ".repeat(indent), text.join("  ").trim_end())
    };
    out.push_str(&line(header.iter().map(String::as_str).collect()));
    for row in &rows {
        out.push_str(&line(row.iter().map(|c| c.1.as_str()).collect()));
    }
}
