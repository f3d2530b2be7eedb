use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Renders a report. In CSV a top-level `rows` array becomes a table, any other
/// object becomes `key,value` lines with nested keys joined by dots.
pub fn render(value: &Value, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => render_csv(value).map_err(|e| e.to_string()),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(" ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn render_csv(value: &Value) -> Result<String, Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match value.get("rows").and_then(Value::as_array) {
        Some(rows) if rows.iter().all(Value::is_object) => {
            let mut header: Vec<String> = Vec::new();
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut cells = Vec::new();
                    flatten("", r, &mut cells);
                    cells
                })
                .collect();
            for (k, _) in flat.iter().flatten() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
            w.write_record(&header)?;
            for cells in &flat {
                let record: Vec<&str> = header.iter().map(|h| cells.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str())).collect();
                w.write_record(&record)?;
            }
        }
        _ => {
            let mut cells = Vec::new();
            flatten("", value, &mut cells);
            w.write_record(["key", "value"])?;
            for (k, v) in cells {
                w.write_record([k, v])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
