use serde_json::Value;

use crate::config::OutputFormat;

/// Renders a result. JSON objects keep sorted keys, so equal values give
/// byte-identical output.
pub fn render(value: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut lines = Vec::new();
            flatten("", value, &mut lines);
            lines
                .into_iter()
                .map(|(k, v)| format!("{k} = {v}\n"))
                .collect()
        }
        OutputFormat::Csv => csv_table(value),
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::Array(items) => out.push((
            prefix.to_string(),
            items.iter().map(leaf).collect::<Vec<_>>().join(" "),
        )),
        other => out.push((prefix.to_string(), leaf(other))),
    }
}

/// The `rows` array as a table when present, otherwise `key,value` pairs.
fn csv_table(value: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match value.get("rows").and_then(Value::as_array) {
        Some(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let mut header: Vec<String> = Vec::new();
            for r in rows {
                for k in r.as_object().unwrap().keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            w.write_record(&header).expect("in-memory write");
            for r in rows {
                let rec: Vec<String> = header
                    .iter()
                    .map(|k| r.get(k).map(leaf).unwrap_or_default())
                    .collect();
                w.write_record(&rec).expect("in-memory write");
            }
        }
        _ => {
            let mut lines = Vec::new();
            flatten("", value, &mut lines);
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in lines {
                w.write_record([k, v]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
