//! Plain-text rendering of results: one `path: value` line per scalar, long
//! arrays elided.

use serde_json::Value;

const MAX_ITEMS: usize = 12;

pub fn render(command: &str, v: &Value) -> String {
    let mut out = format!("forge {command}\n");
    walk("", v, &mut out);
    out
}

fn walk(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let shown: Vec<String> = items.iter().take(MAX_ITEMS).map(scalar).collect();
            let more = if items.len() > MAX_ITEMS { format!(", … ({} total)", items.len()) } else { String::new() };
            out.push_str(&format!("  {prefix}: [{}{more}]\n", shown.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().take(MAX_ITEMS).enumerate() {
                walk(&format!("{prefix}[{i}]"), x, out);
            }
            if items.len() > MAX_ITEMS {
                out.push_str(&format!("  {prefix}: … {} more\n", items.len() - MAX_ITEMS));
            }
        }
        _ => out.push_str(&format!("  {prefix}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
