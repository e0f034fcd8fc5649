//! Indented plain-text rendering of a report value.

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("none".into()),
        _ => None,
    }
}

fn line(out: &mut String, indent: usize, s: &str) {
    out.extend(std::iter::repeat(' ').take(indent));
    out.push_str(s);
    out.push('\n');
}

fn write(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar(val) {
                    Some(s) => line(out, indent, &format!("{k}: {s}")),
                    None => {
                        line(out, indent, &format!("{k}:"));
                        write(val, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => line(out, indent, &format!("- {s}")),
                    None => {
                        line(out, indent, "-");
                        write(item, indent + 2, out);
                    }
                }
            }
        }
        other => line(out, indent, &scalar(other).unwrap_or_default()),
    }
}

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_values() {
        let v = json!({"a": 1, "b": {"c": [1, {"d": null}], "e": []}});
        assert_eq!(render(&v), "a: 1\nb:\n  c:\n    - 1\n    -\n      d: none\n  e: none\n");
    }
}
