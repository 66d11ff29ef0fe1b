//! The report envelope and its JSON, CSV and text renderings.

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

pub const SCHEMA: u32 = 1;

/// What a subcommand hands back before it is wrapped in the envelope.
#[derive(Debug, Default)]
pub struct Output {
    pub results: Value,
    pub paper_refs: Vec<&'static str>,
    pub failures: Vec<String>,
    /// Human-readable lines for `--format text`.
    pub text: Vec<String>,
    /// Header and rows for `--format csv`; reports without a natural table
    /// fall back to flattened `key;value` rows.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    config_digest: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<u64>,
    paper_refs: &'a [&'static str],
    results: &'a Value,
    failures: &'a [String],
}

fn now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([';', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(
    command: &str,
    digest: &str,
    deterministic: bool,
    format: Format,
    out: &Output,
) -> String {
    let generated_at = (!deterministic).then(now);
    match format {
        Format::Json => {
            let env = Envelope {
                schema: SCHEMA,
                command,
                config_digest: digest,
                generated_at,
                paper_refs: &out.paper_refs,
                results: &out.results,
                failures: &out.failures,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(t) = generated_at {
                s += &format!("# generated_at {t}\n");
            }
            for line in &out.text {
                s += line;
                s.push('\n');
            }
            for f in &out.failures {
                s += &format!("FAILURE: {f}\n");
            }
            s
        }
        Format::Csv => {
            let (header, rows) = match &out.table {
                Some(t) => t.clone(),
                None => {
                    let mut rows = Vec::new();
                    flatten("", &out.results, &mut rows);
                    (vec!["key".to_string(), "value".to_string()], rows)
                }
            };
            let mut s = String::new();
            if let Some(t) = generated_at {
                s += &format!("# generated_at {t}\n");
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .map(|c| csv_cell(c))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            s += &line(&header);
            s.push('\n');
            for r in &rows {
                s += &line(r);
                s.push('\n');
            }
            for f in &out.failures {
                s += &format!("# failure: {f}\n");
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Output {
        Output {
            results: json!({"a": 1, "b": ["x;y", "z"]}),
            paper_refs: vec!["tag"],
            text: vec!["hello".into()],
            ..Default::default()
        }
    }

    #[test]
    fn deterministic_json_has_no_timestamp() {
        let s = render("cmd", "abc", true, Format::Json, &sample());
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v.get("generated_at").is_none());
        let s = render("cmd", "abc", false, Format::Json, &sample());
        assert!(serde_json::from_str::<Value>(&s)
            .unwrap()
            .get("generated_at")
            .is_some());
    }

    #[test]
    fn csv_fallback_flattens() {
        let s = render("cmd", "abc", true, Format::Csv, &sample());
        assert_eq!(s, "key;value\na;1\nb[0];\"x;y\"\nb[1];z\n");
    }

    #[test]
    fn text_header_only_when_not_deterministic() {
        assert_eq!(render("c", "d", true, Format::Text, &sample()), "hello\n");
        assert!(render("c", "d", false, Format::Text, &sample()).starts_with("# generated_at "));
    }
}
