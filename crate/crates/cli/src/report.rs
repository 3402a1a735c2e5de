use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Value,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Value => 0,
            Verdict::Fail => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl RunReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    /// One `path,value` row per scalar leaf of the report, paths in JSON pointer form.
    fn to_csv(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["path", "value"]).expect("in-memory write");
        for (path, v) in rows {
            w.write_record([path, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&format!("{prefix}/{k}"), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}/{i}"), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattens_nested_values() {
        let r = RunReport {
            command: "enum-u1".into(),
            verdict: Verdict::Value,
            certificate: None,
            result: Some(json!({"count": 4, "matrices": [["1", "0"]]})),
            timing_ms: 3,
        };
        let csv = r.render(Format::Csv);
        assert!(
            csv.starts_with("path,value\n/command,enum-u1\n/verdict,value\n"),
            "{csv}"
        );
        assert!(csv.contains("/result/count,4\n"));
        assert!(csv.contains("/result/matrices/0/1,0\n"));
    }

    #[test]
    fn json_omits_missing_fields() {
        let r = RunReport {
            command: "majorize".into(),
            verdict: Verdict::Pass,
            certificate: None,
            result: None,
            timing_ms: 0,
        };
        let text = r.render(Format::Json);
        assert!(!text.contains("certificate"));
        assert_eq!(Verdict::Fail.exit_code(), 1);
    }
}
