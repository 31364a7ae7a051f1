//! Single-record output for the one-shot commands.

use serde_json::{Map, Value};

use crate::Format;

/// Ordered key/value record, printed as an aligned table or one JSON object.
#[derive(Debug, Default, Clone)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.into(), float(v)));
        self
    }

    pub fn opt(mut self, key: &str, v: Option<f64>) -> Self {
        self.fields.push((key.into(), v.map_or(Value::Null, float)));
        self
    }

    pub fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.fields.push((key.into(), Value::String(v.into())));
        self
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.fields.push((key.into(), Value::from(v)));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.fields.push((key.into(), Value::Bool(v)));
        self
    }

    pub fn nums(mut self, prefix: &str, vs: &[f64]) -> Self {
        for (i, v) in vs.iter().enumerate() {
            self.fields.push((format!("{prefix}{}", i + 1), float(*v)));
        }
        self
    }

    pub fn value(mut self, key: &str, v: Value) -> Self {
        self.fields.push((key.into(), v));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", self.to_json()),
            Format::Table => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k:<width$}  {}\n", table_value(v)));
                }
                out
            }
        }
    }
}

fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn table_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.9}", n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
