//! Deterministic CSV and JSON emission.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SIG_DIGITS: usize = 12;
pub const MISSING: &str = "—";

/// Plain decimal with 12 significant digits; scientific outside 1e-5..1e15.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..15).contains(&exp) {
        return sci;
    }
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| MISSING.into())
}

/// Rounds through the text form so JSON and CSV carry the same digits.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = fmt_num(x);
    serde_json::from_str::<Value>(&s).unwrap_or(Value::Null)
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map(json_num).unwrap_or(Value::Null)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A header plus rows, rendered either as CSV with a `#` preamble or as
/// {"params", "records"} JSON.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub preamble: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub params: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub records: Vec<Value>,
}

impl Document {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, text: String, value: Value) {
        self.preamble.push((key.to_string(), text));
        self.params.insert(key.to_string(), value);
    }

    pub fn param_num(&mut self, key: &str, x: f64) {
        self.param(key, fmt_num(x), json_num(x));
    }

    pub fn param_serialized<T: Serialize>(&mut self, key: &str, v: &T) {
        let value = serde_json::to_value(v).unwrap_or(Value::Null);
        let text = match &value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        self.param(key, text, value);
    }

    pub fn push(&mut self, row: Vec<String>, record: Value) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
        self.records.push(record);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.preamble {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut doc = json!({
            "params": Value::Object(self.params.clone()),
            "records": self.records,
        });
        if !self.notes.is_empty() {
            doc["notes"] = json!(self.notes);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}
