//! Output records in text, JSON and CSV form.

use fq_smarandache::factor::Factorization;
use fq_smarandache::{Error, Poly, Result};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command result, renderable in every format.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Preformatted CSV; otherwise the top-level JSON fields are flattened.
    pub csv: Option<String>,
}

impl Output {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, csv: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let mut out = match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Csv => match &self.csv {
                Some(c) => c.clone(),
                None => flatten_csv(&self.json)?,
            },
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        Ok(out)
    }
}

fn flatten_csv(v: &Value) -> Result<String> {
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Object(m) => vec![m],
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        _ => return Err(Error::InvalidArgument("result has no tabular form".into())),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.write_record(first.keys()).map_err(csv_err)?;
    }
    for row in rows {
        w.write_record(row.values().map(cell)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("literal") => m["literal"].as_str().unwrap_or_default().to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(e.to_string())
}

pub fn poly(p: &Poly) -> Value {
    json!({ "literal": p.to_literal(), "coeffs": p.coeffs(), "delta": p.delta().to_string() })
}

pub fn factorization(fz: &Factorization) -> Value {
    let wire = serde_json::to_value(fz.to_json()).expect("factorization serializes");
    let max = fz.max_irreducible().map(poly).unwrap_or(Value::Null);
    json!({
        "unit": wire["unit"],
        "factors": wire["factors"],
        "omega": fz.omega(),
        "tau": fz.tau().to_string(),
        "max_irreducible": max,
    })
}

pub fn factorization_text(fz: &Factorization) -> String {
    let mut parts: Vec<String> = Vec::new();
    if fz.unit().0 != 1 || fz.factors().is_empty() {
        parts.push(fz.unit().0.to_string());
    }
    for (p, e) in fz.factors() {
        let base = if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 {
            format!("({p})")
        } else {
            p.to_string()
        };
        parts.push(if *e == 1 { base } else { format!("{base}^{e}") });
    }
    parts.join(" * ")
}

/// The error record written to stderr in JSON mode.
pub fn error_record(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}
