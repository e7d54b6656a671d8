//! JSON and TSV renderings of weight vectors.
//!
//! JSON has the fixed key order `L`, `m`, `normalization`, `probabilities`,
//! with entries `{"config", "value"}` in enumeration order. Integers are
//! written as JSON numbers of any size; non-integral rationals as `"p/q"`
//! strings, or as floats for empirical distributions.

use std::fmt::{Display, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{Number, Value};
use tazrp_core::{Distribution, MultiplicityArray};

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Serialize)]
struct Entry {
    config: String,
    value: Value,
}

#[derive(Serialize)]
struct Document {
    #[serde(rename = "L")]
    len: usize,
    m: Vec<u32>,
    normalization: Value,
    probabilities: Vec<Entry>,
}

fn integer_value(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("decimal integer"))
}

fn exact_value(v: &BigRational) -> Value {
    if v.is_integer() {
        integer_value(&v.to_integer())
    } else {
        Value::String(v.to_string())
    }
}

fn float_value(v: &BigRational) -> Value {
    let f = v.to_f64().unwrap_or(f64::NAN);
    Number::from_f64(f).map_or(Value::Null, Value::Number)
}

/// How values are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Values {
    /// Exact integers or rationals.
    Exact,
    /// Decimal approximations.
    Float,
}

fn value(v: &BigRational, mode: Values) -> Value {
    match mode {
        Values::Exact => exact_value(v),
        Values::Float => float_value(v),
    }
}

/// Renders a distribution over displayable states.
#[must_use]
pub fn render<S: Display + PartialEq>(
    d: &Distribution<S>,
    m: &MultiplicityArray,
    len: usize,
    format: Format,
    mode: Values,
) -> String {
    match format {
        Format::Json => {
            let doc = Document {
                len,
                m: m.m().to_vec(),
                normalization: integer_value(d.normalization()),
                probabilities: d
                    .iter()
                    .map(|(s, w)| Entry { config: s.to_string(), value: value(w, mode) })
                    .collect(),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
            out.push('\n');
            out
        }
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "# L={len} m={m} normalization={}", d.normalization());
            out.push_str("config\tvalue\n");
            for (s, w) in d.iter() {
                let v = match value(w, mode) {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                let _ = writeln!(out, "{s}\t{v}");
            }
            out
        }
    }
}
