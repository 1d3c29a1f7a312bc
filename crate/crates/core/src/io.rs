//! JSON file formats and run reports.
//!
//! Polynomial files hold either ascending coefficients or a root list:
//!
//! ```json
//! {"coeffs": [[80, 0], [0, 0], [0, 0], [1492, 0]]}
//! {"roots": [[-1, 1], [-1, -1]], "leading": [1, 0]}
//! ```
//!
//! Spec files hold a collected Weierstrass form:
//!
//! ```json
//! {"p": 0, "a": 0, "b_eff": 2, "c": 0.6931471805599453, "zeros": [[-1, 1], [-1, -1]]}
//! ```
//!
//! Everything written by this module prints floats as `{:.16e}`, which is
//! 17 significant digits and parses back to the same bits.

use std::fs;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::entire::WeierstrassSpec;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading: Option<[f64; 2]>,
}

impl PolynomialFile {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        PolynomialFile {
            coeffs: Some(pairs(p.coeffs())),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default)]
    pub p: usize,
    #[serde(default)]
    pub a: f64,
    pub b_eff: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub zeros: Vec<[f64; 2]>,
}

impl From<&WeierstrassSpec> for SpecFile {
    fn from(s: &WeierstrassSpec) -> Self {
        SpecFile {
            p: s.p,
            a: s.a,
            b_eff: s.b_eff,
            c: s.c,
            zeros: pairs(&s.zeros),
        }
    }
}

/// A parsed polynomial together with non-fatal remarks about the input.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

pub fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn parse_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// `line N` of the first occurrence of `needle` in `text`, for messages
/// about well-formed JSON with bad content.
fn locate(text: &str, needle: &str) -> String {
    text.lines()
        .position(|l| l.contains(needle))
        .map(|i| format!(" (line {})", i + 1))
        .unwrap_or_default()
}

fn json_error(path: &Path, text: &str, e: serde_json::Error) -> Error {
    let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
    let shown: String = line.trim().chars().take(80).collect();
    parse_error(path, format!("{e}; near `{shown}`"))
}

fn check_finite(path: &Path, text: &str, key: &str, v: &[[f64; 2]]) -> Result<()> {
    match v.iter().position(|[re, im]| !(re.is_finite() && im.is_finite())) {
        Some(i) => Err(parse_error(
            path,
            format!("entry {i} of \"{key}\" is not finite{}", locate(text, &format!("\"{key}\""))),
        )),
        None => Ok(()),
    }
}

/// Parse a polynomial document. `path` is used for messages only.
pub fn parse_polynomial_str(text: &str, path: &Path) -> Result<Parsed<Polynomial>> {
    let file: PolynomialFile = serde_json::from_str(text).map_err(|e| json_error(path, text, e))?;
    let mut warnings = Vec::new();
    match (&file.coeffs, &file.roots) {
        (Some(_), Some(_)) => Err(parse_error(
            path,
            format!("both \"coeffs\" and \"roots\" given{}; use exactly one", locate(text, "\"roots\"")),
        )),
        (None, None) => Err(parse_error(path, "expected a \"coeffs\" or a \"roots\" key")),
        (Some(coeffs), None) => {
            check_finite(path, text, "coeffs", coeffs)?;
            if file.leading.is_some() {
                return Err(parse_error(
                    path,
                    format!("\"leading\" only applies to \"roots\"{}", locate(text, "\"leading\"")),
                ));
            }
            let p = Polynomial::new(to_complex(coeffs));
            if p.is_zero() {
                warnings.push("polynomial is identically zero".to_string());
            }
            Ok(Parsed { value: p, warnings })
        }
        (None, Some(roots)) => {
            check_finite(path, text, "roots", roots)?;
            let [re, im] = file.leading.unwrap_or([1.0, 0.0]);
            if !(re.is_finite() && im.is_finite()) || (re == 0.0 && im == 0.0) {
                return Err(parse_error(
                    path,
                    format!("\"leading\" must be finite and nonzero{}", locate(text, "\"leading\"")),
                ));
            }
            if file.leading.is_none() {
                warnings.push("no \"leading\" given, using 1".to_string());
            }
            let p = Polynomial::from_roots(&to_complex(roots), Complex64::new(re, im));
            Ok(Parsed { value: p, warnings })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_polynomial_file(path: &Path) -> Result<Parsed<Polynomial>> {
    parse_polynomial_str(&read(path)?, path)
}

pub fn parse_spec_str(text: &str, path: &Path) -> Result<WeierstrassSpec> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| json_error(path, text, e))?;
    check_finite(path, text, "zeros", &file.zeros)?;
    for (key, v) in [("a", file.a), ("b_eff", file.b_eff), ("c", file.c)] {
        if !v.is_finite() {
            return Err(parse_error(path, format!("\"{key}\" is not finite")));
        }
    }
    Ok(WeierstrassSpec {
        p: file.p,
        a: file.a,
        b_eff: file.b_eff,
        c: file.c,
        zeros: to_complex(&file.zeros),
    })
}

pub fn parse_spec_file(path: &Path) -> Result<WeierstrassSpec> {
    parse_spec_str(&read(path)?, path)
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let scalar = |v: &Value| !(v.is_array() || v.is_object());
    match v {
        Value::Number(n) if n.is_f64() => {
            let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
        }
        Value::Array(items) if items.iter().all(scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(&"  ".repeat(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Indented JSON with every float as `{:.16e}`, arrays of scalars on one
/// line, and a trailing newline. Non-finite floats become `null`, as in
/// plain `serde_json`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report types serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

pub fn emit_polynomial(p: &Polynomial) -> String {
    to_json(&PolynomialFile::from_polynomial(p))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })
}

/// Output of one command run. No timestamps, so identical runs give
/// identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: Value,
    pub params: Value,
    pub outputs: Value,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, params: Value, outputs: Value) -> Self {
        RunReport {
            command: command.to_string(),
            version: VERSION.to_string(),
            inputs,
            params,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}
