//! Report model and deterministic serialization.
//!
//! JSON output is a single object {command, config, results, warnings}
//! with all floating-point numbers printed with 17 significant digits
//! (round-trip exact for f64). Map keys are sorted, so a fixed config
//! always produces identical bytes.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

/// Compact JSON with f64 pinned to 17 significant digits.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

impl Report {
    pub fn write(&self, out: &mut dyn Write, format: Format) -> io::Result<()> {
        match format {
            Format::Json => {
                let mut ser = serde_json::Serializer::with_formatter(&mut *out, SciFormatter);
                self.serialize(&mut ser).map_err(io::Error::other)?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
            Format::Text => self.write_text(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "section,key,value")?;
        writeln!(out, "command,,{}", self.command)?;
        write_csv_value(out, "config", "", &self.config)?;
        write_csv_value(out, "results", "", &self.results)?;
        for (i, w) in self.warnings.iter().enumerate() {
            writeln!(out, "warning,{i},{}", csv_quote(w))?;
        }
        Ok(())
    }

    fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "command: {}", self.command)?;
        writeln!(out, "config:")?;
        write_text_value(out, 1, &self.config)?;
        writeln!(out, "results:")?;
        write_text_value(out, 1, &self.results)?;
        if !self.warnings.is_empty() {
            writeln!(out, "warnings:")?;
            for w in &self.warnings {
                writeln!(out, "  WARN {w}")?;
            }
        }
        Ok(())
    }
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "null".into(),
        _ => String::new(),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_csv_value(out: &mut dyn Write, section: &str, prefix: &str, v: &Value) -> io::Result<()> {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                write_csv_value(out, section, &key, inner)?;
            }
            Ok(())
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                let key = if prefix.is_empty() {
                    i.to_string()
                } else {
                    format!("{prefix}.{i}")
                };
                write_csv_value(out, section, &key, inner)?;
            }
            Ok(())
        }
        scalar => writeln!(
            out,
            "{section},{},{}",
            csv_quote(prefix),
            csv_quote(&scalar_to_string(scalar))
        ),
    }
}

fn write_text_value(out: &mut dyn Write, depth: usize, v: &Value) -> io::Result<()> {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                match inner {
                    Value::Object(_) | Value::Array(_) => {
                        writeln!(out, "{pad}{k}:")?;
                        write_text_value(out, depth + 1, inner)?;
                    }
                    scalar => writeln!(out, "{pad}{k} = {}", scalar_to_string(scalar))?,
                }
            }
            Ok(())
        }
        Value::Array(items) => {
            for inner in items {
                match inner {
                    Value::Object(_) | Value::Array(_) => {
                        writeln!(out, "{pad}-")?;
                        write_text_value(out, depth + 1, inner)?;
                    }
                    scalar => writeln!(out, "{pad}- {}", scalar_to_string(scalar))?,
                }
            }
            Ok(())
        }
        scalar => writeln!(out, "{pad}{}", scalar_to_string(scalar)),
    }
}

/// Rational-radical rendering: values of the closed-form tables are all
/// p/q or p/q * sqrt(2) with small denominators. Returns `None` when no
/// such representation matches.
pub fn exact_string(v: f64) -> Option<String> {
    const SQRT_2: f64 = std::f64::consts::SQRT_2;
    for (scale, suffix) in [(1.0, ""), (SQRT_2, "*sqrt(2)")] {
        let x = v / scale;
        for q in 1..=12u32 {
            let p = (x * q as f64).round();
            if p.abs() > 1e6 {
                continue;
            }
            if (x - p / q as f64).abs() < 1e-9 {
                if p == 0.0 {
                    return Some("0".into());
                }
                let frac = if q == 1 {
                    format!("{}", p as i64)
                } else {
                    format!("{}/{q}", p as i64)
                };
                return Some(if suffix.is_empty() {
                    frac
                } else if p == 1.0 && q == 1 {
                    "sqrt(2)".into()
                } else if p == -1.0 && q == 1 {
                    "-sqrt(2)".into()
                } else {
                    format!("{frac}{suffix}")
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_strings() {
        assert_eq!(exact_string(1.5).as_deref(), Some("3/2"));
        assert_eq!(exact_string(-0.5).as_deref(), Some("-1/2"));
        assert_eq!(exact_string(0.0).as_deref(), Some("0"));
        assert_eq!(
            exact_string(1.5 * std::f64::consts::SQRT_2).as_deref(),
            Some("3/2*sqrt(2)")
        );
        assert_eq!(
            exact_string(std::f64::consts::SQRT_2).as_deref(),
            Some("sqrt(2)")
        );
        assert_eq!(
            exact_string(std::f64::consts::FRAC_1_SQRT_2).as_deref(),
            Some("1/2*sqrt(2)")
        );
        assert!(exact_string(0.123456789).is_none());
    }

    #[test]
    fn json_numbers_have_17_digits() {
        let report = Report {
            command: "probe".into(),
            config: serde_json::json!({}),
            results: serde_json::json!({ "x": 1.5 }),
            warnings: vec![],
        };
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Json).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("1.5000000000000000e0"), "{s}");
        // Round-trips exactly.
        let v: Value = serde_json::from_str(s.trim()).unwrap();
        assert_eq!(v["results"]["x"].as_f64(), Some(1.5));
    }
}
