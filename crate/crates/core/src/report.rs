//! Machine-readable and tabular output.
//!
//! JSON is written by hand from a [`serde_json::Value`] so that keys are
//! sorted and every float carries 17 significant digits; identical inputs
//! give byte-identical documents.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::DiffMode;
use crate::identities::VerificationReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Canonical JSON text of any serializable value.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            let flat = items.iter().all(|x| !x.is_array() && !x.is_object());
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if flat {
                    if i > 0 {
                        out.push(' ');
                    }
                } else {
                    out.push('\n');
                    pad(out, depth + 1);
                }
                write_value(out, x, depth + 1);
            }
            if !flat {
                out.push('\n');
                pad(out, depth);
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(out, depth + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], depth + 1);
            }
            out.push('\n');
            pad(out, depth);
            out.push('}');
        }
    }
}

/// Scientific notation with 17 significant digits; `null` when not finite.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// The verification document: `{schema_version, seed, mode, cells}`.
pub fn sweep_json(reports: &[VerificationReport], seed: u64, mode: DiffMode) -> Result<String> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "mode": mode,
        "cells": reports,
    });
    to_json(&doc)
}

/// Aligned table with one row per cell and a summary line.
pub fn sweep_table(reports: &[VerificationReport]) -> String {
    let header = [
        "identity",
        "manifold",
        "field",
        "t",
        "samples",
        "max_residual",
        "mean_residual",
        "status",
    ];
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            let status = if let Some(s) = &r.skipped_reason {
                format!("skip ({s})")
            } else if r.pass {
                "pass".into()
            } else if let Some(e) = &r.error {
                format!("FAIL ({e})")
            } else {
                "FAIL".into()
            };
            let num = |x: Option<f64>| x.map_or("-".into(), |v| format!("{v:.3e}"));
            [
                r.identity.clone(),
                r.manifold.clone(),
                r.field.clone(),
                format!("{}", r.t),
                r.samples.to_string(),
                num(r.max_residual),
                num(r.mean_residual),
                status,
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[&str]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{:<w$}  ", c, w = widths[i]);
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut out, &header);
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&mut out, &cells);
    }
    let pass = reports.iter().filter(|r| r.pass && !r.skipped()).count();
    let fail = reports.iter().filter(|r| r.failed()).count();
    let skip = reports.iter().filter(|r| r.skipped()).count();
    let _ = writeln!(out, "{pass} passed, {fail} failed, {skip} skipped");
    out
}

/// Writes `reports` to `sink` (stdout when `None`).
pub fn emit_report(
    reports: &[VerificationReport],
    format: Format,
    sink: Option<&Path>,
    seed: u64,
    mode: DiffMode,
) -> Result<()> {
    let text = match format {
        Format::Json => sweep_json(reports, seed, mode)?,
        Format::Text => sweep_table(reports),
    };
    write_sink(&text, sink)
}

pub fn write_sink(text: &str, sink: Option<&Path>) -> Result<()> {
    match sink {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::SinkUnwritable(format!("stdout: {e}")))
        }
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::SinkUnwritable(format!("{}: {e}", p.display()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let s = sweep_json(&[], 42, DiffMode::ForwardExact).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["cells"], json!([]));
        assert_eq!(v["mode"], "forward_exact");
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn floats_are_fixed_width_and_keys_sorted() {
        let s = to_json(&json!({"b": 0.1, "a": [1.0, -2.0], "c": f64::NAN})).unwrap();
        assert_eq!(
            s,
            "{\n  \"a\": [1.0000000000000000e0, -2.0000000000000000e0],\n  \"b\": 1.0000000000000001e-1,\n  \"c\": null\n}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn unwritable_sink() {
        let err = write_sink("x", Some(Path::new("/nonexistent-dir/out.json"))).unwrap_err();
        assert!(matches!(err, Error::SinkUnwritable(_)));
    }
}
