//! TOML sweep files.
//!
//! One sweep per file:
//!
//! ```toml
//! case = "four_level"            # multi_ground | two_excited | four_level
//! observables = ["t_ratio", "regime"]
//!
//! [fixed]
//! nbar = 5.0
//!
//! [[axis]]                       # linear axis
//! param = "eps_g"
//! min = -1.0
//! max = 1.0
//! steps = 201
//! endpoint = true                # optional, default true
//!
//! [[axis]]                       # explicit values (required for n_levels)
//! param = "eps_e"
//! values = [-0.5, 0.0, 0.1]
//! ```
//!
//! Overrides of the form `key=value` are applied to the parsed document
//! before it is interpreted. Keys are dotted paths, with array indices as
//! plain numbers (`fixed.nbar=2`, `axis.0.steps=11`); values are TOML
//! literals, and anything that does not parse as one is taken as a string.

use std::path::Path;

use qhe_core::sweep::{Axis, Case, Observable, Param, SweepSpec};
use qhe_core::Error;
use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    case: String,
    observables: Vec<String>,
    #[serde(default)]
    fixed: Table,
    #[serde(default)]
    axis: Vec<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    param: String,
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<usize>,
    endpoint: Option<bool>,
    values: Option<Vec<f64>>,
}

fn spec_error(path: impl Into<String>, reason: impl Into<String>) -> CliError {
    CliError::Model(Error::Spec {
        path: path.into(),
        reason: reason.into(),
    })
}

fn parse_param(path: &str, name: &str) -> Result<Param> {
    Param::parse(name).ok_or_else(|| {
        let known: Vec<_> = Param::ALL.iter().map(|p| p.as_str()).collect();
        spec_error(
            path,
            format!(
                "unknown parameter `{name}`; expected one of {}",
                known.join(", ")
            ),
        )
    })
}

fn convert(raw: RawSpec) -> Result<SweepSpec> {
    let case = Case::parse(&raw.case).ok_or_else(|| {
        spec_error(
            "case",
            format!(
                "unknown case `{}`; expected multi_ground, two_excited or four_level",
                raw.case
            ),
        )
    })?;
    let observables = raw
        .observables
        .iter()
        .enumerate()
        .map(|(i, o)| {
            Observable::parse(o).ok_or_else(|| {
                spec_error(
                    format!("observables[{i}]"),
                    format!("unknown observable `{o}`"),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fixed = Vec::new();
    for (key, value) in &raw.fixed {
        let path = format!("fixed.{key}");
        let param = parse_param(&path, key)?;
        let v = match value {
            Value::Float(f) => *f,
            Value::Integer(i) => *i as f64,
            _ => return Err(spec_error(path, "expected a number")),
        };
        fixed.push((param, v));
    }
    let mut axes = Vec::new();
    for (i, a) in raw.axis.into_iter().enumerate() {
        let base = format!("axes[{i}]");
        let param = parse_param(&format!("{base}.param"), &a.param)?;
        let axis = match (a.values, a.min, a.max, a.steps) {
            (Some(values), None, None, None) => {
                if a.endpoint.is_some() {
                    return Err(spec_error(
                        format!("{base}.endpoint"),
                        "only valid for min/max axes",
                    ));
                }
                Axis::Values { param, values }
            }
            (None, Some(min), Some(max), Some(steps)) => Axis::Linspace {
                param,
                min,
                max,
                steps,
                endpoint: a.endpoint.unwrap_or(true),
            },
            (Some(_), ..) => {
                return Err(spec_error(
                    base,
                    "give either `values` or `min`, `max` and `steps`, not both",
                ))
            }
            (None, None, ..) => return Err(spec_error(format!("{base}.min"), "missing")),
            (None, _, None, _) => return Err(spec_error(format!("{base}.max"), "missing")),
            (None, _, _, None) => return Err(spec_error(format!("{base}.steps"), "missing")),
        };
        axes.push(axis);
    }
    let spec = SweepSpec {
        case,
        fixed,
        axes,
        observables,
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_literal(text: &str) -> Value {
    match format!("v = {text}").parse::<Table>() {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| Value::String(text.to_string())),
        Err(_) => Value::String(text.to_string()),
    }
}

fn apply_override(doc: &mut Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment.split_once('=').ok_or_else(|| {
        CliError::Usage(format!(
            "override `{assignment}` is not of the form key=value"
        ))
    })?;
    let segments: Vec<&str> = key.trim().split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(CliError::Usage(format!(
            "override key `{key}` has an empty segment"
        )));
    }
    let value = parse_literal(value.trim());
    let (last, parents) = segments.split_last().expect("non-empty split");

    let mut current = doc
        .entry(segments[0].to_string())
        .or_insert_with(|| Value::Table(Table::new()));
    if parents.is_empty() {
        *current = value;
        return Ok(());
    }
    for seg in &segments[1..segments.len() - 1] {
        current = step_into(current, seg, key)?;
    }
    match current {
        Value::Table(t) => {
            t.insert(last.to_string(), value);
        }
        Value::Array(items) => {
            let idx = index(last, items.len(), key)?;
            items[idx] = value;
        }
        _ => {
            return Err(CliError::Usage(format!(
                "override `{key}`: `{last}` is not inside a table"
            )))
        }
    }
    Ok(())
}

fn index(seg: &str, len: usize, key: &str) -> Result<usize> {
    seg.parse::<usize>()
        .ok()
        .filter(|i| *i < len)
        .ok_or_else(|| CliError::Usage(format!("override `{key}`: no element `{seg}`")))
}

fn step_into<'a>(v: &'a mut Value, seg: &str, key: &str) -> Result<&'a mut Value> {
    match v {
        Value::Table(t) => Ok(t
            .entry(seg.to_string())
            .or_insert_with(|| Value::Table(Table::new()))),
        Value::Array(items) => {
            let idx = index(seg, items.len(), key)?;
            Ok(&mut items[idx])
        }
        _ => Err(CliError::Usage(format!(
            "override `{key}`: `{seg}` is not inside a table"
        ))),
    }
}

/// Parses a sweep document and applies `key=value` overrides.
pub fn parse_spec(text: &str, overrides: &[String]) -> Result<SweepSpec> {
    let mut doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| spec_error("<document>", e.message().to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let raw: RawSpec = Value::Table(doc)
        .try_into()
        .map_err(|e: toml::de::Error| spec_error("<document>", e.message().to_string()))?;
    convert(raw)
}

/// Reads and parses a sweep file; read failures are I/O errors.
pub fn load_spec(path: &Path, overrides: &[String]) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text, overrides)
}
