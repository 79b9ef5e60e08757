//! CSV and JSON output of sweep records.
//!
//! CSV columns, in order:
//!
//! `case, n_levels, chi, eps_g, eps_e, nbar, nbar_cold, validity, detail,
//! cancellation_cell`, then the requested observables in the order
//! `nbar_q, t_ratio, eta_q, regime`.
//!
//! Floats are written as `{:.16e}` (17 significant digits), missing values
//! as empty fields, booleans as `true`/`false`, lines end in LF.
//!
//! JSON is an array of objects with the same keys in the same order; every
//! observable key is present and `null` when absent. Numbers use the
//! shortest representation that parses back to the same `f64`.

use std::io::Write;

use qhe_core::steady_state::RegimeLabel;
use qhe_core::sweep::{Case, Observable, Observables, RecordInputs, SweepRecord, Validity};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}`; expected csv or json")),
        }
    }
}

pub const INPUT_COLUMNS: [&str; 10] = [
    "case",
    "n_levels",
    "chi",
    "eps_g",
    "eps_e",
    "nbar",
    "nbar_cold",
    "validity",
    "detail",
    "cancellation_cell",
];

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> CliError {
    let kind = match e.kind() {
        csv::ErrorKind::Io(io) => io.kind(),
        _ => std::io::ErrorKind::Other,
    };
    CliError::io("<csv output>", std::io::Error::new(kind, e.to_string()))
}

/// Writes the header and one row per record.
pub fn write_csv<W: Write>(out: W, records: &[SweepRecord], columns: &[Observable]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = INPUT_COLUMNS.to_vec();
    header.extend(columns.iter().map(|o| o.as_str()));
    w.write_record(&header).map_err(csv_error)?;
    for r in records {
        let i = &r.inputs;
        let mut row = vec![
            r.case.as_str().to_string(),
            i.n_levels.map(|n| n.to_string()).unwrap_or_default(),
            opt_float(i.chi),
            float(i.eps_g),
            float(i.eps_e),
            float(i.nbar),
            float(i.nbar_cold),
            r.validity.as_str().to_string(),
            r.validity.detail().to_string(),
            r.cancellation_cell.to_string(),
        ];
        for o in columns {
            let o_ = &r.observables;
            row.push(match o {
                Observable::NbarQ => opt_float(o_.nbar_q),
                Observable::TRatio => opt_float(o_.t_ratio),
                Observable::EtaQ => opt_float(o_.eta_q),
                Observable::Regime => o_
                    .regime
                    .map(|g| g.as_str().to_string())
                    .unwrap_or_default(),
            });
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::io("<csv output>", e))
}

/// Flat JSON form of a [`SweepRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonRecord {
    pub case: String,
    pub n_levels: Option<u32>,
    pub chi: Option<f64>,
    pub eps_g: f64,
    pub eps_e: f64,
    pub nbar: f64,
    pub nbar_cold: f64,
    pub validity: String,
    pub detail: Option<String>,
    pub cancellation_cell: bool,
    pub nbar_q: Option<f64>,
    pub t_ratio: Option<f64>,
    pub eta_q: Option<f64>,
    pub regime: Option<String>,
}

impl From<&SweepRecord> for JsonRecord {
    fn from(r: &SweepRecord) -> Self {
        let detail = r.validity.detail();
        JsonRecord {
            case: r.case.as_str().to_string(),
            n_levels: r.inputs.n_levels,
            chi: r.inputs.chi,
            eps_g: r.inputs.eps_g,
            eps_e: r.inputs.eps_e,
            nbar: r.inputs.nbar,
            nbar_cold: r.inputs.nbar_cold,
            validity: r.validity.as_str().to_string(),
            detail: (!detail.is_empty()).then(|| detail.to_string()),
            cancellation_cell: r.cancellation_cell,
            nbar_q: r.observables.nbar_q,
            t_ratio: r.observables.t_ratio,
            eta_q: r.observables.eta_q,
            regime: r.observables.regime.map(|g| g.as_str().to_string()),
        }
    }
}

impl TryFrom<JsonRecord> for SweepRecord {
    type Error = CliError;

    fn try_from(j: JsonRecord) -> Result<Self> {
        let bad = |what: &str, v: &str| CliError::Usage(format!("unknown {what} `{v}`"));
        let case = Case::parse(&j.case).ok_or_else(|| bad("case", &j.case))?;
        let detail = j.detail.as_deref().unwrap_or("");
        let validity =
            Validity::parse(&j.validity, detail).ok_or_else(|| bad("validity", &j.validity))?;
        let regime = match j.regime {
            Some(s) => Some(RegimeLabel::parse(&s).ok_or_else(|| bad("regime", &s))?),
            None => None,
        };
        Ok(SweepRecord {
            case,
            inputs: RecordInputs {
                n_levels: j.n_levels,
                chi: j.chi,
                eps_g: j.eps_g,
                eps_e: j.eps_e,
                nbar: j.nbar,
                nbar_cold: j.nbar_cold,
            },
            validity,
            cancellation_cell: j.cancellation_cell,
            observables: Observables {
                nbar_q: j.nbar_q,
                t_ratio: j.t_ratio,
                eta_q: j.eta_q,
                regime,
            },
        })
    }
}

pub fn write_json<W: Write>(mut out: W, records: &[SweepRecord]) -> Result<()> {
    let rows: Vec<JsonRecord> = records.iter().map(JsonRecord::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows)
        .map_err(|e| CliError::io("<json output>", std::io::Error::other(e)))?;
    out.write_all(b"\n")
        .map_err(|e| CliError::io("<json output>", e))
}

pub fn read_json(text: &str) -> Result<Vec<SweepRecord>> {
    let rows: Vec<JsonRecord> = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("invalid record JSON: {e}")))?;
    rows.into_iter().map(SweepRecord::try_from).collect()
}

/// Writes `records` in `format`; CSV carries the given observable columns.
pub fn write<W: Write>(
    out: W,
    format: Format,
    records: &[SweepRecord],
    columns: &[Observable],
) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, records, columns),
        Format::Json => write_json(out, records),
    }
}
