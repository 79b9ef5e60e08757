//! File formats, parallel sweeps and the `qhe` command-line tool built on
//! [`qhe_core`].

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;

use qhe_core::sweep::{evaluate_point, grid, Observable, SweepRecord, SweepSpec};
use rayon::prelude::*;

pub use error::{CliError, Result};

/// Runs a sweep, fanning the grid out over the rayon pool when `parallel`.
/// Records come back in row-major grid order either way.
pub fn run_sweep(spec: &SweepSpec, parallel: bool) -> Result<Vec<SweepRecord>> {
    let points = grid(spec)?;
    Ok(if parallel {
        points.par_iter().map(|p| evaluate_point(spec, p)).collect()
    } else {
        points.iter().map(|p| evaluate_point(spec, p)).collect()
    })
}

/// Runs several sweeps back to back and returns the records together with
/// the union of their observable columns in canonical order.
pub fn run_all(specs: &[SweepSpec], parallel: bool) -> Result<(Vec<SweepRecord>, Vec<Observable>)> {
    let mut records = Vec::new();
    for s in specs {
        records.extend(run_sweep(s, parallel)?);
    }
    let columns = Observable::ALL
        .into_iter()
        .filter(|o| specs.iter().any(|s| s.wants(*o)))
        .collect();
    Ok((records, columns))
}
