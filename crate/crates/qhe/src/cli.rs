//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qhe_core::atoms::{
    chi_bounds, epsilon_e_bounds, validate_positivity, AtomConfiguration, CoherenceBounds,
    FourLevelAtom, MultiGroundAtom, PositivityReport, TwoExcitedAtom,
};
use qhe_core::dynamics::{birth_death_steady_state, evolve_mean_photon, rate_coefficients};
use qhe_core::engine::{
    quantum_efficiency, single_bath_cooling_efficiency, single_bath_heating_efficiency,
};
use qhe_core::steady_state::{steady_state, temperature_ratio, PhotonCount};
use qhe_core::sweep::{figure_preset, Case};
use qhe_core::units::temperature_from_mean_photon;
use qhe_core::{EffectiveTemperature, MeanPhotonNumber};

use crate::emit::{self, Format};
use crate::error::{CliError, Result};

const AFTER_HELP: &str = "\
Exit codes: 0 success, 1 domain, validation or usage error, 2 I/O error.

CSV columns: case, n_levels, chi, eps_g, eps_e, nbar, nbar_cold, validity,
detail, cancellation_cell, then the requested observables among
nbar_q, t_ratio, eta_q, regime (in that order). Floats use 17 significant
digits; cells without a value are left empty.";

#[derive(Debug, Parser)]
#[command(name = "qhe", version, about = "Coherence-assisted photon heat engine model", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the atomic state is a density matrix and report the coherence bounds.
    Validate(AtomArgs),
    /// Steady photon number, effective temperature and regime at one point.
    Steady(AtomArgs),
    /// Mean photon number trajectory as CSV (tau, nbar).
    Evolve {
        #[command(flatten)]
        atom: AtomArgs,
        /// Initial mean photon number.
        #[arg(long, default_value_t = 0.0)]
        nbar0: f64,
        /// End time; defaults to 10 relaxation times.
        #[arg(long)]
        tau_end: Option<f64>,
        /// Step; defaults to 1/100 of a relaxation time.
        #[arg(long)]
        dtau: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the closed-form steady state with the birth-death chain.
    Oracle {
        #[command(flatten)]
        atom: AtomArgs,
        /// Probability allowed in the truncated tail.
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
    },
    /// Quantum efficiency at one point.
    Efficiency(EfficiencyArgs),
    /// Run the sweep described by a TOML file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Override a spec entry, e.g. `fixed.nbar=2` or `axis.0.steps=11`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit the dataset behind a figure: fig3a, fig3b, fig4a or fig4b.
    Figure {
        preset: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
struct AtomArgs {
    /// multi_ground, two_excited or four_level.
    #[arg(long)]
    case: Case,
    /// Number of ground levels (multi_ground).
    #[arg(long)]
    n_levels: Option<u32>,
    /// Normalized ground coherence xi/p (multi_ground).
    #[arg(long, allow_negative_numbers = true)]
    chi: Option<f64>,
    /// Ground coherence (four_level).
    #[arg(long, allow_negative_numbers = true)]
    eps_g: Option<f64>,
    /// Excited coherence (two_excited, four_level).
    #[arg(long, allow_negative_numbers = true)]
    eps_e: Option<f64>,
    /// Thermal photon number of the bath the atoms come from.
    #[arg(long)]
    nbar: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
    /// Evaluate the grid on one thread.
    #[arg(long)]
    serial: bool,
}

#[derive(Debug, Args)]
struct EfficiencyArgs {
    /// Ground coherence; alternatively give --n-levels and --chi.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["n_levels", "chi"])]
    eps_g: Option<f64>,
    #[arg(long, requires = "chi")]
    n_levels: Option<u32>,
    #[arg(long, allow_negative_numbers = true, requires = "n_levels")]
    chi: Option<f64>,
    /// Hot bath photon number.
    #[arg(long)]
    nbar: f64,
    /// Cold bath photon number; defaults to --nbar (single bath).
    #[arg(long)]
    nbar_cold: Option<f64>,
}

fn photon_number(name: &str, v: f64) -> Result<MeanPhotonNumber> {
    MeanPhotonNumber::positive(v)
        .map_err(|_| CliError::Usage(format!("--{name} must be positive, got {v}")))
}

fn require<T>(v: Option<T>, flag: &str, case: Case) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for case {case}")))
}

fn reject<T>(v: Option<T>, flag: &str, case: Case) -> Result<()> {
    match v {
        Some(_) => Err(CliError::Usage(format!(
            "--{flag} does not apply to case {case}"
        ))),
        None => Ok(()),
    }
}

impl AtomArgs {
    fn bath(&self) -> Result<MeanPhotonNumber> {
        photon_number("nbar", self.nbar)
    }

    /// Thermal atom with the requested coherence, checked for positivity.
    fn atom(&self) -> Result<AtomConfiguration> {
        self.build(true)
    }

    fn build(&self, checked: bool) -> Result<AtomConfiguration> {
        let nb = self.bath()?;
        let c = self.case;
        Ok(match c {
            Case::MultiGround => {
                reject(self.eps_g, "eps-g", c)?;
                reject(self.eps_e, "eps-e", c)?;
                let n = require(self.n_levels, "n-levels", c)?;
                let chi = require(self.chi, "chi", c)?;
                if checked {
                    MultiGroundAtom::thermal(n, chi, nb)?.into()
                } else {
                    MultiGroundAtom::thermal_unchecked(n, chi, nb)?.into()
                }
            }
            Case::TwoExcited => {
                reject(self.n_levels, "n-levels", c)?;
                reject(self.chi, "chi", c)?;
                reject(self.eps_g, "eps-g", c)?;
                let eps_e = require(self.eps_e, "eps-e", c)?;
                if checked {
                    TwoExcitedAtom::thermal(eps_e, nb)?.into()
                } else {
                    TwoExcitedAtom::thermal_unchecked(eps_e, nb)?.into()
                }
            }
            Case::FourLevel => {
                reject(self.n_levels, "n-levels", c)?;
                reject(self.chi, "chi", c)?;
                let (eps_g, eps_e) = (
                    require(self.eps_g, "eps-g", c)?,
                    require(self.eps_e, "eps-e", c)?,
                );
                if checked {
                    FourLevelAtom::thermal(eps_g, eps_e, nb)?.into()
                } else {
                    FourLevelAtom::thermal_unchecked(eps_g, eps_e, nb)?.into()
                }
            }
        })
    }
}

fn open_output<'a>(path: Option<&Path>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(out)),
    })
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_bounds(b: &CoherenceBounds) -> String {
    format!(
        "{}{}, {}{}",
        if b.lower_open { "(" } else { "[" },
        fmt_float(b.lower),
        fmt_float(b.upper),
        if b.upper_open { ")" } else { "]" }
    )
}

fn fmt_temperature(t: EffectiveTemperature) -> String {
    match t {
        EffectiveTemperature::Finite(t) => fmt_float(t.get()),
        EffectiveTemperature::Zero => "zero".into(),
        EffectiveTemperature::Divergent => "divergent".into(),
    }
}

fn print_lines(out: &mut dyn Write, lines: &[(&str, String)]) -> Result<()> {
    for (k, v) in lines {
        writeln!(out, "{k}={v}").map_err(|e| CliError::io("<stdout>", e))?;
    }
    Ok(())
}

fn validate(args: &AtomArgs, out: &mut dyn Write) -> Result<()> {
    let nb = args.bath()?;
    let atom = args.build(false)?;
    let report = validate_positivity(&atom);
    let mut lines = vec![
        (
            "psd",
            if report.is_valid() {
                "valid"
            } else {
                "violation"
            }
            .to_string(),
        ),
        ("min_eigenvalue", fmt_float(report.min_eigenvalue())),
        ("eps_g", fmt_float(atom.epsilon_g())),
        ("eps_e", fmt_float(atom.epsilon_e())),
    ];
    if let PositivityReport::Violation { constraint, .. } = report {
        lines.push(("constraint", constraint.to_string()));
    }
    if let (Case::MultiGround, Some(n)) = (args.case, args.n_levels) {
        if n >= 2 {
            lines.push(("chi_bounds", fmt_bounds(&chi_bounds(n, nb)?)));
        }
    }
    if args.case != Case::MultiGround {
        lines.push(("eps_e_bounds", fmt_bounds(&epsilon_e_bounds(nb))));
    }
    print_lines(out, &lines)?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Usage(
            "atomic state is not positive semidefinite".into(),
        ))
    }
}

fn steady(args: &AtomArgs, out: &mut dyn Write) -> Result<()> {
    let nb = args.bath()?;
    let atom = args.atom()?;
    let ss = steady_state(&atom, nb).map_err(|u| {
        CliError::Usage(format!(
            "no physical steady state: {} (denominator {})",
            u.constraint, u.denominator
        ))
    })?;
    let nbar_q = match ss.nbar_q {
        PhotonCount::Finite(q) => fmt_float(q.get()),
        PhotonCount::Divergent => "divergent".into(),
    };
    print_lines(
        out,
        &[
            ("nbar_q", nbar_q),
            ("t_q", fmt_temperature(ss.temperature)),
            ("t_bath", fmt_temperature(temperature_from_mean_photon(nb))),
            (
                "t_ratio",
                temperature_ratio(ss.temperature, nb)
                    .map(fmt_float)
                    .unwrap_or_else(|| "divergent".into()),
            ),
            ("regime", ss.regime.as_str().to_string()),
        ],
    )
}

fn evolve(
    atom: &AtomArgs,
    nbar0: f64,
    tau_end: Option<f64>,
    dtau: Option<f64>,
    output: &OutputArgs,
    out: &mut dyn Write,
) -> Result<()> {
    let coeffs = rate_coefficients(&atom.atom()?);
    let rate = coeffs.relaxation_rate();
    let tau_end = match tau_end {
        Some(t) => t,
        None if rate > 0.0 => 10.0 / rate,
        None => {
            return Err(CliError::Usage(
                "no steady state; give --tau-end and --dtau".into(),
            ))
        }
    };
    let dtau = match dtau {
        Some(d) => d,
        None if rate > 0.0 => coeffs.default_dtau()?,
        None => tau_end / 1000.0,
    };
    let traj = evolve_mean_photon(&coeffs, nbar0, tau_end, dtau)?;
    let path = output.output.as_deref();
    let name = path
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "<stdout>".into());
    let mut w = open_output(path, out)?;
    let io = |e| CliError::Io {
        path: name.clone(),
        source: e,
    };
    writeln!(w, "tau,nbar").map_err(io)?;
    for (t, v) in traj.times.iter().zip(&traj.values) {
        writeln!(w, "{},{}", fmt_float(*t), fmt_float(*v)).map_err(io)?;
    }
    w.flush().map_err(io)?;
    if traj.diverged {
        eprintln!("warning: photon number exceeded the divergence cap; trajectory truncated");
    }
    Ok(())
}

fn oracle(args: &AtomArgs, tail_tol: f64, out: &mut dyn Write) -> Result<()> {
    let nb = args.bath()?;
    let atom = args.atom()?;
    let analytic = match steady_state(&atom, nb) {
        Ok(ss) => match ss.nbar_q {
            PhotonCount::Finite(q) => q.get(),
            PhotonCount::Divergent => {
                return Err(CliError::Usage("steady photon number diverges".into()))
            }
        },
        Err(u) => {
            return Err(CliError::Usage(format!(
                "no physical steady state: {}",
                u.constraint
            )))
        }
    };
    let dist = birth_death_steady_state(&rate_coefficients(&atom), tail_tol)?;
    let mean = dist.mean();
    let residual = if analytic == 0.0 {
        mean.abs()
    } else {
        ((mean - analytic) / analytic).abs()
    };
    print_lines(
        out,
        &[
            ("analytic", fmt_float(analytic)),
            ("oracle", fmt_float(mean)),
            ("relative_residual", fmt_float(residual)),
            ("n_max", dist.n_max().to_string()),
            ("tail_mass", fmt_float(dist.tail_mass())),
        ],
    )
}

fn efficiency(args: &EfficiencyArgs, out: &mut dyn Write) -> Result<()> {
    let nh = photon_number("nbar", args.nbar)?;
    let nc = match args.nbar_cold {
        Some(c) => photon_number("nbar-cold", c)?,
        None => nh,
    };
    let single_bath = nc.get() == nh.get();
    let (eps_g, eta_q) = match (args.eps_g, args.n_levels, args.chi) {
        (Some(e), ..) => (e, quantum_efficiency(e, nc, nh)?),
        (None, Some(n), Some(chi)) if single_bath => {
            let eta = if chi > 0.0 {
                single_bath_cooling_efficiency(n, chi, nh)?
            } else {
                single_bath_heating_efficiency(n, chi, nh)?
            };
            (chi * n.saturating_sub(1) as f64, eta)
        }
        (None, Some(n), Some(chi)) => {
            let e = chi * n.saturating_sub(1) as f64;
            (e, quantum_efficiency(e, nc, nh)?)
        }
        _ => {
            return Err(CliError::Usage(
                "give --eps-g, or --n-levels with --chi".into(),
            ))
        }
    };
    let t = |n| {
        temperature_from_mean_photon(n)
            .finite()
            .expect("positive photon number")
    };
    print_lines(
        out,
        &[
            ("eps_g", fmt_float(eps_g)),
            ("eta_carnot", fmt_float(1.0 - t(nc) / t(nh))),
            ("eta_q", fmt_float(eta_q)),
            (
                "regime",
                if eps_g > 0.0 { "cooling" } else { "heating" }.to_string(),
            ),
        ],
    )
}

fn run_specs(
    specs: &[qhe_core::sweep::SweepSpec],
    run: &RunArgs,
    out: &mut dyn Write,
) -> Result<()> {
    let (records, columns) = crate::run_all(specs, !run.serial)?;
    let path = run.output.output.as_deref();
    let mut w = open_output(path, out)?;
    let relabel = |e: CliError| match (e, path) {
        (CliError::Io { source, .. }, Some(p)) => CliError::io(p, source),
        (e, _) => e,
    };
    emit::write(&mut w, run.format, &records, &columns).map_err(relabel)?;
    w.flush()
        .map_err(|e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Validate(a) => validate(&a, out),
        Command::Steady(a) => steady(&a, out),
        Command::Evolve {
            atom,
            nbar0,
            tau_end,
            dtau,
            output,
        } => evolve(&atom, nbar0, tau_end, dtau, &output, out),
        Command::Oracle { atom, tail_tol } => oracle(&atom, tail_tol, out),
        Command::Efficiency(a) => efficiency(&a, out),
        Command::Sweep {
            spec,
            overrides,
            run,
        } => {
            let spec = crate::config::load_spec(&spec, &overrides)?;
            run_specs(&[spec], &run, out)
        }
        Command::Figure { preset, run } => {
            let specs = figure_preset(&preset).map_err(|e| CliError::Usage(e.to_string()))?;
            run_specs(&specs, &run, out)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
/// Key-value reports go to `out`; diagnostics go to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, out).and_then(|()| out.flush().map_err(|e| CliError::io("<stdout>", e))) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
