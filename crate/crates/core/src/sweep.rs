//! Parameter sweeps over the steady-state and efficiency observables.
//!
//! A [`SweepSpec`] fixes some parameters and sweeps one or two others. The
//! grid is enumerated row-major (first axis outermost) and every cell yields a
//! [`SweepRecord`], including the cells that fall outside the physical region.
//! Cells are independent, so [`evaluate_point`] can be fanned out over workers
//! and the results reassembled in [`grid`] order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::atoms::{FourLevelAtom, MultiGroundAtom, TwoExcitedAtom};
use crate::engine::quantum_efficiency;
use crate::error::{Constraint, Error, Result};
use crate::steady_state::{
    classify_regime, effective_temperature_raw, steady_photon_number_raw, temperature_ratio,
    PhotonCount, RegimeLabel, CANCELLATION_TOLERANCE,
};
use crate::units::MeanPhotonNumber;

/// Atomic configuration selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    MultiGround,
    TwoExcited,
    FourLevel,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::MultiGround, Case::TwoExcited, Case::FourLevel];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::MultiGround => "multi_ground",
            Case::TwoExcited => "two_excited",
            Case::FourLevel => "four_level",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    fn allowed(self) -> &'static [Param] {
        match self {
            Case::MultiGround => &[Param::NLevels, Param::Chi, Param::Nbar, Param::NbarCold],
            Case::TwoExcited => &[Param::EpsE, Param::Nbar],
            Case::FourLevel => &[Param::EpsG, Param::EpsE, Param::Nbar],
        }
    }

    fn required(self) -> &'static [Param] {
        match self {
            Case::MultiGround => &[Param::NLevels, Param::Chi, Param::Nbar],
            Case::TwoExcited => &[Param::EpsE, Param::Nbar],
            Case::FourLevel => &[Param::EpsG, Param::EpsE, Param::Nbar],
        }
    }
}

/// Sweepable or fixable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    /// Number of degenerate ground levels `N` (integer).
    NLevels,
    /// `chi = xi / p`.
    Chi,
    EpsG,
    EpsE,
    /// Bath occupation; the hot bath when an efficiency is requested.
    Nbar,
    /// Cold bath occupation for efficiencies; defaults to `nbar` (single bath).
    NbarCold,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::NLevels,
        Param::Chi,
        Param::EpsG,
        Param::EpsE,
        Param::Nbar,
        Param::NbarCold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Param::NLevels => "n_levels",
            Param::Chi => "chi",
            Param::EpsG => "eps_g",
            Param::EpsE => "eps_e",
            Param::Nbar => "nbar",
            Param::NbarCold => "nbar_cold",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    NbarQ,
    TRatio,
    EtaQ,
    Regime,
}

impl Observable {
    /// Canonical column order.
    pub const ALL: [Observable; 4] = [
        Observable::NbarQ,
        Observable::TRatio,
        Observable::EtaQ,
        Observable::Regime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Observable::NbarQ => "nbar_q",
            Observable::TRatio => "t_ratio",
            Observable::EtaQ => "eta_q",
            Observable::Regime => "regime",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// `steps` evenly spaced values from `min` toward `max`; `max` itself is
    /// included only when `endpoint` is set.
    Linspace {
        param: Param,
        min: f64,
        max: f64,
        steps: usize,
        endpoint: bool,
    },
    /// Explicit values, e.g. the integer list for `n_levels`.
    Values { param: Param, values: Vec<f64> },
}

impl Axis {
    pub fn param(&self) -> Param {
        match self {
            Axis::Linspace { param, .. } | Axis::Values { param, .. } => *param,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Axis::Values { values, .. } => values.clone(),
            &Axis::Linspace {
                min,
                max,
                steps,
                endpoint,
                ..
            } => {
                let denom = if endpoint { steps - 1 } else { steps } as f64;
                (0..steps)
                    .map(|i| {
                        if endpoint && i + 1 == steps {
                            max
                        } else {
                            min + (max - min) * (i as f64 / denom)
                        }
                    })
                    .collect()
            }
        }
    }

    /// Half the spacing between neighbouring points of a linear axis.
    fn half_width(&self) -> f64 {
        match *self {
            Axis::Linspace {
                min,
                max,
                steps,
                endpoint,
                ..
            } => {
                let denom = if endpoint { steps - 1 } else { steps } as f64;
                0.5 * (max - min).abs() / denom
            }
            Axis::Values { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub case: Case,
    pub fixed: Vec<(Param, f64)>,
    pub axes: Vec<Axis>,
    pub observables: Vec<Observable>,
}

fn check_param_value(path: &str, param: Param, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::spec(path, "value must be finite"));
    }
    match param {
        Param::NLevels if v < 1.0 || v != libm::trunc(v) || v > u32::MAX as f64 => {
            Err(Error::spec(path, "n_levels must be a positive integer"))
        }
        Param::Nbar | Param::NbarCold if v <= 0.0 => {
            Err(Error::spec(path, "photon numbers must be positive"))
        }
        _ => Ok(()),
    }
}

impl SweepSpec {
    /// Checks the sweep is well formed; errors carry the offending field path.
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::spec("axes", "one or two axes are required"));
        }
        if self.observables.is_empty() {
            return Err(Error::spec(
                "observables",
                "at least one observable is required",
            ));
        }
        for (i, o) in self.observables.iter().enumerate() {
            if self.observables[..i].contains(o) {
                return Err(Error::spec(
                    format!("observables[{i}]"),
                    format!("duplicate `{}`", o.as_str()),
                ));
            }
            if *o == Observable::EtaQ && self.case != Case::MultiGround {
                return Err(Error::spec(
                    format!("observables[{i}]"),
                    "eta_q is only defined for the multi_ground case",
                ));
            }
        }
        let allowed = self.case.allowed();
        let mut seen: Vec<Param> = Vec::new();
        for (i, &(param, v)) in self.fixed.iter().enumerate() {
            let path = format!("fixed.{}", param.as_str());
            if !allowed.contains(&param) {
                return Err(Error::spec(
                    path,
                    format!("not a parameter of case `{}`", self.case.as_str()),
                ));
            }
            if seen.contains(&param) {
                return Err(Error::spec(path, "given more than once"));
            }
            check_param_value(&path, param, v)?;
            let _ = i;
            seen.push(param);
        }
        for (i, axis) in self.axes.iter().enumerate() {
            let param = axis.param();
            let base = format!("axes[{i}]");
            if !allowed.contains(&param) {
                return Err(Error::spec(
                    format!("{base}.param"),
                    format!(
                        "`{}` is not a parameter of case `{}`",
                        param.as_str(),
                        self.case.as_str()
                    ),
                ));
            }
            if seen.contains(&param) {
                return Err(Error::spec(
                    format!("{base}.param"),
                    format!(
                        "`{}` is both swept and fixed, or swept twice",
                        param.as_str()
                    ),
                ));
            }
            match axis {
                Axis::Linspace {
                    min, max, steps, ..
                } => {
                    if *steps < 2 {
                        return Err(Error::spec(
                            format!("{base}.steps"),
                            "steps must be at least 2",
                        ));
                    }
                    if param == Param::NLevels {
                        return Err(Error::spec(
                            format!("{base}.param"),
                            "n_levels takes an integer value list",
                        ));
                    }
                    if !(min.is_finite() && max.is_finite()) || min == max {
                        return Err(Error::spec(
                            format!("{base}.min"),
                            "min and max must be finite and distinct",
                        ));
                    }
                    for p in axis.points() {
                        check_param_value(&format!("{base}.min"), param, p)?;
                    }
                }
                Axis::Values { values, .. } => {
                    if values.is_empty() {
                        return Err(Error::spec(format!("{base}.values"), "value list is empty"));
                    }
                    for (j, &v) in values.iter().enumerate() {
                        check_param_value(&format!("{base}.values[{j}]"), param, v)?;
                    }
                }
            }
            seen.push(param);
        }
        for &param in self.case.required() {
            if !seen.contains(&param) {
                return Err(Error::spec(
                    format!("fixed.{}", param.as_str()),
                    format!(
                        "required by case `{}` but neither fixed nor swept",
                        self.case.as_str()
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    /// Observables in canonical column order.
    pub fn observable_columns(&self) -> Vec<Observable> {
        Observable::ALL
            .into_iter()
            .filter(|o| self.wants(*o))
            .collect()
    }
}

/// One cell of the grid: every parameter's value, fixed ones included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub assignments: Vec<(Param, f64)>,
}

impl GridPoint {
    pub fn get(&self, param: Param) -> Option<f64> {
        self.assignments
            .iter()
            .find(|(p, _)| *p == param)
            .map(|&(_, v)| v)
    }
}

/// Enumerates the grid row-major, first axis outermost.
pub fn grid(spec: &SweepSpec) -> Result<Vec<GridPoint>> {
    spec.validate()?;
    let axes: Vec<(Param, Vec<f64>)> = spec.axes.iter().map(|a| (a.param(), a.points())).collect();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; axes.len()];
    loop {
        let mut assignments = spec.fixed.clone();
        for (k, (param, pts)) in axes.iter().enumerate() {
            assignments.push((*param, pts[idx[k]]));
        }
        assignments.sort_by_key(|(p, _)| *p);
        out.push(GridPoint { assignments });
        // odometer, last axis fastest
        let mut k = axes.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Validity of a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The atom is not a density matrix, or an efficiency formula is outside
    /// its domain.
    OutOfBounds(Constraint),
    /// On the line where the steady photon number diverges.
    Divergent,
    /// Empty cavity, zero effective temperature.
    Zero,
    /// Negative steady photon number.
    Unphysical,
}

impl Validity {
    pub fn as_str(self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::OutOfBounds(_) => "out_of_bounds",
            Validity::Divergent => "divergent",
            Validity::Zero => "zero",
            Validity::Unphysical => "unphysical",
        }
    }

    /// The violated constraint for `OutOfBounds`, empty otherwise.
    pub fn detail(self) -> &'static str {
        match self {
            Validity::OutOfBounds(c) => c.as_str(),
            _ => "",
        }
    }

    pub fn parse(tag: &str, detail: &str) -> Option<Self> {
        Some(match tag {
            "valid" => Validity::Valid,
            "out_of_bounds" => Validity::OutOfBounds(Constraint::parse(detail)?),
            "divergent" => Validity::Divergent,
            "zero" => Validity::Zero,
            "unphysical" => Validity::Unphysical,
            _ => return None,
        })
    }
}

/// Parameter values of a cell in the fixed column set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordInputs {
    pub n_levels: Option<u32>,
    pub chi: Option<f64>,
    /// Derived as `chi (N - 1)` for the multi-ground case, 0 for two-excited.
    pub eps_g: f64,
    /// 0 for the multi-ground case.
    pub eps_e: f64,
    pub nbar: f64,
    pub nbar_cold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Observables {
    pub nbar_q: Option<f64>,
    pub t_ratio: Option<f64>,
    pub eta_q: Option<f64>,
    /// Present for every cell whose atom is a valid state, since the regime
    /// classification is total over the coherence plane.
    pub regime: Option<RegimeLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub case: Case,
    pub inputs: RecordInputs,
    pub validity: Validity,
    /// The cell of a 2-D `eps_g` x `eps_e` grid crosses the cancellation line.
    pub cancellation_cell: bool,
    pub observables: Observables,
}

fn inputs_for(case: Case, point: &GridPoint) -> RecordInputs {
    let nbar = point.get(Param::Nbar).unwrap_or(f64::NAN);
    let nbar_cold = point.get(Param::NbarCold).unwrap_or(nbar);
    match case {
        Case::MultiGround => {
            let n = point.get(Param::NLevels).unwrap_or(1.0) as u32;
            let chi = point.get(Param::Chi).unwrap_or(0.0);
            RecordInputs {
                n_levels: Some(n),
                chi: Some(chi),
                eps_g: chi * n.saturating_sub(1) as f64,
                eps_e: 0.0,
                nbar,
                nbar_cold,
            }
        }
        Case::TwoExcited => RecordInputs {
            n_levels: None,
            chi: None,
            eps_g: 0.0,
            eps_e: point.get(Param::EpsE).unwrap_or(0.0),
            nbar,
            nbar_cold,
        },
        Case::FourLevel => RecordInputs {
            n_levels: None,
            chi: None,
            eps_g: point.get(Param::EpsG).unwrap_or(0.0),
            eps_e: point.get(Param::EpsE).unwrap_or(0.0),
            nbar,
            nbar_cold,
        },
    }
}

/// Positivity of the atomic state behind a cell, via the library constructors.
fn psd_violation(case: Case, inputs: &RecordInputs, nbar: MeanPhotonNumber) -> Option<Constraint> {
    let res = match case {
        Case::MultiGround => match inputs.n_levels {
            Some(n) if n >= 2 => {
                MultiGroundAtom::thermal(n, inputs.chi.unwrap_or(0.0), nbar).map(|_| ())
            }
            _ => Ok(()),
        },
        Case::TwoExcited => TwoExcitedAtom::thermal(inputs.eps_e, nbar).map(|_| ()),
        Case::FourLevel => FourLevelAtom::thermal(inputs.eps_g, inputs.eps_e, nbar).map(|_| ()),
    };
    match res {
        Err(Error::Constraint { constraint, .. }) => Some(constraint),
        _ => None,
    }
}

fn cancellation_cell(spec: &SweepSpec, inputs: &RecordInputs) -> bool {
    let width = |param| {
        spec.axes
            .iter()
            .find(|a| a.param() == param)
            .map(Axis::half_width)
    };
    match (width(Param::EpsG), width(Param::EpsE)) {
        (Some(wg), Some(we)) => {
            (inputs.eps_g - inputs.eps_e).abs() <= wg + we + CANCELLATION_TOLERANCE
        }
        _ => false,
    }
}

/// Evaluates one grid cell. `spec` must have passed [`SweepSpec::validate`].
pub fn evaluate_point(spec: &SweepSpec, point: &GridPoint) -> SweepRecord {
    let case = spec.case;
    let inputs = inputs_for(case, point);
    let mut record = SweepRecord {
        case,
        inputs,
        validity: Validity::Valid,
        cancellation_cell: cancellation_cell(spec, &inputs),
        observables: Observables::default(),
    };
    let (Ok(nbar), Ok(nbar_cold)) = (
        MeanPhotonNumber::positive(inputs.nbar),
        MeanPhotonNumber::positive(inputs.nbar_cold),
    ) else {
        // validate() rejects non-positive photon numbers
        record.validity = Validity::OutOfBounds(Constraint::BathOrdering);
        return record;
    };
    if let Some(c) = psd_violation(case, &inputs, nbar) {
        record.validity = Validity::OutOfBounds(c);
        return record;
    }
    let (eps_g, eps_e) = (inputs.eps_g, inputs.eps_e);
    let regime = classify_regime(eps_g, eps_e, nbar);
    if spec.wants(Observable::Regime) {
        record.observables.regime = Some(regime);
    }

    // The efficiency formulas carry their own, open, domain. Check it first
    // so that cells past the bound are reported against it.
    let mut eta_q = None;
    if spec.wants(Observable::EtaQ) {
        if inputs.nbar_cold > inputs.nbar {
            record.validity = Validity::OutOfBounds(Constraint::BathOrdering);
            return record;
        }
        match quantum_efficiency(eps_g, nbar_cold, nbar) {
            Ok(v) => eta_q = Some(v),
            Err(Error::Constraint { constraint, .. }) => {
                record.validity = Validity::OutOfBounds(constraint);
                return record;
            }
            Err(_) => {
                record.validity = Validity::OutOfBounds(Constraint::BathOrdering);
                return record;
            }
        }
    }

    let count = match steady_photon_number_raw(eps_g, eps_e, nbar) {
        Err(_) => {
            record.validity = Validity::Unphysical;
            return record;
        }
        Ok(PhotonCount::Divergent) => {
            record.validity = Validity::Divergent;
            return record;
        }
        Ok(PhotonCount::Finite(q)) => q,
    };
    if count.get() == 0.0 {
        record.validity = Validity::Zero;
        return record;
    }
    if spec.wants(Observable::NbarQ) {
        record.observables.nbar_q = Some(count.get());
    }
    if spec.wants(Observable::TRatio) {
        record.observables.t_ratio = effective_temperature_raw(eps_g, eps_e, nbar)
            .ok()
            .and_then(|t| temperature_ratio(t, nbar));
    }
    record.observables.eta_q = eta_q;
    record
}

/// Serial sweep: validates, enumerates and evaluates every cell in order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    Ok(grid(spec)?
        .iter()
        .map(|p| evaluate_point(spec, p))
        .collect())
}

/// Datasets behind the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigurePreset {
    /// Single-bath heating efficiency versus `N`, `nbar_eq = 0.5`,
    /// `chi in {-0.01, -0.03, -0.05}`.
    Fig3a,
    /// Single-bath cooling efficiency versus `N`, `nbar_eq = 5`,
    /// `chi in {0.2, 0.6, 1}`.
    Fig3b,
    /// `T_q / T_bath` versus `eps_g` (two ground levels) and versus `eps_e`
    /// (two excited levels) at `nbar = 5`. The axes run over the physical
    /// range `[-1/(nbar+1), N-1]` with `N = 2` and `[-1, 1/nbar]`, endpoints
    /// included so the divergence is tagged.
    Fig4a,
    /// Four-level `T_q / T_bath` and regime over `eps_g in [-1, 1]` x
    /// `eps_e in [-1, 0.2)` at `nbar = 5`, 201 x 201 cells.
    Fig4b,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 4] = [
        FigurePreset::Fig3a,
        FigurePreset::Fig3b,
        FigurePreset::Fig4a,
        FigurePreset::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig3a => "fig3a",
            FigurePreset::Fig3b => "fig3b",
            FigurePreset::Fig4a => "fig4a",
            FigurePreset::Fig4b => "fig4b",
        }
    }

    pub fn specs(self) -> Vec<SweepSpec> {
        let n_levels = |from: u32, to: u32| Axis::Values {
            param: Param::NLevels,
            values: (from..=to).map(f64::from).collect(),
        };
        let chis = |values: &[f64]| Axis::Values {
            param: Param::Chi,
            values: values.to_vec(),
        };
        match self {
            FigurePreset::Fig3a => alloc::vec![SweepSpec {
                case: Case::MultiGround,
                fixed: alloc::vec![(Param::Nbar, 0.5)],
                axes: alloc::vec![chis(&[-0.01, -0.03, -0.05]), n_levels(2, 30)],
                observables: alloc::vec![Observable::EtaQ, Observable::NbarQ, Observable::TRatio],
            }],
            FigurePreset::Fig3b => alloc::vec![SweepSpec {
                case: Case::MultiGround,
                fixed: alloc::vec![(Param::Nbar, 5.0)],
                axes: alloc::vec![chis(&[0.2, 0.6, 1.0]), n_levels(1, 30)],
                observables: alloc::vec![Observable::EtaQ, Observable::NbarQ, Observable::TRatio],
            }],
            FigurePreset::Fig4a => {
                let nbar = 5.0;
                let obs = alloc::vec![Observable::NbarQ, Observable::TRatio, Observable::Regime];
                alloc::vec![
                    SweepSpec {
                        case: Case::MultiGround,
                        fixed: alloc::vec![(Param::NLevels, 2.0), (Param::Nbar, nbar)],
                        axes: alloc::vec![Axis::Linspace {
                            param: Param::Chi,
                            min: -1.0 / (nbar + 1.0),
                            max: 1.0,
                            steps: 1000,
                            endpoint: true,
                        }],
                        observables: obs.clone(),
                    },
                    SweepSpec {
                        case: Case::TwoExcited,
                        fixed: alloc::vec![(Param::Nbar, nbar)],
                        axes: alloc::vec![Axis::Linspace {
                            param: Param::EpsE,
                            min: -1.0,
                            max: 1.0 / nbar,
                            steps: 1000,
                            endpoint: true,
                        }],
                        observables: obs,
                    },
                ]
            }
            FigurePreset::Fig4b => alloc::vec![SweepSpec {
                case: Case::FourLevel,
                fixed: alloc::vec![(Param::Nbar, 5.0)],
                axes: alloc::vec![
                    Axis::Linspace {
                        param: Param::EpsG,
                        min: -1.0,
                        max: 1.0,
                        steps: 201,
                        endpoint: true,
                    },
                    Axis::Linspace {
                        param: Param::EpsE,
                        min: -1.0,
                        max: 0.2,
                        steps: 201,
                        endpoint: false,
                    },
                ],
                observables: alloc::vec![Observable::NbarQ, Observable::TRatio, Observable::Regime],
            }],
        }
    }
}

/// Looks up a preset by name.
pub fn figure_preset(name: &str) -> Result<Vec<SweepSpec>> {
    FigurePreset::ALL
        .into_iter()
        .find(|p| p.name() == name)
        .map(FigurePreset::specs)
        .ok_or_else(|| {
            let names: Vec<&str> = FigurePreset::ALL.iter().map(|p| p.name()).collect();
            Error::spec(
                "preset",
                format!(
                    "unknown preset `{name}`; expected one of {}",
                    names.join(", ")
                ),
            )
        })
}

impl core::fmt::Display for Case {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Param {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        Param::parse(s).ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

impl core::str::FromStr for Observable {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        Observable::parse(s).ok_or_else(|| format!("unknown observable `{s}`"))
    }
}

impl core::str::FromStr for Case {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        Case::parse(s).ok_or_else(|| "unknown case `".to_string() + s + "`")
    }
}
