//! Carnot-cycle bookkeeping and coherence-modified efficiencies.
//!
//! Ground coherence acts on one isotherm of the cycle: negative `eps_g` raises
//! the temperature of the hot isotherm (heating), positive `eps_g` lowers the
//! temperature of the cold isotherm (cooling). Each formula is only defined in
//! its own regime, and out-of-range inputs are rejected with the violated
//! constraint instead of being clamped.

use crate::atoms::chi_bounds;
use crate::error::{Constraint, Error, Result};
use crate::units::{
    temperature_from_mean_photon, EffectiveTemperature, MeanPhotonNumber, ReducedTemperature,
};

/// `1 - T_c / T_h`.
pub fn carnot_efficiency(t_cold: ReducedTemperature, t_hot: ReducedTemperature) -> Result<f64> {
    if t_cold.get() > t_hot.get() {
        return Err(Error::domain(
            "cold bath temperature",
            "at most the hot bath temperature",
            t_cold.get(),
        ));
    }
    Ok(1.0 - t_cold.get() / t_hot.get())
}

fn bath_temperature(nbar: MeanPhotonNumber) -> Result<ReducedTemperature> {
    match temperature_from_mean_photon(nbar) {
        EffectiveTemperature::Finite(t) => Ok(t),
        _ => Err(Error::domain("bath photon number", "positive", nbar.get())),
    }
}

/// `ln(1 + 1/nbar)`, the inverse reduced temperature of a bath.
fn inverse_temperature(nbar: MeanPhotonNumber) -> f64 {
    libm::log1p(1.0 / nbar.get())
}

fn check_eps(eps_g: f64) -> Result<f64> {
    if eps_g.is_finite() {
        Ok(eps_g)
    } else {
        Err(Error::domain("eps_g", "finite", eps_g))
    }
}

/// Heating regime, `-1/(nbar_h + 1) < eps_g <= 0`:
/// `eta_q = eta - ln(1 + eps_g) / ln(1 + 1/nbar_c)`.
pub fn quantum_efficiency_heating(
    eps_g: f64,
    nbar_c: MeanPhotonNumber,
    nbar_h: MeanPhotonNumber,
) -> Result<f64> {
    let eps_g = check_eps(eps_g)?;
    let eta = carnot_efficiency(bath_temperature(nbar_c)?, bath_temperature(nbar_h)?)?;
    if eps_g > 0.0 {
        return Err(Error::constraint(Constraint::HeatingRegime, eps_g));
    }
    if eps_g <= -1.0 / (nbar_h.get() + 1.0) {
        return Err(Error::constraint(Constraint::EpsGSteadyState, eps_g));
    }
    Ok(eta - libm::log1p(eps_g) / inverse_temperature(nbar_c))
}

fn cooling_inputs(
    eps_g: f64,
    nbar_c: MeanPhotonNumber,
    nbar_h: MeanPhotonNumber,
) -> Result<(f64, ReducedTemperature, ReducedTemperature)> {
    let eps_g = check_eps(eps_g)?;
    let t_c = bath_temperature(nbar_c)?;
    let t_h = bath_temperature(nbar_h)?;
    carnot_efficiency(t_c, t_h)?;
    if eps_g <= 0.0 {
        return Err(Error::constraint(Constraint::CoolingRegime, eps_g));
    }
    Ok((eps_g, t_c, t_h))
}

/// Cooling regime, `eps_g > 0`: the cold isotherm runs at the reduced
/// temperature `T_q` of a cavity fed from the cold bath, `eta_q = 1 - T_q / T_h`.
pub fn quantum_efficiency_cooling(
    eps_g: f64,
    nbar_c: MeanPhotonNumber,
    nbar_h: MeanPhotonNumber,
) -> Result<f64> {
    let (eps_g, _, t_h) = cooling_inputs(eps_g, nbar_c, nbar_h)?;
    let t_q = 1.0 / (libm::log1p(eps_g) + inverse_temperature(nbar_c));
    Ok(1.0 - t_q / t_h.get())
}

/// The cooling efficiency written as a shift of the Carnot value,
/// `eta + (T_c / T_h) ln(1 + eps_g) / ln[(1 + eps_g)(1 + 1/nbar_c)]`.
pub fn quantum_efficiency_cooling_shifted(
    eps_g: f64,
    nbar_c: MeanPhotonNumber,
    nbar_h: MeanPhotonNumber,
) -> Result<f64> {
    let (eps_g, t_c, t_h) = cooling_inputs(eps_g, nbar_c, nbar_h)?;
    let eta = 1.0 - t_c.get() / t_h.get();
    let l = libm::log1p(eps_g);
    Ok(eta + t_c.get() / t_h.get() * l / (l + inverse_temperature(nbar_c)))
}

/// Picks the heating formula for `eps_g <= 0` and the cooling formula otherwise.
pub fn quantum_efficiency(
    eps_g: f64,
    nbar_c: MeanPhotonNumber,
    nbar_h: MeanPhotonNumber,
) -> Result<f64> {
    if eps_g > 0.0 {
        quantum_efficiency_cooling(eps_g, nbar_c, nbar_h)
    } else {
        quantum_efficiency_heating(eps_g, nbar_c, nbar_h)
    }
}

/// Single-bath heating efficiency for `N` ground levels,
/// `-ln[1 + chi (N - 1)] / ln(1 + 1/nbar_eq)`, with
/// `-1/((N-1)(nbar_eq+1)) < chi <= 0`. `N = 1` carries no coherence and gives 0.
pub fn single_bath_heating_efficiency(
    n_levels: u32,
    chi: f64,
    nbar_eq: MeanPhotonNumber,
) -> Result<f64> {
    let chi = check_eps(chi)?;
    bath_temperature(nbar_eq)?;
    if n_levels == 0 {
        return Err(Error::domain("number of ground levels", "at least 1", 0.0));
    }
    if n_levels == 1 {
        return Ok(0.0);
    }
    if chi > 0.0 {
        return Err(Error::constraint(Constraint::HeatingRegime, chi));
    }
    if !chi_bounds(n_levels, nbar_eq)?.contains(chi) {
        return Err(Error::constraint(Constraint::ChiSteadyState, chi));
    }
    let eps_g = chi * (n_levels - 1) as f64;
    Ok(-libm::log1p(eps_g) / inverse_temperature(nbar_eq))
}

/// Single-bath cooling efficiency for `N` ground levels,
/// `[1 + ln(1 + 1/nbar_eq) / ln(1 + chi (N - 1))]^{-1}`, with `0 <= chi <= 1`.
/// Zero coherence (including `N = 1`) gives 0.
pub fn single_bath_cooling_efficiency(
    n_levels: u32,
    chi: f64,
    nbar_eq: MeanPhotonNumber,
) -> Result<f64> {
    let chi = check_eps(chi)?;
    bath_temperature(nbar_eq)?;
    if n_levels == 0 {
        return Err(Error::domain("number of ground levels", "at least 1", 0.0));
    }
    if n_levels == 1 {
        return Ok(0.0);
    }
    if chi < 0.0 {
        return Err(Error::constraint(Constraint::CoolingRegime, chi));
    }
    if !chi_bounds(n_levels, nbar_eq)?.contains(chi) {
        return Err(Error::constraint(Constraint::GroundCoherenceUpper, chi));
    }
    if chi == 0.0 {
        return Ok(0.0);
    }
    let l = libm::log1p(chi * (n_levels - 1) as f64);
    Ok(1.0 / (1.0 + inverse_temperature(nbar_eq) / l))
}

/// Linearized heating efficiency for hot baths,
/// `eta - (T_c / T_h) nbar_h eps_g`. Only meant as a cross-check.
pub fn high_temperature_efficiency_approx(
    eta: f64,
    t_cold: ReducedTemperature,
    t_hot: ReducedTemperature,
    nbar_h: MeanPhotonNumber,
    eps_g: f64,
) -> f64 {
    eta - t_cold.get() / t_hot.get() * nbar_h.get() * eps_g
}

/// Ideal Carnot cycle between two reservoirs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    t_hot: ReducedTemperature,
    t_cold: ReducedTemperature,
    delta_s: f64,
}

impl CycleSpec {
    pub fn new(
        t_hot: ReducedTemperature,
        t_cold: ReducedTemperature,
        delta_s: f64,
    ) -> Result<Self> {
        if t_hot.get() < t_cold.get() {
            return Err(Error::domain(
                "hot temperature",
                "at least the cold temperature",
                t_hot.get(),
            ));
        }
        check_entropy(delta_s)?;
        Ok(Self {
            t_hot,
            t_cold,
            delta_s,
        })
    }

    pub fn t_hot(&self) -> ReducedTemperature {
        self.t_hot
    }

    pub fn t_cold(&self) -> ReducedTemperature {
        self.t_cold
    }

    pub fn delta_s(&self) -> f64 {
        self.delta_s
    }

    /// The cycle without coherence, hot isotherm at the bath temperature.
    pub fn classical(&self) -> CycleResult {
        // ordering and entropy were checked on construction
        cycle_summary(
            EffectiveTemperature::Finite(self.t_hot),
            self.t_cold,
            self.delta_s,
        )
        .expect("validated cycle spec")
    }
}

/// Heat and work per cycle. `q_out` is the magnitude of the heat released.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    pub q_in: f64,
    pub q_out: f64,
    pub work: f64,
    pub efficiency: f64,
    /// The hot isotherm temperature diverged; `q_in` and `work` are infinite.
    pub unbounded: bool,
}

fn check_entropy(delta_s: f64) -> Result<()> {
    if delta_s.is_finite() && delta_s > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "entropy change",
            "positive and finite",
            delta_s,
        ))
    }
}

/// Cycle with the hot isotherm at `t_effective_hot`:
/// `Q_in = T_q dS`, `Q_out = T_c dS`, `W = Q_in - Q_out`, `eta = 1 - T_c / T_q`.
pub fn cycle_summary(
    t_effective_hot: EffectiveTemperature,
    t_cold: ReducedTemperature,
    delta_s: f64,
) -> Result<CycleResult> {
    check_entropy(delta_s)?;
    let q_out = t_cold.get() * delta_s;
    match t_effective_hot {
        EffectiveTemperature::Zero => {
            Err(Error::domain("effective hot temperature", "non-zero", 0.0))
        }
        EffectiveTemperature::Divergent => Ok(CycleResult {
            q_in: f64::INFINITY,
            q_out,
            work: f64::INFINITY,
            efficiency: 1.0,
            unbounded: true,
        }),
        EffectiveTemperature::Finite(t_q) => {
            if t_q.get() < t_cold.get() {
                return Err(Error::domain(
                    "effective hot temperature",
                    "at least the cold temperature",
                    t_q.get(),
                ));
            }
            let q_in = t_q.get() * delta_s;
            Ok(CycleResult {
                q_in,
                q_out,
                work: q_in - q_out,
                efficiency: 1.0 - t_cold.get() / t_q.get(),
                unbounded: false,
            })
        }
    }
}
