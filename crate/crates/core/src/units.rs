//! Dimensionless thermal conversions.
//!
//! Temperatures are stored as `k_B T / (hbar omega)`, so the Bose occupation
//! of the cavity mode is `1 / (exp(1/theta) - 1)` with no physical constants.

use crate::error::{Error, Result};

/// Temperature in units of `hbar omega / k_B`. Always strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedTemperature(f64);

impl ReducedTemperature {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() && theta > 0.0 {
            Ok(Self(theta))
        } else {
            Err(Error::domain("temperature", "positive and finite", theta))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Mean photon number of the cavity mode. Non-negative and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MeanPhotonNumber(f64);

impl MeanPhotonNumber {
    pub const ZERO: Self = Self(0.0);

    pub fn new(nbar: f64) -> Result<Self> {
        if nbar.is_finite() && nbar >= 0.0 {
            Ok(Self(nbar))
        } else {
            Err(Error::domain(
                "mean photon number",
                "non-negative and finite",
                nbar,
            ))
        }
    }

    /// Like [`new`](Self::new) but also rejects zero.
    pub fn positive(nbar: f64) -> Result<Self> {
        if nbar.is_finite() && nbar > 0.0 {
            Ok(Self(nbar))
        } else {
            Err(Error::domain(
                "mean photon number",
                "positive and finite",
                nbar,
            ))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Temperature of the cavity mode, allowing the two limits the model reaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveTemperature {
    Finite(ReducedTemperature),
    /// Empty cavity, `nbar = 0`.
    Zero,
    /// The log argument of the Boltzmann relation reached one.
    Divergent,
}

impl EffectiveTemperature {
    pub fn finite(self) -> Option<f64> {
        match self {
            EffectiveTemperature::Finite(t) => Some(t.get()),
            _ => None,
        }
    }
}

/// Bose occupation `1 / (exp(1/theta) - 1)`.
pub fn mean_photon_from_temperature(theta: ReducedTemperature) -> MeanPhotonNumber {
    let x = 1.0 / theta.get();
    // expm1 overflows to +inf for very cold modes, which correctly gives 0.
    MeanPhotonNumber(1.0 / libm::expm1(x))
}

/// Inverse Boltzmann relation `theta = 1 / ln(1 + 1/nbar)`; `nbar = 0` is the zero-temperature tag.
pub fn temperature_from_mean_photon(nbar: MeanPhotonNumber) -> EffectiveTemperature {
    let n = nbar.get();
    if n == 0.0 {
        return EffectiveTemperature::Zero;
    }
    let log = libm::log1p(1.0 / n);
    EffectiveTemperature::Finite(ReducedTemperature(1.0 / log))
}

/// Fallible wrapper over [`mean_photon_from_temperature`] for raw inputs.
pub fn mean_photon_from_raw_temperature(theta: f64) -> Result<MeanPhotonNumber> {
    ReducedTemperature::new(theta).map(mean_photon_from_temperature)
}

/// Fallible wrapper over [`temperature_from_mean_photon`] for raw inputs.
pub fn temperature_from_raw_mean_photon(nbar: f64) -> Result<EffectiveTemperature> {
    MeanPhotonNumber::new(nbar).map(temperature_from_mean_photon)
}

/// Radiation pressure from `P V = hbar omega nbar`, with `hbar omega` replaced by `omega_scale`.
pub fn radiation_pressure(nbar: MeanPhotonNumber, volume: f64, omega_scale: f64) -> Result<f64> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::domain(
            "cavity volume",
            "positive and finite",
            volume,
        ));
    }
    if !(omega_scale.is_finite() && omega_scale > 0.0) {
        return Err(Error::domain(
            "omega scale",
            "positive and finite",
            omega_scale,
        ));
    }
    Ok(omega_scale * nbar.get() / volume)
}
