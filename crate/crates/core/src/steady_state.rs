//! Coherence-modified steady-state photon number and effective temperature.
//!
//! All three configurations share the master form
//!
//! ```text
//! nbar_q = nbar (1 + eps_e) / (1 - nbar eps_e + (nbar + 1) eps_g)
//! 1/T_q  = ln[(nbar + 1)(1 + eps_g) / (nbar (1 + eps_e))]
//! ```
//!
//! with `eps_e = 0` for the multi-ground scheme and `eps_g = 0` for the
//! two-excited scheme. The denominator `D` vanishes on the divergence line
//! and is negative on the unphysical side.

use crate::atoms::AtomConfiguration;
use crate::error::Constraint;
pub use crate::units::EffectiveTemperature;
use crate::units::{temperature_from_mean_photon, MeanPhotonNumber, ReducedTemperature};

/// Tolerance on `eps_g - eps_e` for the cancellation line.
pub const CANCELLATION_TOLERANCE: f64 = 1e-12;

/// Relative tolerance on the denominator for the divergence line.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-12;

/// Steady photon number, which may diverge on the stability boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonCount {
    Finite(MeanPhotonNumber),
    Divergent,
}

impl PhotonCount {
    pub fn finite(self) -> Option<f64> {
        match self {
            PhotonCount::Finite(n) => Some(n.get()),
            PhotonCount::Divergent => None,
        }
    }
}

/// The coherences put the steady state on the negative-photon-number side.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("unphysical steady state: {constraint} violated (denominator {denominator})")]
pub struct Unphysical {
    pub constraint: Constraint,
    pub denominator: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    Heating,
    Cooling,
    Cancellation,
    Unphysical,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Heating => "heating",
            RegimeLabel::Cooling => "cooling",
            RegimeLabel::Cancellation => "cancellation",
            RegimeLabel::Unphysical => "unphysical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "heating" => RegimeLabel::Heating,
            "cooling" => RegimeLabel::Cooling,
            "cancellation" => RegimeLabel::Cancellation,
            "unphysical" => RegimeLabel::Unphysical,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateResult {
    pub nbar_q: PhotonCount,
    pub temperature: EffectiveTemperature,
    pub regime: RegimeLabel,
}

/// `1 - nbar eps_e + (nbar + 1) eps_g`.
#[inline]
pub fn denominator(eps_g: f64, eps_e: f64, nbar: f64) -> f64 {
    1.0 - nbar * eps_e + (nbar + 1.0) * eps_g
}

fn on_divergence_line(eps_g: f64, eps_e: f64, nbar: f64) -> bool {
    let d = denominator(eps_g, eps_e, nbar);
    let scale = 1.0 + nbar * eps_e.abs() + (nbar + 1.0) * eps_g.abs();
    d.abs() <= DIVERGENCE_TOLERANCE * scale
}

fn unphysical_constraint(eps_g: f64, eps_e: f64) -> Constraint {
    if eps_e == 0.0 {
        Constraint::EpsGSteadyState
    } else if eps_g == 0.0 {
        Constraint::EpsESteadyState
    } else {
        Constraint::PhotonNumberPositive
    }
}

/// Steady photon number from raw coherence parameters.
///
/// On the divergence line (within [`DIVERGENCE_TOLERANCE`]) the result is
/// [`PhotonCount::Divergent`]; beyond it, or at the indeterminate corner
/// `eps_e = -1` with a vanishing denominator, [`Unphysical`].
pub fn steady_photon_number_raw(
    eps_g: f64,
    eps_e: f64,
    nbar: MeanPhotonNumber,
) -> Result<PhotonCount, Unphysical> {
    let n = nbar.get();
    let d = denominator(eps_g, eps_e, n);
    let numerator = n * (1.0 + eps_e);
    let unphysical = Unphysical {
        constraint: unphysical_constraint(eps_g, eps_e),
        denominator: d,
    };
    if on_divergence_line(eps_g, eps_e, n) {
        if numerator == 0.0 {
            return Err(unphysical);
        }
        return Ok(PhotonCount::Divergent);
    }
    if d < 0.0 {
        return Err(unphysical);
    }
    Ok(PhotonCount::Finite(
        MeanPhotonNumber::new(numerator / d).map_err(|_| unphysical)?,
    ))
}

/// Steady photon number of `atom` in contact with a bath of occupation `nbar`.
pub fn steady_photon_number(
    atom: &AtomConfiguration,
    nbar: MeanPhotonNumber,
) -> Result<PhotonCount, Unphysical> {
    steady_photon_number_raw(atom.epsilon_g(), atom.epsilon_e(), nbar)
}

/// Effective cavity temperature from raw coherence parameters.
pub fn effective_temperature_raw(
    eps_g: f64,
    eps_e: f64,
    nbar: MeanPhotonNumber,
) -> Result<EffectiveTemperature, Unphysical> {
    let n = nbar.get();
    match steady_photon_number_raw(eps_g, eps_e, nbar)? {
        PhotonCount::Divergent => Ok(EffectiveTemperature::Divergent),
        PhotonCount::Finite(q) if q.get() == 0.0 => Ok(EffectiveTemperature::Zero),
        PhotonCount::Finite(_) => {
            // log1p keeps precision when the log argument is close to one.
            let x = denominator(eps_g, eps_e, n) / (n * (1.0 + eps_e));
            let theta = 1.0 / libm::log1p(x);
            Ok(ReducedTemperature::new(theta)
                .map(EffectiveTemperature::Finite)
                .unwrap_or(EffectiveTemperature::Divergent))
        }
    }
}

pub fn effective_temperature(
    atom: &AtomConfiguration,
    nbar: MeanPhotonNumber,
) -> Result<EffectiveTemperature, Unphysical> {
    effective_temperature_raw(atom.epsilon_g(), atom.epsilon_e(), nbar)
}

/// `T_q / T_bath`, with the bath temperature from `nbar`.
pub fn temperature_ratio(t: EffectiveTemperature, nbar: MeanPhotonNumber) -> Option<f64> {
    match (t, temperature_from_mean_photon(nbar)) {
        (EffectiveTemperature::Finite(tq), EffectiveTemperature::Finite(tb)) => {
            Some(tq.get() / tb.get())
        }
        (EffectiveTemperature::Zero, EffectiveTemperature::Finite(_)) => Some(0.0),
        _ => None,
    }
}

/// Regime of the `(eps_g, eps_e)` plane at bath occupation `nbar`.
///
/// Unphysical iff `1 - nbar eps_e + (nbar+1) eps_g <= 0`; otherwise
/// cancellation on the diagonal, heating above it (`eps_e > eps_g`), cooling below.
pub fn classify_regime(eps_g: f64, eps_e: f64, nbar: MeanPhotonNumber) -> RegimeLabel {
    if denominator(eps_g, eps_e, nbar.get()) <= 0.0 {
        RegimeLabel::Unphysical
    } else if (eps_g - eps_e).abs() <= CANCELLATION_TOLERANCE {
        RegimeLabel::Cancellation
    } else if eps_e > eps_g {
        RegimeLabel::Heating
    } else {
        RegimeLabel::Cooling
    }
}

/// Photon number, temperature and regime in one call.
pub fn steady_state(
    atom: &AtomConfiguration,
    nbar: MeanPhotonNumber,
) -> Result<SteadyStateResult, Unphysical> {
    let (eps_g, eps_e) = (atom.epsilon_g(), atom.epsilon_e());
    let nbar_q = steady_photon_number_raw(eps_g, eps_e, nbar)?;
    let temperature = effective_temperature_raw(eps_g, eps_e, nbar)?;
    Ok(SteadyStateResult {
        nbar_q,
        temperature,
        regime: classify_regime(eps_g, eps_e, nbar),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{FourLevelAtom, MultiGroundAtom, TwoExcitedAtom};

    fn nbar(x: f64) -> MeanPhotonNumber {
        MeanPhotonNumber::new(x).unwrap()
    }

    fn q(eps_g: f64, eps_e: f64, n: f64) -> f64 {
        steady_photon_number_raw(eps_g, eps_e, nbar(n))
            .unwrap()
            .finite()
            .unwrap()
    }

    #[test]
    fn classical_reduction() {
        assert_eq!(q(0.0, 0.0, 3.7), 3.7);
        let atom: AtomConfiguration = MultiGroundAtom::thermal(5, 0.0, nbar(2.0)).unwrap().into();
        assert_eq!(
            steady_photon_number(&atom, nbar(2.0)).unwrap().finite(),
            Some(2.0)
        );
    }

    #[test]
    fn closed_form_values() {
        // values frozen from the birth-death oracle, see tests/oracles.rs
        assert!((q(0.5, 0.0, 5.0) - 1.25).abs() < 1e-15);
        assert!((q(0.0, 0.1, 5.0) - 11.0).abs() < 1e-13);
        assert!((q(0.2, 0.1, 2.0) - 2.2 / 1.4).abs() < 1e-15);
    }

    #[test]
    fn equal_coherences_cancel() {
        for &e in &[-0.9, -0.3, 0.0, 0.15, 0.5, 1.0] {
            let n = q(e, e, 5.0);
            assert!((n - 5.0).abs() < 1e-13, "{e}: {n}");
        }
    }

    #[test]
    fn temperature_ratio_examples() {
        let t = effective_temperature_raw(0.2, 0.0, nbar(5.0)).unwrap();
        let r = temperature_ratio(t, nbar(5.0)).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
        let t = effective_temperature_raw(0.3, 0.3, nbar(5.0)).unwrap();
        assert!((temperature_ratio(t, nbar(5.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_temperature_at_minus_one() {
        for &n in &[0.1, 1.0, 5.0, 80.0] {
            assert_eq!(q(0.0, -1.0, n), 0.0);
            assert_eq!(
                effective_temperature_raw(0.0, -1.0, nbar(n)).unwrap(),
                EffectiveTemperature::Zero
            );
            assert_eq!(
                effective_temperature_raw(0.4, -1.0, nbar(n)).unwrap(),
                EffectiveTemperature::Zero
            );
        }
    }

    #[test]
    fn divergence_and_unphysical() {
        // eps_g = -1/(nbar+1)
        assert_eq!(
            effective_temperature_raw(-1.0 / 6.0, 0.0, nbar(5.0)).unwrap(),
            EffectiveTemperature::Divergent
        );
        assert_eq!(
            steady_photon_number_raw(0.0, 0.2, nbar(5.0)).unwrap(),
            PhotonCount::Divergent
        );
        let err = steady_photon_number_raw(-0.2, 0.0, nbar(5.0)).unwrap_err();
        assert_eq!(err.constraint, Constraint::EpsGSteadyState);
        let err = effective_temperature_raw(0.0, 0.25, nbar(5.0)).unwrap_err();
        assert_eq!(err.constraint, Constraint::EpsESteadyState);
        let err = effective_temperature_raw(-0.1, 0.15, nbar(5.0)).unwrap_err();
        assert_eq!(err.constraint, Constraint::PhotonNumberPositive);
        // just inside the bound: large but finite
        let near = q(-1.0 / 6.0 + 1e-6, 0.0, 5.0);
        assert!(near > 1e5 && near.is_finite());
        // 0/0 corner
        assert!(steady_photon_number_raw(-1.0, -1.0, nbar(5.0)).is_err());
    }

    #[test]
    fn regime_examples() {
        let n5 = nbar(5.0);
        assert_eq!(classify_regime(0.3, 0.3, n5), RegimeLabel::Cancellation);
        assert_eq!(classify_regime(-0.1, 0.15, n5), RegimeLabel::Unphysical);
        assert_eq!(classify_regime(-0.05, 0.1, n5), RegimeLabel::Heating);
        assert_eq!(classify_regime(0.4, -0.2, n5), RegimeLabel::Cooling);
        // the boundary itself is unphysical
        assert_eq!(classify_regime(0.0, 0.2, n5), RegimeLabel::Unphysical);
    }

    #[test]
    fn regime_labels_roundtrip() {
        for r in [
            RegimeLabel::Heating,
            RegimeLabel::Cooling,
            RegimeLabel::Cancellation,
            RegimeLabel::Unphysical,
        ] {
            assert_eq!(RegimeLabel::parse(r.as_str()), Some(r));
        }
        assert_eq!(RegimeLabel::parse("lukewarm"), None);
    }

    #[test]
    fn configuration_dispatch() {
        let two: AtomConfiguration = TwoExcitedAtom::thermal(0.1, nbar(5.0)).unwrap().into();
        let four: AtomConfiguration = FourLevelAtom::thermal(0.0, 0.1, nbar(5.0)).unwrap().into();
        let a = steady_state(&two, nbar(5.0)).unwrap();
        let b = steady_state(&four, nbar(5.0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.regime, RegimeLabel::Heating);
        let tq = a.temperature.finite().unwrap();
        let from_n = temperature_from_mean_photon(
            MeanPhotonNumber::new(a.nbar_q.finite().unwrap()).unwrap(),
        );
        assert!(((tq - from_n.finite().unwrap()) / tq).abs() < 1e-12);
    }
}
