#![allow(dead_code)]

use qhe_core::atoms::{
    chi_bounds, AtomConfiguration, FourLevelAtom, MultiGroundAtom, TwoExcitedAtom,
};
use qhe_core::steady_state::denominator;
use qhe_core::MeanPhotonNumber;
use rand::Rng;

pub fn nbar(x: f64) -> MeanPhotonNumber {
    MeanPhotonNumber::new(x).unwrap()
}

/// A thermal atom with coherence drawn from the interior of the physical
/// region, kept a margin away from the divergence line.
pub fn random_config<R: Rng>(rng: &mut R, case: usize) -> (AtomConfiguration, MeanPhotonNumber) {
    let nb = nbar(10f64.powf(rng.gen_range(-1.0..1.0)));
    let n = nb.get();
    loop {
        let atom: AtomConfiguration = match case % 3 {
            0 => {
                let levels = rng.gen_range(2..=10u32);
                let b = chi_bounds(levels, nb).unwrap();
                let chi = rng.gen_range(0.9 * b.lower..=b.upper);
                MultiGroundAtom::thermal(levels, chi, nb).unwrap().into()
            }
            1 => {
                let upper = (1.0 / n).min(1.0);
                let eps_e = rng.gen_range(-0.99..0.9 * upper);
                TwoExcitedAtom::thermal(eps_e, nb).unwrap().into()
            }
            _ => {
                let eps_g = rng.gen_range(-1.0..=1.0);
                let eps_e = rng.gen_range(-0.99..=1.0);
                FourLevelAtom::thermal(eps_g, eps_e, nb).unwrap().into()
            }
        };
        let d = denominator(atom.epsilon_g(), atom.epsilon_e(), n);
        let scale = 1.0 + n * atom.epsilon_e().abs() + (n + 1.0) * atom.epsilon_g().abs();
        if d > 0.05 * scale {
            return (atom, nb);
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}
