//! Photon-number dynamics.
//!
//! Two independent descriptions of the same cavity:
//!
//! * the mean-field rate equation `dn/dtau = s [A (n + 1) - B n]`, integrated
//!   with fixed-step RK4 ([`evolve_mean_photon`]);
//! * the diagonal of the reduced cavity master equation, a birth-death chain
//!   on Fock states with up-rate `s A (n + 1)` and down-rate `s B n`
//!   ([`birth_death_steady_state`], [`birth_death_evolve`]).
//!
//! The chain never uses the closed-form steady photon number, so it serves as
//! the brute-force check for everything in [`crate::steady_state`].
//!
//! The rate `alpha` is absorbed into the reduced time `tau`. The time scale `s`
//! carries the prefactor of each configuration's rate equation (1 for the
//! multi-ground scheme, 2 for the two-excited and four-level schemes); it sets
//! how fast the cavity relaxes and never changes a steady state.

use alloc::vec::Vec;

use crate::atoms::AtomConfiguration;
use crate::error::{Error, Result};
use crate::integrate::{step_schedule, Rk4};

/// Largest Fock truncation the chain will allocate.
pub const MAX_FOCK_DIM: usize = 1 << 24;

/// Default ceiling at which [`evolve_mean_photon`] stops and flags divergence.
pub const DEFAULT_DIVERGENCE_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCoefficients {
    gain: f64,
    loss: f64,
    time_scale: f64,
}

impl RateCoefficients {
    pub fn new(gain: f64, loss: f64) -> Result<Self> {
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(Error::domain(
                "gain coefficient",
                "non-negative and finite",
                gain,
            ));
        }
        if !(loss.is_finite() && loss >= 0.0) {
            return Err(Error::domain(
                "loss coefficient",
                "non-negative and finite",
                loss,
            ));
        }
        Ok(Self {
            gain,
            loss,
            time_scale: 1.0,
        })
    }

    pub fn with_time_scale(mut self, time_scale: f64) -> Result<Self> {
        if !(time_scale.is_finite() && time_scale > 0.0) {
            return Err(Error::domain(
                "time scale",
                "positive and finite",
                time_scale,
            ));
        }
        self.time_scale = time_scale;
        Ok(self)
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    pub fn is_stable(&self) -> bool {
        self.loss > self.gain
    }

    /// Fixed point `A / (B - A)` of the rate equation.
    pub fn steady_mean(&self) -> Result<f64> {
        if !self.is_stable() {
            return Err(Error::NoSteadyState {
                gain: self.gain,
                loss: self.loss,
            });
        }
        Ok(self.gain / (self.loss - self.gain))
    }

    /// `s (B - A)`; negative when the cavity is pumped without bound.
    pub fn relaxation_rate(&self) -> f64 {
        self.time_scale * (self.loss - self.gain)
    }

    /// `0.01 / (s (B - A))`, the step the accuracy figures in the docs assume.
    pub fn default_dtau(&self) -> Result<f64> {
        self.steady_mean()?;
        Ok(0.01 / self.relaxation_rate())
    }

    #[inline]
    fn up(&self, n: usize) -> f64 {
        self.time_scale * self.gain * (n + 1) as f64
    }

    #[inline]
    fn down(&self, n: usize) -> f64 {
        self.time_scale * self.loss * n as f64
    }
}

/// Emission and absorption coefficients of the rate equation.
///
/// * multi-ground: `A = N P_ee`, `B = sum_ij P_{g_i g_j} = N p (1 + chi (N-1))`, `s = 1`
/// * two-excited: `A = sum_ij P_{e_i e_j} = 2 P_ee (1 + eps_e)`, `B = 2 P_gg`, `s = 2`
/// * four-level: `A = 2 P_ee (1 + eps_e)`, `B = 2 p (1 + eps_g)`, `s = 2`
///
/// The result is returned even when `B <= A`; check [`RateCoefficients::is_stable`].
pub fn rate_coefficients(atom: &AtomConfiguration) -> RateCoefficients {
    let (gain, loss, time_scale) = match atom {
        AtomConfiguration::MultiGround(a) => {
            let n = a.n_levels() as f64;
            (
                n * a.excited_pop(),
                n * a.ground_pop() * (1.0 + a.epsilon_g()),
                1.0,
            )
        }
        AtomConfiguration::TwoExcited(a) => (
            2.0 * a.excited_pop() * (1.0 + a.epsilon_e()),
            2.0 * a.ground_pop(),
            2.0,
        ),
        AtomConfiguration::FourLevel(a) => (
            2.0 * a.excited_pop() * (1.0 + a.epsilon_e()),
            2.0 * a.ground_pop() * (1.0 + a.epsilon_g()),
            2.0,
        ),
    };
    // PSD atoms give non-negative coefficients; clamp rounding at eps = -1.
    RateCoefficients {
        gain: gain.max(0.0),
        loss: loss.max(0.0),
        time_scale,
    }
}

/// Sampled solution of the mean-photon rate equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when the value passed the divergence cap; the trajectory stops there.
    pub diverged: bool,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, f64)> {
        Some((*self.times.last()?, *self.values.last()?))
    }
}

fn check_time_grid(tau_end: f64, dtau: f64) -> Result<()> {
    if !(tau_end.is_finite() && tau_end > 0.0) {
        return Err(Error::domain("tau_end", "positive and finite", tau_end));
    }
    if !(dtau.is_finite() && dtau > 0.0 && dtau <= tau_end) {
        return Err(Error::domain("dtau", "positive and at most tau_end", dtau));
    }
    Ok(())
}

/// Integrates `dn/dtau = s [A (n + 1) - B n]` from `nbar0` with RK4 steps of `dtau`.
///
/// Accuracy needs `dtau * s |B - A|` small; 0.1 or less is recommended and
/// [`RateCoefficients::default_dtau`] gives 0.01.
pub fn evolve_mean_photon(
    coeffs: &RateCoefficients,
    nbar0: f64,
    tau_end: f64,
    dtau: f64,
) -> Result<Trajectory> {
    evolve_mean_photon_capped(coeffs, nbar0, tau_end, dtau, DEFAULT_DIVERGENCE_CAP)
}

pub fn evolve_mean_photon_capped(
    coeffs: &RateCoefficients,
    nbar0: f64,
    tau_end: f64,
    dtau: f64,
    cap: f64,
) -> Result<Trajectory> {
    if !(nbar0.is_finite() && nbar0 >= 0.0) {
        return Err(Error::domain(
            "initial photon number",
            "non-negative and finite",
            nbar0,
        ));
    }
    check_time_grid(tau_end, dtau)?;
    let (a, b, s) = (coeffs.gain, coeffs.loss, coeffs.time_scale);
    let mut rhs = |y: &[f64], dy: &mut [f64]| dy[0] = s * (a * (y[0] + 1.0) - b * y[0]);
    let mut rk = Rk4::new(1);
    let mut y = [nbar0];
    let mut traj = Trajectory {
        times: alloc::vec![0.0],
        values: alloc::vec![nbar0],
        diverged: false,
    };
    for (t, h) in step_schedule(tau_end, dtau) {
        rk.step(&mut rhs, &mut y, h);
        traj.times.push(t);
        traj.values.push(y[0]);
        if !(y[0] <= cap) {
            traj.diverged = true;
            break;
        }
    }
    Ok(traj)
}

/// Photon-number distribution on the truncated Fock space `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDistribution {
    probabilities: Vec<f64>,
    tail_tolerance: f64,
}

impl FockDistribution {
    /// Validates non-negativity, normalization to 1e-9 and that the last
    /// level holds less than `tail_tolerance`.
    pub fn new(probabilities: Vec<f64>, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance.is_finite() && tail_tolerance > 0.0) {
            return Err(Error::domain(
                "tail tolerance",
                "positive and finite",
                tail_tolerance,
            ));
        }
        if let Some(&bad) = probabilities
            .iter()
            .find(|p| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::domain(
                "Fock probability",
                "non-negative and finite",
                bad,
            ));
        }
        let dist = Self {
            probabilities,
            tail_tolerance,
        };
        let total = dist.total();
        if !(1.0 - 1e-9..=1.0 + 1e-12).contains(&total) {
            return Err(Error::domain(
                "total probability",
                "within 1e-9 of one",
                total,
            ));
        }
        if dist.tail_mass() >= tail_tolerance {
            return Err(Error::TruncationOverflow {
                n_max: dist.n_max(),
                tail_mass: dist.tail_mass(),
            });
        }
        Ok(dist)
    }

    /// Empty cavity on `0..=n_max`.
    pub fn vacuum(n_max: usize, tail_tolerance: f64) -> Result<Self> {
        let mut p = alloc::vec![0.0; n_max + 1];
        p[0] = 1.0;
        Self::new(p, tail_tolerance)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn n_max(&self) -> usize {
        self.probabilities.len() - 1
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Probability in the last retained level.
    pub fn tail_mass(&self) -> f64 {
        *self.probabilities.last().unwrap_or(&0.0)
    }

    pub fn total(&self) -> f64 {
        // smallest terms first
        self.probabilities.iter().rev().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .rev()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `1/2 sum |p_n - q_n|`, padding the shorter distribution with zeros.
    pub fn total_variation(&self, other: &FockDistribution) -> f64 {
        let len = self.probabilities.len().max(other.probabilities.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..len)
            .map(|i| (at(&self.probabilities, i) - at(&other.probabilities, i)).abs())
            .sum::<f64>()
    }

    fn padded(&self, n_max: usize) -> Vec<f64> {
        let mut p = self.probabilities.clone();
        if p.len() < n_max + 1 {
            p.resize(n_max + 1, 0.0);
        }
        p
    }
}

/// Truncation for a stable chain: start at `max(50, 20 n_ss)` and double
/// until the geometric tail bound `r^n_max / (1 - r)` drops below `tail_tol`.
pub fn truncation_for(coeffs: &RateCoefficients, tail_tol: f64) -> Result<usize> {
    let n_ss = coeffs.steady_mean()?;
    if !(tail_tol.is_finite() && tail_tol > 0.0) {
        return Err(Error::domain(
            "tail tolerance",
            "positive and finite",
            tail_tol,
        ));
    }
    let r = coeffs.gain / coeffs.loss;
    let mut n_max = (libm::ceil(20.0 * n_ss) as usize).max(50);
    if r == 0.0 {
        return Ok(n_max);
    }
    let ln_r = libm::log(r);
    let ln_gap = libm::log1p(-r);
    while n_max as f64 * ln_r - ln_gap >= libm::log(tail_tol) {
        n_max *= 2;
        if n_max >= MAX_FOCK_DIM {
            return Err(Error::TruncationOverflow {
                n_max,
                tail_mass: libm::exp(n_max as f64 * ln_r - ln_gap),
            });
        }
    }
    Ok(n_max)
}

/// Stationary Fock distribution of the birth-death chain.
///
/// Built level by level from detailed balance,
/// `p_{n+1} = p_n up(n) / down(n+1)`, then normalized; the mean is
/// summed from the explicit distribution.
pub fn birth_death_steady_state(
    coeffs: &RateCoefficients,
    tail_tol: f64,
) -> Result<FockDistribution> {
    let n_max = truncation_for(coeffs, tail_tol)?;
    let mut p = Vec::with_capacity(n_max + 1);
    let mut current = 1.0;
    p.push(current);
    for n in 0..n_max {
        current *= coeffs.up(n) / coeffs.down(n + 1);
        p.push(current);
    }
    let total: f64 = p.iter().rev().sum();
    for x in &mut p {
        *x /= total;
    }
    FockDistribution::new(p, tail_tol)
}

/// `out = (I + h L) y` for the chain generator `L` with a reflecting top level.
fn apply_shifted_generator(coeffs: &RateCoefficients, h: f64, y: &[f64], out: &mut [f64]) {
    let top = y.len() - 1;
    for n in 0..=top {
        let up_out = if n < top { coeffs.up(n) } else { 0.0 };
        let mut v = y[n] * (1.0 - h * (up_out + coeffs.down(n)));
        if n > 0 {
            v += h * coeffs.up(n - 1) * y[n - 1];
        }
        if n < top {
            v += h * coeffs.down(n + 1) * y[n + 1];
        }
        out[n] = v;
    }
}

/// Evolves a Fock distribution under the birth-death chain.
///
/// The truncation is widened to the steady-state truncation when the chain is
/// stable. Fails when the top level collects more than the distribution's
/// tail tolerance at any sample time.
pub fn birth_death_evolve(
    coeffs: &RateCoefficients,
    initial: &FockDistribution,
    tau_end: f64,
    dtau: f64,
) -> Result<FockDistribution> {
    birth_death_evolve_with(coeffs, initial, tau_end, dtau, |_, _| {})
}

/// [`birth_death_evolve`] with `observer(tau, p)` called at `tau = 0` and after every `dtau`.
pub fn birth_death_evolve_with<F>(
    coeffs: &RateCoefficients,
    initial: &FockDistribution,
    tau_end: f64,
    dtau: f64,
    mut observer: F,
) -> Result<FockDistribution>
where
    F: FnMut(f64, &[f64]),
{
    check_time_grid(tau_end, dtau)?;
    let tail_tol = initial.tail_tolerance;
    let n_max = if coeffs.is_stable() {
        initial.n_max().max(truncation_for(coeffs, tail_tol)?)
    } else {
        initial.n_max()
    };
    let mut y = initial.padded(n_max);
    let dim = y.len();

    // Substeps keep h * (largest exit rate) <= 1, where I + hL is entrywise
    // non-negative. For a linear system RK4 equals the polynomial
    // R(hL) = 3/8 + 1/3 M + 1/4 M^2 + 1/24 M^4 with M = I + hL, whose
    // coefficients are all non-negative, so every step preserves positivity
    // and total probability.
    let max_exit = (0..dim)
        .map(|n| if n + 1 < dim { coeffs.up(n) } else { 0.0 } + coeffs.down(n))
        .fold(0.0_f64, f64::max);
    let h_max = if max_exit > 0.0 {
        1.0 / max_exit
    } else {
        f64::INFINITY
    };

    let mut m1 = alloc::vec![0.0; dim];
    let mut m2 = alloc::vec![0.0; dim];
    let mut m3 = alloc::vec![0.0; dim];
    let mut m4 = alloc::vec![0.0; dim];

    observer(0.0, &y);
    for (t, dt) in step_schedule(tau_end, dtau) {
        let substeps = libm::ceil(dt / h_max).max(1.0) as usize;
        let h = dt / substeps as f64;
        for _ in 0..substeps {
            apply_shifted_generator(coeffs, h, &y, &mut m1);
            apply_shifted_generator(coeffs, h, &m1, &mut m2);
            apply_shifted_generator(coeffs, h, &m2, &mut m3);
            apply_shifted_generator(coeffs, h, &m3, &mut m4);
            for n in 0..dim {
                y[n] = 0.375 * y[n] + m1[n] / 3.0 + 0.25 * m2[n] + m4[n] / 24.0;
            }
        }
        observer(t, &y);
        let tail = y[dim - 1];
        if tail >= tail_tol {
            return Err(Error::TruncationOverflow {
                n_max,
                tail_mass: tail,
            });
        }
    }
    FockDistribution::new(y, tail_tol)
}
