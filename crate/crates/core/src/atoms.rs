//! Atomic configurations injected into the cavity.
//!
//! Three level schemes are modelled:
//!
//! * [`MultiGroundAtom`]: one excited level over `N` degenerate ground levels
//!   sharing a common real coherence `xi = chi * p`.
//! * [`TwoExcitedAtom`]: two degenerate excited levels with coherence `eps_e`
//!   over a single ground level.
//! * [`FourLevelAtom`]: two ground and two excited levels, each pair carrying
//!   its own normalized coherence.
//!
//! Coherences are stored as the real normalized parameter. Constructors named
//! `new` enforce both normalization and positive semidefiniteness; the
//! `*_unchecked_coherence` constructors skip the positivity check so that
//! [`validate_positivity`] can be exercised on unphysical states.

use crate::error::{Constraint, Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::units::MeanPhotonNumber;

/// Absolute eigenvalue tolerance for accepting a density matrix as PSD.
pub const PSD_TOLERANCE: f64 = 1e-12;

fn check_finite(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(quantity, "finite", value))
    }
}

/// One excited level `|e>` and `N` degenerate ground levels `|g_i>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiGroundAtom {
    n_levels: u32,
    ground_pop: f64,
    chi: f64,
}

impl MultiGroundAtom {
    pub fn new(n_levels: u32, ground_pop: f64, chi: f64) -> Result<Self> {
        let atom = Self::with_unchecked_coherence(n_levels, ground_pop, chi)?;
        match atom.psd_closed_form() {
            None => Ok(atom),
            Some(c) => Err(Error::constraint(c, chi)),
        }
    }

    /// Checks `N >= 2` and `0 < p <= 1/N` only.
    pub fn with_unchecked_coherence(n_levels: u32, ground_pop: f64, chi: f64) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::domain(
                "number of ground levels",
                "at least 2",
                n_levels as f64,
            ));
        }
        check_finite("chi", chi)?;
        let p = check_finite("ground population", ground_pop)?;
        if !(p > 0.0 && p * n_levels as f64 <= 1.0) {
            return Err(Error::domain("ground population", "in (0, 1/N]", p));
        }
        Ok(Self {
            n_levels,
            ground_pop,
            chi,
        })
    }

    /// Populations chosen so that the incoherent steady state is the thermal
    /// occupation `nbar`: `p / P_ee = 1 + 1/nbar`.
    pub fn thermal(n_levels: u32, chi: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        let n_f = n_levels as f64;
        let p = (n + 1.0) / (n + n_f * (n + 1.0));
        Self::new(n_levels, p, chi)
    }

    /// [`thermal`](Self::thermal) without the positivity check.
    pub fn thermal_unchecked(n_levels: u32, chi: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        let p = (n + 1.0) / (n + n_levels as f64 * (n + 1.0));
        Self::with_unchecked_coherence(n_levels, p, chi)
    }

    pub fn n_levels(&self) -> u32 {
        self.n_levels
    }

    pub fn ground_pop(&self) -> f64 {
        self.ground_pop
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Off-diagonal ground coherence `xi = chi p`.
    pub fn xi(&self) -> f64 {
        self.chi * self.ground_pop
    }

    pub fn excited_pop(&self) -> f64 {
        1.0 - self.n_levels as f64 * self.ground_pop
    }

    /// `eps_g = chi (N - 1)`.
    pub fn epsilon_g(&self) -> f64 {
        self.chi * (self.n_levels - 1) as f64
    }

    /// Closed-form ground-block eigenvalue bounds `-p/(N-1) <= xi <= p`.
    pub fn psd_closed_form(&self) -> Option<Constraint> {
        let p = self.ground_pop;
        let xi = self.xi();
        if p - xi < -PSD_TOLERANCE {
            Some(Constraint::GroundCoherenceUpper)
        } else if p + (self.n_levels - 1) as f64 * xi < -PSD_TOLERANCE {
            Some(Constraint::GroundCoherenceLower)
        } else {
            None
        }
    }
}

/// Two degenerate excited levels `|e_1>, |e_2>` over one ground level `|g>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoExcitedAtom {
    excited_pop: f64,
    eps_e: f64,
}

impl TwoExcitedAtom {
    pub fn new(excited_pop: f64, eps_e: f64) -> Result<Self> {
        let atom = Self::with_unchecked_coherence(excited_pop, eps_e)?;
        match atom.psd_closed_form() {
            None => Ok(atom),
            Some(c) => Err(Error::constraint(c, eps_e)),
        }
    }

    /// Checks `0 < P_ee` and `P_gg = 1 - 2 P_ee > P_ee`.
    pub fn with_unchecked_coherence(excited_pop: f64, eps_e: f64) -> Result<Self> {
        check_finite("eps_e", eps_e)?;
        let pe = check_finite("excited population", excited_pop)?;
        if !(pe > 0.0 && 1.0 - 2.0 * pe > pe) {
            return Err(Error::domain("excited population", "in (0, 1/3)", pe));
        }
        Ok(Self { excited_pop, eps_e })
    }

    /// Populations with `P_ee / (P_gg - P_ee) = nbar`.
    pub fn thermal(eps_e: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        Self::new(n / (3.0 * n + 1.0), eps_e)
    }

    /// [`thermal`](Self::thermal) without the positivity check.
    pub fn thermal_unchecked(eps_e: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        Self::with_unchecked_coherence(n / (3.0 * n + 1.0), eps_e)
    }

    pub fn excited_pop(&self) -> f64 {
        self.excited_pop
    }

    pub fn ground_pop(&self) -> f64 {
        1.0 - 2.0 * self.excited_pop
    }

    pub fn epsilon_e(&self) -> f64 {
        self.eps_e
    }

    pub fn psd_closed_form(&self) -> Option<Constraint> {
        if self.eps_e.abs() > 1.0 + PSD_TOLERANCE / self.excited_pop {
            Some(Constraint::ExcitedCoherencePsd)
        } else {
            None
        }
    }
}

/// Two ground and two excited levels with equal populations in each pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourLevelAtom {
    ground_pop: f64,
    eps_g: f64,
    eps_e: f64,
}

impl FourLevelAtom {
    pub fn new(ground_pop: f64, eps_g: f64, eps_e: f64) -> Result<Self> {
        let atom = Self::with_unchecked_coherence(ground_pop, eps_g, eps_e)?;
        match atom.psd_closed_form() {
            None => Ok(atom),
            Some(Constraint::ExcitedCoherencePsd) => {
                Err(Error::constraint(Constraint::ExcitedCoherencePsd, eps_e))
            }
            Some(c) => Err(Error::constraint(c, eps_g)),
        }
    }

    /// Checks `1/4 < p < 1/2` only.
    pub fn with_unchecked_coherence(ground_pop: f64, eps_g: f64, eps_e: f64) -> Result<Self> {
        check_finite("eps_g", eps_g)?;
        check_finite("eps_e", eps_e)?;
        let p = check_finite("ground population", ground_pop)?;
        if !(p > 0.25 && p < 0.5) {
            return Err(Error::domain("ground population", "in (1/4, 1/2)", p));
        }
        Ok(Self {
            ground_pop,
            eps_g,
            eps_e,
        })
    }

    /// Populations with `(1/2 - p) / (p - (1/2 - p)) = nbar`.
    pub fn thermal(eps_g: f64, eps_e: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        Self::new((1.0 + n) / (2.0 * (1.0 + 2.0 * n)), eps_g, eps_e)
    }

    /// [`thermal`](Self::thermal) without the positivity check.
    pub fn thermal_unchecked(eps_g: f64, eps_e: f64, nbar: MeanPhotonNumber) -> Result<Self> {
        let n = nbar.get();
        Self::with_unchecked_coherence((1.0 + n) / (2.0 * (1.0 + 2.0 * n)), eps_g, eps_e)
    }

    pub fn ground_pop(&self) -> f64 {
        self.ground_pop
    }

    /// Per-level excited population `1/2 - p`.
    pub fn excited_pop(&self) -> f64 {
        0.5 - self.ground_pop
    }

    pub fn epsilon_g(&self) -> f64 {
        self.eps_g
    }

    pub fn epsilon_e(&self) -> f64 {
        self.eps_e
    }

    /// `det rho = (1/2 - p)^2 p^2 (1 - eps_e^2)(1 - eps_g^2)`.
    pub fn determinant(&self) -> f64 {
        let p = self.ground_pop;
        let pe = self.excited_pop();
        pe * pe * p * p * (1.0 - self.eps_e * self.eps_e) * (1.0 - self.eps_g * self.eps_g)
    }

    pub fn psd_closed_form(&self) -> Option<Constraint> {
        if self.eps_e.abs() > 1.0 + PSD_TOLERANCE / self.excited_pop() {
            Some(Constraint::ExcitedCoherencePsd)
        } else if self.eps_g.abs() > 1.0 + PSD_TOLERANCE / self.ground_pop {
            Some(Constraint::GroundPairCoherencePsd)
        } else {
            None
        }
    }
}

/// Any of the three supported level schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomConfiguration {
    MultiGround(MultiGroundAtom),
    TwoExcited(TwoExcitedAtom),
    FourLevel(FourLevelAtom),
}

impl From<MultiGroundAtom> for AtomConfiguration {
    fn from(a: MultiGroundAtom) -> Self {
        AtomConfiguration::MultiGround(a)
    }
}

impl From<TwoExcitedAtom> for AtomConfiguration {
    fn from(a: TwoExcitedAtom) -> Self {
        AtomConfiguration::TwoExcited(a)
    }
}

impl From<FourLevelAtom> for AtomConfiguration {
    fn from(a: FourLevelAtom) -> Self {
        AtomConfiguration::FourLevel(a)
    }
}

impl AtomConfiguration {
    /// Normalized ground coherence; zero for the single-ground scheme.
    pub fn epsilon_g(&self) -> f64 {
        match self {
            AtomConfiguration::MultiGround(a) => a.epsilon_g(),
            AtomConfiguration::TwoExcited(_) => 0.0,
            AtomConfiguration::FourLevel(a) => a.epsilon_g(),
        }
    }

    /// Normalized excited coherence; zero for the single-excited scheme.
    pub fn epsilon_e(&self) -> f64 {
        match self {
            AtomConfiguration::MultiGround(_) => 0.0,
            AtomConfiguration::TwoExcited(a) => a.epsilon_e(),
            AtomConfiguration::FourLevel(a) => a.epsilon_e(),
        }
    }

    /// Per-level `(P_ee, P_g)`.
    pub fn level_populations(&self) -> (f64, f64) {
        match self {
            AtomConfiguration::MultiGround(a) => (a.excited_pop(), a.ground_pop()),
            AtomConfiguration::TwoExcited(a) => (a.excited_pop(), a.ground_pop()),
            AtomConfiguration::FourLevel(a) => (a.excited_pop(), a.ground_pop()),
        }
    }

    /// The explicit atomic density matrix, excited levels first.
    pub fn density_matrix(&self) -> SymmetricMatrix {
        match self {
            AtomConfiguration::MultiGround(a) => {
                let n = a.n_levels as usize;
                let mut m = SymmetricMatrix::zeros(n + 1);
                m.set(0, 0, a.excited_pop());
                let xi = a.xi();
                for i in 1..=n {
                    for j in i..=n {
                        m.set(i, j, if i == j { a.ground_pop } else { xi });
                    }
                }
                m
            }
            AtomConfiguration::TwoExcited(a) => {
                let mut m = SymmetricMatrix::zeros(3);
                m.set(0, 0, a.excited_pop);
                m.set(1, 1, a.excited_pop);
                m.set(0, 1, a.eps_e * a.excited_pop);
                m.set(2, 2, a.ground_pop());
                m
            }
            AtomConfiguration::FourLevel(a) => {
                let pe = a.excited_pop();
                let pg = a.ground_pop;
                let mut m = SymmetricMatrix::zeros(4);
                m.set(0, 0, pe);
                m.set(1, 1, pe);
                m.set(0, 1, a.eps_e * pe);
                m.set(2, 2, pg);
                m.set(3, 3, pg);
                m.set(2, 3, a.eps_g * pg);
                m
            }
        }
    }

    /// Closed-form positivity bounds; `None` when all are satisfied.
    pub fn psd_closed_form(&self) -> Option<Constraint> {
        match self {
            AtomConfiguration::MultiGround(a) => a.psd_closed_form(),
            AtomConfiguration::TwoExcited(a) => a.psd_closed_form(),
            AtomConfiguration::FourLevel(a) => a.psd_closed_form(),
        }
    }
}

/// Outcome of the eigenvalue positivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositivityReport {
    Valid {
        min_eigenvalue: f64,
    },
    Violation {
        constraint: Constraint,
        min_eigenvalue: f64,
    },
}

impl PositivityReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, PositivityReport::Valid { .. })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match *self {
            PositivityReport::Valid { min_eigenvalue }
            | PositivityReport::Violation { min_eigenvalue, .. } => min_eigenvalue,
        }
    }
}

/// Diagonalizes the density matrix and accepts it when every eigenvalue is
/// at least `-PSD_TOLERANCE`.
pub fn validate_positivity(atom: &AtomConfiguration) -> PositivityReport {
    let eig = atom.density_matrix().eigenvalues();
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    if min_eigenvalue >= -PSD_TOLERANCE {
        return PositivityReport::Valid { min_eigenvalue };
    }
    // The eigenvalues decide validity; the label only names the failing bound.
    let constraint = atom.psd_closed_form().unwrap_or(match atom {
        AtomConfiguration::MultiGround(a) => {
            if a.xi() > a.ground_pop {
                Constraint::GroundCoherenceUpper
            } else {
                Constraint::GroundCoherenceLower
            }
        }
        AtomConfiguration::TwoExcited(_) => Constraint::ExcitedCoherencePsd,
        AtomConfiguration::FourLevel(a) => {
            if a.excited_pop() * (1.0 - a.eps_e.abs()) <= a.ground_pop * (1.0 - a.eps_g.abs()) {
                Constraint::ExcitedCoherencePsd
            } else {
                Constraint::GroundPairCoherencePsd
            }
        }
    });
    PositivityReport::Violation {
        constraint,
        min_eigenvalue,
    }
}

/// Interval of admissible coherence values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_open: bool,
    pub upper_open: bool,
}

impl CoherenceBounds {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lower_open {
            x > self.lower
        } else {
            x >= self.lower
        };
        let below = if self.upper_open {
            x < self.upper
        } else {
            x <= self.upper
        };
        above && below
    }
}

/// Admissible `chi` for `N` ground levels in contact with a bath of mean
/// occupation `nbar`: `-1/((N-1)(nbar+1)) < chi <= 1`.
///
/// The lower endpoint is where the steady photon number diverges; the upper
/// endpoint is the rank-deficient but positive state `xi = p`.
pub fn chi_bounds(n_levels: u32, nbar: MeanPhotonNumber) -> Result<CoherenceBounds> {
    if n_levels < 2 {
        return Err(Error::domain(
            "number of ground levels",
            "at least 2",
            n_levels as f64,
        ));
    }
    let lower = -1.0 / ((n_levels - 1) as f64 * (nbar.get() + 1.0));
    Ok(CoherenceBounds {
        lower,
        upper: 1.0,
        lower_open: true,
        upper_open: false,
    })
}

/// Admissible `eps_e`: `-1 <= eps_e < 1/nbar`, capped by the closed PSD bound
/// `eps_e <= 1` when `nbar < 1`.
pub fn epsilon_e_bounds(nbar: MeanPhotonNumber) -> CoherenceBounds {
    let n = nbar.get();
    let (upper, upper_open) = if n >= 1.0 {
        (1.0 / n, true)
    } else {
        (1.0, false)
    };
    CoherenceBounds {
        lower: -1.0,
        upper,
        lower_open: false,
        upper_open,
    }
}

/// Effective real coherence for a complex ground coherence `|P| e^{i phi}`:
/// `chi = |P| cos(phi) / p`.
pub fn chi_from_phase(magnitude: f64, phase: f64, ground_pop: f64) -> Result<f64> {
    check_finite("phase", phase)?;
    if !(ground_pop.is_finite() && ground_pop > 0.0) {
        return Err(Error::domain(
            "ground population",
            "positive and finite",
            ground_pop,
        ));
    }
    if !(magnitude.is_finite() && magnitude >= 0.0) {
        return Err(Error::domain(
            "coherence magnitude",
            "non-negative and finite",
            magnitude,
        ));
    }
    if magnitude > ground_pop {
        return Err(Error::constraint(
            Constraint::GroundCoherenceUpper,
            magnitude,
        ));
    }
    Ok(magnitude * libm::cos(phase) / ground_pop)
}

/// Thermal photon number implied by the per-level populations,
/// `nbar = P_ee / (P_g - P_ee)`.
pub fn reference_nbar(atom: &AtomConfiguration) -> Result<MeanPhotonNumber> {
    let (pe, pg) = atom.level_populations();
    if pe >= pg {
        return Err(Error::constraint(Constraint::PopulationOrdering, pe - pg));
    }
    MeanPhotonNumber::new(pe / (pg - pe))
}
