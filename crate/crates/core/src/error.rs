use alloc::string::String;
use core::fmt;

/// A named physical constraint on the atomic state or the steady state.
///
/// Every bound the model enforces has a variant here so that rejections can
/// say which inequality failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `p + (N-1) xi >= 0`, the smallest ground-block eigenvalue for negative coherence.
    GroundCoherenceLower,
    /// `xi <= p`, the ground-block eigenvalue `p - xi`.
    GroundCoherenceUpper,
    /// `|eps_e| <= 1` for a pair of equally populated excited levels.
    ExcitedCoherencePsd,
    /// `|eps_g| <= 1` for a pair of equally populated ground levels.
    GroundPairCoherencePsd,
    /// `chi > -1/((N-1)(nbar+1))`, positivity of the steady photon number.
    ChiSteadyState,
    /// `eps_g > -1/(nbar+1)`, the same bound written for `eps_g`.
    EpsGSteadyState,
    /// `eps_e < 1/nbar`, positivity of the steady photon number.
    EpsESteadyState,
    /// `1 - nbar eps_e + (nbar+1) eps_g > 0`.
    PhotonNumberPositive,
    /// Heating formula requires `eps_g <= 0`.
    HeatingRegime,
    /// Cooling formula requires `eps_g > 0`.
    CoolingRegime,
    /// Population ordering `P_g > P_ee` per level.
    PopulationOrdering,
    /// Cold bath no hotter than the hot bath, `nbar_cold <= nbar`.
    BathOrdering,
}

impl Constraint {
    pub const ALL: [Constraint; 12] = [
        Constraint::GroundCoherenceLower,
        Constraint::GroundCoherenceUpper,
        Constraint::ExcitedCoherencePsd,
        Constraint::GroundPairCoherencePsd,
        Constraint::ChiSteadyState,
        Constraint::EpsGSteadyState,
        Constraint::EpsESteadyState,
        Constraint::PhotonNumberPositive,
        Constraint::HeatingRegime,
        Constraint::CoolingRegime,
        Constraint::PopulationOrdering,
        Constraint::BathOrdering,
    ];

    /// Inverse of [`as_str`](Self::as_str).
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Constraint::GroundCoherenceLower => "xi >= -p/(N-1)",
            Constraint::GroundCoherenceUpper => "xi <= p",
            Constraint::ExcitedCoherencePsd => "|eps_e| <= 1",
            Constraint::GroundPairCoherencePsd => "|eps_g| <= 1",
            Constraint::ChiSteadyState => "chi > -1/((N-1)(nbar+1))",
            Constraint::EpsGSteadyState => "eps_g > -1/(nbar+1)",
            Constraint::EpsESteadyState => "eps_e < 1/nbar",
            Constraint::PhotonNumberPositive => "1 - nbar*eps_e + (nbar+1)*eps_g > 0",
            Constraint::HeatingRegime => "eps_g <= 0",
            Constraint::CoolingRegime => "eps_g > 0",
            Constraint::PopulationOrdering => "P_g > P_ee",
            Constraint::BathOrdering => "nbar_cold <= nbar",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{quantity} must be {requirement}, got {value}")]
    Domain {
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("constraint violated: {constraint} (value {value})")]
    Constraint { constraint: Constraint, value: f64 },
    #[error("no steady state: gain {gain} >= loss {loss} (divergent pumping)")]
    NoSteadyState { gain: f64, loss: f64 },
    #[error("Fock truncation overflow at n_max = {n_max}: tail mass {tail_mass:e} exceeds tolerance, use a larger n_max")]
    TruncationOverflow { n_max: usize, tail_mass: f64 },
    #[error("invalid sweep spec at `{path}`: {reason}")]
    Spec { path: String, reason: String },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::Domain {
            quantity,
            requirement,
            value,
        }
    }

    pub(crate) fn constraint(constraint: Constraint, value: f64) -> Self {
        Error::Constraint { constraint, value }
    }

    pub(crate) fn spec(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
