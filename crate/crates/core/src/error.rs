use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unknown state label {0:?}")]
    UnknownState(String),
    #[error("duplicate state label {0:?}")]
    DuplicateState(String),
    #[error("state space must contain at least one label")]
    EmptyStateSpace,
    #[error("asymmetric edge set: reverse of {0} is missing")]
    Asymmetric(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("support cap exceeded: {sites} sites with {entries} table entries")]
    SupportCap { sites: usize, entries: u128 },
    #[error("component support {0} is not contained in the target site set")]
    SupportNotContained(String),
    #[error("function attached to site {site} is not local within radius {radius}")]
    LocalityViolation { site: String, radius: u64 },
    #[error("normalization violated: {0}")]
    NotNormalized(String),
    #[error("exact-support vanishing condition violated on support {0}")]
    VanishingViolation(String),
    #[error("component {support} has diameter {diameter} exceeding radius {radius}")]
    RadiusViolation { support: String, diameter: u64, radius: u64 },
    #[error("interaction is not exchangeable: no path from ({0},{1}) to ({1},{0})")]
    NotExchangeable(String, String),
    #[error("map is not a bijection: {0}")]
    NotBijection(String),
    #[error("base state or graph mismatch: {0}")]
    Mismatch(String),
    #[error("translated family requires a lattice graph")]
    NotLattice,
    #[error("translated family on an unbounded lattice has no finite site system")]
    UnboundedFamily,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::UnknownState(_) => "unknown_state",
            Error::DuplicateState(_) => "duplicate_state",
            Error::EmptyStateSpace => "empty_state_space",
            Error::Asymmetric(_) => "asymmetric",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::Disconnected => "disconnected",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::SupportCap { .. } => "support_cap",
            Error::SupportNotContained(_) => "support_not_contained",
            Error::LocalityViolation { .. } => "locality_violation",
            Error::NotNormalized(_) => "not_normalized",
            Error::VanishingViolation(_) => "vanishing_violation",
            Error::RadiusViolation { .. } => "radius_violation",
            Error::NotExchangeable(..) => "not_exchangeable",
            Error::NotBijection(_) => "not_bijection",
            Error::Mismatch(_) => "mismatch",
            Error::NotLattice => "not_lattice",
            Error::UnboundedFamily => "unbounded_family",
            Error::WindowTooSmall(_) => "window_too_small",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::Invalid(_) => "invalid_input",
        }
    }

    /// True for I/O and parse failures, false for domain violations.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
