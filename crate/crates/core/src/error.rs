use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("samples belong to different terminals ({0} vs {1})")]
    TerminalMismatch(String, String),

    #[error("samples are not time ordered ({prev} s then {next} s)")]
    NonIncreasingTime { prev: f64, next: f64 },

    #[error("current change is zero; impedance is unobservable from this pair")]
    DegenerateCurrentChange,

    #[error("adaptive threshold requested before the screening trigger fired")]
    NotTriggered,

    #[error("regression window needs at least {needed} pairs, has {have}")]
    InsufficientData { needed: usize, have: usize },

    #[error("regression matrix is rank deficient")]
    RankDeficient,

    #[error("total least squares problem is nongeneric (|U22| = {0:e})")]
    NongenericTls(f64),

    #[error("AC voltage equation has no real solution (discriminant {0:e})")]
    VoltageCollapse(f64),

    #[error("firing angle out of range (cos alpha = {cos_alpha})")]
    AlphaOutOfRange { cos_alpha: f64 },

    #[error("converter voltage exceeds its no-load voltage (cos phi = {0})")]
    PowerFactorOutOfRange(f64),

    #[error("AC/DC fixed point did not converge in {iterations} iterations (last distance {distance:e})")]
    Divergence { iterations: usize, distance: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("line {line}: {reason}")]
    Csv { line: u64, reason: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that mean "this operating point does not exist"
    /// rather than a usage mistake.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::VoltageCollapse(_)
                | Error::AlphaOutOfRange { .. }
                | Error::PowerFactorOutOfRange(_)
                | Error::Divergence { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
