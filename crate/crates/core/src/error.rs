use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A rule number outside `0..k^(k^(2r+1))`.
    #[error("rule number {number} out of range: valid interval is [0, {limit}) for k={colors}, r={radius}")]
    RuleRange {
        number: String,
        limit: String,
        colors: u8,
        radius: u8,
    },
    /// A cell colour that the rule (or grid) cannot represent.
    #[error("cell colour {color} is not valid for k={colors}")]
    Domain { color: u8, colors: u8 },
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Least-squares fit with no spread in the abscissa.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    /// Results computed on different parameter grids cannot be compared.
    #[error("incomparable results: {0}")]
    Incomparable(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
