//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LaneError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Least-squares fit asked for a line with all x equal.
    #[error("vertical line: all x values equal, slope undefined")]
    VerticalLine,

    #[error("singular system: {0}")]
    Singular(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    /// Vehicle strayed too far from the track to render or project.
    #[error("vehicle off track: {0:.3} m from the course middle line")]
    OffTrack(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LaneError>;
