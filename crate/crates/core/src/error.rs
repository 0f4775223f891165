use crate::grid::Cell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("cell ({}, {}) is outside the map", .0.x, .0.y)]
    OutOfBounds(Cell),

    #[error("cell ({}, {}) is blocked", .0.x, .0.y)]
    Blocked(Cell),

    #[error("scale factor must be at least 1")]
    ZeroScale,

    #[error("cell ({}, {}) is not on the perimeter of rectangle {rect}", .cell.x, .cell.y)]
    NotPerimeter { cell: Cell, rect: u32 },

    #[error("cell ({}, {}) is not an active perimeter node", .0.x, .0.y)]
    NotActive(Cell),

    #[error("cell ({}, {}) is pruned and has no inserted edges", .0.x, .0.y)]
    NotExpandable(Cell),

    #[error("perimeter of {0} nodes exceeds the clique oracle limit")]
    PerimeterTooLarge(usize),

    #[error("cell ({}, {}) already has the requested state", .0.x, .0.y)]
    NoOpChange(Cell),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
