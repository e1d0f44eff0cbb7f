use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("column `{0}` not found")]
    UnknownColumn(String),

    #[error("row {row} has {found} cells, header has {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dataset has {rows} rows and {cols} columns after cleaning (need at least 3 rows and 2 columns)")]
    EmptyDataset { rows: usize, cols: usize },

    #[error("column `{0}` is discrete; a continuous response is required")]
    DiscreteResponse(String),

    #[error("singular design: columns {columns:?} are linearly dependent on the others")]
    SingularDesign { columns: Vec<String> },

    #[error("need more than {needed} observations, got {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("every path step failed to fit for target `{0}`")]
    AllStepsFailed(String),
}

impl Error {
    /// Singular designs and failed fits are numerical problems; everything
    /// else is a problem with the input data or arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularDesign { .. } | Error::AllStepsFailed(_)
        )
    }
}
