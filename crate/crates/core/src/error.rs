use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration too large: {what} exceeds the cap of {cap}")]
    EnumerationTooLarge { what: String, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("degenerate nodes: {0}")]
    DegenerateNodes(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("gadget search exhausted: {reason}")]
    SearchExhausted { reason: String, partial: Box<crate::gadgets::GadgetCertificate> },
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("stage `{stage}` failed: {detail}")]
    StageFailed { stage: String, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
