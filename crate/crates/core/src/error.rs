use thiserror::Error;

pub type Result<T, E = EvidenceError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvidenceError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("focal set {0} appears more than once")]
    DuplicateFocal(String),
    #[error("mass {mass} on {set} is not strictly positive")]
    NonPositiveMass { set: String, mass: f64 },
    #[error("masses sum to {sum}, expected 1")]
    MassSumViolation { sum: f64 },
    #[error("operands are defined over different frames")]
    FrameMismatch,
    #[error("set references an element outside the frame")]
    ElementOutOfRange,
    #[error("operation requires a normalized body (m(∅) = {empty_mass})")]
    UnnormalizedBody { empty_mass: f64 },
    #[error("frame of size {size} exceeds the power-set limit of {max}")]
    FrameTooLarge { size: usize, max: usize },
    #[error("recovered mass {mass} is negative; input is not a commonality function")]
    NegativeMass { mass: f64 },
    #[error("total conflict: all mass lies on the empty set")]
    TotalConflict,
    #[error("tree and partition were built from different bodies")]
    TreePartitionMismatch,
    #[error("target frame does not contain every source variable")]
    NotASuperset,
    #[error("target variables are not a non-empty subset of the source variables")]
    NotASubset,
    #[error("invalid markov tree: {0}")]
    InvalidMarkovTree(String),
    #[error("no covering node for the requested variables")]
    NoCoveringNode,
    #[error("unknown node {0}")]
    UnknownNode(String),
}
