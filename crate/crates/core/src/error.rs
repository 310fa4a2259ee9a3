use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jet cutoff exceeded: needs w_{needed}, cutoff is w_{cutoff}")]
    JetCutoff { needed: usize, cutoff: usize },

    #[error("flow cutoff exceeded: needs index {needed}, cutoff is {cutoff}")]
    FlowCutoff { needed: usize, cutoff: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("not a total x-derivative: {0}")]
    NotExact(String),

    #[error("singular substitution: {0}")]
    Singular(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("ansatz insufficient: {0}")]
    Ansatz(String),

    #[error("normal-form pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
