use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("edge {0} occurs more than once in child tuples")]
    DuplicateChild(String),
    #[error("more than one root: {0:?}")]
    MultipleRoots(Vec<String>),
    #[error("descendancy has a cycle through {0:?}")]
    CycleDetected(Vec<String>),
    #[error("edge {0} is referenced but not declared")]
    OrphanEdge(String),
    #[error("root mismatch: {0}")]
    RootMismatch(String),
    #[error("map is not monotone at vertex {0}")]
    NotMonotone(String),
    #[error("{0} is not an inner edge")]
    NotInnerEdge(String),
    #[error("relation {0} is not in the broad closure")]
    RelationNotInClosure(String),
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("map is not injective on edges: {0}")]
    NotInjective(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("orbit mismatch: {0}")]
    OrbitMismatch(String),
    #[error("edge set is empty")]
    EmptyE,
    #[error("edge set is not G-stable: {0}")]
    NotGStable(String),
    #[error("edge set contains non-inner edge {0}")]
    NotInner(String),
    #[error("not a pushout at step {step}: {reason}")]
    NotAPushout { step: usize, reason: String },
    #[error("malformed poset: {0}")]
    MalformedPoset(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("tensor factors are not open (stumps present)")]
    FactorsNotOpen,
    #[error("generated order is not antisymmetric: {0}")]
    OrderNotAntisymmetric(String),
    #[error("operad axiom violated: {0}")]
    AxiomViolation(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error reports a computed negative answer rather than bad
    /// input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::NotAPushout { .. } | Error::VerificationFailed(_) | Error::OrderNotAntisymmetric(_)
        )
    }
}
