use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid ballot: {0}")]
    InvalidBallot(String),
    #[error("invalid committee: {0}")]
    InvalidCommittee(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("voter {voter} out of range for {n} voters")]
    InvalidVoter { voter: usize, n: usize },
    #[error("invalid candidate ordering: {0}")]
    InvalidOrdering(String),
    #[error("profile ({0}) is not admissible")]
    Inadmissible(String),
    #[error("profile ({0}) is outside the table's domain")]
    OutsideDomain(String),
    #[error("enumeration of {count} profiles at m={m}, n={n} exceeds the cap of {cap}")]
    CapExceeded { m: usize, n: usize, count: u128, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("DIMACS error on line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("no allowed committee at profile ({0}); the encoding is trivially unsatisfiable")]
    EmptyAllowedSet(String),
    #[error("model decoding failed: {0}")]
    Decode(String),
    #[error("formula is satisfiable")]
    Satisfiable,
    #[error("solver gave up before reaching a verdict")]
    Aborted,
    #[error("transformer precondition violated: {0}")]
    Precondition(String),
    #[error("proof step {step} failed: {msg}")]
    ProofStep { step: String, msg: String },
    #[error("unknown name: {0}")]
    Unknown(String),
    #[error("manifest mismatch: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
