use thiserror::Error;

use crate::diagram::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("item {0} is not in the item universe")]
    UnknownItem(u32),
    #[error("method {0} is not in the method universe")]
    UnknownMethod(u32),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(ValidationReport),
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("invalid population: {0}")]
    InvalidPopulation(String),
    #[error("assignment does not cover the diagram: {0}")]
    IncompleteAssignment(String),
    #[error("assignment infeasible at vertex `{vertex}`: {detail}")]
    InfeasibleAssignment { vertex: String, detail: String },
    #[error("initial assignment infeasible at vertex `{0}`")]
    InitialAssignmentInfeasible(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid setting id {0} (expected 1, 2 or 3)")]
    InvalidSetting(u8),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("brute-force enumeration of {size} assignments exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("generation error: {0}")]
    Generation(String),
    #[error("unknown instance template {0}")]
    UnknownTemplate(u8),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
