use std::fmt;

use thiserror::Error;

use crate::label::Label;

/// Malformed text input (nodes, labels, trace lines, scenario and family files).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub message: String,
    pub line: Option<usize>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: None }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("W_{strategy} enumerates λ at stage {stage}; the 2IP construction forbids this")]
    LambdaEnumerated { strategy: usize, stage: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("every member of the family is empty")]
    AllEmpty,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("label {0} was never placed")]
    MissingLabel(Label),
    #[error("index {0} does not name a constructed set")]
    UnknownIndex(usize),
    #[error("oracle enumeration does not have the declared range")]
    EnumerationMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CraftError {
    #[error("infeasible scenario parameters: {0}")]
    ParamsInfeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("record {record}: witness {witness} is out of allocation order (expected {expected})")]
    WitnessOrder { record: usize, witness: u64, expected: u64 },
    #[error("record {record}: stage {stage} goes backwards (previous {previous})")]
    StageRegression { record: usize, stage: usize, previous: usize },
    #[error("record {record}: {message}")]
    Inconsistent { record: usize, message: String },
}
