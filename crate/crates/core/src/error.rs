// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight {value} of node {node} in edge {edge} is outside [0, 1]")]
    WeightOutOfRange { node: usize, edge: usize, value: f64 },

    #[error("hypergraph must have at least one node")]
    NoNodes,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("beta = {beta} is a pole: 1/beta is within {distance:e} of eigenvalue {lambda}")]
    Pole { beta: f64, lambda: f64, distance: f64 },

    #[error("series diverges: |beta| * lambda_max = {} >= 1 (beta = {beta}, lambda_max = {lambda_max})", beta.abs() * lambda_max)]
    SeriesDivergence { beta: f64, lambda_max: f64 },

    #[error("series mode requires a symmetric matrix")]
    NotSymmetric,

    #[error("matrix has a zero spectrum")]
    ZeroSpectrum,

    #[error("cannot rescale an all-zero score vector")]
    ZeroVector,

    #[error("node {node} is not a member of edge {edge}")]
    NotMember { node: usize, edge: usize },

    #[error("edge {edge} has no members")]
    EmptyEdge { edge: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("replayed output {path} differs from the recorded digest")]
    ReplayMismatch { path: String },

    #[error("growth step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable code, used on the command line's error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::WeightOutOfRange { .. } => "WEIGHT_RANGE",
            Error::NoNodes => "NO_NODES",
            Error::DimensionMismatch { .. } => "DIMENSION",
            Error::Pole { .. } => "POLE",
            Error::SeriesDivergence { .. } => "SERIES_DIVERGENCE",
            Error::NotSymmetric => "NOT_SYMMETRIC",
            Error::ZeroSpectrum => "ZERO_SPECTRUM",
            Error::ZeroVector => "ZERO_VECTOR",
            Error::NotMember { .. } => "NOT_MEMBER",
            Error::EmptyEdge { .. } => "EMPTY_EDGE",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::Parse { .. } => "PARSE",
            Error::ReplayMismatch { .. } => "REPLAY_MISMATCH",
            Error::AtStep { source, .. } => source.code(),
            Error::Io(_) => "IO",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
