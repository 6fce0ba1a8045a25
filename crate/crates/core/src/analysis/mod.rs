//! Single-relational algorithms run on evaluated path matrices.

mod assortativity;
mod geodesic;
mod pagerank;
mod report;
mod spread;

use thiserror::Error;

pub use assortativity::{assortativity_categorical, assortativity_scalar, PropertyKind, VertexProperty};
pub use geodesic::{shortest_paths, GeodesicResult};
pub use pagerank::{merged_matrix, pagerank, PageRankConfig};
pub use report::{Report, Value};
pub use spread::spreading_activation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pagerank did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("path matrix has no nonzero entries")]
    Empty,
    #[error("degenerate property: zero variance")]
    DegenerateProperty,
    #[error("degenerate: one category")]
    DegenerateCategory,
    #[error("no property value for vertex id {0}")]
    MissingProperty(usize),
    #[error("property file line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Per-vertex nonnegative energies, indexed by vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyVector {
    pub values: Vec<f64>,
}

impl EnergyVector {
    pub fn new(values: Vec<f64>) -> Self {
        EnergyVector { values }
    }

    /// All energy on one vertex.
    pub fn unit(n: usize, at: usize) -> Self {
        let mut values = vec![0.0; n];
        values[at] = 1.0;
        EnergyVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}
