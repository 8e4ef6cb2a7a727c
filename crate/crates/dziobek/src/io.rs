//! JSON schemas for positions, solutions, reports, and distance matrices.
//!
//! Serialization goes through fixed-field structs so key order is stable
//! across runs.

use serde::{Deserialize, Serialize};

use crate::analysis::{ConvexityClass, OrderingReport, SymmetryReport};
use crate::delta::{CCSolution, Residuals, ValidationReport};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, MassVector};

/// Positions file: `{"dim": d, "points": [[x, ...], ...], "masses": [m1, ...]}`,
/// row order = particle label order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositionsFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub masses: Vec<f64>,
}

impl PositionsFile {
    pub fn from_parts(config: &Configuration, masses: &MassVector) -> Self {
        Self {
            dim: config.dim(),
            points: config.rows(),
            masses: masses.as_slice().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("positions JSON: {}", e)))
    }

    pub fn into_parts(self) -> Result<(Configuration, MassVector)> {
        if self.points.iter().any(|p| p.len() != self.dim) {
            return Err(Error::InvalidInput(
                "positions JSON: point dimensions disagree with \"dim\"".into(),
            ));
        }
        if self.masses.len() != self.points.len() {
            return Err(Error::InvalidInput(format!(
                "positions JSON: {} masses vs {} points",
                self.masses.len(),
                self.points.len()
            )));
        }
        Ok((Configuration::new(self.points)?, MassVector::new(self.masses)?))
    }
}

/// Distances file: `{"s": [[...], ...]}` with optional masses carried along.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistancesFile {
    pub s: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<f64>>,
}

impl DistancesFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("distances JSON: {}", e)))
    }
}

/// Solution file schema. Field order is the wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub masses: Vec<f64>,
    pub a: f64,
    pub deltas: Vec<f64>,
    pub s: Vec<Vec<f64>>,
    pub positions: Vec<Vec<f64>>,
    pub mu: f64,
    #[serde(rename = "lambda_over_M")]
    pub lambda_over_m: f64,
    pub residuals: Residuals,
    pub accepted: bool,
}

impl SolutionFile {
    pub fn from_solution(sol: &CCSolution) -> Self {
        Self {
            masses: sol.masses.as_slice().to_vec(),
            a: sol.exponent.a(),
            deltas: sol.deltas.as_slice().to_vec(),
            s: sol.distances.rows(),
            positions: sol.positions.rows(),
            mu: sol.mu,
            lambda_over_m: sol.lambda_over_m,
            residuals: sol.residuals,
            accepted: sol.accepted,
        }
    }
}

/// Top-level object emitted by a solve: every accepted solution in
/// lexicographic coordinate order, plus diagnostics for rejected roots.
#[derive(Debug, Clone, Serialize)]
pub struct SolveFile {
    pub solutions: Vec<SolutionFile>,
    pub spurious: Vec<crate::solver::SpuriousDiagnostic>,
    pub off_pattern: usize,
}

/// Analysis report per solution.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub symmetry: SymmetryBlock,
    pub ordering: Option<OrderingReport>,
    pub routh_residual: Option<f64>,
    pub product_residual: Option<f64>,
    pub convexity: ConvexityClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryBlock {
    pub mirrors: Vec<SymmetryReport>,
}

/// Validation report for the verify flow: the rescale factor applied to
/// reach the normalized gauge, then the standard validation verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyFile {
    pub scale_applied: f64,
    pub lambda_fitted: f64,
    pub validation: ValidationReport,
}

/// Serializes any of the schema types with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("schema types serialize");
    text.push('\n');
    text
}

/// 17 significant digits, enough to reproduce any f64 exactly.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}
