//! Both sides of each Heisenberg relation, assembled independently and
//! compared entrywise.

mod charge;
mod closure;
mod frame;
mod local;
mod report;
mod suite;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use charge::{sample_points, verify_global_charge, DEFAULT_CHARGES};
pub use closure::{algebra_closure, jacobi_residual, lorentz_pattern, lorentz_pattern_residual, ClosureTable};
pub use frame::{frame_residual, random_frame, verify_frame_independence, FrameChange, FRAME_CONDITION_LIMIT};
pub use local::{translation_mixing_source, verify_local, verify_translation_with_h, Intrinsics, LocalTarget};
pub use report::{render_table, Report, ReportError, ReportRelation, SCHEMA_VERSION};
pub use suite::{file_relations, run_relation, run_suite, RunOptions, RELATION_NAMES};

use crate::autodiff::{AutodiffError, Method};
use crate::catalog::CatalogError;
use crate::matrix::{CMatrix, MatrixError};
use crate::realization::RealizationError;

pub const DEFAULT_TOL_EXPONENTIAL: f64 = 1e-9;
pub const DEFAULT_TOL_EXACT: f64 = 1e-12;
pub const DEFAULT_TOL_FD: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Autodiff(#[from] AutodiffError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("frame change is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("relation '{relation}' produced a non-finite residual")]
    NonFinite { relation: String },
    #[error("{0}")]
    Config(String),
    #[error("relation '{name}': {source}")]
    Relation { name: String, source: Box<VerifyError> },
}

impl VerifyError {
    /// Floating-point breakdown as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            VerifyError::Relation { source, .. } => source.is_numerical(),
            other => matches!(
                other,
                VerifyError::NonFinite { .. }
                    | VerifyError::Matrix(MatrixError::NonFinite | MatrixError::Singular { .. })
                    | VerifyError::Autodiff(AutodiffError::Matrix(MatrixError::NonFinite | MatrixError::Singular { .. }))
            ),
        }
    }

    fn in_relation(self, name: &str) -> Self {
        match self {
            e @ (VerifyError::NonFinite { .. } | VerifyError::Relation { .. }) => e,
            e => VerifyError::Relation {
                name: name.to_string(),
                source: Box::new(e),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Spacetime,
    Internal,
    Bundle,
    FockGlobal,
    FockLocal,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Spacetime => "spacetime",
            Mode::Internal => "internal",
            Mode::Bundle => "bundle",
            Mode::FockGlobal => "fock-global",
            Mode::FockLocal => "fock-local",
        }
    }
}

/// Tolerance classes: operators built from exponentials, and exactly
/// integer-structured ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub exponential: f64,
    pub exact: f64,
    /// Dual-number against central-difference generators.
    pub fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exponential: DEFAULT_TOL_EXPONENTIAL,
            exact: DEFAULT_TOL_EXACT,
            fd: DEFAULT_TOL_FD,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            exponential: tol,
            exact: tol,
            fd: tol,
        }
    }
}

/// Settings shared by every relation kind.
#[derive(Debug, Clone)]
pub struct RelationSpec {
    pub name: String,
    pub mode: Mode,
    pub degree: usize,
    pub cutoff: usize,
    pub tolerances: Tolerances,
    /// Step of the central-difference cross-check records.
    pub step: f64,
    /// Multiply both sides by `iħ` with `ħ = 1`.
    pub physical: bool,
}

impl RelationSpec {
    pub fn new(name: impl Into<String>, mode: Mode) -> Self {
        RelationSpec {
            name: name.into(),
            mode,
            degree: 4,
            cutoff: 8,
            tolerances: Tolerances::default(),
            step: crate::autodiff::DEFAULT_FD_STEP,
            physical: false,
        }
    }

    pub fn step(mut self, h: f64) -> Self {
        self.step = h;
        self
    }

    pub fn degree(mut self, d: usize) -> Self {
        self.degree = d;
        self
    }

    pub fn cutoff(mut self, n: usize) -> Self {
        self.cutoff = n;
        self
    }

    pub fn tolerances(mut self, t: Tolerances) -> Self {
        self.tolerances = t;
        self
    }

    pub fn physical(mut self, on: bool) -> Self {
        self.physical = on;
        self
    }

    fn rescale(&self, m: &CMatrix) -> CMatrix {
        if self.physical {
            m.scale(Complex64::new(0.0, 1.0))
        } else {
            m.clone()
        }
    }

    /// Rescaled max-entry distance; non-finite results become errors.
    pub fn residual(&self, lhs: &CMatrix, rhs: &CMatrix) -> Result<f64, VerifyError> {
        if lhs.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch {
                op: "residual",
                left: lhs.shape(),
                right: rhs.shape(),
            }
            .into());
        }
        let r = self.rescale(lhs).max_abs_diff(&self.rescale(rhs));
        if !r.is_finite() {
            return Err(VerifyError::NonFinite {
                relation: self.name.clone(),
            });
        }
        Ok(r)
    }

    pub fn record(&self, omega: impl Into<String>, residual: f64, tolerance: f64, method: Method) -> Record {
        Record {
            omega: omega.into(),
            residual,
            tolerance,
            pass: residual < tolerance,
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub omega: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub mode: Mode,
    pub records: Vec<Record>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn new(spec: &RelationSpec, records: Vec<Record>, elapsed_ms: f64) -> Self {
        VerificationReport {
            name: spec.name.clone(),
            mode: spec.mode,
            records,
            elapsed_ms,
        }
    }

    /// True iff every record passes; an empty report does not pass.
    pub fn pass(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// First record with this label; the dual-number one when both exist.
    pub fn record(&self, omega: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.omega == omega)
    }

    pub fn record_with(&self, omega: &str, method: Method) -> Option<&Record> {
        self.records.iter().find(|r| r.omega == omega && r.method == method)
    }

    /// Largest residual among dual-number records.
    pub fn dual_residual(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.method == Method::Dual)
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

/// `AB − BA`
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, VerifyError> {
    Ok(a.commutator(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::FockSpace;

    #[test]
    fn unit_commutator() {
        let e12 = CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e21 = CMatrix::real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(commutator(&e12, &e21).unwrap(), CMatrix::real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]));
        assert_eq!(commutator(&e12, &e12).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn charge_lowers() {
        let f = FockSpace::new(8);
        let c = commutator(&f.charge(1.0), &f.annihilation()).unwrap();
        assert!(c.max_abs_diff(&-&f.annihilation()) < 1e-13);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        assert!(commutator(&CMatrix::identity(2), &CMatrix::identity(3)).is_err());
    }

    #[test]
    fn physical_rescale_keeps_residual() {
        let a = CMatrix::real_rows(&[&[1.0, 2.0], &[0.5, -1.0]]);
        let b = CMatrix::real_rows(&[&[1.0, 2.5], &[0.5, -1.25]]);
        let plain = RelationSpec::new("x", Mode::Internal);
        let phys = plain.clone().physical(true);
        assert_eq!(plain.residual(&a, &b).unwrap(), phys.residual(&a, &b).unwrap());
    }

    #[test]
    fn nan_residual_is_an_error() {
        let a = CMatrix::scalar(Complex64::new(f64::NAN, 0.0));
        let spec = RelationSpec::new("broken", Mode::Internal);
        assert!(matches!(spec.residual(&a, &a), Err(VerifyError::NonFinite { relation }) if relation == "broken"));
    }

    #[test]
    fn empty_report_fails() {
        let spec = RelationSpec::new("x", Mode::Internal);
        assert!(!VerificationReport::new(&spec, vec![], 0.0).pass());
        let r = spec.record("b", 0.0, 1e-12, Method::Dual);
        assert!(VerificationReport::new(&spec, vec![r], 0.0).pass());
    }
}
