//! Infinitesimal generators and coordinate flow data, read off by forward-mode
//! differentiation at the identity point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{EvalError, RepKind, Representation, Value};
use crate::matrix::{CMatrix, Matrix, MatrixError};
use crate::scalar::{Dual, Scalar};

pub const DEFAULT_FD_STEP: f64 = 1e-6;
pub const FD_STEP_RANGE: (f64, f64) = (1e-9, 1e-2);
/// Imaginary parts above this make a coordinate rep non-real.
const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AutodiffError {
    #[error("parameter index {omega} out of range (program has {count})")]
    OmegaOutOfRange { omega: usize, count: usize },
    #[error("finite-difference step {0:e} outside [1e-9, 1e-2]")]
    StepOutOfRange(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("rep '{0}' is not an affine coordinate rep")]
    NotAffine(String),
    #[error("coordinate rep '{0}' has complex entries")]
    NotReal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dual,
    Fd,
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub matrix: CMatrix,
    pub param_index: usize,
    pub param_name: String,
    pub rep_name: String,
    pub method: Method,
}

fn check_omega(rep: &Representation, omega: usize) -> Result<(), AutodiffError> {
    let count = rep.program().param_count();
    if omega >= count {
        return Err(AutodiffError::OmegaOutOfRange { omega, count });
    }
    Ok(())
}

/// `∂ rep(b) / ∂ b^ω` at `b₀`, exact up to rounding.
pub fn generator(rep: &Representation, omega: usize) -> Result<Generator, AutodiffError> {
    check_omega(rep, omega)?;
    let b0 = rep.identity_point();
    let m = rep.eval::<Dual>(&b0.dual(omega))?;
    Ok(Generator {
        matrix: m.tangent(),
        param_index: omega,
        param_name: b0.names[omega].clone(),
        rep_name: rep.name().to_string(),
        method: Method::Dual,
    })
}

/// Generators for every parameter, in parameter order.
pub fn all_generators(rep: &Representation) -> Result<Vec<Generator>, AutodiffError> {
    (0..rep.program().param_count())
        .into_par_iter()
        .map(|w| generator(rep, w))
        .collect()
}

#[derive(Debug, Clone)]
pub struct FdCrosscheck {
    pub generator: Generator,
    /// Max-entry distance to the dual-number generator.
    pub discrepancy: f64,
    pub step: f64,
}

/// Central-difference generator and its distance to the dual-number one.
pub fn fd_crosscheck(rep: &Representation, omega: usize, step: f64) -> Result<FdCrosscheck, AutodiffError> {
    if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&step) {
        return Err(AutodiffError::StepOutOfRange(step));
    }
    let exact = generator(rep, omega)?;
    let b0 = rep.identity_point();
    let plus = rep.eval(&b0.shifted(omega, step).complex())?;
    let minus = rep.eval(&b0.shifted(omega, -step).complex())?;
    let fd = (&plus - &minus).scale(num_complex::Complex64::new(0.5 / step, 0.0));
    let discrepancy = fd.max_abs_diff(&exact.matrix);
    Ok(FdCrosscheck {
        generator: Generator {
            matrix: fd,
            method: Method::Fd,
            ..exact
        },
        discrepancy,
        step,
    })
}

/// Derivative data of an affine coordinate rep `H_b(r) = M(b) r + v(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlowData {
    pub param_index: usize,
    /// `∂/∂b^ω det[∂H_b(r)/∂r]` at `b₀`, by dual numbers through the determinant.
    pub delta: f64,
    /// `tr(∂M/∂b^ω)` at `b₀`.
    pub delta_trace: f64,
    /// `∂M/∂b^ω` at `b₀`, row-major.
    pub linear_part: Vec<Vec<f64>>,
    /// `∂v/∂b^ω` at `b₀`.
    pub shift_part: Vec<f64>,
}

impl AffineFlowData {
    pub fn dim(&self) -> usize {
        self.shift_part.len()
    }

    /// `h_ω(r) = L r + s`
    pub fn flow(&self, r: &[f64]) -> Vec<f64> {
        self.linear_part
            .iter()
            .zip(&self.shift_part)
            .map(|(row, s)| row.iter().zip(r).map(|(a, x)| a * x).sum::<f64>() + s)
            .collect()
    }

    /// `Δ_ω(r)`; constant for affine maps.
    pub fn delta_at(&self, _r: &[f64]) -> f64 {
        self.delta
    }

    /// Distance between the determinant and trace routes for `Δ_ω`.
    pub fn delta_discrepancy(&self) -> f64 {
        (self.delta - self.delta_trace).abs()
    }
}

fn real_part(m: &CMatrix, name: &str) -> Result<Vec<Vec<f64>>, AutodiffError> {
    if m.as_slice().iter().any(|z| z.im.abs() > REAL_TOL) {
        return Err(AutodiffError::NotReal(name.to_string()));
    }
    Ok(m.split_parts().0)
}

/// Flow data for a coordinate rep declared with `affine(M, v)`.
pub fn affine_flow(rep: &Representation, omega: usize) -> Result<AffineFlowData, AutodiffError> {
    check_omega(rep, omega)?;
    if rep.kind() != RepKind::Coordinate {
        return Err(AutodiffError::NotAffine(rep.name().to_string()));
    }
    let b0 = rep.identity_point();
    let (linear, shift): (Matrix<Dual>, Matrix<Dual>) = match rep.eval_value::<Dual>(&b0.dual(omega))? {
        Value::Affine { linear, shift } => (linear, shift),
        Value::Matrix(_) => return Err(AutodiffError::NotAffine(rep.name().to_string())),
    };
    // The Jacobian of an affine map is its linear part, independent of r.
    let jac_det = linear.det()?;
    let d_linear = linear.tangent();
    let delta_trace = d_linear.trace()?;
    if jac_det.eps.im.abs() > REAL_TOL || delta_trace.im.abs() > REAL_TOL {
        return Err(AutodiffError::NotReal(rep.name().to_string()));
    }
    let shift_part = real_part(&shift.tangent(), rep.name())?
        .into_iter()
        .map(|row| row[0])
        .collect();
    Ok(AffineFlowData {
        param_index: omega,
        delta: jac_det.eps.re,
        delta_trace: delta_trace.re,
        linear_part: real_part(&d_linear, rep.name())?,
        shift_part,
    })
}

/// `[generator(ω), generator(ω′)]`
pub fn generator_bracket(rep: &Representation, omega: usize, omega2: usize) -> Result<CMatrix, AutodiffError> {
    let a = generator(rep, omega)?;
    let b = generator(rep, omega2)?;
    Ok(a.matrix.commutator(&b.matrix)?)
}

/// Value of `rep` at `b₀`; used to sanity-check that it is the identity.
pub fn value_at_identity(rep: &Representation) -> Result<CMatrix, AutodiffError> {
    let b0 = rep.identity_point();
    Ok(rep.eval(&b0.complex())?.map(|z| z.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, PhaseCatalogEntry, Spin};
    use crate::dsl::parse_repfile;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn rep(src: &str, name: &str) -> Representation {
        Representation::new(Arc::new(parse_repfile(src).unwrap()), name).unwrap()
    }

    #[test]
    fn exponential_family_generator_is_its_matrix() {
        let r = rep("param b = 0; rep U : state = exp(b * [[0.2, 1], [-3, 0.5]]);", "U");
        let g = generator(&r, 0).unwrap();
        let a = CMatrix::real_rows(&[&[0.2, 1.0], &[-3.0, 0.5]]);
        assert!(g.matrix.max_abs_diff(&a) < 1e-15);
        assert_eq!(g.method, Method::Dual);
    }

    #[test]
    fn phase_generator() {
        let p = PhaseCatalogEntry::new(2.0, 1.0).unwrap();
        let g = generator(&p.component().unwrap(), 0).unwrap();
        // −q/(i e) = 2i for q = 2, e = 1
        assert!((g.matrix[(0, 0)] - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn vector_boost_generator() {
        let (_, d) = catalog::poincare(Spin::Vector).unwrap();
        let g = generator(&d, 0).unwrap();
        assert_eq!(g.param_name, "w01");
        assert!((g.matrix[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((g.matrix[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn omega_out_of_range() {
        let r = rep("param b = 0; rep U : state = [[1]];", "U");
        assert!(matches!(generator(&r, 3), Err(AutodiffError::OmegaOutOfRange { omega: 3, count: 1 })));
    }

    #[test]
    fn fd_on_nilpotent_exponential() {
        let r = rep("param b = 0; rep U : state = exp(b * [[0, 1], [0, 0]]);", "U");
        let x = fd_crosscheck(&r, 0, 1e-6).unwrap();
        assert!(x.discrepancy < 1e-9, "{}", x.discrepancy);
        assert_eq!(x.generator.method, Method::Fd);
    }

    #[test]
    fn fd_step_bounds() {
        let r = rep("param b = 0; rep U : state = [[1]];", "U");
        assert!(matches!(fd_crosscheck(&r, 0, 0.1), Err(AutodiffError::StepOutOfRange(_))));
        assert!(matches!(fd_crosscheck(&r, 0, 1e-12), Err(AutodiffError::StepOutOfRange(_))));
    }

    #[test]
    fn one_axis_dilation() {
        let r = rep(
            "param s = 0; rep H : coordinate = affine(id(4) + s * [[0,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]], [[0],[0],[0],[0]]);",
            "H",
        );
        let f = affine_flow(&r, 0).unwrap();
        assert_eq!(f.delta, 1.0);
        assert_eq!(f.delta_trace, 1.0);
        assert_eq!(f.flow(&[5.0, 7.0, 11.0, 13.0]), vec![0.0, 7.0, 0.0, 0.0]);
    }

    #[test]
    fn translation_flow() {
        let (h, _) = catalog::poincare(Spin::Scalar).unwrap();
        let a2 = h.program().param_index("a2").unwrap();
        let f = affine_flow(&h, a2).unwrap();
        assert!(f.linear_part.iter().flatten().all(|&x| x == 0.0));
        assert_eq!(f.shift_part, vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(f.delta, 0.0);
    }

    #[test]
    fn component_rep_is_not_affine() {
        let (_, d) = catalog::poincare(Spin::Vector).unwrap();
        assert!(matches!(affine_flow(&d, 0), Err(AutodiffError::NotAffine(_))));
    }

    #[test]
    fn brackets() {
        let (_, d) = catalog::poincare(Spin::Vector).unwrap();
        assert_eq!(generator_bracket(&d, 2, 2).unwrap().max_abs(), 0.0);
        let p = PhaseCatalogEntry::new(1.0, 1.0).unwrap().component().unwrap();
        assert!(generator_bracket(&p, 0, 0).unwrap().max_abs() < 1e-12);
    }
}
