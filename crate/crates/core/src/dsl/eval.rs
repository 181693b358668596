//! Evaluation of expressions over any [`Scalar`] kind.

use num_complex::Complex64;
use thiserror::Error;

use super::ast::*;
use crate::catalog::{eta, gamma};
use crate::expm::matexp;
use crate::matrix::{Matrix, MatrixError};
use crate::scalar::{Dual, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {kind}")]
pub struct EvalError {
    pub span: Span,
    pub kind: EvalErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{0}")]
    Shape(String),
    #[error("expected {expected} parameter values, got {got}")]
    ParamCount { expected: usize, got: usize },
}

/// Either a plain matrix or an affine map `r ↦ linear·r + shift`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<S> {
    Matrix(Matrix<S>),
    Affine { linear: Matrix<S>, shift: Matrix<S> },
}

impl<S: Scalar> Value<S> {
    /// Matrix form; affine maps become the homogeneous `[[M, v], [0, 1]]`.
    pub fn into_matrix(self) -> Matrix<S> {
        match self {
            Value::Matrix(m) => m,
            Value::Affine { linear, shift } => {
                let n = linear.rows();
                Matrix::from_fn(n + 1, n + 1, |r, c| match (r < n, c < n) {
                    (true, true) => linear[(r, c)],
                    (true, false) => shift[(r, 0)],
                    (false, true) => S::zero(),
                    (false, false) => S::one(),
                })
            }
        }
    }
}

impl ParamPoint {
    pub fn complex(&self) -> Vec<Complex64> {
        self.values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    /// Dual values with a unit tangent on parameter `active` only.
    pub fn dual(&self, active: usize) -> Vec<Dual> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let eps = if i == active { 1.0 } else { 0.0 };
                Dual::new(Complex64::new(x, 0.0), Complex64::new(eps, 0.0))
            })
            .collect()
    }
}

/// Evaluate `expr` with parameter values `params` (program order).
pub fn eval_expr<S: Scalar>(program: &RepProgram, expr: &Expr, params: &[S]) -> Result<Value<S>, EvalError> {
    if params.len() != program.params.len() {
        return Err(EvalError {
            span: expr.span,
            kind: EvalErrorKind::ParamCount {
                expected: program.params.len(),
                got: params.len(),
            },
        });
    }
    let mut ev = Evaluator {
        program,
        params,
        cache: vec![None; program.bindings.len()],
    };
    ev.eval(expr)
}

/// Evaluate the named rep as a matrix (homogeneous form for coordinate reps).
pub fn eval_rep<S: Scalar>(program: &RepProgram, rep: &RepDecl, params: &[S]) -> Result<Matrix<S>, EvalError> {
    Ok(eval_expr(program, &rep.expr, params)?.into_matrix())
}

struct Evaluator<'p, S> {
    program: &'p RepProgram,
    params: &'p [S],
    cache: Vec<Option<Value<S>>>,
}

fn shape_err<T>(span: Span, msg: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError {
        span,
        kind: EvalErrorKind::Shape(msg.into()),
    })
}

impl<S: Scalar> Evaluator<'_, S> {
    fn matrix(&mut self, e: &Expr) -> Result<Matrix<S>, EvalError> {
        match self.eval(e)? {
            Value::Matrix(m) => Ok(m),
            Value::Affine { .. } => shape_err(e.span, "affine map used where a matrix is required"),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value<S>, EvalError> {
        let wrap = |kind: MatrixError| EvalError {
            span: e.span,
            kind: kind.into(),
        };
        let m = match &e.kind {
            ExprKind::Number(x) => Matrix::scalar(S::real(*x)),
            ExprKind::Imag => Matrix::scalar(S::constant(Complex64::new(0.0, 1.0))),
            ExprKind::Ident { target, .. } => match *target {
                Ref::Param(i) => Matrix::scalar(self.params[i]),
                Ref::Binding(i) => {
                    if let Some(v) = &self.cache[i] {
                        return Ok(v.clone());
                    }
                    let program = self.program;
                    let v = self.eval(&program.bindings[i].expr)?;
                    self.cache[i] = Some(v.clone());
                    return Ok(v);
                }
            },
            ExprKind::Matrix(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for row in rows {
                    let mut r = Vec::with_capacity(row.len());
                    for entry in row {
                        let v = self.matrix(entry)?;
                        if v.shape() != (1, 1) {
                            return shape_err(entry.span, "matrix literal entries must be scalars");
                        }
                        r.push(v[(0, 0)]);
                    }
                    out.push(r);
                }
                Matrix::from_rows(out)
            }
            ExprKind::Builtin(Builtin::Eta4) => eta().lift(),
            ExprKind::Builtin(Builtin::Id(n)) => Matrix::identity(*n),
            ExprKind::Builtin(Builtin::Gamma(k)) => gamma(*k as usize).lift(),
            ExprKind::Unary(op, arg) => {
                let a = self.matrix(arg)?;
                match op {
                    UnaryOp::Neg => -&a,
                    UnaryOp::Exp => matexp(&a).map_err(wrap)?,
                    UnaryOp::Inv => a.inverse().map_err(wrap)?,
                    UnaryOp::Det => Matrix::scalar(a.det().map_err(wrap)?),
                    UnaryOp::Tr => Matrix::scalar(a.trace().map_err(wrap)?),
                    UnaryOp::Transpose => a.transpose(),
                }
            }
            ExprKind::Binary(op, lhs, rhs) => {
                let a = self.matrix(lhs)?;
                let b = self.matrix(rhs)?;
                match op {
                    BinOp::Add => a.try_add(&b).map_err(wrap)?,
                    BinOp::Sub => a.try_sub(&b).map_err(wrap)?,
                    BinOp::Mul if a.shape() == (1, 1) => b.scale(a[(0, 0)]),
                    BinOp::Mul if b.shape() == (1, 1) => a.scale(b[(0, 0)]),
                    BinOp::Mul => a.try_mul(&b).map_err(wrap)?,
                }
            }
            ExprKind::Affine(lin, shift) => {
                let linear = self.matrix(lin)?;
                let shift_v = self.matrix(shift)?;
                if !linear.is_square() {
                    return shape_err(lin.span, "affine linear part must be square");
                }
                if shift_v.shape() != (linear.rows(), 1) {
                    return shape_err(
                        shift.span,
                        format!(
                            "affine shift must be a {}x1 column, got {}x{}",
                            linear.rows(),
                            shift_v.rows(),
                            shift_v.cols()
                        ),
                    );
                }
                return Ok(Value::Affine { linear, shift: shift_v });
            }
        };
        if !m.is_finite() {
            return Err(wrap(MatrixError::NonFinite));
        }
        Ok(Value::Matrix(m))
    }
}
