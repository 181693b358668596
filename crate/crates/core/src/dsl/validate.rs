//! Static shape checks plus the identity-at-`b₀` check for every rep.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::ast::*;
use super::eval::eval_rep;
use crate::matrix::{format_value, CMatrix};

/// Entrywise tolerance for a rep to count as the identity at `b₀`.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Mat(usize, usize),
    Affine(usize),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Mat(r, c) => write!(f, "{r}x{c}"),
            Shape::Affine(n) => write!(f, "affine map on R^{n}"),
        }
    }
}

/// Empty iff every expression is dimensionally consistent and every rep
/// evaluates to the identity at the program's identity point.
pub fn validate_program(p: &RepProgram) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut binding_shapes: Vec<Option<Shape>> = Vec::with_capacity(p.bindings.len());
    for b in &p.bindings {
        match infer(&b.expr, &binding_shapes) {
            Ok(s) => binding_shapes.push(Some(s)),
            Err(d) => {
                diags.push(d);
                binding_shapes.push(None);
            }
        }
    }

    let mut shape_ok = vec![false; p.reps.len()];
    for (k, rep) in p.reps.iter().enumerate() {
        let shape = match infer(&rep.expr, &binding_shapes) {
            Ok(s) => s,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        match (rep.kind, shape) {
            (RepKind::Coordinate, Shape::Affine(_)) => shape_ok[k] = true,
            (RepKind::Coordinate, s) => diags.push(Diagnostic::new(
                rep.span,
                format!("coordinate rep '{}' must be an affine(M, v) map, found {s}", rep.name),
            )),
            (_, Shape::Mat(r, c)) if r == c => shape_ok[k] = true,
            (kind, s) => diags.push(Diagnostic::new(
                rep.span,
                format!("{} rep '{}' must be a square matrix, found {s}", kind.as_str(), rep.name),
            )),
        }
    }
    if !diags.is_empty() {
        return diags;
    }

    let b0 = p.identity_point().complex();
    for (rep, _) in p.reps.iter().zip(&shape_ok).filter(|(_, ok)| **ok) {
        match eval_rep::<Complex64>(p, rep, &b0) {
            Ok(m) => {
                let id = CMatrix::identity(m.rows());
                if m.max_abs_diff(&id) > IDENTITY_TOL {
                    diags.push(Diagnostic::new(
                        rep.span,
                        format!("rep '{}' is {} ≠ identity at b₀", rep.name, format_value(&m)),
                    ));
                }
            }
            Err(e) => diags.push(Diagnostic::new(
                e.span,
                format!("rep '{}' fails to evaluate at b₀: {}", rep.name, e.kind),
            )),
        }
    }
    diags
}

fn infer(e: &Expr, bindings: &[Option<Shape>]) -> Result<Shape, Diagnostic> {
    let mat = |e: &Expr| -> Result<(usize, usize), Diagnostic> {
        match infer(e, bindings)? {
            Shape::Mat(r, c) => Ok((r, c)),
            s => Err(Diagnostic::new(e.span, format!("expected a matrix, found {s}"))),
        }
    };
    let square = |e: &Expr, what: &str| -> Result<usize, Diagnostic> {
        let (r, c) = mat(e)?;
        if r == c {
            Ok(r)
        } else {
            Err(Diagnostic::new(e.span, format!("{what} requires a square matrix, found {r}x{c}")))
        }
    };
    Ok(match &e.kind {
        ExprKind::Number(_) | ExprKind::Imag => Shape::Mat(1, 1),
        ExprKind::Ident { name, target } => match *target {
            Ref::Param(_) => Shape::Mat(1, 1),
            Ref::Binding(i) => match bindings.get(i).copied().flatten() {
                Some(s) => s,
                None => {
                    return Err(Diagnostic::new(e.span, format!("binding '{name}' is ill-formed")));
                }
            },
        },
        ExprKind::Matrix(rows) => {
            for entry in rows.iter().flatten() {
                if mat(entry)? != (1, 1) {
                    return Err(Diagnostic::new(entry.span, "matrix literal entries must be scalars"));
                }
            }
            Shape::Mat(rows.len(), rows[0].len())
        }
        ExprKind::Builtin(Builtin::Eta4) | ExprKind::Builtin(Builtin::Gamma(_)) => Shape::Mat(4, 4),
        ExprKind::Builtin(Builtin::Id(n)) => Shape::Mat(*n, *n),
        ExprKind::Unary(op, arg) => match op {
            UnaryOp::Neg => Shape::Mat(mat(arg)?.0, mat(arg)?.1),
            UnaryOp::Transpose => {
                let (r, c) = mat(arg)?;
                Shape::Mat(c, r)
            }
            UnaryOp::Exp | UnaryOp::Inv => {
                let n = square(arg, op.name())?;
                Shape::Mat(n, n)
            }
            UnaryOp::Det | UnaryOp::Tr => {
                square(arg, op.name())?;
                Shape::Mat(1, 1)
            }
        },
        ExprKind::Binary(op, a, b) => {
            let sa = mat(a)?;
            let sb = mat(b)?;
            match op {
                BinOp::Add | BinOp::Sub => {
                    if sa != sb {
                        return Err(Diagnostic::new(
                            e.span,
                            format!("'{}' of {}x{} and {}x{}", op.symbol(), sa.0, sa.1, sb.0, sb.1),
                        ));
                    }
                    Shape::Mat(sa.0, sa.1)
                }
                BinOp::Mul if sa == (1, 1) => Shape::Mat(sb.0, sb.1),
                BinOp::Mul if sb == (1, 1) => Shape::Mat(sa.0, sa.1),
                BinOp::Mul => {
                    if sa.1 != sb.0 {
                        return Err(Diagnostic::new(
                            e.span,
                            format!("'*' of {}x{} and {}x{}", sa.0, sa.1, sb.0, sb.1),
                        ));
                    }
                    Shape::Mat(sa.0, sb.1)
                }
            }
        }
        ExprKind::Affine(m, v) => {
            let n = square(m, "affine")?;
            let sv = mat(v)?;
            if sv != (n, 1) {
                return Err(Diagnostic::new(
                    v.span,
                    format!("affine shift must be {n}x1, found {}x{}", sv.0, sv.1),
                ));
            }
            Shape::Affine(n)
        }
    })
}
