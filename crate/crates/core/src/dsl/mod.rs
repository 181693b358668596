//! The rep-file language: parametrized matrix representations written as
//! `param`, `let` and `rep` declarations.
//!
//! ```text
//! param b = 0;
//! let A = [[0, 1], [-1, 0]];
//! rep U : state = exp(b * A);
//! ```

mod ast;
mod eval;
mod lexer;
mod parser;
mod printer;
mod validate;

use std::sync::Arc;

use thiserror::Error;

pub use ast::*;
pub use eval::{eval_expr, eval_rep, EvalError, EvalErrorKind, Value};
pub use parser::parse_repfile;
pub use validate::{validate_program, Diagnostic, IDENTITY_TOL};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        span: Span,
        found: String,
        expected: Vec<String>,
    },
    #[error("ragged matrix literal at {span}")]
    Ragged { span: Span },
    #[error("duplicate name '{name}' at {span}")]
    Duplicate { name: String, span: Span },
    #[error("unknown identifier '{name}' at {span}")]
    UnknownIdentifier { name: String, span: Span },
    #[error("unexpected character '{ch}' at {span}")]
    UnexpectedChar { ch: char, span: Span },
    #[error("invalid number '{text}' at {span}")]
    BadNumber { text: String, span: Span },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::Ragged { span }
            | ParseError::Duplicate { span, .. }
            | ParseError::UnknownIdentifier { span, .. }
            | ParseError::UnexpectedChar { span, .. }
            | ParseError::BadNumber { span, .. } => *span,
        }
    }
}

/// One named rep of a shared program, evaluable at any parameter point.
#[derive(Debug, Clone)]
pub struct Representation {
    program: Arc<RepProgram>,
    index: usize,
}

impl Representation {
    pub fn new(program: Arc<RepProgram>, name: &str) -> Option<Self> {
        let index = program.rep_index(name)?;
        Some(Representation { program, index })
    }

    pub fn program(&self) -> &RepProgram {
        &self.program
    }

    pub fn decl(&self) -> &RepDecl {
        &self.program.reps[self.index]
    }

    pub fn name(&self) -> &str {
        &self.decl().name
    }

    pub fn kind(&self) -> RepKind {
        self.decl().kind
    }

    pub fn identity_point(&self) -> ParamPoint {
        self.program.identity_point()
    }

    pub fn eval<S: Scalar>(&self, params: &[S]) -> Result<Matrix<S>, EvalError> {
        eval_rep(&self.program, self.decl(), params)
    }

    pub fn eval_value<S: Scalar>(&self, params: &[S]) -> Result<Value<S>, EvalError> {
        eval_expr(&self.program, &self.decl().expr, params)
    }
}
