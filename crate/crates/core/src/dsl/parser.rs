//! Recursive-descent parser for rep-files.

use std::collections::HashMap;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

const RESERVED: &[&str] = &[
    "param", "let", "rep", "i", "exp", "inv", "det", "tr", "transpose", "affine", "id", "eta4",
    "gamma0", "gamma1", "gamma2", "gamma3",
];

const FACTOR_START: &[&str] = &["number", "identifier", "'['", "'('", "'-'"];

/// Parse a rep-file into a program. Identifiers are resolved during the
/// parse, so a successful result has no dangling references.
pub fn parse_repfile(text: &str) -> Result<RepProgram, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        program: RepProgram::default(),
        names: HashMap::new(),
    };
    p.program()?;
    Ok(p.program)
}

#[derive(Clone, Copy)]
enum Declared {
    Param(usize),
    Binding(usize),
    Rep,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    program: RepProgram,
    names: HashMap<String, Declared>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            span: t.span,
            found: t.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<Span, ParseError> {
        let span = self.peek().span;
        if self.eat_punct(c) {
            Ok(span)
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn peek_ident(&self) -> Option<&str> {
        match &self.peek().tok {
            Tok::Ident(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn expect_new_name(&mut self) -> Result<(String, Span), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) if !RESERVED.contains(&name.as_str()) => {
                self.pos += 1;
                if self.names.contains_key(&name) {
                    return Err(ParseError::Duplicate { name, span: t.span });
                }
                Ok((name, t.span))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn program(&mut self) -> Result<(), ParseError> {
        loop {
            if self.peek().tok == Tok::Eof {
                return Ok(());
            }
            let start = self.peek().span;
            match self.peek_ident() {
                Some("param") => {
                    self.pos += 1;
                    let (name, _) = self.expect_new_name()?;
                    self.expect_punct('=')?;
                    let negative = self.eat_punct('-');
                    let identity = match self.bump().tok {
                        Tok::Number(x) => {
                            if negative {
                                -x
                            } else {
                                x
                            }
                        }
                        _ => {
                            self.pos -= 1;
                            return Err(self.error(&["number"]));
                        }
                    };
                    self.names
                        .insert(name.clone(), Declared::Param(self.program.params.len()));
                    self.program.params.push(ParamDecl {
                        name,
                        identity,
                        span: start,
                    });
                }
                Some("let") => {
                    self.pos += 1;
                    let (name, _) = self.expect_new_name()?;
                    self.expect_punct('=')?;
                    let expr = self.expr()?;
                    self.names
                        .insert(name.clone(), Declared::Binding(self.program.bindings.len()));
                    self.program.bindings.push(Binding {
                        name,
                        expr,
                        span: start,
                    });
                }
                Some("rep") => {
                    self.pos += 1;
                    let (name, _) = self.expect_new_name()?;
                    self.expect_punct(':')?;
                    let kind = match self.peek_ident() {
                        Some("coordinate") => RepKind::Coordinate,
                        Some("component") => RepKind::Component,
                        Some("state") => RepKind::State,
                        _ => return Err(self.error(&["'coordinate'", "'component'", "'state'"])),
                    };
                    self.pos += 1;
                    self.expect_punct('=')?;
                    let expr = self.expr()?;
                    self.names.insert(name.clone(), Declared::Rep);
                    self.program.reps.push(RepDecl {
                        name,
                        kind,
                        expr,
                        span: start,
                    });
                }
                _ => return Err(self.error(&["'param'", "'let'", "'rep'", "end of input"])),
            }
            if !self.eat_punct(';') {
                return Err(self.error(&["';'", "'+'", "'-'", "'*'"]));
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Punct('+') => BinOp::Add,
                Tok::Punct('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::Punct('*') {
            let span = self.bump().span;
            let rhs = self.factor()?;
            lhs = Expr::new(ExprKind::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(x) => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Number(x), t.span))
            }
            Tok::Punct('-') => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(Expr::new(ExprKind::Unary(UnaryOp::Neg, Box::new(inner)), t.span))
            }
            Tok::Punct('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Punct('[') => self.matrix(),
            Tok::Ident(name) => {
                self.pos += 1;
                self.ident(name, t.span)
            }
            _ => Err(self.error(FACTOR_START)),
        }
    }

    fn ident(&mut self, name: String, span: Span) -> Result<Expr, ParseError> {
        let unary = |op| Some(op);
        let op = match name.as_str() {
            "i" => return Ok(Expr::new(ExprKind::Imag, span)),
            "exp" => unary(UnaryOp::Exp),
            "inv" => unary(UnaryOp::Inv),
            "det" => unary(UnaryOp::Det),
            "tr" => unary(UnaryOp::Tr),
            "transpose" => unary(UnaryOp::Transpose),
            _ => None,
        };
        if let Some(op) = op {
            self.expect_punct('(')?;
            let arg = self.expr()?;
            self.expect_punct(')')?;
            return Ok(Expr::new(ExprKind::Unary(op, Box::new(arg)), span));
        }
        let constant = match name.as_str() {
            "eta4" => Some(Builtin::Eta4),
            "gamma0" => Some(Builtin::Gamma(0)),
            "gamma1" => Some(Builtin::Gamma(1)),
            "gamma2" => Some(Builtin::Gamma(2)),
            "gamma3" => Some(Builtin::Gamma(3)),
            _ => None,
        };
        if let Some(b) = constant {
            if self.eat_punct('(') {
                self.expect_punct(')')?;
            }
            return Ok(Expr::new(ExprKind::Builtin(b), span));
        }
        match name.as_str() {
            "id" => {
                self.expect_punct('(')?;
                let n = match self.peek().tok {
                    Tok::Number(x) if x >= 1.0 && x.fract() == 0.0 && x <= 4096.0 => x as usize,
                    _ => return Err(self.error(&["positive integer"])),
                };
                self.pos += 1;
                self.expect_punct(')')?;
                Ok(Expr::new(ExprKind::Builtin(Builtin::Id(n)), span))
            }
            "affine" => {
                self.expect_punct('(')?;
                let m = self.expr()?;
                self.expect_punct(',')?;
                let v = self.expr()?;
                self.expect_punct(')')?;
                Ok(Expr::new(ExprKind::Affine(Box::new(m), Box::new(v)), span))
            }
            _ => {
                let target = match self.names.get(&name) {
                    Some(Declared::Param(i)) => Ref::Param(*i),
                    Some(Declared::Binding(i)) => Ref::Binding(*i),
                    Some(Declared::Rep) | None => {
                        return Err(ParseError::UnknownIdentifier { name, span })
                    }
                };
                Ok(Expr::new(ExprKind::Ident { name, target }, span))
            }
        }
    }

    fn matrix(&mut self) -> Result<Expr, ParseError> {
        let span = self.expect_punct('[')?;
        let mut rows = Vec::new();
        loop {
            if self.peek().tok != Tok::Punct('[') {
                return Err(self.error(&["'['"]));
            }
            self.pos += 1;
            let mut row = vec![self.expr()?];
            while self.eat_punct(',') {
                row.push(self.expr()?);
            }
            self.expect_punct(']')?;
            rows.push(row);
            if self.eat_punct(',') {
                continue;
            }
            if self.eat_punct(']') {
                break;
            }
            return Err(self.error(&["','", "']'"]));
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(ParseError::Ragged { span });
        }
        Ok(Expr::new(ExprKind::Matrix(rows), span))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_program() {
        let p = parse_repfile("param b = 0; rep U : state = exp([[0, b],[-b, 0]]);").unwrap();
        assert_eq!(p.params.len(), 1);
        assert_eq!(p.reps.len(), 1);
        assert_eq!(p.reps[0].kind, RepKind::State);
    }

    #[test]
    fn ragged_literal() {
        let err = parse_repfile("param b = 0; rep U : state = exp([[0, b],[-b]]);").unwrap_err();
        assert!(matches!(err, ParseError::Ragged { .. }));
        assert!(err.to_string().contains("ragged matrix literal at line 1"), "{err}");
    }

    #[test]
    fn unknown_identifier_is_located() {
        let err = parse_repfile("param b = 0;\nrep U : state = exp(c);").unwrap_err();
        match err {
            ParseError::UnknownIdentifier { name, span } => {
                assert_eq!(name, "c");
                assert_eq!(span, Span { line: 2, col: 21 });
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_names() {
        let err = parse_repfile("param b = 0; let b = 1;").unwrap_err();
        assert!(matches!(err, ParseError::Duplicate { .. }));
        let err = parse_repfile("param b = 0; rep U : state = [[1]]; rep U : state = [[1]];").unwrap_err();
        assert!(matches!(err, ParseError::Duplicate { .. }));
    }

    #[test]
    fn missing_semicolon_lists_expected_tokens() {
        let err = parse_repfile("param b = 0\nlet x = b;").unwrap_err();
        match err {
            ParseError::Syntax { span, expected, .. } => {
                assert_eq!(span.line, 2);
                assert!(expected.contains(&"';'".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_repfile("param a = 0; let x = -a * 2 + 3;").unwrap();
        let e = &p.bindings[0].expr;
        let ExprKind::Binary(BinOp::Add, lhs, _) = &e.kind else {
            panic!("top must be +")
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn reps_cannot_be_referenced() {
        let err = parse_repfile("rep U : state = [[1]]; let x = U;").unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { .. }));
    }

    #[test]
    fn builtins_with_and_without_parens() {
        let p = parse_repfile("let g = gamma0 * gamma1() + eta4 - id(4);").unwrap();
        assert_eq!(p.bindings.len(), 1);
    }

    #[test]
    fn negative_identity_value() {
        let p = parse_repfile("param b = -1.5;").unwrap();
        assert_eq!(p.params[0].identity, -1.5);
    }
}
