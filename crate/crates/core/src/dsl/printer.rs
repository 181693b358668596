//! Canonical text form. `parse_repfile(&p.to_string())` reproduces `p` up to spans.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(x) => write!(f, "{x:?}"),
            ExprKind::Imag => f.write_str("i"),
            ExprKind::Ident { name, .. } => f.write_str(name),
            ExprKind::Matrix(rows) => {
                f.write_str("[")?;
                for (r, row) in rows.iter().enumerate() {
                    if r > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str("[")?;
                    for (c, e) in row.iter().enumerate() {
                        if c > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{e}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str("]")
            }
            ExprKind::Builtin(Builtin::Eta4) => f.write_str("eta4"),
            ExprKind::Builtin(Builtin::Id(n)) => write!(f, "id({n})"),
            ExprKind::Builtin(Builtin::Gamma(k)) => write!(f, "gamma{k}"),
            ExprKind::Unary(UnaryOp::Neg, e) => match e.kind {
                ExprKind::Binary(..) => write!(f, "-({e})"),
                _ => write!(f, "-{e}"),
            },
            ExprKind::Unary(op, e) => write!(f, "{}({e})", op.name()),
            ExprKind::Binary(op, a, b) => {
                write_operand(f, a)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b)
            }
            ExprKind::Affine(m, v) => write!(f, "affine({m}, {v})"),
        }
    }
}

fn write_operand(f: &mut Formatter<'_>, e: &Expr) -> fmt::Result {
    if matches!(e.kind, ExprKind::Binary(..)) {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl Display for RepProgram {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for p in &self.params {
            writeln!(f, "param {} = {:?};", p.name, p.identity)?;
        }
        for b in &self.bindings {
            writeln!(f, "let {} = {};", b.name, b.expr)?;
        }
        for r in &self.reps {
            writeln!(f, "rep {} : {} = {};", r.name, r.kind.as_str(), r.expr)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::dsl::parse_repfile;

    #[test]
    fn nested_subtraction_keeps_its_shape() {
        let src = "param a = 0; let x = a - (a - 1) * -(a + 2);";
        let p = parse_repfile(src).unwrap();
        let again = parse_repfile(&p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn prints_declarations_in_order() {
        let p = parse_repfile("param b = 0.5; rep I : component = [[1 + b]];").unwrap();
        assert_eq!(p.to_string(), "param b = 0.5;\nrep I : component = [[1.0 + b]];\n");
    }
}
