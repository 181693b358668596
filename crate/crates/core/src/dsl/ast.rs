use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// Affine coordinate map `r ↦ M(b)·r + v(b)`.
    Coordinate,
    /// Matrix acting on field components.
    Component,
    /// Operator on the state space.
    State,
}

impl RepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RepKind::Coordinate => "coordinate",
            RepKind::Component => "component",
            RepKind::State => "state",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `diag(-1, 1, 1, 1)`
    Eta4,
    Id(usize),
    Gamma(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Inv,
    Det,
    Tr,
    Transpose,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Exp => "exp",
            UnaryOp::Inv => "inv",
            UnaryOp::Det => "det",
            UnaryOp::Tr => "tr",
            UnaryOp::Transpose => "transpose",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    /// Matrix product, or scalar multiplication when either side is 1x1.
    Mul,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ref {
    Param(usize),
    Binding(usize),
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

// Structural equality ignores spans.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Imag,
    Ident { name: String, target: Ref },
    Matrix(Vec<Vec<Expr>>),
    Builtin(Builtin),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Affine(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Visit this node and all descendants, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Matrix(rows) => rows.iter().flatten().for_each(|e| e.walk(f)),
            ExprKind::Unary(_, e) => e.walk(f),
            ExprKind::Binary(_, a, b) | ExprKind::Affine(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamDecl {
    pub name: String,
    pub identity: f64,
    pub span: Span,
}

impl PartialEq for ParamDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.identity.to_bits() == other.identity.to_bits()
    }
}

#[derive(Debug, Clone)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
    pub span: Span,
}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.expr == other.expr
    }
}

#[derive(Debug, Clone)]
pub struct RepDecl {
    pub name: String,
    pub kind: RepKind,
    pub expr: Expr,
    pub span: Span,
}

impl PartialEq for RepDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind && self.expr == other.expr
    }
}

/// A parsed rep-file: parameters with their identity values, `let`
/// bindings, and the declared representations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RepProgram {
    pub params: Vec<ParamDecl>,
    pub bindings: Vec<Binding>,
    pub reps: Vec<RepDecl>,
}

impl RepProgram {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|p| p.name.clone()).collect()
    }

    pub fn rep(&self, name: &str) -> Option<&RepDecl> {
        self.reps.iter().find(|r| r.name == name)
    }

    pub fn rep_index(&self, name: &str) -> Option<usize> {
        self.reps.iter().position(|r| r.name == name)
    }

    pub fn reps_of_kind(&self, kind: RepKind) -> impl Iterator<Item = &RepDecl> {
        self.reps.iter().filter(move |r| r.kind == kind)
    }

    /// The identity point `b₀`.
    pub fn identity_point(&self) -> ParamPoint {
        ParamPoint {
            values: self.params.iter().map(|p| p.identity).collect(),
            names: self.param_names(),
        }
    }
}

/// A point in parameter space, in program order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    pub values: Vec<f64>,
    pub names: Vec<String>,
}

impl ParamPoint {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy with parameter `index` moved by `delta`.
    pub fn shifted(&self, index: usize, delta: f64) -> ParamPoint {
        let mut p = self.clone();
        p.values[index] += delta;
        p
    }

    /// Copy with the named parameter set to `value`. Panics on unknown name.
    pub fn with(&self, name: &str, value: f64) -> ParamPoint {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("unknown parameter {name}"));
        let mut p = self.clone();
        p.values[i] = value;
        p
    }
}
