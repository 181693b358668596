//! Ready-made groups: the Poincaré group on scalar, vector and spinor
//! fields, U(1) phase transformations, and a general affine example.
//!
//! Conventions:
//! - metric `η = diag(-1, 1, 1, 1)`;
//! - Lorentz parameters are exponential coordinates `ω^{μν}` for the six pairs
//!   `μ < ν`, named `w01 … w23`; translations are `a0 … a3`;
//! - a component matrix `D` acts as `(Dφ)_i = D[i][j] φ_j`, and the vector
//!   intrinsic generator has entries `K_{μν}[σ][ρ] = δ^σ_μ η_{νρ} − δ^σ_ν η_{μρ}`;
//! - the coordinate rep is `r ↦ Λ(ω)⁻¹ r + a`, so that the derivative of
//!   `D φ(H r)` at the identity reproduces the orbital term
//!   `x_μ ∂_ν − x_ν ∂_μ` alongside the intrinsic `K_{μν}`.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::dsl::{parse_repfile, validate_program, Diagnostic, ParseError, RepProgram, Representation};
use crate::expm::matexp;
use crate::matrix::CMatrix;

/// The ordered pairs `(μ, ν)`, `μ < ν`, in parameter order.
pub const ROTATION_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unit charge e must be nonzero")]
    ZeroUnitCharge,
    #[error("unknown catalog file '{0}'")]
    UnknownFile(String),
    #[error("catalog program does not parse: {0}")]
    Parse(#[from] ParseError),
    #[error("catalog program fails validation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("family function does not evaluate at b₀: {0}")]
    Family(String),
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Minkowski metric with signature (−+++).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub diag: [f64; 4],
}

impl Default for Metric {
    fn default() -> Self {
        Metric {
            diag: [-1.0, 1.0, 1.0, 1.0],
        }
    }
}

impl Metric {
    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            self.diag[mu]
        } else {
            0.0
        }
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_diag(&self.diag.map(c))
    }
}

/// `η` as a matrix.
pub fn eta() -> CMatrix {
    Metric::default().matrix()
}

fn pauli(k: usize) -> CMatrix {
    match k {
        1 => CMatrix::real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        2 => CMatrix::from_rows(vec![vec![c(0.0), -I], vec![I, c(0.0)]]),
        3 => CMatrix::real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        _ => unreachable!("pauli index {k}"),
    }
}

/// Gamma matrices with `{γ_μ, γ_ν} = 2 η_{μν} id₄` for `η = diag(−1, 1, 1, 1)`:
/// `i` times the Dirac-basis matrices of the (+−−−) convention.
pub fn gamma(mu: usize) -> CMatrix {
    let id2 = CMatrix::identity(2);
    let dirac = match mu {
        0 => CMatrix::real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).kron(&id2),
        k @ 1..=3 => CMatrix::real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).kron(&pauli(k)),
        _ => panic!("gamma index {mu} out of range"),
    };
    dirac.scale(I)
}

/// `σ_{μν} = (i/2)[γ_μ, γ_ν]`
pub fn sigma(mu: usize, nu: usize) -> CMatrix {
    gamma(mu)
        .commutator(&gamma(nu))
        .expect("4x4")
        .scale(I * 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Scalar,
    Vector,
    Spinor,
}

impl Spin {
    pub const ALL: [Spin; 3] = [Spin::Scalar, Spin::Vector, Spin::Spinor];

    pub fn dim(self) -> usize {
        match self {
            Spin::Scalar => 1,
            Spin::Vector | Spin::Spinor => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Spin::Scalar => "scalar",
            Spin::Vector => "vector",
            Spin::Spinor => "spinor",
        }
    }

    /// Name of the component rep in the catalog files.
    pub fn rep_name(self) -> &'static str {
        match self {
            Spin::Scalar => "D_scalar",
            Spin::Vector => "D_vector",
            Spin::Spinor => "D_spinor",
        }
    }

    pub fn from_name(s: &str) -> Option<Spin> {
        Spin::ALL.into_iter().find(|sp| sp.name() == s)
    }

    pub fn catalog_file(self) -> &'static str {
        match self {
            Spin::Scalar => "poincare_scalar.rep",
            Spin::Vector => "poincare_vector.rep",
            Spin::Spinor => "poincare_spinor.rep",
        }
    }
}

/// Intrinsic Lorentz generator `I_{μν}` for a spin, for any ordered pair.
pub fn intrinsic(spin: Spin, mu: usize, nu: usize) -> CMatrix {
    match spin {
        Spin::Scalar => CMatrix::zeros(1, 1),
        Spin::Vector => {
            let g = Metric::default();
            let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            CMatrix::from_fn(4, 4, |s, r| c(delta(s, mu) * g.get(nu, r) - delta(s, nu) * g.get(mu, r)))
        }
        Spin::Spinor => sigma(mu, nu).scale(I * -0.5),
    }
}

/// `Λ = exp(½ ω^{μν} K_{μν})`, summing each unordered pair once.
pub fn lorentz_from_omega(omega: &[f64; 6]) -> CMatrix {
    component_rep(Spin::Vector, omega)
}

/// `D = exp(½ ω^{μν} I_{μν})` for the given spin.
pub fn component_rep(spin: Spin, omega: &[f64; 6]) -> CMatrix {
    let n = spin.dim();
    let mut gen = CMatrix::zeros(n, n);
    for (&(mu, nu), &w) in ROTATION_PAIRS.iter().zip(omega) {
        gen = &gen + &intrinsic(spin, mu, nu).scale(c(w));
    }
    matexp(&gen).expect("finite square generator")
}

/// What a Poincaré parameter name stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoincareParam {
    Rotation(usize, usize),
    Translation(usize),
}

impl PoincareParam {
    pub fn from_name(name: &str) -> Option<Self> {
        let digits: Vec<usize> = name
            .get(1..)?
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()?;
        match (name.chars().next()?, digits.as_slice()) {
            ('w', &[mu, nu]) if ROTATION_PAIRS.contains(&(mu, nu)) => Some(Self::Rotation(mu, nu)),
            ('a', &[mu]) if mu < 4 => Some(Self::Translation(mu)),
            _ => None,
        }
    }

    /// Intrinsic part `I_ω`: `I_{μν}` for rotations, zero for translations.
    pub fn intrinsic(self, spin: Spin) -> CMatrix {
        match self {
            Self::Rotation(mu, nu) => intrinsic(spin, mu, nu),
            Self::Translation(_) => CMatrix::zeros(spin.dim(), spin.dim()),
        }
    }
}

/// Names of every shipped catalog file.
pub const CATALOG_FILES: [&str; 6] = [
    "poincare.rep",
    "poincare_scalar.rep",
    "poincare_vector.rep",
    "poincare_spinor.rep",
    "phase_u1.rep",
    "dilation_affine.rep",
];

pub fn catalog_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "poincare.rep" => include_str!("../catalog/poincare.rep"),
        "poincare_scalar.rep" => include_str!("../catalog/poincare_scalar.rep"),
        "poincare_vector.rep" => include_str!("../catalog/poincare_vector.rep"),
        "poincare_spinor.rep" => include_str!("../catalog/poincare_spinor.rep"),
        "phase_u1.rep" => include_str!("../catalog/phase_u1.rep"),
        "dilation_affine.rep" => include_str!("../catalog/dilation_affine.rep"),
        _ => return None,
    })
}

/// Parse and validate a shipped catalog file.
pub fn load(name: &str) -> Result<Arc<RepProgram>, CatalogError> {
    let src = catalog_source(name).ok_or_else(|| CatalogError::UnknownFile(name.to_string()))?;
    load_text(src)
}

fn load_text(src: &str) -> Result<Arc<RepProgram>, CatalogError> {
    let program = parse_repfile(src)?;
    let diags = validate_program(&program);
    if !diags.is_empty() {
        return Err(CatalogError::Invalid(diags));
    }
    Ok(Arc::new(program))
}

/// Coordinate rep `H` and component rep `D_<spin>` of the Poincaré catalog.
pub fn poincare(spin: Spin) -> Result<(Representation, Representation), CatalogError> {
    let program = load(spin.catalog_file())?;
    let h = Representation::new(program.clone(), "H").expect("catalog declares H");
    let d = Representation::new(program, spin.rep_name()).expect("catalog declares D");
    Ok((h, d))
}

/// U(1) phase transformations `I(b) = exp(−q b/(i e))`, or the general
/// one-parameter family `I(b) = exp(f(b) − f(b₀))` when `family` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCatalogEntry {
    pub q: f64,
    pub e: f64,
    family: Option<(String, f64)>,
}

impl PhaseCatalogEntry {
    pub fn new(q: f64, e: f64) -> Result<Self, CatalogError> {
        if e == 0.0 {
            return Err(CatalogError::ZeroUnitCharge);
        }
        Ok(PhaseCatalogEntry { q, e, family: None })
    }

    /// General family with `f` written in the rep-file expression syntax
    /// over the parameter `b`, and identity value `b0`.
    pub fn with_family(mut self, f: &str, b0: f64) -> Self {
        self.family = Some((f.to_string(), b0));
        self
    }

    pub fn family(&self) -> Option<(&str, f64)> {
        self.family.as_ref().map(|(f, b0)| (f.as_str(), *b0))
    }

    pub fn identity_value(&self) -> f64 {
        self.family.as_ref().map_or(0.0, |(_, b0)| *b0)
    }

    /// `exp(−q b/(i e))` as a 1x1 matrix.
    pub fn phase_rep(&self, b: f64) -> CMatrix {
        CMatrix::scalar(self.phase_factor(b))
    }

    pub fn phase_factor(&self, b: f64) -> Complex64 {
        (c(-self.q * b) / (I * self.e)).exp()
    }

    /// Coefficient `κ(b) = b/(i e)` in the state-side operator `exp(κ(b) Q₁)`.
    pub fn state_exponent(&self, b: f64) -> Complex64 {
        c(b) / (I * self.e)
    }

    /// `−q/(i e)`, the derivative of the phase exponent.
    pub fn generator_value(&self) -> Complex64 {
        c(-self.q) / (I * self.e)
    }

    /// Rep-file text with component rep `I` and a four-level state rep `U`.
    pub fn source(&self) -> Result<String, CatalogError> {
        match &self.family {
            None => Ok(format!(
                "# U(1) phase transformations with charge q and unit charge e.\n\
                 param b = 0;\n\
                 let q = {q:?};\n\
                 let e = {e:?};\n\
                 # number operator on the four lowest levels\n\
                 let N = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]];\n\
                 rep I : component = exp(-q * b * inv(i * e));\n\
                 rep U : state = exp(b * inv(i * e) * q * N);\n",
                q = self.q,
                e = self.e
            )),
            Some((f, b0)) => {
                let probe = parse_repfile(&format!("param b = {b0:?}; let f = {f};"))?;
                let f0 = crate::dsl::eval_expr::<Complex64>(&probe, &probe.bindings[0].expr, &[c(*b0)])
                    .map_err(|e| CatalogError::Family(e.to_string()))?
                    .into_matrix();
                if f0.shape() != (1, 1) {
                    return Err(CatalogError::Family("f must be scalar-valued".into()));
                }
                let f0 = f0[(0, 0)];
                Ok(format!(
                    "# one-parameter family I(b) = exp(f(b) - f(b0))\n\
                     param b = {b0:?};\n\
                     let f = {f};\n\
                     let f0 = {re:?} + {im:?} * i;\n\
                     rep I : component = exp(f - f0);\n",
                    re = f0.re,
                    im = f0.im
                ))
            }
        }
    }

    pub fn program(&self) -> Result<Arc<RepProgram>, CatalogError> {
        load_text(&self.source()?)
    }

    /// The component rep `I` of [`Self::program`].
    pub fn component(&self) -> Result<Representation, CatalogError> {
        Ok(Representation::new(self.program()?, "I").expect("phase program declares I"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn clifford_relation() {
        let g = Metric::default();
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = &(&gamma(mu) * &gamma(nu)) + &(&gamma(nu) * &gamma(mu));
                let expected = CMatrix::identity(4).scale(c(2.0 * g.get(mu, nu)));
                assert_eq!(anti, expected, "mu={mu} nu={nu}");
            }
        }
    }

    #[test]
    fn intrinsics_are_antisymmetric() {
        for spin in Spin::ALL {
            for mu in 0..4 {
                for nu in 0..4 {
                    let a = intrinsic(spin, mu, nu);
                    let b = intrinsic(spin, nu, mu);
                    assert_eq!(a, -&b, "{spin:?} {mu}{nu}");
                }
            }
        }
    }

    #[test]
    fn vector_boost_entries() {
        let k = intrinsic(Spin::Vector, 0, 1);
        assert_eq!(k[(0, 1)], c(1.0));
        assert_eq!(k[(1, 0)], c(1.0));
        let r = intrinsic(Spin::Vector, 1, 2);
        assert_eq!(r[(1, 2)], c(1.0));
        assert_eq!(r[(2, 1)], c(-1.0));
    }

    #[test]
    fn lorentz_identity_and_rotation() {
        assert!(lorentz_from_omega(&[0.0; 6]).max_abs_diff(&CMatrix::identity(4)) == 0.0);
        let theta = 0.7;
        let l = lorentz_from_omega(&[0.0, 0.0, 0.0, theta, 0.0, 0.0]);
        let (s, co) = theta.sin_cos();
        let mut expected = CMatrix::identity(4);
        expected[(1, 1)] = c(co);
        expected[(1, 2)] = c(s);
        expected[(2, 1)] = c(-s);
        expected[(2, 2)] = c(co);
        assert!(l.max_abs_diff(&expected) < 1e-12);
        let preserved = &(&l.transpose() * &eta()) * &l;
        assert!(preserved.max_abs_diff(&eta()) < 1e-12);
    }

    #[test]
    fn lorentz_boost() {
        let chi = 0.9;
        let l = lorentz_from_omega(&[chi, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mut expected = CMatrix::identity(4);
        expected[(0, 0)] = c(chi.cosh());
        expected[(0, 1)] = c(chi.sinh());
        expected[(1, 0)] = c(chi.sinh());
        expected[(1, 1)] = c(chi.cosh());
        assert!(l.max_abs_diff(&expected) < 1e-12);
        assert!((l.det().unwrap() - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn component_reps() {
        let w = [0.3, -0.2, 0.1, 0.5, 0.0, -0.4];
        assert_eq!(component_rep(Spin::Scalar, &w), CMatrix::identity(1));
        assert!(component_rep(Spin::Spinor, &[0.0; 6]).max_abs_diff(&CMatrix::identity(4)) == 0.0);
        assert_eq!(component_rep(Spin::Vector, &w), lorentz_from_omega(&w));
    }

    #[test]
    fn poincare_param_names() {
        assert_eq!(PoincareParam::from_name("w13"), Some(PoincareParam::Rotation(1, 3)));
        assert_eq!(PoincareParam::from_name("a2"), Some(PoincareParam::Translation(2)));
        assert_eq!(PoincareParam::from_name("w10"), None);
        assert_eq!(PoincareParam::from_name("a4"), None);
        assert_eq!(PoincareParam::from_name("b"), None);
    }

    #[test]
    fn phase_values() {
        let p = PhaseCatalogEntry::new(1.0, 1.0).unwrap();
        assert_eq!(p.phase_rep(0.0), CMatrix::identity(1));
        assert!((p.phase_factor(PI) - c(-1.0)).norm() < 1e-15);
        assert!(matches!(PhaseCatalogEntry::new(1.0, 0.0), Err(CatalogError::ZeroUnitCharge)));
    }

    #[test]
    fn every_catalog_file_validates() {
        for name in CATALOG_FILES {
            load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
