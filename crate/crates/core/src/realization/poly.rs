//! Degree-truncated polynomial fields on R⁴.
//!
//! A field with `N` components, each a polynomial of total degree ≤ `d`, is a
//! coefficient vector of length `N · C(d + 4, 4)`. Index `i·M + m` holds the
//! coefficient of monomial `m` in component `i` (component-major, `M` monomials).
//! Monomials are ordered by total degree, then by exponent tuple
//! `(α₀, α₁, α₂, α₃)` in descending lexicographic order, so the degree-1 block
//! reads `x⁰, x¹, x², x³`.
//!
//! Affine substitution `x ↦ L x + s` never raises total degree, so pullbacks
//! are exact square matrices on this space.

use std::collections::HashMap;

use num_complex::Complex64;

use super::RealizationError;
use crate::autodiff::AffineFlowData;
use crate::catalog::Metric;
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::Scalar;

pub type Exponent = [u8; 4];

#[derive(Debug, Clone)]
pub struct PolySpace {
    degree: usize,
    ncomp: usize,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    /// `raise[m][j]` is the index of `x_j · monomial m`, if still in the space.
    raise: Vec<[Option<usize>; 4]>,
}

fn total(e: &Exponent) -> usize {
    e.iter().map(|&a| a as usize).sum()
}

impl PolySpace {
    pub fn new(degree: usize, ncomp: usize) -> Self {
        assert!(ncomp >= 1, "at least one component");
        assert!(degree <= 32, "degree {degree} is beyond desk scale");
        let d = degree as u8;
        let mut monomials = Vec::new();
        for a0 in 0..=d {
            for a1 in 0..=d - a0 {
                for a2 in 0..=d - a0 - a1 {
                    for a3 in 0..=d - a0 - a1 - a2 {
                        monomials.push([a0, a1, a2, a3]);
                    }
                }
            }
        }
        monomials.sort_by(|a, b| total(a).cmp(&total(b)).then(b.cmp(a)));
        let index: HashMap<Exponent, usize> = monomials.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let raise = monomials
            .iter()
            .map(|e| {
                let mut r = [None; 4];
                for (j, slot) in r.iter_mut().enumerate() {
                    let mut up = *e;
                    up[j] += 1;
                    *slot = index.get(&up).copied();
                }
                r
            })
            .collect();
        PolySpace {
            degree,
            ncomp,
            monomials,
            index,
            raise,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn n_monomials(&self) -> usize {
        self.monomials.len()
    }

    pub fn dim(&self) -> usize {
        self.ncomp * self.monomials.len()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn monomial_index(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn basis_index(&self, comp: usize, e: &Exponent) -> Option<usize> {
        (comp < self.ncomp).then_some(())?;
        Some(comp * self.n_monomials() + self.monomial_index(e)?)
    }

    /// Coefficient vector from `(component, exponent, coefficient)` terms.
    pub fn vector(&self, terms: &[(usize, Exponent, f64)]) -> Result<Vec<Complex64>, RealizationError> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for &(comp, e, x) in terms {
            let i = self.basis_index(comp, &e).ok_or(RealizationError::BasisOverflow)?;
            v[i] += x;
        }
        Ok(v)
    }

    /// Scalar-part operator lifted to every component: `id_N ⊗ op`.
    fn lift(&self, op: &CMatrix) -> CMatrix {
        CMatrix::identity(self.ncomp).kron(op)
    }

    /// `∂/∂x^μ` on one component.
    fn partial_scalar(&self, mu: usize) -> CMatrix {
        let n = self.n_monomials();
        let mut m = CMatrix::zeros(n, n);
        for (col, e) in self.monomials.iter().enumerate() {
            if e[mu] == 0 {
                continue;
            }
            let mut down = *e;
            down[mu] -= 1;
            let row = self.index[&down];
            m[(row, col)] = Complex64::new(e[mu] as f64, 0.0);
        }
        m
    }

    /// `x^j ∂/∂x^k` on one component.
    fn x_partial_scalar(&self, j: usize, k: usize) -> CMatrix {
        let n = self.n_monomials();
        let mut m = CMatrix::zeros(n, n);
        for (col, e) in self.monomials.iter().enumerate() {
            if e[k] == 0 {
                continue;
            }
            let mut t = *e;
            t[k] -= 1;
            t[j] += 1;
            m[(self.index[&t], col)] = Complex64::new(e[k] as f64, 0.0);
        }
        m
    }

    /// Exact matrix of `∂_μ` on every component.
    pub fn partial_matrix(&self, mu: usize) -> CMatrix {
        assert!(mu < 4, "spacetime index {mu}");
        self.lift(&self.partial_scalar(mu))
    }

    /// `x_μ ∂_ν − x_ν ∂_μ` with `x_μ = η_{μμ} x^μ`, on every component.
    pub fn orbital_matrix(&self, mu: usize, nu: usize) -> CMatrix {
        let g = Metric::default();
        let a = self.x_partial_scalar(mu, nu).scale(Complex64::new(g.get(mu, mu), 0.0));
        let b = self.x_partial_scalar(nu, mu).scale(Complex64::new(g.get(nu, nu), 0.0));
        self.lift(&(&a - &b))
    }

    /// `x_μ ∂_ν − x_ν ∂_μ + I_{μν}` where the intrinsic matrix mixes components.
    pub fn rotation_matrix(&self, mu: usize, nu: usize, intrinsic: &CMatrix) -> Result<CMatrix, RealizationError> {
        let intr = self.component_action(intrinsic)?;
        Ok(&self.orbital_matrix(mu, nu) + &intr)
    }

    /// `A ⊗ id`: a component matrix acting pointwise.
    pub fn component_action(&self, a: &CMatrix) -> Result<CMatrix, RealizationError> {
        if a.shape() != (self.ncomp, self.ncomp) {
            return Err(RealizationError::ComponentMismatch {
                expected: self.ncomp,
                got: a.shape(),
            });
        }
        Ok(a.kron(&CMatrix::identity(self.n_monomials())))
    }

    /// `(h(x))^k ∂_k` for the affine flow `h(x) = L x + s`.
    pub fn flow_transport(&self, flow: &AffineFlowData) -> CMatrix {
        let n = self.n_monomials();
        let mut op = CMatrix::zeros(n, n);
        for k in 0..4 {
            let s = flow.shift_part[k];
            if s != 0.0 {
                op = &op + &self.partial_scalar(k).scale(Complex64::new(s, 0.0));
            }
            for j in 0..4 {
                let l = flow.linear_part[k][j];
                if l != 0.0 {
                    op = &op + &self.x_partial_scalar(j, k).scale(Complex64::new(l, 0.0));
                }
            }
        }
        self.lift(&op)
    }

    /// Matrix of `p ↦ p ∘ (x ↦ L x + s)` on one component.
    pub fn substitution<S: Scalar>(&self, linear: &Matrix<S>, shift: &Matrix<S>) -> Result<Matrix<S>, RealizationError> {
        if linear.shape() != (4, 4) || shift.shape() != (4, 1) {
            return Err(RealizationError::NotAffine4);
        }
        let n = self.n_monomials();
        let mut images: Vec<Vec<S>> = Vec::with_capacity(n);
        for e in &self.monomials {
            let Some(k) = e.iter().position(|&a| a > 0) else {
                let mut one = vec![S::zero(); n];
                one[0] = S::one();
                images.push(one);
                continue;
            };
            let mut parent_e = *e;
            parent_e[k] -= 1;
            let parent = &images[self.index[&parent_e]];
            // parent · (Σ_j L[k][j] x_j + s_k)
            let mut out = vec![S::zero(); n];
            for (m, &coef) in parent.iter().enumerate() {
                if coef == S::zero() {
                    continue;
                }
                out[m] = out[m] + coef * shift[(k, 0)];
                for j in 0..4 {
                    let l = linear[(k, j)];
                    if l == S::zero() {
                        continue;
                    }
                    let target = self.raise[m][j].ok_or(RealizationError::BasisOverflow)?;
                    out[target] = out[target] + coef * l;
                }
            }
            images.push(out);
        }
        Ok(Matrix::from_fn(n, n, |r, c| images[c][r]))
    }

    /// `φ ↦ det_factor · D · φ∘H` with `H(x) = L x + s`; coordinates untouched
    /// when `coordinate` is `None`.
    pub fn pullback<S: Scalar>(
        &self,
        coordinate: Option<(&Matrix<S>, &Matrix<S>)>,
        component: &Matrix<S>,
        include_det: bool,
    ) -> Result<PullbackOperator<S>, RealizationError> {
        if component.shape() != (self.ncomp, self.ncomp) {
            return Err(RealizationError::ComponentMismatch {
                expected: self.ncomp,
                got: component.shape(),
            });
        }
        let (sub, det) = match coordinate {
            Some((linear, shift)) => {
                let sub = self.substitution(linear, shift)?;
                let det = if include_det { linear.det()? } else { S::one() };
                (sub, det)
            }
            None => (Matrix::identity(self.n_monomials()), S::one()),
        };
        let matrix = component.scale(det).kron(&sub);
        Ok(PullbackOperator { matrix, det_factor: det })
    }
}

/// Matrix of the pullback and the Jacobian factor that went into it.
#[derive(Debug, Clone)]
pub struct PullbackOperator<S> {
    pub matrix: Matrix<S>,
    pub det_factor: S,
}

pub fn apply(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}
