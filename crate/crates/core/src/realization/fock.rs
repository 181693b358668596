//! Truncated Fock space `span{|0⟩, …, |n_max⟩}`.

use num_complex::Complex64;

use crate::expm::matexp;
use crate::matrix::{CMatrix, MatrixError};

#[derive(Debug, Clone)]
pub struct FockSpace {
    cutoff: usize,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Self {
        FockSpace { cutoff }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    /// `a|n⟩ = √n |n−1⟩`
    pub fn annihilation(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |r, c| {
            if c == r + 1 {
                Complex64::new((c as f64).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn creation(&self) -> CMatrix {
        self.annihilation().adjoint()
    }

    /// `diag(0, 1, …, n_max)`, built directly rather than as `a†a`.
    pub fn number(&self) -> CMatrix {
        let d: Vec<Complex64> = (0..self.dim()).map(|k| Complex64::new(k as f64, 0.0)).collect();
        CMatrix::from_diag(&d)
    }

    /// `Q₁ = q N`
    pub fn charge(&self, q: f64) -> CMatrix {
        self.number().scale(Complex64::new(q, 0.0))
    }

    /// `exp(θ N) a exp(−θ N)`, through the matrix exponential.
    pub fn conjugation(&self, theta: Complex64) -> Result<CMatrix, MatrixError> {
        let n = self.number();
        let fwd = matexp(&n.scale(theta))?;
        let back = matexp(&n.scale(-theta))?;
        fwd.try_mul(&self.annihilation())?.try_mul(&back)
    }
}

/// `exp(θ N) a exp(−θ N)` on the Fock space truncated at `cutoff`.
pub fn fock_conjugation(cutoff: usize, theta: Complex64) -> Result<CMatrix, MatrixError> {
    FockSpace::new(cutoff).conjugation(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_entries() {
        let f = FockSpace::new(3);
        let a = f.annihilation();
        assert_eq!(a[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(a[(2, 3)], Complex64::new(3f64.sqrt(), 0.0));
        assert_eq!(a[(1, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn number_commutes_with_ladder() {
        let f = FockSpace::new(6);
        let comm = f.number().commutator(&f.annihilation()).unwrap();
        assert!(comm.max_abs_diff(&(-&f.annihilation())) < 1e-15);
    }

    #[test]
    fn conjugation_scales_ladder() {
        let f = FockSpace::new(8);
        for theta in [Complex64::new(0.0, 0.7), Complex64::new(0.3, -1.1), Complex64::new(-0.5, 0.0)] {
            let got = f.conjugation(theta).unwrap();
            let expected = f.annihilation().scale((-theta).exp());
            assert!(got.max_abs_diff(&expected) < 1e-12, "{theta}");
        }
    }

    #[test]
    fn zero_cutoff() {
        let c = fock_conjugation(0, Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(c.shape(), (1, 1));
        assert_eq!(c.max_abs(), 0.0);
    }
}
