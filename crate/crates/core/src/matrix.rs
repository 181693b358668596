//! Dense row-major matrices over any [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::{Dual, Scalar};

pub type CMatrix = Matrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("singular matrix (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Matrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_diag(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn scalar(s: S) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![s],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.zip(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.zip(rhs, "sub", |a, b| a - b)
    }

    fn zip(&self, rhs: &Self, op: &'static str, f: impl Fn(S, S) -> S) -> Result<Self, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == S::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<S, MatrixError> {
        self.require_square("tr")?;
        Ok((0..self.rows).fold(S::zero(), |acc, i| acc + self[(i, i)]))
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.require_square("commutator")?;
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch {
                op: "commutator",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self[(r / rhs.rows, c / rhs.cols)] * rhs[(r % rhs.rows, c % rhs.cols)]
        })
    }

    /// Maximum column sum of value magnitudes.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Largest entrywise distance between value parts. Shapes must agree.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.shape(), rhs.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a.value() - b.value()).norm())
            .fold(0.0, |acc, d| if d.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(d) })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(Scalar::is_finite)
    }

    pub fn value(&self) -> CMatrix {
        self.map(|x| x.value())
    }

    fn require_square(&self, op: &'static str) -> Result<(), MatrixError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(MatrixError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// LU factorisation with partial pivoting on value magnitudes.
    fn lu(&self, op: &'static str) -> Result<Lu<S>, MatrixError> {
        self.require_square(op)?;
        if !self.is_finite() {
            return Err(MatrixError::NonFinite);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|r| (r, a[(r, k)].magnitude()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for r in k + 1..n {
                let f = a[(r, k)] / pivot;
                a[(r, k)] = f;
                for c in k + 1..n {
                    let v = a[(k, c)];
                    a[(r, c)] = a[(r, c)] - f * v;
                }
            }
        }
        Ok(Lu {
            lu: a,
            perm,
            sign,
            singular,
        })
    }

    pub fn det(&self) -> Result<S, MatrixError> {
        let lu = self.lu("det")?;
        if lu.singular {
            return Ok(S::zero());
        }
        let n = self.rows;
        let mut d = S::real(lu.sign);
        for i in 0..n {
            d = d * lu.lu[(i, i)];
        }
        Ok(d)
    }

    /// Solve `self * X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if rhs.rows != self.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let lu = self.lu("solve")?;
        let n = self.rows;
        let pivot_ratio = lu.pivot_ratio();
        if lu.singular || pivot_ratio < f64::EPSILON * 1e-2 {
            return Err(MatrixError::Singular {
                condition: self.condition_estimate(),
            });
        }
        let mut x = Self::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            // forward: L y = P b
            let mut y: Vec<S> = (0..n).map(|i| rhs[(lu.perm[i], c)]).collect();
            for i in 0..n {
                for k in 0..i {
                    y[i] = y[i] - lu.lu[(i, k)] * y[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    y[i] = y[i] - lu.lu[(i, k)] * y[k];
                }
                y[i] = y[i] / lu.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        self.solve(&Self::identity(self.rows))
    }

    /// `‖A‖₁ ‖A⁻¹‖₁` on value parts; infinite when singular.
    pub fn condition_estimate(&self) -> f64 {
        let v = self.value();
        match v.lu("condition") {
            Ok(lu) if !lu.singular => {
                let n = v.rows;
                let id = CMatrix::identity(n);
                let mut inv = CMatrix::zeros(n, n);
                for c in 0..n {
                    let mut y: Vec<Complex64> = (0..n).map(|i| id[(lu.perm[i], c)]).collect();
                    for i in 0..n {
                        for k in 0..i {
                            y[i] = y[i] - lu.lu[(i, k)] * y[k];
                        }
                    }
                    for i in (0..n).rev() {
                        for k in i + 1..n {
                            y[i] = y[i] - lu.lu[(i, k)] * y[k];
                        }
                        y[i] = y[i] / lu.lu[(i, i)];
                    }
                    for i in 0..n {
                        inv[(i, c)] = y[i];
                    }
                }
                v.norm1() * inv.norm1()
            }
            _ => f64::INFINITY,
        }
    }
}

struct Lu<S> {
    lu: Matrix<S>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl<S: Scalar> Lu<S> {
    /// Smallest over largest pivot magnitude.
    fn pivot_ratio(&self) -> f64 {
        let n = self.lu.rows;
        if n == 0 {
            return 1.0;
        }
        let mags: Vec<f64> = (0..n).map(|i| self.lu[(i, i)].magnitude()).collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    }
}

impl Matrix<Dual> {
    /// Tangent part of every entry.
    pub fn tangent(&self) -> CMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|d| d.eps).collect(),
        }
    }
}

impl CMatrix {
    pub fn real_rows(rows: &[&[f64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn lift<S: Scalar>(&self) -> Matrix<S> {
        self.map(S::constant)
    }

    /// Hermitian adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Real and imaginary parts as nested rows.
    pub fn split_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let re = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].re).collect())
            .collect();
        let im = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].im).collect())
            .collect();
        (re, im)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// Operator impls panic on shape mismatch; use the `try_*` forms on untrusted input.
impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        self.try_add(rhs).expect("matrix add")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        self.try_sub(rhs).expect("matrix sub")
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.try_mul(rhs).expect("matrix mul")
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(|x| -x)
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<&S> = (0..self.cols).map(|c| &self[(r, c)]).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Compact human-readable rendering, e.g. `[[2]]` or `[[1, 0], [0, 1+2i]]`.
pub fn format_value(m: &CMatrix) -> String {
    let fmt_c = |z: Complex64| -> String {
        let fmt_r = |x: f64| {
            if x == x.trunc() && x.abs() < 1e15 {
                format!("{}", x as i64)
            } else {
                format!("{x:.6}")
            }
        };
        if z.im == 0.0 {
            fmt_r(z.re)
        } else if z.re == 0.0 {
            format!("{}i", fmt_r(z.im))
        } else {
            let sign = if z.im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", fmt_r(z.re), sign, fmt_r(z.im.abs()))
        }
    };
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let cells: Vec<String> = (0..m.cols()).map(|c| fmt_c(m[(r, c)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn unit_matrix_commutator() {
        let e12 = CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e21 = CMatrix::real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let got = e12.commutator(&e21).unwrap();
        assert_eq!(got, CMatrix::from_diag(&[c(1.0), c(-1.0)]));
        assert_eq!(e12.commutator(&e12).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn commutator_rejects_mismatch() {
        let a = CMatrix::identity(2);
        let b = CMatrix::identity(3);
        assert!(matches!(a.commutator(&b), Err(MatrixError::DimensionMismatch { .. })));
    }

    #[test]
    fn det_and_inverse() {
        let a = CMatrix::real_rows(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]);
        // cofactor expansion along the first row: 0 - 2*(1 - 0) + 1*(0 - 3) = -5
        assert!((a.det().unwrap() - c(-5.0)).norm() < 1e-14);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).max_abs_diff(&CMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn singular_inverse_reports_condition() {
        let a = CMatrix::real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match a.inverse() {
            Err(MatrixError::Singular { condition }) => assert!(condition > 1e12),
            other => panic!("expected singular, got {other:?}"),
        }
        assert_eq!(a.det().unwrap(), c(0.0));
    }

    #[test]
    fn dual_det_derivative_at_identity_is_trace() {
        // d/db det(I + b E) at b = 0 equals tr(E)
        let e = CMatrix::real_rows(&[&[2.0, 5.0], &[7.0, -0.5]]);
        let b = Dual::variable(0.0);
        let m = &Matrix::<Dual>::identity(2) + &e.lift::<Dual>().scale(b);
        let d = m.det().unwrap();
        assert_eq!(d.re, c(1.0));
        assert!((d.eps - c(1.5)).norm() < 1e-15);
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = CMatrix::real_rows(&[&[1.0, 2.0]]);
        let b = CMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k[(1, 3)], c(2.0));
        assert_eq!(k[(0, 1)], c(0.0));
    }

    #[test]
    fn format_compact() {
        let m = CMatrix::from_rows(vec![vec![c(2.0)]]);
        assert_eq!(format_value(&m), "[[2]]");
        let z = CMatrix::from_rows(vec![vec![Complex64::new(1.0, -2.0), Complex64::new(0.0, 0.5)]]);
        assert_eq!(format_value(&z), "[[1-2i, 0.500000i]]");
    }
}
