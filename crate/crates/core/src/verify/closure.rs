//! Lie-algebra closure of extracted generators.

use num_complex::Complex64;

use super::VerifyError;
use crate::catalog::{Metric, ROTATION_PAIRS};
use crate::matrix::CMatrix;

/// Relative norm below which a generator counts as dependent on earlier ones.
const RANK_TOL: f64 = 1e-10;

/// Structure constants `[G_a, G_b] ≈ Σ_c f_{ab}^c G_c` by least squares.
#[derive(Debug, Clone)]
pub struct ClosureTable {
    pub names: Vec<String>,
    /// Dimension of the span of the generators.
    pub rank: usize,
    /// `coefficients[a][b][c] = f_{ab}^c`; zero on dependent generators.
    pub coefficients: Vec<Vec<Vec<Complex64>>>,
    /// Max-entry residual of each expansion.
    pub residuals: Vec<Vec<f64>>,
    pub max_residual: f64,
}

impl ClosureTable {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full_rank(&self) -> bool {
        self.rank == self.names.len()
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn algebra_closure(generators: &[(String, CMatrix)]) -> Result<ClosureTable, VerifyError> {
    if generators.len() < 2 {
        return Err(VerifyError::Config("closure needs at least two generators".into()));
    }
    let shape = generators[0].1.shape();
    if generators.iter().any(|(_, g)| g.shape() != shape) {
        return Err(VerifyError::Config("generators have different shapes".into()));
    }
    // Modified Gram–Schmidt with one reorthogonalization pass.
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    let mut r: Vec<Vec<Complex64>> = Vec::new();
    let mut independent = Vec::new();
    for (idx, (_, g)) in generators.iter().enumerate() {
        let mut v = g.as_slice().to_vec();
        let original = norm(&v);
        let mut col = vec![Complex64::new(0.0, 0.0); q.len()];
        for _ in 0..2 {
            for (j, qj) in q.iter().enumerate() {
                let c = dot(qj, &v);
                col[j] += c;
                v.iter_mut().zip(qj).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&v);
        if n <= RANK_TOL * original.max(1.0) {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        for (row, c) in r.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut new_row = vec![Complex64::new(0.0, 0.0); q.len()];
        new_row.push(Complex64::new(n, 0.0));
        r.push(new_row);
        q.push(v);
        independent.push(idx);
    }
    let rank = q.len();
    let n = generators.len();
    let mut coefficients = vec![vec![vec![Complex64::new(0.0, 0.0); n]; n]; n];
    let mut residuals = vec![vec![0.0; n]; n];
    let mut max_residual = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let c = generators[a].1.commutator(&generators[b].1)?;
            let y: Vec<Complex64> = q.iter().map(|qj| dot(qj, c.as_slice())).collect();
            // back-substitute R x = y
            let mut x = vec![Complex64::new(0.0, 0.0); rank];
            for i in (0..rank).rev() {
                let s: Complex64 = (i + 1..rank).map(|k| r[i][k] * x[k]).sum();
                x[i] = (y[i] - s) / r[i][i];
            }
            let mut expansion = CMatrix::zeros(shape.0, shape.1);
            for (k, &gi) in independent.iter().enumerate() {
                coefficients[a][b][gi] = x[k];
                expansion = &expansion + &generators[gi].1.scale(x[k]);
            }
            let res = c.max_abs_diff(&expansion);
            residuals[a][b] = res;
            max_residual = max_residual.max(res);
        }
    }
    Ok(ClosureTable {
        names: generators.iter().map(|(n, _)| n.clone()).collect(),
        rank,
        coefficients,
        residuals,
        max_residual,
    })
}

/// `I_{μν}` for any ordered pair from the six `μ < ν` generators.
fn rotation(gens: &[CMatrix; 6], mu: usize, nu: usize) -> CMatrix {
    let n = gens[0].rows();
    if mu == nu {
        return CMatrix::zeros(n, n);
    }
    let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    let k = ROTATION_PAIRS.iter().position(|&p| p == (lo, hi)).expect("pair");
    gens[k].scale(Complex64::new(sign, 0.0))
}

/// `η_{νρ} I_{μσ} − η_{μρ} I_{νσ} − η_{νσ} I_{μρ} + η_{μσ} I_{νρ}`
pub fn lorentz_pattern(gens: &[CMatrix; 6], mu: usize, nu: usize, rho: usize, sigma: usize) -> CMatrix {
    let g = Metric::default();
    let term = |coef: f64, a: usize, b: usize| rotation(gens, a, b).scale(Complex64::new(coef, 0.0));
    let s = &term(g.get(nu, rho), mu, sigma) - &term(g.get(mu, rho), nu, sigma);
    let s = &s - &term(g.get(nu, sigma), mu, rho);
    &s + &term(g.get(mu, sigma), nu, rho)
}

/// Largest `|[I_{μν}, I_{ρσ}] − pattern|` over all pairs of rotation generators.
pub fn lorentz_pattern_residual(gens: &[CMatrix; 6]) -> Result<f64, VerifyError> {
    let mut worst = 0.0f64;
    for &(mu, nu) in &ROTATION_PAIRS {
        for &(rho, sigma) in &ROTATION_PAIRS {
            let lhs = rotation(gens, mu, nu).commutator(&rotation(gens, rho, sigma))?;
            worst = worst.max(lhs.max_abs_diff(&lorentz_pattern(gens, mu, nu, rho, sigma)));
        }
    }
    Ok(worst)
}

/// Largest Jacobi defect `[A,[B,C]] + [B,[C,A]] + [C,[A,B]]` over triples.
pub fn jacobi_residual(gens: &[CMatrix]) -> Result<f64, VerifyError> {
    let mut worst = 0.0f64;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            for c in b + 1..gens.len() {
                let (x, y, z) = (&gens[a], &gens[b], &gens[c]);
                let t1 = x.commutator(&y.commutator(z)?)?;
                let t2 = y.commutator(&z.commutator(x)?)?;
                let t3 = z.commutator(&x.commutator(y)?)?;
                worst = worst.max((&(&t1 + &t2) + &t3).max_abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{intrinsic, Spin};

    fn rotations(spin: Spin) -> [CMatrix; 6] {
        ROTATION_PAIRS.map(|(m, n)| intrinsic(spin, m, n))
    }

    #[test]
    fn vector_and_spinor_follow_the_pattern() {
        assert!(lorentz_pattern_residual(&rotations(Spin::Vector)).unwrap() < 1e-12);
        assert!(lorentz_pattern_residual(&rotations(Spin::Spinor)).unwrap() < 1e-12);
    }

    #[test]
    fn boost_rotation_bracket() {
        // [K01, K12] against direct 4×4 multiplication
        let k01 = intrinsic(Spin::Vector, 0, 1);
        let k12 = intrinsic(Spin::Vector, 1, 2);
        let direct = &(&k01 * &k12) - &(&k12 * &k01);
        let expected = intrinsic(Spin::Vector, 0, 2);
        assert!(direct.max_abs_diff(&expected) < 1e-15 || direct.max_abs_diff(&(-&expected)) < 1e-15);
    }

    #[test]
    fn lorentz_closes() {
        let gens: Vec<_> = ROTATION_PAIRS
            .iter()
            .map(|&(m, n)| (format!("w{m}{n}"), intrinsic(Spin::Vector, m, n)))
            .collect();
        let t = algebra_closure(&gens).unwrap();
        assert_eq!(t.rank, 6);
        assert!(t.max_residual < 1e-12);
        // [K01, K02] = η_{10} K_{02}... pattern gives −η_00 K_12 = K_12
        let (a, b, c) = (t.index("w01").unwrap(), t.index("w02").unwrap(), t.index("w12").unwrap());
        assert!((t.coefficients[a][b][c] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dependent_generators_lower_rank() {
        let a = CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let gens = vec![("a".to_string(), a.clone()), ("b".to_string(), a.scale(Complex64::new(2.0, 0.0)))];
        let t = algebra_closure(&gens).unwrap();
        assert_eq!(t.rank, 1);
        assert!(!t.full_rank());
        assert_eq!(t.max_residual, 0.0);
    }

    #[test]
    fn abelian_phase() {
        let gens = vec![
            ("b".to_string(), CMatrix::scalar(Complex64::new(0.0, 1.0))),
            ("c".to_string(), CMatrix::scalar(Complex64::new(2.0, 0.0))),
        ];
        let t = algebra_closure(&gens).unwrap();
        assert!(t.coefficients.iter().flatten().flatten().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn open_set_has_residual() {
        let e12 = CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let e21 = CMatrix::real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let t = algebra_closure(&[("x".into(), e12), ("y".into(), e21)]).unwrap();
        assert!((t.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_on_lorentz() {
        assert!(jacobi_residual(&rotations(Spin::Spinor)).unwrap() < 1e-12);
    }

    #[test]
    fn single_generator_rejected() {
        assert!(algebra_closure(&[("a".into(), CMatrix::identity(1))]).is_err());
    }
}
