//! Constant changes of the component frame.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mode, RelationSpec, VerificationReport, VerifyError};
use crate::autodiff::Method;
use crate::matrix::CMatrix;
use crate::realization::PolySpace;

pub const FRAME_CONDITION_LIMIT: f64 = 1e8;
const INVERSE_TOL: f64 = 1e-12;

/// Invertible constant matrix `A` with its inverse.
#[derive(Debug, Clone)]
pub struct FrameChange {
    a: CMatrix,
    inv: CMatrix,
}

impl FrameChange {
    pub fn new(a: CMatrix) -> Result<Self, VerifyError> {
        let condition = a.condition_estimate();
        if !condition.is_finite() || condition > FRAME_CONDITION_LIMIT {
            return Err(VerifyError::IllConditioned { condition });
        }
        let inv = a.inverse()?;
        if a.try_mul(&inv)?.max_abs_diff(&CMatrix::identity(a.rows())) > INVERSE_TOL {
            return Err(VerifyError::IllConditioned { condition });
        }
        Ok(FrameChange { a, inv })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.inv
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

/// `2·id + R` with `R` entries uniform in the unit complex square.
pub fn random_frame(n: usize, rng: &mut impl Rng) -> FrameChange {
    loop {
        let a = CMatrix::from_fn(n, n, |r, c| {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if r == c {
                z + 2.0
            } else {
                z
            }
        });
        if let Ok(f) = FrameChange::new(a) {
            return f;
        }
    }
}

/// `|A·(I′ φ′) − I φ|` with `φ′ = A⁻¹φ`, `I′ = A⁻¹ I A`.
///
/// `phi` is a field on the polynomial space viewed as an `N × M` matrix
/// (row = component), so `A ⊗ id` acts as left multiplication.
pub fn frame_residual(intrinsic: &CMatrix, change: &FrameChange, phi: &CMatrix) -> Result<f64, VerifyError> {
    let phi_p = change.inverse().try_mul(phi)?;
    let i_p = change.inverse().try_mul(intrinsic)?.try_mul(change.matrix())?;
    let back = change.matrix().try_mul(&i_p.try_mul(&phi_p)?)?;
    Ok(back.max_abs_diff(&intrinsic.try_mul(phi)?))
}

/// Frame independence of `I^j_{iω} φ_j e^i` for each named intrinsic, over
/// every change and `samples` random basis fields per change.
pub fn verify_frame_independence(
    spec: &RelationSpec,
    intrinsics: &[(String, CMatrix)],
    changes: &[FrameChange],
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if !matches!(spec.mode, Mode::Bundle | Mode::Internal) {
        return Err(VerifyError::Config(format!(
            "frame independence needs bundle or internal mode, not {}",
            spec.mode.as_str()
        )));
    }
    let start = Instant::now();
    let n = changes.first().map_or(1, FrameChange::dim);
    if intrinsics.iter().any(|(_, m)| m.shape() != (n, n)) || changes.iter().any(|c| c.dim() != n) {
        return Err(VerifyError::Config("frame and intrinsic dimensions differ".into()));
    }
    let space = PolySpace::new(spec.degree, n);
    let m = space.n_monomials();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; intrinsics.len()];
    for change in changes {
        for _ in 0..samples {
            let k = rng.gen_range(0..space.dim());
            let mut phi = CMatrix::zeros(n, m);
            phi[(k / m, k % m)] = Complex64::new(1.0, 0.0);
            for (w, (_, intr)) in worst.iter_mut().zip(intrinsics) {
                let r = frame_residual(intr, change, &phi)?;
                if !r.is_finite() {
                    return Err(VerifyError::NonFinite {
                        relation: spec.name.clone(),
                    });
                }
                *w = w.max(r);
            }
        }
    }
    let records = intrinsics
        .iter()
        .zip(worst)
        .map(|((name, _), r)| spec.record(name.clone(), r, spec.tolerances.exponential, Method::Dual))
        .collect();
    Ok(VerificationReport::new(spec, records, start.elapsed().as_secs_f64() * 1e3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{intrinsic, Spin};

    fn phi(n: usize) -> CMatrix {
        CMatrix::from_fn(n, 3, |r, c| Complex64::new(r as f64 + 1.0, c as f64 - 0.5))
    }

    #[test]
    fn identity_frame() {
        let f = FrameChange::new(CMatrix::identity(4)).unwrap();
        assert_eq!(frame_residual(&intrinsic(Spin::Vector, 0, 2), &f, &phi(4)).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_frame_on_vector() {
        let a = CMatrix::real_rows(&[&[2.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
        let f = FrameChange::new(a).unwrap();
        for (mu, nu) in crate::catalog::ROTATION_PAIRS {
            assert!(frame_residual(&intrinsic(Spin::Vector, mu, nu), &f, &phi(4)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn random_spinor_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let f = random_frame(4, &mut rng);
            assert!(frame_residual(&intrinsic(Spin::Spinor, 1, 3), &f, &phi(4)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn singular_frame_rejected() {
        let a = CMatrix::real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(FrameChange::new(a).is_err());
        let b = CMatrix::real_rows(&[&[1.0, 0.0], &[0.0, 1e-10]]);
        assert!(matches!(FrameChange::new(b), Err(VerifyError::IllConditioned { .. })));
    }

    #[test]
    fn report_per_intrinsic() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let changes: Vec<_> = (0..3).map(|_| random_frame(4, &mut rng)).collect();
        let intr: Vec<_> = crate::catalog::ROTATION_PAIRS
            .iter()
            .map(|&(m, n)| (format!("w{m}{n}"), intrinsic(Spin::Vector, m, n)))
            .collect();
        let spec = RelationSpec::new("frame-vector", Mode::Bundle).degree(2);
        let r = verify_frame_independence(&spec, &intr, &changes, 20, 1).unwrap();
        assert_eq!(r.records.len(), 6);
        assert!(r.pass());
    }
}
