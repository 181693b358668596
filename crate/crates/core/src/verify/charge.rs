//! Charge relations on the truncated Fock space.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{commutator, Mode, RelationSpec, VerificationReport, VerifyError};
use crate::autodiff::Method;
use crate::catalog::PhaseCatalogEntry;
use crate::realization::FockSpace;

pub const DEFAULT_CHARGES: [f64; 4] = [0.0, 1.0, 2.0, -1.0];

/// Five phase parameters: `0.7` and four seeded draws from `[−3, 3)`.
pub fn sample_points(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::once(0.7).chain((0..4).map(|_| rng.gen_range(-3.0..3.0))).collect()
}

/// Global mode: `e^{b Q₁/(ie)} a e^{−b Q₁/(ie)} = e^{−qb/(ie)} a` at each sample `b`.
/// Local mode: `[Q₁, a] = −q a` for each charge.
pub fn verify_global_charge(
    spec: &RelationSpec,
    entry: &PhaseCatalogEntry,
    charges: &[f64],
    samples: &[f64],
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let fock = FockSpace::new(spec.cutoff);
    let a = fock.annihilation();
    let records = match spec.mode {
        Mode::FockGlobal => samples
            .iter()
            .map(|&b| -> Result<_, VerifyError> {
                let theta = entry.state_exponent(b) * entry.q;
                let lhs = fock.conjugation(theta)?;
                let rhs = a.scale(entry.phase_factor(b));
                Ok(spec.record(format!("b={b:.6}"), spec.residual(&lhs, &rhs)?, spec.tolerances.exact, Method::Dual))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Mode::FockLocal => charges
            .iter()
            .map(|&q| -> Result<_, VerifyError> {
                let lhs = commutator(&fock.charge(q), &a)?;
                let rhs = a.scale(Complex64::new(-q, 0.0));
                Ok(spec.record(format!("q={q}"), spec.residual(&lhs, &rhs)?, spec.tolerances.exact, Method::Dual))
            })
            .collect::<Result<Vec<_>, _>>()?,
        other => {
            return Err(VerifyError::Config(format!(
                "charge relations need a fock mode, not {}",
                other.as_str()
            )))
        }
    };
    Ok(VerificationReport::new(spec, records, start.elapsed().as_secs_f64() * 1e3))
}
