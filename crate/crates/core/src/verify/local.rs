//! Local relations on the polynomial realization: the `b₀`-derivative of the
//! pullback family against the generator action.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{RelationSpec, VerificationReport, VerifyError, Mode, Record};
use crate::autodiff::{affine_flow, generator, AutodiffError, Method};
use crate::catalog::{PhaseCatalogEntry, PoincareParam, Spin};
use crate::dsl::{parse_repfile, validate_program, Representation, Value};
use crate::matrix::CMatrix;
use crate::realization::PolySpace;
use crate::scalar::Dual;

/// Where the intrinsic generator `I_ω` on the right side comes from.
#[derive(Debug, Clone)]
pub enum Intrinsics {
    /// Dual-number generator of the component rep.
    Autodiff,
    /// Catalog Lorentz intrinsics, selected by parameter name (`w01`, `a2`, ...).
    Poincare(Spin),
    /// `−q/(i e)` of a phase entry.
    Phase(PhaseCatalogEntry),
}

#[derive(Debug, Clone)]
pub struct LocalTarget {
    pub coordinate: Option<Representation>,
    pub component: Representation,
    pub intrinsics: Intrinsics,
    /// Compare spacetime relations against `partial_matrix`/`rotation_matrix`
    /// rather than the general `Δ + I + h·∂` form. Needs Poincaré intrinsics.
    pub explicit: bool,
    /// Restrict to these parameter names; all parameters when `None`.
    pub only: Option<Vec<String>>,
}

impl LocalTarget {
    pub fn new(coordinate: Option<Representation>, component: Representation) -> Self {
        LocalTarget {
            coordinate,
            component,
            intrinsics: Intrinsics::Autodiff,
            explicit: false,
            only: None,
        }
    }

    pub fn poincare(h: Representation, d: Representation, spin: Spin) -> Self {
        LocalTarget {
            coordinate: Some(h),
            component: d,
            intrinsics: Intrinsics::Poincare(spin),
            explicit: true,
            only: None,
        }
    }

    pub fn intrinsics(mut self, i: Intrinsics) -> Self {
        self.intrinsics = i;
        self
    }

    pub fn explicit(mut self, on: bool) -> Self {
        self.explicit = on;
        self
    }

    pub fn only<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.only = Some(names.into_iter().map(Into::into).collect());
        self
    }
}

fn param_names(rep: &Representation) -> Vec<String> {
    rep.program().param_names().iter().map(|s| s.to_string()).collect()
}

/// `d/db^ω [det-factor · D(b) ⊗ Sub(b)]` at `b₀`.
pub(crate) fn pullback_derivative(
    space: &PolySpace,
    coordinate: Option<&Representation>,
    component: &Representation,
    omega: usize,
    include_det: bool,
) -> Result<CMatrix, VerifyError> {
    let point = component.identity_point().dual(omega);
    let d = component.eval::<Dual>(&point).map_err(AutodiffError::from)?;
    let affine = match coordinate {
        Some(h) => match h.eval_value::<Dual>(&point).map_err(AutodiffError::from)? {
            Value::Affine { linear, shift } => Some((linear, shift)),
            Value::Matrix(_) => return Err(AutodiffError::NotAffine(h.name().to_string()).into()),
        },
        None => None,
    };
    let p = space.pullback(affine.as_ref().map(|(l, s)| (l, s)), &d, include_det)?;
    Ok(p.matrix.tangent())
}

/// Central difference of the pullback family at `b₀`.
fn pullback_difference(
    space: &PolySpace,
    coordinate: Option<&Representation>,
    component: &Representation,
    omega: usize,
    include_det: bool,
    step: f64,
) -> Result<CMatrix, VerifyError> {
    let b0 = component.identity_point();
    let at = |h: f64| -> Result<CMatrix, VerifyError> {
        let point = b0.shifted(omega, h).complex();
        let d = component.eval::<Complex64>(&point).map_err(AutodiffError::from)?;
        let affine = match coordinate {
            Some(c) => match c.eval_value::<Complex64>(&point).map_err(AutodiffError::from)? {
                Value::Affine { linear, shift } => Some((linear, shift)),
                Value::Matrix(_) => return Err(AutodiffError::NotAffine(c.name().to_string()).into()),
            },
            None => None,
        };
        Ok(space.pullback(affine.as_ref().map(|(l, s)| (l, s)), &d, include_det)?.matrix)
    };
    Ok((&at(step)? - &at(-step)?).scale(Complex64::new(0.5 / step, 0.0)))
}

fn intrinsic_for(target: &LocalTarget, omega: usize, name: &str) -> Result<CMatrix, VerifyError> {
    match &target.intrinsics {
        Intrinsics::Autodiff => Ok(generator(&target.component, omega)?.matrix),
        Intrinsics::Poincare(spin) => PoincareParam::from_name(name)
            .map(|p| p.intrinsic(*spin))
            .ok_or_else(|| VerifyError::Config(format!("'{name}' is not a Poincaré parameter"))),
        Intrinsics::Phase(entry) => Ok(CMatrix::scalar(entry.generator_value())),
    }
}

fn is_translation(target: &LocalTarget, name: &str) -> bool {
    matches!(target.intrinsics, Intrinsics::Poincare(_))
        && matches!(PoincareParam::from_name(name), Some(PoincareParam::Translation(_)))
}

/// Local relation for every parameter of the target.
///
/// Spacetime mode includes the coordinate pullback and Jacobian factor;
/// internal and bundle modes leave coordinates untouched, so only the
/// intrinsic term survives on the right.
pub fn verify_local(spec: &RelationSpec, target: &LocalTarget) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let coordinate = match spec.mode {
        Mode::Spacetime => Some(
            target
                .coordinate
                .as_ref()
                .ok_or_else(|| VerifyError::Config(format!("relation '{}' needs a coordinate rep", spec.name)))?,
        ),
        Mode::Internal | Mode::Bundle => None,
        other => {
            return Err(VerifyError::Config(format!(
                "verify_local does not handle mode {}",
                other.as_str()
            )))
        }
    };
    let names = param_names(&target.component);
    if let Some(h) = coordinate {
        if param_names(h) != names {
            return Err(VerifyError::Config("coordinate and component reps have different parameters".into()));
        }
    }
    if target.explicit && !matches!(target.intrinsics, Intrinsics::Poincare(_)) {
        return Err(VerifyError::Config("explicit right sides need Poincaré intrinsics".into()));
    }
    let ncomp = target
        .component
        .eval(&target.component.identity_point().complex())
        .map_err(AutodiffError::from)?
        .rows();
    let space = PolySpace::new(spec.degree, ncomp);

    if let Some(only) = &target.only {
        if let Some(bad) = only.iter().find(|n| !names.contains(n)) {
            return Err(VerifyError::Config(format!("no parameter '{bad}'")));
        }
    }
    let selected: Vec<(usize, &String)> = names
        .iter()
        .enumerate()
        .filter(|(_, n)| target.only.as_ref().is_none_or(|o| o.contains(n)))
        .collect();
    let include_det = spec.mode == Mode::Spacetime;
    let records: Vec<Vec<Record>> = selected
        .into_par_iter()
        .map(|(omega, name)| -> Result<Vec<Record>, VerifyError> {
            let lhs = pullback_derivative(&space, coordinate, &target.component, omega, include_det)?;
            let lhs_fd = pullback_difference(&space, coordinate, &target.component, omega, include_det, spec.step)?;
            let intr = intrinsic_for(target, omega, name)?;
            let rhs = match (coordinate, target.explicit, &target.intrinsics) {
                (Some(_), true, Intrinsics::Poincare(spin)) => match PoincareParam::from_name(name) {
                    Some(PoincareParam::Translation(mu)) => space.partial_matrix(mu),
                    Some(PoincareParam::Rotation(mu, nu)) => {
                        space.rotation_matrix(mu, nu, &crate::catalog::intrinsic(*spin, mu, nu))?
                    }
                    None => return Err(VerifyError::Config(format!("'{name}' is not a Poincaré parameter"))),
                },
                (Some(h), _, _) => {
                    let flow = affine_flow(h, omega)?;
                    let delta = CMatrix::identity(space.dim()).scale(Complex64::new(flow.delta, 0.0));
                    &(&delta + &space.component_action(&intr)?) + &space.flow_transport(&flow)
                }
                (None, _, _) => space.component_action(&intr)?,
            };
            let tol = if is_translation(target, name) {
                spec.tolerances.exact
            } else {
                spec.tolerances.exponential
            };
            Ok(vec![
                spec.record(name.clone(), spec.residual(&lhs, &rhs)?, tol, Method::Dual),
                spec.record(name.clone(), spec.residual(&lhs_fd, &rhs)?, spec.tolerances.fd, Method::Fd),
            ])
        })
        .collect::<Result<_, _>>()?;
    let records = records.into_iter().flatten().collect();
    Ok(VerificationReport::new(spec, records, start.elapsed().as_secs_f64() * 1e3))
}

fn entry(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else {
        format!("({:?} + {:?} * i)", z.re, z.im)
    }
}

fn literal(m: &CMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let cells: Vec<String> = (0..m.cols()).map(|c| entry(m[(r, c)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Rep-file text for translations acting on components as `D(a) = exp(a^μ H_μ)`.
pub fn translation_mixing_source(h: &[CMatrix; 4]) -> String {
    let mut src = String::from("# translations that also mix components\n");
    for mu in 0..4 {
        src.push_str(&format!("param a{mu} = 0;\n"));
    }
    for (mu, m) in h.iter().enumerate() {
        src.push_str(&format!("let H{mu} = {};\n", literal(m)));
    }
    src.push_str("rep H : coordinate = affine(id(4), [[a0], [a1], [a2], [a3]]);\n");
    src.push_str("rep D : component = exp(a0 * H0 + a1 * H1 + a2 * H2 + a3 * H3);\n");
    src
}

/// `[T_μ, φ] = ∂_μ φ + H_μ φ` for component matrices `H_μ`.
pub fn verify_translation_with_h(spec: &RelationSpec, h: &[CMatrix; 4]) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let n = h[0].rows();
    if h.iter().any(|m| m.shape() != (n, n)) {
        return Err(VerifyError::Config("H_μ must be square matrices of one size".into()));
    }
    let program = parse_repfile(&translation_mixing_source(h))
        .map_err(|e| VerifyError::Config(format!("generated rep file: {e}")))?;
    let diags = validate_program(&program);
    if let Some(d) = diags.first() {
        return Err(VerifyError::Config(format!("generated rep file: {d}")));
    }
    let program = Arc::new(program);
    let coord = Representation::new(program.clone(), "H").expect("declared");
    let comp = Representation::new(program, "D").expect("declared");
    let space = PolySpace::new(spec.degree, n);
    let records: Vec<Record> = (0..4)
        .map(|mu| -> Result<Vec<Record>, VerifyError> {
            let lhs = pullback_derivative(&space, Some(&coord), &comp, mu, true)?;
            let lhs_fd = pullback_difference(&space, Some(&coord), &comp, mu, true, spec.step)?;
            let rhs = &space.partial_matrix(mu) + &space.component_action(&h[mu])?;
            let name = format!("a{mu}");
            Ok(vec![
                spec.record(name.clone(), spec.residual(&lhs, &rhs)?, spec.tolerances.exponential, Method::Dual),
                spec.record(name, spec.residual(&lhs_fd, &rhs)?, spec.tolerances.fd, Method::Fd),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(VerificationReport::new(spec, records, start.elapsed().as_secs_f64() * 1e3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn scalar_translations_are_partials() {
        let (h, d) = catalog::poincare(Spin::Scalar).unwrap();
        let spec = RelationSpec::new("poincare-scalar", Mode::Spacetime);
        let r = verify_local(&spec, &LocalTarget::poincare(h, d, Spin::Scalar)).unwrap();
        assert_eq!(r.records.len(), 20);
        for mu in 0..4 {
            assert!(r.record(&format!("a{mu}")).unwrap().residual < 1e-10);
        }
        assert!(r.pass(), "{:?}", r.records);
    }

    #[test]
    fn vector_boost_matches_rotation_matrix() {
        let (h, d) = catalog::poincare(Spin::Vector).unwrap();
        let spec = RelationSpec::new("poincare-vector", Mode::Spacetime).degree(3);
        let r = verify_local(&spec, &LocalTarget::poincare(h, d, Spin::Vector)).unwrap();
        assert!(r.record("w01").unwrap().residual < 1e-9);
        assert!(r.pass());
    }

    #[test]
    fn general_form_agrees_on_poincare() {
        let (h, d) = catalog::poincare(Spin::Spinor).unwrap();
        let spec = RelationSpec::new("x", Mode::Spacetime).degree(2);
        let r = verify_local(&spec, &LocalTarget::poincare(h, d, Spin::Spinor).explicit(false)).unwrap();
        assert!(r.pass(), "{:?}", r.records);
    }

    #[test]
    fn bundle_translations_vanish() {
        let (_, d) = catalog::poincare(Spin::Vector).unwrap();
        let spec = RelationSpec::new("bundle-vector", Mode::Bundle);
        let target = LocalTarget::new(None, d).intrinsics(Intrinsics::Poincare(Spin::Vector));
        let r = verify_local(&spec, &target).unwrap();
        for mu in 0..4 {
            assert!(r.record(&format!("a{mu}")).unwrap().residual < 1e-12);
        }
        assert!(r.pass());
    }

    #[test]
    fn wrong_intrinsic_fails() {
        // Intrinsics of the wrong spin do not satisfy the relation.
        let (h, d) = catalog::poincare(Spin::Vector).unwrap();
        let spec = RelationSpec::new("x", Mode::Spacetime).degree(1);
        let target = LocalTarget::new(Some(h), d).intrinsics(Intrinsics::Poincare(Spin::Spinor));
        let r = verify_local(&spec, &target).unwrap();
        assert!(!r.pass());
    }

    #[test]
    fn parameter_subset() {
        let (h, d) = catalog::poincare(Spin::Spinor).unwrap();
        let spec = RelationSpec::new("x", Mode::Spacetime).degree(2);
        let r = verify_local(&spec, &LocalTarget::poincare(h.clone(), d.clone(), Spin::Spinor).only(["a1", "w23"])).unwrap();
        assert_eq!(r.records.len(), 4);
        assert!(r.record("w23").is_some());
        assert!(verify_local(&spec, &LocalTarget::poincare(h, d, Spin::Spinor).only(["zz"])).is_err());
    }

    #[test]
    fn spacetime_needs_coordinates() {
        let (_, d) = catalog::poincare(Spin::Scalar).unwrap();
        let spec = RelationSpec::new("x", Mode::Spacetime);
        assert!(matches!(verify_local(&spec, &LocalTarget::new(None, d)), Err(VerifyError::Config(_))));
    }

    #[test]
    fn translation_with_zero_h_reduces_to_partials() {
        let z = CMatrix::zeros(1, 1);
        let spec = RelationSpec::new("x", Mode::Spacetime).degree(3);
        let r = verify_translation_with_h(&spec, &[z.clone(), z.clone(), z.clone(), z]).unwrap();
        assert!(r.dual_residual() < 1e-12);
        assert!(r.pass());
    }

    #[test]
    fn nilpotent_translation_mixing() {
        let h0 = CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let z = CMatrix::zeros(2, 2);
        let spec = RelationSpec::new("translation-mixing", Mode::Spacetime);
        let r = verify_translation_with_h(&spec, &[h0, z.clone(), z.clone(), z]).unwrap();
        assert!(r.dual_residual() < 1e-10);
        assert!(r.pass());
    }

    #[test]
    fn scalar_shift_mixing() {
        let c = Complex64::new(0.3, -1.5);
        let h = CMatrix::identity(3).scale(c);
        let spec = RelationSpec::new("x", Mode::Spacetime).degree(2);
        let r = verify_translation_with_h(&spec, &[h.clone(), h.clone(), h.clone(), h]).unwrap();
        assert!(r.dual_residual() < 1e-10);
    }
}
