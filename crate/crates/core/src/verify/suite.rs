//! Named relations and the parallel runner.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::local::pullback_derivative;
use super::{
    algebra_closure, jacobi_residual, lorentz_pattern_residual, random_frame, sample_points, verify_frame_independence,
    verify_global_charge, verify_local, verify_translation_with_h, Intrinsics, LocalTarget, Mode, Record, RelationSpec,
    Tolerances, VerificationReport, VerifyError, DEFAULT_CHARGES, DEFAULT_SEED,
};
use crate::autodiff::{affine_flow, fd_crosscheck, generator, generator_bracket, Method, DEFAULT_FD_STEP};
use crate::catalog::{self, PhaseCatalogEntry, Spin, CATALOG_FILES, ROTATION_PAIRS};
use crate::dsl::{RepKind, RepProgram, Representation};
use crate::matrix::CMatrix;
use crate::realization::PolySpace;

pub const RELATION_NAMES: [&str; 21] = [
    "poincare-scalar",
    "poincare-vector",
    "poincare-spinor",
    "translation-mixing",
    "dilation-affine",
    "affine-delta",
    "poincare-delta",
    "internal-phase",
    "bundle-scalar",
    "bundle-vector",
    "bundle-spinor",
    "bundle-phase",
    "fock-global",
    "fock-charge",
    "frame-scalar",
    "frame-vector",
    "frame-spinor",
    "closure-lorentz",
    "closure-poincare",
    "closure-phase",
    "generators-fd",
];

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub degree: usize,
    pub cutoff: usize,
    pub step: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub physical: bool,
    /// Single charge for the phase relations; `fock-charge` sweeps
    /// `DEFAULT_CHARGES` when unset.
    pub charge: Option<f64>,
    pub unit_charge: f64,
    pub frames: usize,
    pub frame_samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            degree: 4,
            cutoff: 8,
            step: DEFAULT_FD_STEP,
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            physical: false,
            charge: None,
            unit_charge: 1.0,
            frames: 20,
            frame_samples: 20,
        }
    }
}

impl RunOptions {
    fn spec(&self, name: &str, mode: Mode) -> RelationSpec {
        RelationSpec::new(name, mode)
            .degree(self.degree)
            .cutoff(self.cutoff)
            .tolerances(self.tolerances)
            .step(self.step)
            .physical(self.physical)
    }

    fn phase(&self) -> Result<PhaseCatalogEntry, VerifyError> {
        Ok(PhaseCatalogEntry::new(self.charge.unwrap_or(1.0), self.unit_charge)?)
    }
}

fn finish(spec: &RelationSpec, records: Vec<Record>, start: Instant) -> VerificationReport {
    VerificationReport::new(spec, records, start.elapsed().as_secs_f64() * 1e3)
}

fn finite(spec: &RelationSpec, x: f64) -> Result<f64, VerifyError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(VerifyError::NonFinite {
            relation: spec.name.clone(),
        })
    }
}

fn spin_of(name: &str) -> Spin {
    Spin::from_name(name.rsplit('-').next().unwrap_or_default()).expect("relation names carry a spin")
}

/// Rotation generators of a Poincaré component rep, by autodiff.
fn rotation_generators(d: &Representation) -> Result<[CMatrix; 6], VerifyError> {
    let prog = d.program();
    let mut out = Vec::with_capacity(6);
    for (mu, nu) in ROTATION_PAIRS {
        let idx = prog
            .param_index(&format!("w{mu}{nu}"))
            .ok_or_else(|| VerifyError::Config(format!("rep '{}' lacks parameter w{mu}{nu}", d.name())))?;
        out.push(generator(d, idx)?.matrix);
    }
    Ok(out.try_into().expect("six pairs"))
}

fn translation_mixing_h() -> [CMatrix; 4] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        CMatrix::real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
        CMatrix::zeros(2, 2),
        CMatrix::real_rows(&[&[0.5, 0.0], &[0.0, -0.5]]),
        CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, 0.25)], vec![c(0.0, 0.25), c(0.0, 0.0)]]),
    ]
}

/// Run one named relation from [`RELATION_NAMES`].
pub fn run_relation(name: &str, opts: &RunOptions) -> Result<VerificationReport, VerifyError> {
    run_relation_inner(name, opts).map_err(|e| e.in_relation(name))
}

fn run_relation_inner(name: &str, opts: &RunOptions) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    match name {
        "poincare-scalar" | "poincare-vector" | "poincare-spinor" => {
            let spin = spin_of(name);
            let (h, d) = catalog::poincare(spin)?;
            verify_local(&opts.spec(name, Mode::Spacetime), &LocalTarget::poincare(h, d, spin))
        }
        "translation-mixing" => verify_translation_with_h(&opts.spec(name, Mode::Spacetime), &translation_mixing_h()),
        "dilation-affine" => {
            let prog = catalog::load("dilation_affine.rep")?;
            let h = Representation::new(prog.clone(), "H").expect("catalog declares H");
            let d = Representation::new(prog, "D").expect("catalog declares D");
            verify_local(&opts.spec(name, Mode::Spacetime), &LocalTarget::new(Some(h), d))
        }
        "affine-delta" => {
            let spec = opts.spec(name, Mode::Spacetime);
            let mut records = Vec::new();
            for file in ["dilation_affine.rep", "poincare.rep"] {
                let prog = catalog::load(file)?;
                for h in coordinate_reps(&prog) {
                    for (w, pname) in prog.param_names().iter().enumerate() {
                        let f = affine_flow(&h, w)?;
                        let r = finite(&spec, f.delta_discrepancy())?;
                        records.push(spec.record(format!("{file}/{}/{pname}", h.name()), r, spec.tolerances.exact, Method::Dual));
                    }
                }
            }
            Ok(finish(&spec, records, start))
        }
        "poincare-delta" => {
            let spec = opts.spec(name, Mode::Spacetime);
            let prog = catalog::load("poincare.rep")?;
            let h = Representation::new(prog.clone(), "H").expect("catalog declares H");
            let records = prog
                .param_names()
                .iter()
                .enumerate()
                .map(|(w, pname)| {
                    let f = affine_flow(&h, w)?;
                    let r = finite(&spec, f.delta.abs().max(f.delta_trace.abs()))?;
                    Ok(spec.record(pname.clone(), r, spec.tolerances.exact, Method::Dual))
                })
                .collect::<Result<_, VerifyError>>()?;
            Ok(finish(&spec, records, start))
        }
        "internal-phase" | "bundle-phase" => {
            let mode = if name == "internal-phase" { Mode::Internal } else { Mode::Bundle };
            let entry = opts.phase()?;
            let target = LocalTarget::new(None, entry.component()?).intrinsics(Intrinsics::Phase(entry));
            verify_local(&opts.spec(name, mode), &target)
        }
        "bundle-scalar" | "bundle-vector" | "bundle-spinor" => {
            let spin = spin_of(name);
            let (_, d) = catalog::poincare(spin)?;
            let target = LocalTarget::new(None, d).intrinsics(Intrinsics::Poincare(spin));
            verify_local(&opts.spec(name, Mode::Bundle), &target)
        }
        "fock-global" => {
            let entry = opts.phase()?;
            verify_global_charge(&opts.spec(name, Mode::FockGlobal), &entry, &[], &sample_points(opts.seed))
        }
        "fock-charge" => {
            let entry = opts.phase()?;
            let charges = opts.charge.map_or(DEFAULT_CHARGES.to_vec(), |q| vec![q]);
            verify_global_charge(&opts.spec(name, Mode::FockLocal), &entry, &charges, &[])
        }
        "frame-scalar" | "frame-vector" | "frame-spinor" => {
            let spin = spin_of(name);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(1 + Spin::ALL.iter().position(|&s| s == spin).expect("spin") as u64);
            let changes: Vec<_> = (0..opts.frames).map(|_| random_frame(spin.dim(), &mut rng)).collect();
            let intr: Vec<_> = ROTATION_PAIRS
                .iter()
                .map(|&(m, n)| (format!("w{m}{n}"), catalog::intrinsic(spin, m, n)))
                .collect();
            verify_frame_independence(&opts.spec(name, Mode::Bundle), &intr, &changes, opts.frame_samples, opts.seed)
        }
        "closure-lorentz" => {
            let spec = opts.spec(name, Mode::Bundle);
            let mut records = Vec::new();
            for spin in [Spin::Vector, Spin::Spinor] {
                let (_, d) = catalog::poincare(spin)?;
                let gens = rotation_generators(&d)?;
                let named: Vec<_> = ROTATION_PAIRS.iter().map(|&(m, n)| format!("w{m}{n}")).zip(gens.iter().cloned()).collect();
                let table = algebra_closure(&named)?;
                let tol = spec.tolerances.exponential;
                let s = spin.name();
                records.push(spec.record(format!("{s}/closure"), finite(&spec, table.max_residual)?, tol, Method::Dual));
                records.push(spec.record(format!("{s}/jacobi"), finite(&spec, jacobi_residual(&gens)?)?, tol, Method::Dual));
                records.push(spec.record(format!("{s}/pattern"), finite(&spec, lorentz_pattern_residual(&gens)?)?, tol, Method::Dual));
            }
            Ok(finish(&spec, records, start))
        }
        "closure-poincare" => {
            let spec = opts.spec(name, Mode::Spacetime);
            let (h, d) = catalog::poincare(Spin::Scalar)?;
            let space = PolySpace::new(spec.degree, 1);
            let names = d.program().param_names();
            let gens: Vec<(String, CMatrix)> = (0..names.len())
                .into_par_iter()
                .map(|w| Ok((names[w].clone(), pullback_derivative(&space, Some(&h), &d, w, true)?)))
                .collect::<Result<_, VerifyError>>()?;
            let mut records = Vec::new();
            let translations: Vec<&(String, CMatrix)> = gens.iter().filter(|(n, _)| n.starts_with('a')).collect();
            for (i, (na, ta)) in translations.iter().enumerate() {
                for (nb, tb) in &translations[i + 1..] {
                    let r = finite(&spec, ta.commutator(tb)?.max_abs())?;
                    records.push(spec.record(format!("[{na},{nb}]"), r, spec.tolerances.exact, Method::Dual));
                }
            }
            let table = algebra_closure(&gens)?;
            let tol = spec.tolerances.exponential;
            records.push(spec.record("closure", finite(&spec, table.max_residual)?, tol, Method::Dual));
            let mats: Vec<CMatrix> = gens.into_iter().map(|(_, m)| m).collect();
            records.push(spec.record("jacobi", finite(&spec, jacobi_residual(&mats)?)?, tol, Method::Dual));
            Ok(finish(&spec, records, start))
        }
        "closure-phase" => {
            let spec = opts.spec(name, Mode::Internal);
            let prog = opts.phase()?.program()?;
            let mut records = Vec::new();
            for rep in prog.reps.iter().map(|r| Representation::new(prog.clone(), &r.name).expect("declared")) {
                let r = finite(&spec, generator_bracket(&rep, 0, 0)?.max_abs())?;
                records.push(spec.record(format!("{}:[b,b]", rep.name()), r, spec.tolerances.exact, Method::Dual));
            }
            Ok(finish(&spec, records, start))
        }
        "generators-fd" => {
            let spec = opts.spec(name, Mode::Spacetime);
            let mut programs: Vec<(String, Arc<RepProgram>)> = CATALOG_FILES
                .iter()
                .map(|f| Ok((f.to_string(), catalog::load(f)?)))
                .collect::<Result<_, VerifyError>>()?;
            programs.push(("phase".into(), opts.phase()?.program()?));
            let records = programs
                .iter()
                .flat_map(|(label, prog)| fd_records(&spec, label, prog, opts.step))
                .collect::<Result<_, _>>()?;
            Ok(finish(&spec, records, start))
        }
        other => Err(VerifyError::Config(format!(
            "unknown relation '{other}' (known: {})",
            RELATION_NAMES.join(", ")
        ))),
    }
}

fn coordinate_reps(prog: &Arc<RepProgram>) -> Vec<Representation> {
    reps_of(prog, |k| k == RepKind::Coordinate)
}

fn reps_of(prog: &Arc<RepProgram>, keep: impl Fn(RepKind) -> bool) -> Vec<Representation> {
    prog.reps
        .iter()
        .filter(|r| keep(r.kind))
        .map(|r| Representation::new(prog.clone(), &r.name).expect("declared"))
        .collect()
}

fn fd_records(
    spec: &RelationSpec,
    label: &str,
    prog: &Arc<RepProgram>,
    step: f64,
) -> Vec<Result<Record, VerifyError>> {
    let reps = reps_of(prog, |_| true);
    let names = prog.param_names();
    reps.par_iter()
        .flat_map(|rep| {
            (0..names.len())
                .into_par_iter()
                .map(|w| {
                    let x = fd_crosscheck(rep, w, step)?;
                    let r = finite(spec, x.discrepancy)?;
                    Ok(spec.record(format!("{label}/{}/{}", rep.name(), names[w]), r, spec.tolerances.fd, Method::Fd))
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Relations for a user rep file: the local relation for each pair of
/// coordinate and component reps (internal mode when there is no coordinate
/// rep), Δ agreement for each coordinate rep, and FD cross-checks.
pub fn file_relations(label: &str, program: Arc<RepProgram>, opts: &RunOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    let coords = coordinate_reps(&program);
    let comps = reps_of(&program, |k| k == RepKind::Component);
    let mut jobs: Vec<(String, Box<dyn Fn() -> Result<VerificationReport, VerifyError> + Send + Sync>)> = Vec::new();
    for d in &comps {
        if coords.is_empty() {
            let name = format!("{label}:{}", d.name());
            let spec = opts.spec(&name, Mode::Internal);
            let target = LocalTarget::new(None, d.clone());
            jobs.push((name, Box::new(move || verify_local(&spec, &target))));
        }
        for h in &coords {
            let name = format!("{label}:{}-{}", h.name(), d.name());
            let spec = opts.spec(&name, Mode::Spacetime);
            let target = LocalTarget::new(Some(h.clone()), d.clone());
            jobs.push((name, Box::new(move || verify_local(&spec, &target))));
        }
    }
    for h in coords {
        let name = format!("{label}:{}-delta", h.name());
        let spec = opts.spec(&name, Mode::Spacetime);
        jobs.push((
            name,
            Box::new(move || {
                let start = Instant::now();
                let records = h
                    .program()
                    .param_names()
                    .iter()
                    .enumerate()
                    .map(|(w, pname)| {
                        let r = finite(&spec, affine_flow(&h, w)?.delta_discrepancy())?;
                        Ok(spec.record(pname.clone(), r, spec.tolerances.exact, Method::Dual))
                    })
                    .collect::<Result<_, VerifyError>>()?;
                Ok(finish(&spec, records, start))
            }),
        ));
    }
    {
        let name = format!("{label}:generators-fd");
        let spec = opts.spec(&name, Mode::Spacetime);
        let (prog, step, label) = (program.clone(), opts.step, label.to_string());
        jobs.push((
            name,
            Box::new(move || {
                let start = Instant::now();
                let records = fd_records(&spec, &label, &prog, step).into_iter().collect::<Result<_, _>>()?;
                Ok(finish(&spec, records, start))
            }),
        ));
    }
    jobs.par_iter().map(|(name, job)| job().map_err(|e| e.in_relation(name))).collect()
}

/// Run the named relations concurrently; output order is by name.
pub fn run_suite(names: &[String], opts: &RunOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    if let Some(bad) = names.iter().find(|n| !RELATION_NAMES.contains(&n.as_str())) {
        return Err(VerifyError::Config(format!(
            "unknown relation '{bad}' (known: {})",
            RELATION_NAMES.join(", ")
        )));
    }
    let mut out: Vec<VerificationReport> = names.par_iter().map(|n| run_relation(n, opts)).collect::<Result<_, _>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_repfile;

    fn quick() -> RunOptions {
        RunOptions {
            degree: 2,
            frames: 3,
            frame_samples: 4,
            ..RunOptions::default()
        }
    }

    #[test]
    fn every_relation_passes_at_low_degree() {
        let names: Vec<String> = RELATION_NAMES.iter().map(|s| s.to_string()).collect();
        let reports = run_suite(&names, &quick()).unwrap();
        assert_eq!(reports.len(), RELATION_NAMES.len());
        for r in &reports {
            assert!(r.pass(), "{}: {:?}", r.name, r.records);
        }
    }

    #[test]
    fn unknown_relation() {
        assert!(matches!(run_suite(&["nope".into()], &quick()), Err(VerifyError::Config(_))));
    }

    #[test]
    fn tight_tolerance_fails() {
        let opts = RunOptions {
            tolerances: Tolerances::uniform(1e-20),
            ..quick()
        };
        let r = run_relation("poincare-vector", &opts).unwrap();
        assert!(!r.pass());
    }

    #[test]
    fn single_charge_override() {
        let opts = RunOptions {
            charge: Some(2.0),
            ..quick()
        };
        let r = run_relation("fock-charge", &opts).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].omega, "q=2");
    }

    #[test]
    fn user_file_relations() {
        let prog = Arc::new(
            parse_repfile(
                "param s = 0; param t = 0;\n\
                 rep H : coordinate = affine(id(4) + s * [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]], [[0],[t],[0],[0]]);\n\
                 rep D : component = exp(s * [[0, 1], [1, 0]]);",
            )
            .unwrap(),
        );
        let reports = file_relations("mine", prog, &quick()).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
        assert!(names.contains(&"mine:H-D"));
        assert!(names.contains(&"mine:H-delta"));
        assert!(names.contains(&"mine:generators-fd"));
        assert!(reports.iter().all(|r| r.pass()), "{reports:?}");
    }
}
