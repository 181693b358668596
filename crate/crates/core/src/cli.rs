//! The `hrel` command line: `parse`, `derive`, `verify` and `report`.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or config error,
//! 3 I/O error, 4 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::autodiff::{affine_flow, fd_crosscheck, AutodiffError, DEFAULT_FD_STEP, FD_STEP_RANGE};
use crate::dsl::{parse_repfile, validate_program, RepKind, RepProgram, Representation};
use crate::matrix::format_value;
use crate::verify::{
    file_relations, render_table, run_suite, Report, RunOptions, Tolerances, VerifyError, DEFAULT_SEED, RELATION_NAMES,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub const SEED_ENV: &str = "HREL_SEED";

#[derive(Debug, Parser)]
#[command(name = "hrel", version, about = "Derive and verify Heisenberg relations from parametrized representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a rep file.
    Parse { path: PathBuf },
    /// Print generators, finite-difference discrepancies and flow data.
    Derive(DeriveArgs),
    /// Run verification relations and emit a report.
    Verify(VerifyArgs),
    /// Re-render a saved JSON report.
    Report {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    pub path: PathBuf,
    /// Parameter name, or `all`.
    #[arg(long, default_value = "all")]
    pub omega: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Rep files to verify in addition to the selected relations.
    pub files: Vec<PathBuf>,
    /// Run every built-in relation.
    #[arg(long)]
    pub all: bool,
    /// Run one built-in relation; repeatable.
    #[arg(long = "relation", value_name = "NAME")]
    pub relations: Vec<String>,
    /// Maximum total degree of the polynomial space.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Highest occupation number kept in the Fock space.
    #[arg(long, default_value_t = 8)]
    pub cutoff: usize,
    /// Central-difference step for fd records.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub step: f64,
    /// One tolerance for every record, replacing the defaults.
    #[arg(long)]
    pub tol: Option<f64>,
    /// RNG seed for frames and sample points; overrides HREL_SEED (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Multiply both sides of every relation by iħ (ħ = 1).
    #[arg(long)]
    pub physical: bool,
    /// Charge q for the charge relations (default: the built-in set).
    #[arg(long)]
    pub charge: Option<f64>,
    /// Unit charge e.
    #[arg(long, default_value_t = 1.0)]
    pub unit_charge: f64,
    /// Write wall-clock milliseconds into the report (breaks byte-identical reruns).
    #[arg(long)]
    pub timing: bool,
}

/// A failure mapped to its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }

    fn numerical(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: m.into(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Config(_) => Failure::usage(e.to_string()),
            VerifyError::Relation { ref source, .. } if matches!(**source, VerifyError::Config(_)) => {
                Failure::usage(e.to_string())
            }
            e => Failure::numerical(e.to_string()),
        }
    }
}

fn autodiff_failure(e: AutodiffError) -> Failure {
    match e {
        AutodiffError::OmegaOutOfRange { .. } | AutodiffError::StepOutOfRange(_) => Failure::usage(e.to_string()),
        e => Failure::numerical(e.to_string()),
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Parse { path } => cmd_parse(&path, out),
        Command::Derive(a) => cmd_derive(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Report { path, format } => cmd_report(&path, format, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<Arc<RepProgram>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let program = parse_repfile(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let diags = validate_program(&program);
    if !diags.is_empty() {
        let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
        return Err(Failure::usage(lines.join("\n")));
    }
    Ok(Arc::new(program))
}

fn cmd_parse(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    load(path)?;
    writeln!(out, "OK").map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    Ok(EXIT_PASS)
}

#[derive(Debug, Serialize)]
struct FlowJson {
    delta: f64,
    delta_trace: f64,
    linear_part: Vec<Vec<f64>>,
    shift_part: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct GeneratorJson {
    rep: String,
    kind: &'static str,
    omega: String,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    fd_discrepancy: f64,
    flow: Option<FlowJson>,
}

#[derive(Debug, Serialize)]
struct DeriveJson {
    schema_version: u32,
    file: String,
    step: f64,
    generators: Vec<GeneratorJson>,
}

fn cmd_derive(a: &DeriveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&a.step) {
        return Err(Failure::usage(format!("--step {} outside [1e-9, 1e-2]", a.step)));
    }
    let program = load(&a.path)?;
    let names = program.param_names();
    let omegas: Vec<usize> = if a.omega == "all" {
        (0..names.len()).collect()
    } else {
        vec![program
            .param_index(&a.omega)
            .ok_or_else(|| Failure::usage(format!("no parameter '{}' (have: {})", a.omega, names.join(", "))))?]
    };
    let mut generators = Vec::new();
    for decl in &program.reps {
        let rep = Representation::new(program.clone(), &decl.name).expect("declared");
        for &w in &omegas {
            let x = fd_crosscheck(&rep, w, a.step).map_err(autodiff_failure)?;
            let exact = crate::autodiff::generator(&rep, w).map_err(autodiff_failure)?;
            if !exact.matrix.is_finite() || !x.discrepancy.is_finite() {
                return Err(Failure::numerical(format!("rep '{}' parameter '{}' is not finite", decl.name, names[w])));
            }
            let flow = if decl.kind == RepKind::Coordinate {
                let f = affine_flow(&rep, w).map_err(autodiff_failure)?;
                Some(FlowJson {
                    delta: f.delta,
                    delta_trace: f.delta_trace,
                    linear_part: f.linear_part,
                    shift_part: f.shift_part,
                })
            } else {
                None
            };
            let (re, im) = exact.matrix.split_parts();
            generators.push(GeneratorJson {
                rep: decl.name.clone(),
                kind: decl.kind.as_str(),
                omega: names[w].clone(),
                re,
                im,
                fd_discrepancy: x.discrepancy,
                flow,
            });
        }
    }
    let doc = DeriveJson {
        schema_version: crate::verify::SCHEMA_VERSION,
        file: a.path.display().to_string(),
        step: a.step,
        generators,
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializes") + "\n",
        Format::Table => derive_table(&doc),
    };
    out.write_all(text.as_bytes()).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    Ok(EXIT_PASS)
}

fn derive_table(doc: &DeriveJson) -> String {
    let mut s = String::new();
    for g in &doc.generators {
        let m = crate::matrix::CMatrix::from_fn(g.re.len(), g.re.first().map_or(0, Vec::len), |r, c| {
            num_complex::Complex64::new(g.re[r][c], g.im[r][c])
        });
        s.push_str(&format!(
            "{} ({}) d/d{}: {}  fd {:.2e}\n",
            g.rep,
            g.kind,
            g.omega,
            format_value(&m),
            g.fd_discrepancy
        ));
        if let Some(f) = &g.flow {
            s.push_str(&format!(
                "  delta {} (trace {})  linear {:?}  shift {:?}\n",
                f.delta, f.delta_trace, f.linear_part, f.shift_part
            ));
        }
    }
    s
}

fn seed(arg: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = arg {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Checked options for `verify`.
pub fn run_options(a: &VerifyArgs) -> Result<RunOptions, String> {
    if a.degree < 1 {
        return Err("--degree must be at least 1".into());
    }
    if a.degree > 12 {
        return Err("--degree above 12 is beyond desk scale".into());
    }
    if a.cutoff < 2 {
        return Err("--cutoff must be at least 2".into());
    }
    if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&a.step) {
        return Err(format!("--step {} outside [1e-9, 1e-2]", a.step));
    }
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol {t} must be positive"));
        }
    }
    if a.unit_charge == 0.0 || !a.unit_charge.is_finite() {
        return Err("--unit-charge must be finite and nonzero".into());
    }
    if a.charge.is_some_and(|q| !q.is_finite()) {
        return Err("--charge must be finite".into());
    }
    Ok(RunOptions {
        degree: a.degree,
        cutoff: a.cutoff,
        step: a.step,
        tolerances: a.tol.map_or_else(Tolerances::default, Tolerances::uniform),
        seed: seed(a.seed).map_err(|f| f.message)?,
        physical: a.physical,
        charge: a.charge,
        unit_charge: a.unit_charge,
        ..RunOptions::default()
    })
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let opts = run_options(a).map_err(Failure::usage)?;
    let mut names: Vec<String> = if a.all {
        RELATION_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        Vec::new()
    };
    for r in &a.relations {
        if !names.contains(r) {
            names.push(r.clone());
        }
    }
    if names.is_empty() && a.files.is_empty() {
        return Err(Failure::usage("nothing to verify: pass --all, --relation NAME or rep files"));
    }
    let mut programs = Vec::new();
    for path in &a.files {
        let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        programs.push((label, load(path)?));
    }
    let mut reports = run_suite(&names, &opts)?;
    for (label, prog) in programs {
        reports.extend(file_relations(&label, prog, &opts)?);
    }
    let report = Report::new(reports, opts.seed, a.timing);
    let text = match a.format {
        Format::Json => report.to_json() + "\n",
        Format::Table => render_table(&report),
    };
    write_output(a.out.as_deref(), &text, out)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_report(path: &Path, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let report = Report::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let rendered = match format {
        Format::Json => report.to_json() + "\n",
        Format::Table => render_table(&report),
    };
    write_output(None, &rendered, out)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("hrel").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--relation", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--all", "--degree", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--all", "--cutoff", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--all", "--step", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--all", "--tol", "-1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--all", "--unit-charge", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("verify"));
    }

    #[test]
    fn missing_file_is_io() {
        let (code, _, err) = run_args(&["parse", "/nonexistent/x.rep"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.contains("x.rep"));
    }

    #[test]
    fn fock_charge_two() {
        let (code, out, _) = run_args(&["verify", "--relation", "fock-charge", "--charge", "2", "--cutoff", "8"]);
        assert_eq!(code, EXIT_PASS);
        let r = Report::from_json(&out).unwrap();
        assert!(r.relations[0].records.iter().all(|x| x.residual < 1e-12));
    }
}
