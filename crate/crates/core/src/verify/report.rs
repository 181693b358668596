//! Versioned JSON report and its table rendering.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Mode, Record, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("report schema: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRelation {
    pub name: String,
    pub mode: Mode,
    pub records: Vec<Record>,
    pub pass: bool,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub relations: Vec<ReportRelation>,
    pub pass: bool,
    pub seed: u64,
}

impl Report {
    /// Sorted by relation name, then record label. Timings are written as 0
    /// unless `timing` is set, so reruns are byte-identical.
    pub fn new(mut reports: Vec<VerificationReport>, seed: u64, timing: bool) -> Self {
        reports.sort_by(|a, b| a.name.cmp(&b.name));
        let relations: Vec<ReportRelation> = reports
            .into_iter()
            .map(|r| {
                let pass = r.pass();
                let mut records = r.records;
                records.sort_by(|a, b| a.omega.cmp(&b.omega).then((a.method as u8).cmp(&(b.method as u8))));
                ReportRelation {
                    name: r.name,
                    mode: r.mode,
                    records,
                    pass,
                    ms: if timing { r.elapsed_ms } else { 0.0 },
                }
            })
            .collect();
        let pass = !relations.is_empty() && relations.iter().all(|r| r.pass);
        Report {
            schema_version: SCHEMA_VERSION,
            relations,
            pass,
            seed,
        }
    }

    pub fn relation(&self, name: &str) -> Option<&ReportRelation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parse and check the pass flags against the records.
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(ReportError::Schema(format!(
                "schema_version {} (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        for rel in &r.relations {
            let all = !rel.records.is_empty() && rel.records.iter().all(|x| x.pass);
            if all != rel.pass {
                return Err(ReportError::Schema(format!("relation '{}' pass flag disagrees with records", rel.name)));
            }
        }
        let all = !r.relations.is_empty() && r.relations.iter().all(|x| x.pass);
        if all != r.pass {
            return Err(ReportError::Schema("overall pass flag disagrees with relations".into()));
        }
        Ok(r)
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_table(report: &Report) -> String {
    let width = report
        .relations
        .iter()
        .flat_map(|r| r.records.iter().map(|x| x.omega.len()))
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = String::new();
    for rel in &report.relations {
        out.push_str(&format!("{} [{}] {}\n", rel.name, rel.mode.as_str(), verdict(rel.pass)));
        for r in &rel.records {
            out.push_str(&format!(
                "  {:<width$}  residual {:>10.3e}  tol {:>8.1e}  {:<4}  {}\n",
                r.omega,
                r.residual,
                r.tolerance,
                if r.method == crate::autodiff::Method::Dual { "dual" } else { "fd" },
                verdict(r.pass),
            ));
        }
    }
    let passed = report.relations.iter().filter(|r| r.pass).count();
    out.push_str(&format!(
        "{passed}/{} relations pass (seed {}): {}\n",
        report.relations.len(),
        report.seed,
        verdict(report.pass)
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::Method;
    use crate::verify::RelationSpec;

    fn sample() -> Report {
        let a = RelationSpec::new("b-rel", Mode::Bundle);
        let b = RelationSpec::new("a-rel", Mode::FockLocal);
        Report::new(
            vec![
                VerificationReport::new(&a, vec![a.record("w01", 1e-15, 1e-9, Method::Dual), a.record("a0", 0.0, 1e-12, Method::Dual)], 3.5),
                VerificationReport::new(&b, vec![b.record("q=1", 2.0, 1e-12, Method::Dual)], 1.0),
            ],
            42,
            false,
        )
    }

    #[test]
    fn sorted_and_untimed() {
        let r = sample();
        assert_eq!(r.relations[0].name, "a-rel");
        assert_eq!(r.relations[1].records[0].omega, "a0");
        assert!(r.relations.iter().all(|x| x.ms == 0.0));
        assert!(!r.pass);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = r.to_json();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"mode\": \"fock-local\""));
        assert!(text.contains("\"method\": \"dual\""));
        assert_eq!(Report::from_json(&text).unwrap(), r);
    }

    #[test]
    fn inconsistent_flags_rejected() {
        let mut r = sample();
        r.pass = true;
        assert!(matches!(Report::from_json(&r.to_json()), Err(ReportError::Schema(_))));
        assert!(Report::from_json("{\"schema_version\": 2}").is_err());
    }

    #[test]
    fn table_lists_every_record() {
        let t = render_table(&sample());
        assert_eq!(t.lines().count(), 6);
        assert!(t.contains("1/2 relations pass"));
    }
}
