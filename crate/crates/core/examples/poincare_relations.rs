//! Verify translation and rotation relations on the polynomial space for
//! each spin.
//!
//! `cargo run --example poincare_relations [degree]`

use hrel::catalog::{self, Spin};
use hrel::verify::{verify_local, LocalTarget, Mode, RelationSpec};

fn main() {
    let degree: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for spin in Spin::ALL {
        let (h, d) = catalog::poincare(spin).expect("catalog loads");
        let spec = RelationSpec::new(format!("poincare-{}", spin.name()), Mode::Spacetime).degree(degree);
        let report = verify_local(&spec, &LocalTarget::poincare(h, d, spin)).expect("verification runs");
        println!("{}: {} records, max residual {:.2e}, pass {}", report.name, report.records.len(), report.max_residual(), report.pass());
        for r in report.records.iter().filter(|r| r.omega == "w12") {
            println!("  {} [{:?}] residual {:.2e} < {:.0e}", r.omega, r.method, r.residual, r.tolerance);
        }
    }
}
