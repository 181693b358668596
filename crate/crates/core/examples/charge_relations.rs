//! Global and local charge relations on the truncated Fock space.
//!
//! `cargo run --example charge_relations [q]`

use hrel::catalog::PhaseCatalogEntry;
use hrel::realization::FockSpace;
use hrel::verify::{sample_points, verify_global_charge, Mode, RelationSpec, DEFAULT_CHARGES};

fn main() {
    let q: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let entry = PhaseCatalogEntry::new(q, 1.0).expect("nonzero unit charge");
    let samples = sample_points(42);
    let global = verify_global_charge(&RelationSpec::new("fock-global", Mode::FockGlobal).cutoff(8), &entry, &[], &samples)
        .expect("global relation runs");
    for r in &global.records {
        println!("global {}: residual {:.2e}", r.omega, r.residual);
    }
    let local = verify_global_charge(&RelationSpec::new("fock-charge", Mode::FockLocal), &entry, &DEFAULT_CHARGES, &[])
        .expect("local relation runs");
    for r in &local.records {
        println!("local {}: residual {:.2e}", r.omega, r.residual);
    }
    let fock = FockSpace::new(4);
    println!("number operator diagonal: {:?}", (0..=4).map(|n| fock.number()[(n, n)].re).collect::<Vec<_>>());
}
