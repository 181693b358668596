//! Read generators off a catalog rep by dual numbers and compare them with
//! central differences.
//!
//! `cargo run --example extract_generators`

use hrel::autodiff::{fd_crosscheck, generator};
use hrel::catalog::{self, Spin};
use hrel::matrix::format_value;

fn main() {
    let (_, d) = catalog::poincare(Spin::Vector).expect("catalog loads");
    for w in 0..d.program().param_count() {
        let g = generator(&d, w).expect("generator");
        let fd = fd_crosscheck(&d, w, 1e-6).expect("fd");
        println!("{} / {}: |dual - fd| = {:.2e}", g.rep_name, g.param_name, fd.discrepancy);
        if g.param_name == "w01" {
            println!("{}", format_value(&g.matrix));
        }
    }
}
