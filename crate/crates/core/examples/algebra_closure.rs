//! Structure constants of the Lorentz generators and the Jacobi identity.
//!
//! `cargo run --example algebra_closure`

use hrel::autodiff::generator;
use hrel::catalog::{self, Spin};
use hrel::verify::{algebra_closure, jacobi_residual};

fn main() {
    let (_, d) = catalog::poincare(Spin::Vector).expect("catalog loads");
    let gens: Vec<_> = (0..d.program().param_count())
        .map(|w| {
            let g = generator(&d, w).expect("generator");
            (g.param_name, g.matrix)
        })
        .filter(|(_, m)| m.max_abs() > 0.0)
        .collect();
    let table = algebra_closure(&gens).expect("closure");
    println!("rank {} of {}, max residual {:.1e}", table.rank, table.names.len(), table.max_residual);
    let (a, b) = (table.index("w01").unwrap(), table.index("w02").unwrap());
    for (c, f) in table.coefficients[a][b].iter().enumerate() {
        if f.norm() > 1e-12 {
            println!("[w01, w02] has {:+} {}", f.re, table.names[c]);
        }
    }
    let mats: Vec<_> = gens.into_iter().map(|(_, m)| m).collect();
    println!("Jacobi residual {:.1e}", jacobi_residual(&mats).expect("jacobi"));
}
