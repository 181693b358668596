//! Flow data and the volume term for a non-isometric coordinate action.
//!
//! `cargo run --example general_affine`

use hrel::autodiff::affine_flow;
use hrel::catalog;
use hrel::dsl::Representation;
use hrel::verify::{verify_local, LocalTarget, Mode, RelationSpec};

fn main() {
    let prog = catalog::load("dilation_affine.rep").expect("catalog loads");
    let h = Representation::new(prog.clone(), "H").expect("coordinate rep");
    let d = Representation::new(prog.clone(), "D").expect("component rep");
    for (w, name) in prog.param_names().iter().enumerate() {
        let f = affine_flow(&h, w).expect("affine flow");
        println!("{name}: delta {} (trace {}), shift {:?}", f.delta, f.delta_trace, f.shift_part);
    }
    let spec = RelationSpec::new("dilation-affine", Mode::Spacetime).degree(4);
    let report = verify_local(&spec, &LocalTarget::new(Some(h), d)).expect("verification runs");
    println!("general relation: max residual {:.2e}, pass {}", report.max_residual(), report.pass());
}
