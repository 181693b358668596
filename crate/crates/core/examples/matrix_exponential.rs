//! Padé matrix exponential on complex and dual-complex matrices.
//!
//! `cargo run --example matrix_exponential`

use hrel::expm::matexp;
use hrel::matrix::{CMatrix, Matrix};
use hrel::scalar::Dual;
use num_complex::Complex64;

fn main() {
    // exp(t J) is a rotation by t.
    let j = CMatrix::real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
    let t = 0.75;
    let r = matexp(&j.scale(Complex64::new(t, 0.0))).expect("expm");
    println!("exp({t} J)[0][0] = {:.15} (cos t = {:.15})", r[(0, 0)].re, t.cos());

    // Tangent of exp(b J) at b = 0 is J itself.
    let b = Dual::variable(0.0);
    let jd: Matrix<Dual> = j.lift();
    let e = matexp(&jd.scale(b)).expect("expm");
    println!("d/db exp(b J) at 0 differs from J by {:.1e}", e.tangent().max_abs_diff(&j));
    println!("value part is the identity: {}", e.value().max_abs_diff(&CMatrix::identity(2)) == 0.0);
}
