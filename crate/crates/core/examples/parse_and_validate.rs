//! Parse a rep-file, validate it, and print its canonical form.
//!
//! `cargo run --example parse_and_validate [path]`

use hrel::dsl::{parse_repfile, validate_program};

const SAMPLE: &str = "param theta = 0;
let J = [[0, -1], [1, 0]];
rep R : component = exp(theta * J);
";

fn main() {
    let src = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).expect("readable rep-file"),
        None => SAMPLE.to_string(),
    };
    let program = match parse_repfile(&src) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("parse error: {e}");
            std::process::exit(2);
        }
    };
    let diagnostics = validate_program(&program);
    for d in &diagnostics {
        eprintln!("{d}");
    }
    println!("parameters: {:?}", program.param_names());
    for rep in &program.reps {
        println!("rep {} ({})", rep.name, rep.kind.as_str());
    }
    println!("--- canonical form ---\n{program}");
    if !diagnostics.is_empty() {
        std::process::exit(2);
    }
}
