//! Seeded corpus of valid rep files and rejected mutants.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn num(rng: &mut impl Rng) -> String {
    let x: f64 = rng.gen_range(-2.0..2.0);
    format!("{:.3}", x)
}

fn literal(rng: &mut impl Rng, n: usize, complex: bool) -> String {
    let rows: Vec<String> = (0..n)
        .map(|_| {
            let cells: Vec<String> = (0..n)
                .map(|_| {
                    if complex && rng.gen_bool(0.3) {
                        format!("{} * i", num(rng))
                    } else {
                        num(rng)
                    }
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Parameter offset `(p - p0)`, zero at the identity point.
fn offset(name: &str, b0: f64) -> String {
    if b0 == 0.0 {
        name.to_string()
    } else {
        format!("({name} - {b0:?})")
    }
}

/// A valid program: every rep is the identity at `b₀`, coordinate reps are
/// affine on R⁴, everything else is square.
pub fn valid_program(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nparams = rng.gen_range(1..=3);
    let mut src = format!("# generated corpus file {seed}\n");
    let mut params = Vec::new();
    for k in 0..nparams {
        let b0 = *[0.0, 0.5, -1.25].choose(&mut rng).unwrap();
        let name = format!("p{k}");
        src.push_str(&format!("param {name} = {b0:?};\n"));
        params.push((name, b0));
    }
    let n = rng.gen_range(1..=4);
    let nlets = rng.gen_range(1..=3);
    for j in 0..nlets {
        src.push_str(&format!("let A{j} = {};\n", literal(&mut rng, n, true)));
    }
    src.push_str(&format!("let C = {};\n", literal(&mut rng, 4, false)));
    let gen_sum = |rng: &mut ChaCha8Rng| -> String {
        let terms: Vec<String> = params
            .iter()
            .map(|(p, b0)| format!("{} * A{}", offset(p, *b0), rng.gen_range(0..nlets)))
            .collect();
        terms.join(" + ")
    };
    let nreps = rng.gen_range(1..=3);
    for r in 0..nreps {
        let body = match rng.gen_range(0..6) {
            0 => format!("exp({})", gen_sum(&mut rng)),
            1 => format!("inv(exp({}))", gen_sum(&mut rng)),
            2 => format!("transpose(exp(0.5 * ({})))", gen_sum(&mut rng)),
            3 => format!("exp({}) * exp(-({}))", gen_sum(&mut rng), gen_sum(&mut rng)),
            4 => format!("id({n}) + {}", gen_sum(&mut rng)),
            _ => format!("exp(det(id(1)) * tr(id(1)) * ({}))", gen_sum(&mut rng)),
        };
        let kind = if rng.gen_bool(0.5) { "component" } else { "state" };
        src.push_str(&format!("rep R{r} : {kind} = {body};\n"));
    }
    if rng.gen_bool(0.6) {
        let (p, b0) = &params[0];
        let shift: Vec<String> = (0..4).map(|_| format!("[{} * {}]", num(&mut rng), offset(p, *b0))).collect();
        let lin = if rng.gen_bool(0.5) { "eta4 * C * eta4" } else { "C" };
        src.push_str(&format!(
            "rep H : coordinate = affine(exp({} * ({lin})), [{}]);\n",
            offset(p, *b0),
            shift.join(", ")
        ));
    }
    if rng.gen_bool(0.3) {
        let (p, b0) = &params[params.len() - 1];
        src.push_str(&format!(
            "rep S : component = exp({} * 0.25 * (gamma0 * gamma1 - gamma1 * gamma0));\n",
            offset(p, *b0)
        ));
    }
    src
}

pub fn valid_corpus() -> Vec<String> {
    (0..20).map(|s| valid_program(1000 + s)).collect()
}

const BASE: &str = "param b = 0;
let A = [[0, 1], [-1, 0]];
rep U : state = exp(b * A);
";

/// Mutants of a valid file and the line their diagnostic must point to.
pub fn mutants() -> Vec<(&'static str, String, usize)> {
    vec![
        ("unknown identifier", BASE.replace("b * A", "b * B"), 3),
        ("missing semicolon", BASE.replace("[-1, 0]];", "[-1, 0]]"), 3),
        ("ragged literal", BASE.replace("[-1, 0]", "[-1]"), 2),
        ("duplicate name", format!("{BASE}let A = [[1]];\n"), 4),
        ("stray character", BASE.replace("b * A", "b @ A"), 3),
        ("non-finite number", BASE.replace("[0, 1]", "[0, 1e999]"), 2),
        ("not identity at b0", BASE.replace("exp(b * A)", "exp(b * A) + id(2)"), 3),
        ("coordinate not affine", format!("{BASE}rep H : coordinate = id(4);\n"), 4),
        ("shape mismatch", format!("{BASE}rep V : state = id(2) + [[b], [b]];\n"), 4),
        ("rep used as value", format!("{BASE}let W = U;\n"), 4),
    ]
}
