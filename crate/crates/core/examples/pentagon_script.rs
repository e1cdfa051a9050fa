//! Prints the pentagon proof script: the start side is rewritten forward to
//! a common normal form, and the goal side's forward derivation is appended
//! in reverse.
//!
//! cargo run -p gkernel --example pentagon_script > crates/core/scripts/pentagon.script

use gkernel::prover::parse::{parse_position, parse_term};
use gkernel::prover::script::{replay, reverse_steps, ProofScript, Step};
use gkernel::prover::{normalize, Direction};

fn steps(spec: &[(&str, &str, &str)]) -> Vec<Step> {
    spec.iter()
        .map(|(rule, dir, pos)| {
            let (path, window) = parse_position(pos).unwrap();
            let d = if *dir == "->" { Direction::Forward } else { Direction::Backward };
            Step::new(rule, d, &path, window)
        })
        .collect()
}

fn main() {
    let start = normalize(&parse_term("W[X,Y×Z] . ^rho[X](W[Y,Z])", None).unwrap());
    let goal = normalize(&parse_term("Fa[X,Y,Z] . W[X×Y,Z] . W[X,Y]", None).unwrap());

    let lhs = steps(&[
        ("R5", "->", "0"),
        ("R5", "->", "5.0"),
        ("R3.comp", "->", "5"),
        ("R3.adj", "<-", "4"),
        ("R3.comp", "<-", "[4..6]"),
        ("R1", "->", "4.0[0..2]"),
        ("R3.id", "->", "4"),
        ("R3.unit", "->", "4"),
        ("R8", "->", "[3..5]"),
        ("R4", "->", "5"),
        ("R8.pad", "->", "[4..6]"),
        ("R1", "->", "4.0[0..2]"),
        ("R7", "->", "[1..5]"),
        ("R3.pad", "->", "7"),
        ("R3.adj", "->", "7.0"),
        ("R3.adj", "->", "8"),
        ("R3.nest", "->", "8.0"),
    ]);
    let rhs = steps(&[
        ("R6", "->", "0"),
        ("R5", "->", "3"),
        ("R1", "->", "[2..4]"),
        ("R2*", "->", "[5..7]"),
        ("R8.pad", "->", "[4..6]"),
        ("R5", "->", "4.0.1"),
        ("R1", "->", "4.0[0..2]"),
        ("R8.pad", "<-", "4"),
    ]);

    let run = |label: &str, from: &gkernel::prover::Term, st: &[Step]| {
        let mut t = from.clone();
        for (k, s) in st.iter().enumerate() {
            t = s.apply(&t).unwrap_or_else(|e| panic!("{label} step {}: {e}\n  on {t}", k + 1));
            eprintln!("{label} {:>2} {s}\n     {t}", k + 1);
        }
        t
    };
    let a = run("start", &start, &lhs);
    let b = run("goal", &goal, &rhs);
    assert_eq!(a, b, "sides do not meet");

    let back = reverse_steps(&goal, &rhs).expect("goal derivation reverses");
    let mut all = lhs;
    all.extend(back);
    assert_eq!(replay(&start, &all).unwrap().last().unwrap(), &goal);

    let script = ProofScript {
        objects: ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect(),
        start,
        goal,
        steps: all,
    };
    print!("{}", script.to_text());
}
