// Reading and printing problem files, and emitting solver scripts.

use lieinv::decide::{emit_qe, emit_scripts, Checker, SolverConfig};
use lieinv::frontend::{parse_problem, print_problem};
use lieinv::groebner::DEFAULT_CAP;
use lieinv::polyring::rational::frac;
use lieinv::polyring::Assignment;

const DISJUNCTIVE_TEMPLATE: &str = "\
# x - a >= 0 | y - b > 0 along (-2y, x^2)
vars: x, y
params: a, b
field: x' = -2*y; y' = x^2
init: x + y >= 0
invariant: x - a >= 0 | y - b > 0
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prob = parse_problem(DISJUNCTIVE_TEMPLATE)?;
    let text = print_problem(&prob);
    print!("{text}");
    assert_eq!(parse_problem(&text)?, prob);

    if let Err(e) = parse_problem("vars: x\nfield: x' = 2x\n") {
        println!("rejected: {e}");
    }

    let checker = Checker::new(&prob, DEFAULT_CAP);
    let u = Assignment::from([
        ("a".to_string(), frac(-1, 1)),
        ("b".to_string(), frac(-1, 2)),
    ]);
    let smt = emit_scripts(&checker, Some(&u), &SolverConfig::default())?;
    println!(
        "{} SMT-LIB scripts, {} bytes",
        smt.matches("(check-sat)").count(),
        smt.len()
    );
    println!(
        "{}",
        emit_qe(&checker)?
            .lines()
            .take(3)
            .collect::<Vec<_>>()
            .join("\n")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
