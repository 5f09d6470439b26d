// Deciding a candidate through an external SMT solver (z3 by default).

use lieinv::decide::{check_invariant, SolverConfig, Verdict};
use lieinv::frontend::parse_problem;
use lieinv::polyring::rational::int;
use lieinv::polyring::Assignment;

const PARABOLA_TEMPLATE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_template.prob"
));
const CTCS3: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/problems/ctcs3.prob"));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let tmpl = parse_problem(PARABOLA_TEMPLATE)?;
    for a in [-1, 1] {
        let u = Assignment::from([("a".to_string(), int(a))]);
        let report = check_invariant(&tmpl, Some(&u), &cfg)?;
        println!("a = {a}: {}", report.verdict);
        for g in &report.goals {
            println!("  {:<8} {}", g.kind.label(), g.verdict);
        }
    }

    let ctcs = parse_problem(CTCS3)?;
    let report = check_invariant(&ctcs, None, &cfg)?;
    println!("train: {}", report.verdict);
    assert_eq!(report.verdict, Verdict::Valid);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
