// Template parameter search over a rational grid.

use lieinv::decide::{generate_constraint, pick_sample, Grid, SolverConfig, Strategy};
use lieinv::frontend::parse_problem;
use lieinv::groebner::DEFAULT_CAP;

const DISJUNCTIVE_TEMPLATE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/disjunctive_template.prob"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prob = parse_problem(DISJUNCTIVE_TEMPLATE)?;
    let cfg = SolverConfig::default();
    let grid = Grid::parse("a=-1:1:1,b=-1:1:1")?;
    let res = generate_constraint(&prob, &cfg, &Strategy::Grid(grid), DEFAULT_CAP)?;
    println!("{} of 9 grid points give an invariant", res.witnesses.len());
    for u in &res.witnesses {
        println!("  a = {}, b = {}", u["a"], u["b"]);
    }
    if let Some(u) = pick_sample(&res, prob.params(), &cfg) {
        println!("sample: a = {}, b = {}", u["a"], u["b"]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
