// Conserved quantities of the two-aircraft model; no solver is involved.

use lieinv::decide::{check_invariant, Method, SolverConfig};
use lieinv::frontend::parse_problem;
use lieinv::polyring::lie_derivative;

const FILES: [(&str, &str); 4] = [
    (
        "linear 1",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/aircraft_linear1.prob"
        )),
    ),
    (
        "linear 2",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/aircraft_linear2.prob"
        )),
    ),
    (
        "linear 3",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/aircraft_linear3.prob"
        )),
    ),
    (
        "quadratic",
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/problems/aircraft_quadratic.prob"
        )),
    ),
];

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // A command that cannot start: every goal must be settled without it.
    let cfg = SolverConfig::with_command("/nonexistent/solver");
    for (name, text) in FILES {
        let prob = parse_problem(text)?;
        let p = &prob.invariant.atoms()[0].poly;
        let l1 = lie_derivative(p, &prob.field)?;
        let report = check_invariant(&prob, None, &cfg)?;
        let solver_free = report.goals.iter().all(|g| g.method != Method::Solver);
        println!(
            "{name}: {p} = 0, L^1 = {l1}, {} (solver-free: {solver_free})",
            report.verdict
        );
        assert!(report.verdict.is_valid() && solver_free);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
