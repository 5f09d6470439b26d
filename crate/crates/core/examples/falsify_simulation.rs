// Floating-point cross-checks: trajectory sampling and sign probes.

use lieinv::falsify::{numeric_ci_check, sign_probe, CiOutcome, SampleBudget};
use lieinv::frontend::parse_problem;
use lieinv::polyring::rational::int;
use lieinv::polyring::Assignment;

const PARABOLA_TEMPLATE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_template.prob"
));
const PARABOLA_FLOW: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_flow.prob"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tmpl = parse_problem(PARABOLA_TEMPLATE)?;
    let budget = SampleBudget {
        horizon: 2.0,
        ..Default::default()
    };
    for a in [-1, 1] {
        let prob = tmpl.instantiate(&Assignment::from([("a".to_string(), int(a))]))?;
        match numeric_ci_check(&prob, &budget)? {
            CiOutcome::NoViolationFound { samples, .. } => {
                println!("a = {a}: nothing found from {samples} points")
            }
            CiOutcome::Violation { x0, t, .. } => {
                println!("a = {a}: leaves P at t = {t} from {x0:?}")
            }
        }
    }

    let prob = parse_problem(PARABOLA_FLOW)?;
    let h = &prob.invariant.atoms()[0].poly;
    for (x, y) in [(-1, 1), (-4, 2), (0, 0)] {
        let out = sign_probe(h, &prob.field, &[int(x), int(y)], 2, 1e-3);
        println!("probe at ({x}, {y}): {out:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
