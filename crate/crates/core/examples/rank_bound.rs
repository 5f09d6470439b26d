// Uniform rank bounds from the Lie-derivative ideal chain.

use lieinv::frontend::parse_problem;
use lieinv::groebner::{parametric_rank_bound, rank_bound, DEFAULT_CAP};
use lieinv::semialg::normalize_dnf;

const PARABOLA_FLOW: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_flow.prob"
));
const PARABOLA_TEMPLATE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_template.prob"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prob = parse_problem(PARABOLA_FLOW)?;
    let h = prob.invariant.atoms()[0].poly.clone();
    let rb = rank_bound(&h, &prob.field, DEFAULT_CAP)?;
    println!("N for {h} is {}", rb.value);
    for g in rb.witness_basis().generators() {
        println!("  basis element {g}");
    }
    rb.verify()?;

    // Parameters are ordinary ring variables; the bound covers every value.
    let tmpl = parse_problem(PARABOLA_TEMPLATE)?;
    let dnf = normalize_dnf(&tmpl.invariant);
    let p = &dnf.single_atom().ok_or("template is one atom")?.poly;
    let rb = parametric_rank_bound(p, &tmpl.field, DEFAULT_CAP)?;
    println!("N for template {p} is {}", rb.value);
    rb.verify()?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
