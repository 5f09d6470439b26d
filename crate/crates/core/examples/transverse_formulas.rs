// The formula families built over a Lie chain, printed with Unicode
// connectives.

use lieinv::frontend::parse_problem;
use lieinv::semialg::{normalize_dnf, Encoder};

const PARABOLA_TEMPLATE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_template.prob"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prob = parse_problem(PARABOLA_TEMPLATE)?;
    let enc = Encoder::new(&prob.field);
    let dnf = normalize_dnf(&prob.domain);
    let h = &dnf.single_atom().ok_or("domain is one atom")?.poly;
    println!("h = {h}, N = {}", enc.bound(h)?.value);
    println!("pi(h)      = {}", enc.trans(h)?.to_unicode());
    println!("psi+(h)    = {}", enc.psi_plus(h)?.to_unicode());
    println!("phi0(h)    = {}", enc.phi_zero(h)?.to_unicode());
    println!("phi+(h)    = {}", enc.phi_plus(h)?.to_unicode());
    println!(
        "In(H)      = {}",
        enc.in_formula(&dnf)?.simplify().to_unicode()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
