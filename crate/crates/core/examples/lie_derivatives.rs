// Lie derivative chains and pointwise ranks.

use lieinv::frontend::parse_problem;
use lieinv::polyring::rational::int;
use lieinv::polyring::{lie_chain, pointwise_rank, LieChain, RankValue};

const PARABOLA_FLOW: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/problems/parabola_flow.prob"
));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let prob = parse_problem(PARABOLA_FLOW)?;
    let h = prob.invariant.atoms()[0].poly.clone();
    println!("f: {}", prob.field);
    for (i, l) in lie_chain(&h, &prob.field, 3)?.iter().enumerate() {
        println!("L^{i} h = {l}");
    }

    // The rank at a point is the first derivative that does not vanish there.
    let chain = LieChain::new(h, prob.field.clone())?;
    for (x, y) in [(0, 0), (-4, 2), (-1, 1)] {
        let (rank, value) = pointwise_rank(&chain, &[int(x), int(y)], 2);
        match rank {
            RankValue::Finite(k) => println!("gamma({x}, {y}) = {k}, value {value}"),
            RankValue::Infinite => println!("gamma({x}, {y}) = inf"),
        }
    }
    assert_eq!(
        pointwise_rank(&chain, &[int(-1), int(1)], 2),
        (RankValue::Finite(2), int(8))
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
