//! Reduced Gröbner bases frozen from an independent computer-algebra run.

use lieinv::frontend::parse_polynomial;
use lieinv::groebner::{buchberger, MonomialOrder};
use lieinv::polyring::{Polynomial, Vars};

fn basis(gens: &[&str], order: MonomialOrder) -> Vec<Polynomial> {
    let v = Vars::new(&["x", "y"], &[] as &[&str]);
    let gens: Vec<Polynomial> = gens
        .iter()
        .map(|g| parse_polynomial(g, &v).unwrap())
        .collect();
    let gb = buchberger(&gens, &order).unwrap();
    gb.verify(&gens).unwrap();
    let mut out = gb.generators().to_vec();
    out.sort_by_key(|p| p.to_string());
    out
}

fn expected(polys: &[&str]) -> Vec<Polynomial> {
    let v = Vars::new(&["x", "y"], &[] as &[&str]);
    let mut out: Vec<Polynomial> = polys
        .iter()
        .map(|p| parse_polynomial(p, &v).unwrap())
        .collect();
    out.sort_by_key(|p| p.to_string());
    out
}

#[test]
fn circle_and_axes() {
    let gens = ["x^2 + y^2 - 1", "x*y"];
    assert_eq!(
        basis(&gens, MonomialOrder::grevlex(2)),
        expected(&["y^3 - y", "x^2 + y^2 - 1", "x*y"])
    );
    assert_eq!(
        basis(&gens, MonomialOrder::lex(2)),
        expected(&["x^2 + y^2 - 1", "x*y", "y^3 - y"])
    );
}

#[test]
fn cubic_pair() {
    let gens = ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"];
    assert_eq!(
        basis(&gens, MonomialOrder::grevlex(2)),
        expected(&["x^2", "x*y", "y^2 - 1/2*x"])
    );
    assert_eq!(
        basis(&gens, MonomialOrder::lex(2)),
        expected(&["x - 2*y^2", "y^3"])
    );
}
