//! SMT-LIB 2 rendering of polynomials and formulas.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::polyring::{Polynomial, Rational, Vars};
use crate::semialg::{Formula, Relation};

const HEADER: &str = concat!("; lieinv ", env!("CARGO_PKG_VERSION"));

fn int_lit(n: &BigInt) -> String {
    format!("{n}.0")
}

/// `3.0`, `(- 3.0)`, `(/ 1.0 3.0)`, `(- (/ 1.0 3.0))`.
pub fn rational(q: &Rational) -> String {
    let abs = q.abs();
    let body = if abs.is_integer() {
        int_lit(abs.numer())
    } else {
        format!("(/ {} {})", int_lit(abs.numer()), int_lit(abs.denom()))
    };
    if q.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

/// Sum of products; powers are written as repeated factors.
pub fn polynomial(p: &Polynomial) -> String {
    let vars = p.vars();
    let terms: Vec<String> = p
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| {
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(rational(c));
            }
            for (v, e) in m.iter() {
                for _ in 0..e {
                    factors.push(symbol(vars.name(v)));
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0.0".to_string(),
        1 => terms.into_iter().next().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

/// Quotes names that are not plain SMT-LIB simple symbols.
pub fn symbol(name: &str) -> String {
    let plain = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if plain {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

pub fn formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => {
            let p = polynomial(&a.poly);
            let op = match a.rel {
                Relation::Ge => ">=",
                Relation::Gt => ">",
                Relation::Le => "<=",
                Relation::Lt => "<",
                Relation::Eq | Relation::Ne => "=",
            };
            if a.rel == Relation::Ne {
                write!(out, "(not (= {p} 0.0))").unwrap();
            } else {
                write!(out, "({op} {p} 0.0)").unwrap();
            }
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(out, g);
            out.push(')');
        }
        Formula::And(v) | Formula::Or(v) => {
            let (op, empty) = if matches!(f, Formula::And(_)) {
                ("and", "true")
            } else {
                ("or", "false")
            };
            match v.len() {
                0 => out.push_str(empty),
                1 => write_formula(out, &v[0]),
                _ => {
                    write!(out, "({op}").unwrap();
                    for g in v {
                        out.push(' ');
                        write_formula(out, g);
                    }
                    out.push(')');
                }
            }
        }
        Formula::Implies(a, b) => {
            out.push_str("(=> ");
            write_formula(out, a);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
    }
}

/// Script whose satisfiability refutes `∀x. φ`: one real constant per state
/// variable (and per parameter still occurring), `(assert (not φ))`.
pub fn validity_script(
    phi: &Formula,
    vars: &Vars,
    logic: &str,
    options: &[String],
    label: &str,
) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    if !label.is_empty() {
        writeln!(s, "; goal: {label}").unwrap();
    }
    writeln!(s, "(set-info :smt-lib-version 2.6)").unwrap();
    writeln!(s, "(set-logic {logic})").unwrap();
    for o in options {
        writeln!(s, "{o}").unwrap();
    }
    let support = phi.support();
    for (i, name) in vars.names().iter().enumerate() {
        if i < vars.n_state() || support.contains(&i) {
            writeln!(s, "(declare-const {} Real)", symbol(name)).unwrap();
        }
    }
    writeln!(s, "(assert (not {}))", formula(phi)).unwrap();
    writeln!(s, "(check-sat)").unwrap();
    writeln!(s, "(get-model)").unwrap();
    s
}

/// Script asserting `φ` itself, for sampling a point of a constraint.
pub fn satisfiability_script(phi: &Formula, names: &[String], logic: &str) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "(set-info :smt-lib-version 2.6)").unwrap();
    writeln!(s, "(set-logic {logic})").unwrap();
    for name in names {
        writeln!(s, "(declare-const {} Real)", symbol(name)).unwrap();
    }
    writeln!(s, "(assert {})", formula(phi)).unwrap();
    writeln!(s, "(check-sat)").unwrap();
    writeln!(s, "(get-model)").unwrap();
    s
}

/// `∃u ∀x. φ`: parameters are free constants, state variables bound.
pub fn exists_forall_script(phi: &Formula, vars: &Vars, options: &[String]) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "(set-info :smt-lib-version 2.6)").unwrap();
    writeln!(s, "(set-logic NRA)").unwrap();
    for o in options {
        writeln!(s, "{o}").unwrap();
    }
    for name in vars.param_names() {
        writeln!(s, "(declare-const {} Real)", symbol(name)).unwrap();
    }
    let bound: Vec<String> = vars
        .state_names()
        .iter()
        .map(|n| format!("({} Real)", symbol(n)))
        .collect();
    writeln!(
        s,
        "(assert (forall ({}) {}))",
        bound.join(" "),
        formula(phi)
    )
    .unwrap();
    writeln!(s, "(check-sat)").unwrap();
    writeln!(s, "(get-model)").unwrap();
    s
}
