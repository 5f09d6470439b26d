//! Plain-text first-order scripts for external quantifier elimination.
//!
//! ```text
//! # comment lines start with '#'
//! free a, b;
//! forall x, y .
//! <matrix in problem-file formula syntax>
//! ```
//!
//! A returned constraint is a single formula in the same syntax that
//! mentions only the free variables.

use crate::frontend::parse_formula;
use crate::polyring::Vars;
use crate::semialg::Formula;

pub fn emit_qe_script(matrix: &Formula, vars: &Vars) -> String {
    format!(
        "# lieinv {} QE script\nfree {};\nforall {} .\n{}\n",
        env!("CARGO_PKG_VERSION"),
        vars.param_names().join(", "),
        vars.state_names().join(", "),
        matrix
    )
}

/// Parses a constraint over the parameters; state variables are rejected.
pub fn parse_constraint(text: &str, vars: &Vars) -> Result<Formula, String> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    let f = parse_formula(body.trim(), vars).map_err(|e| e.to_string())?;
    for i in f.support() {
        if !vars.is_param(i) {
            return Err(format!(
                "constraint mentions state variable `{}`",
                vars.name(i)
            ));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::int;
    use crate::polyring::Assignment;

    #[test]
    fn constraint_round_trip() {
        let v = Vars::new(&["x", "y"], &["a", "b"]);
        let c = parse_constraint("# from QE\na + b <= 0 & b <= 0\n", &v).unwrap();
        let u = |a, b| Assignment::from([("a".into(), int(a)), ("b".into(), int(b))]);
        assert!(c.evaluate(&u(-1, 0)).unwrap());
        assert!(!c.evaluate(&u(1, 0)).unwrap());
        assert!(parse_constraint("x >= 0", &v).is_err());
        let s = emit_qe_script(&c, &v);
        assert!(s.contains("free a, b;\nforall x, y .\n"));
    }
}
