use std::fmt;

use super::monomial::Vars;
use super::polynomial::Polynomial;
use super::PolyError;

/// Polynomial vector field; component `i` is `dx_i/dt`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    vars: Vars,
    components: Vec<Polynomial>,
}

impl VectorField {
    /// One component per state variable, all in `vars`, none mentioning a
    /// template parameter.
    pub fn new(vars: &Vars, components: Vec<Polynomial>) -> Result<Self, PolyError> {
        if components.len() != vars.n_state() {
            return Err(PolyError::DimensionMismatch {
                expected: vars.n_state(),
                got: components.len(),
            });
        }
        for c in &components {
            if c.vars() != vars {
                return Err(PolyError::ContextMismatch {
                    left: vars.names().to_vec(),
                    right: c.vars().names().to_vec(),
                });
            }
            if let Some(idx) = c.support().into_iter().find(|&i| vars.is_param(i)) {
                return Err(PolyError::ParameterInField(vars.name(idx).to_string()));
            }
        }
        Ok(VectorField {
            vars: vars.clone(),
            components,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn negated(&self) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            components: self.components.iter().map(|c| -c).collect(),
        }
    }

    pub fn eval_f64(&self, state: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval_f64(state);
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}' = {}", self.vars.name(i), c))
            .collect();
        write!(f, "{}", eqs.join("; "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}
