use std::io::Write;

use serde::Serialize;

use crate::polyring::VectorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    /// Integrates `-f`, giving the state at time `-t`.
    Backward,
}

/// Fixed-step samples `x(x₀; ±k·h)`; `times[k] = k·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
    pub direction: Direction,
    /// Integration stopped early on a non-finite or huge state.
    pub diverged: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectory has at least the initial state")
    }

    pub fn write_csv<W: Write>(&self, names: &[String], mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,{}", names.join(","))?;
        for (t, x) in self.times.iter().zip(&self.states) {
            let row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{t},{}", row.join(","))?;
        }
        Ok(())
    }
}

/// States beyond this magnitude count as divergence.
const BLOWUP: f64 = 1e150;

/// One classical RK4 step of `x' = f(x)`, backward for negative `h`. `x` has one entry per ring
/// variable and only the state prefix moves.
pub fn rk4_step(field: &VectorField, x: &[f64], h: f64) -> Vec<f64> {
    let n = field.dim();
    let eval = |y: &[f64]| {
        let mut out = vec![0.0; n];
        field.eval_f64(y, &mut out);
        out
    };
    let shifted = |k: &[f64], c: f64| {
        let mut y = x.to_vec();
        for i in 0..n {
            y[i] += c * k[i];
        }
        y
    };
    let k1 = eval(x);
    let k2 = eval(&shifted(&k1, h / 2.0));
    let k3 = eval(&shifted(&k2, h / 2.0));
    let k4 = eval(&shifted(&k3, h));
    let mut y = x.to_vec();
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    y
}

/// RK4 over `[0, horizon]` with `round(horizon / step)` steps.
pub fn integrate(
    field: &VectorField,
    x0: &[f64],
    step: f64,
    horizon: f64,
    direction: Direction,
) -> Trajectory {
    let steps = (horizon / step).round() as usize;
    let h = match direction {
        Direction::Forward => step,
        Direction::Backward => -step,
    };
    let mut x = x0.to_vec();
    x.resize(field.vars().len(), 0.0);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x.clone()],
        step,
        direction,
        diverged: false,
    };
    for k in 1..=steps {
        x = rk4_step(field, &x, h);
        if x.iter().any(|v| !v.is_finite() || v.abs() > BLOWUP) {
            traj.diverged = true;
            break;
        }
        traj.times.push(k as f64 * step);
        traj.states.push(x.clone());
    }
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_problem;
    use crate::polyring::Vars;

    fn field(text: &str) -> VectorField {
        parse_problem(text).unwrap().field
    }

    fn aircraft() -> VectorField {
        field("vars: x1, x2, d1, d2\nfield: x1' = d1; x2' = d2; d1' = -d2; d2' = d1\ninit: x1 = 0\ninvariant: x1 >= 0\n")
    }

    fn aircraft_exact(x: &[f64], t: f64) -> Vec<f64> {
        let (s, c) = t.sin_cos();
        vec![
            x[0] + x[2] * s - x[3] * (1.0 - c),
            x[1] + x[2] * (1.0 - c) + x[3] * s,
            x[2] * c - x[3] * s,
            x[2] * s + x[3] * c,
        ]
    }

    #[test]
    fn constant_velocity_is_exact() {
        let f = field("vars: s, v\nfield: s' = v; v' = 0\ninit: s = 0\ninvariant: s >= 0\n");
        let t = integrate(&f, &[0.0, 1.0], 1e-3, 10.0, Direction::Forward);
        assert_eq!(t.len(), 10_001);
        for (time, x) in t.times.iter().zip(&t.states) {
            assert!((x[0] - time).abs() < 1e-9 && x[1] == 1.0);
        }
    }

    #[test]
    fn aircraft_speed_is_conserved() {
        let x0 = [0.3, -0.2, 0.6, 0.8];
        let t = integrate(&aircraft(), &x0, 1e-3, 10.0, Direction::Forward);
        for x in &t.states {
            assert!((x[2] * x[2] + x[3] * x[3] - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let f = aircraft();
        let x0 = [1.0, 0.5, 1.0, 0.0];
        let err = |h: f64| {
            let y = rk4_step(&f, &x0, h);
            let e = aircraft_exact(&x0, h);
            y.iter()
                .zip(&e)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        for h in [0.2, 0.1, 0.05] {
            let ratio = err(h) / err(h / 2.0);
            assert!(ratio >= 8.0, "h = {h}: ratio {ratio}");
        }
    }

    #[test]
    fn backward_then_forward_returns() {
        let f = field("vars: x, y\nfield: x' = -2*y; y' = x^2\ninit: x = 0\ninvariant: x >= 0\n");
        let x0 = [-1.0, 0.5];
        let back = integrate(&f, &x0, 1e-3, 1e-3, Direction::Backward);
        let fwd = integrate(&f, back.last(), 1e-3, 1e-3, Direction::Forward);
        for (a, b) in fwd.last().iter().zip(&x0) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn blowup_is_flagged() {
        let v = Vars::new(&["x"], &[] as &[&str]);
        let x = crate::polyring::Polynomial::var(&v, 0);
        let f = VectorField::new(&v, vec![x.pow(2)]).unwrap();
        let t = integrate(&f, &[1.0], 1e-2, 5.0, Direction::Forward);
        assert!(t.diverged);
        assert!(t.len() < 501);
    }

    #[test]
    fn csv_dump() {
        let f = field("vars: s, v\nfield: s' = v; v' = 0\ninit: s = 0\ninvariant: s >= 0\n");
        let t = integrate(&f, &[0.0, 2.0], 0.5, 1.0, Direction::Forward);
        let mut out = Vec::new();
        t.write_csv(&["s".into(), "v".into()], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "t,s,v\n0,0,2\n0.5,1,2\n1,2,2\n"
        );
    }
}
