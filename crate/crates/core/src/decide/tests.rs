use super::*;
use crate::frontend::parse_problem;
use crate::polyring::rational::{frac, int};
use crate::polyring::{Assignment, Rational};
use crate::semialg::Problem;

fn load(name: &str) -> Problem {
    let path = format!("{}/problems/{name}.prob", env!("CARGO_MANIFEST_DIR"));
    parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn params(pairs: &[(&str, Rational)]) -> Assignment {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

#[test]
fn parabola_template_negative_a_is_invariant() {
    let prob = load("parabola_template");
    let r = check_invariant(
        &prob,
        Some(&params(&[("a", int(-1))])),
        &SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Valid, "{r:#?}");
    assert_eq!(r.route, Some(crate::semialg::Route::Simple));
}

#[test]
fn parabola_template_positive_a_fails_at_initial_point() {
    let prob = load("parabola_template");
    let r = check_invariant(
        &prob,
        Some(&params(&[("a", int(1))])),
        &SolverConfig::default(),
    )
    .unwrap();
    let w = r.verdict.witness().expect("invalid");
    assert!(w.exact);
    let pt = (w.point["x"].clone(), w.point["y"].clone());
    assert!(
        pt == (int(-1), frac(1, 2)) || pt == (frac(-1, 2), frac(-3, 5)),
        "{w}"
    );
    assert_eq!(r.goals[0].method, Method::FinitePoints);
}

#[test]
fn disjunctive_template_origin_witness() {
    let prob = load("disjunctive_template");
    let u = params(&[("a", int(1)), ("b", int(1))]);
    let r = check_invariant(&prob, Some(&u), &SolverConfig::default()).unwrap();
    let w = r.verdict.witness().expect("invalid").clone();
    assert!(w.exact);
    let inst = prob.instantiate(&u).unwrap();
    // The witness lies in the initial set and outside the candidate.
    assert!(inst.init.evaluate(&w.point).unwrap());
    assert!(!inst.invariant.evaluate(&w.point).unwrap());

    let u = params(&[("a", int(-1)), ("b", frac(-1, 2))]);
    assert_eq!(
        check_invariant(&prob, Some(&u), &SolverConfig::default())
            .unwrap()
            .verdict,
        Verdict::Valid
    );
}

#[test]
fn parabola_template_grid() {
    let prob = load("parabola_template");
    let g = Grid::parse("a=-2:2:1").unwrap();
    let r = generate_constraint(
        &prob,
        &SolverConfig::default(),
        &Strategy::Grid(g),
        crate::groebner::DEFAULT_CAP,
    )
    .unwrap();
    assert_eq!(r.mode, GenerationMode::WitnessList);
    let got: Vec<Rational> = r.witnesses.iter().map(|w| w["a"].clone()).collect();
    assert_eq!(got, vec![int(-2), int(-1), int(0)]);
    let sample = pick_sample(&r, prob.params(), &SolverConfig::default()).unwrap();
    assert_eq!(sample["a"], int(-2));
}

#[test]
fn ctcs_is_valid() {
    let r = check_invariant(&load("ctcs3"), None, &SolverConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Valid, "{r:#?}");
}

#[test]
fn aircraft_equational_needs_no_solver() {
    let cfg = SolverConfig::with_command("/nonexistent/solver");
    for name in [
        "aircraft_linear1",
        "aircraft_linear2",
        "aircraft_linear3",
        "aircraft_quadratic",
    ] {
        let r = check_invariant(&load(name), None, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Valid, "{name}: {r:#?}");
        assert!(r.goals.iter().all(|g| g.method != Method::Solver), "{name}");
    }
}

#[test]
fn missing_or_extra_parameters_are_usage_errors() {
    let prob = load("parabola_template");
    let cfg = SolverConfig::default();
    assert!(matches!(
        check_invariant(&prob, None, &cfg),
        Err(DecideError::Usage(_))
    ));
    let u = params(&[("a", int(1)), ("b", int(0))]);
    assert!(matches!(
        check_invariant(&prob, Some(&u), &cfg),
        Err(DecideError::Usage(_))
    ));
}

#[test]
fn init_inside_domain() {
    let cfg = SolverConfig::default();
    assert_eq!(
        check_init_subset_domain(&load("parabola_template"), &cfg),
        Verdict::Valid
    );
    let mut p = load("parabola_flow");
    p.init = crate::frontend::parse_formula("x >= 1", &p.vars).unwrap();
    p.domain = crate::frontend::parse_formula("x <= 0", &p.vars).unwrap();
    let v = check_init_subset_domain(&p, &cfg);
    assert!(v.is_invalid(), "{v}");
    assert!(v.witness().unwrap().point["x"] >= int(1));
}

#[test]
fn emitted_scripts_are_deterministic() {
    let prob = load("ctcs3");
    let cfg = SolverConfig::default();
    let a = emit_scripts(&Checker::new(&prob, 20), None, &cfg).unwrap();
    let b = emit_scripts(&Checker::new(&prob, 20), None, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("(set-logic QF_NRA)"));
}

#[test]
fn existential_witness_is_rechecked() {
    let prob = load("parabola_template");
    let r =
        generate_constraint(&prob, &SolverConfig::default(), &Strategy::Existential, 20).unwrap();
    if r.mode == GenerationMode::WitnessList {
        for w in &r.witnesses {
            assert!(w["a"] <= int(0));
        }
    }
    let mut cfg = SolverConfig::default();
    cfg.quantifiers = false;
    let r = generate_constraint(&prob, &cfg, &Strategy::Existential, 20).unwrap();
    assert_eq!(r.mode, GenerationMode::Unknown);
}

#[test]
fn qe_script_round_trip() {
    let prob = load("parabola_template");
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("s5.qe");
    let result = dir.path().join("s5.out");
    let strategy = Strategy::QeScript {
        script: script.clone(),
        result: Some(result.clone()),
    };
    let r = generate_constraint(&prob, &SolverConfig::default(), &strategy, 20).unwrap();
    assert_eq!(r.mode, GenerationMode::Unknown);
    let text = std::fs::read_to_string(&script).unwrap();
    assert!(text.contains("free a;\nforall x, y .\n"), "{text}");
    std::fs::write(&result, "a <= 0\n").unwrap();
    let r = generate_constraint(&prob, &SolverConfig::default(), &strategy, 20).unwrap();
    assert_eq!(r.mode, GenerationMode::ConstraintFormula);
    let s = pick_sample(&r, prob.params(), &SolverConfig::default()).unwrap();
    assert!(s["a"] <= int(0));
}
