mod common;

use common::*;
use gradcause::{validate_model, Expr, ModelDraft, ModelError, VarId, Violation};

#[test]
fn forest_fire_validates() {
    let mut d = ModelDraft::new();
    let ul = d.exogenous("UL", &[0, 1]);
    let um = d.exogenous("UM", &[0, 1]);
    let l = d.endogenous("L", &[0, 1]);
    let m = d.endogenous("M", &[0, 1]);
    let f = d.endogenous("F", &[0, 1]);
    d.equation(l, Expr::Var(ul)).equation(m, Expr::Var(um)).equation(f, Expr::Max(vec![Expr::Var(l), Expr::Var(m)]));
    assert!(validate_model(&d).is_ok());
}

#[test]
fn two_node_cycle_is_reported() {
    let mut d = ModelDraft::new();
    let x = d.endogenous("X", &[0, 1]);
    let y = d.endogenous("Y", &[0, 1]);
    d.equation(x, Expr::Var(y)).equation(y, Expr::Var(x));
    let report = validate_model(&d);
    let cycle = report.violations.iter().find_map(|v| match v {
        Violation::Cycle(path) => Some(path.clone()),
        _ => None,
    });
    let mut path = cycle.expect("cycle reported");
    path.sort();
    path.dedup();
    assert_eq!(path, vec!["X".to_string(), "Y".to_string()]);
}

#[test]
fn out_of_range_body_is_a_totality_violation() {
    let mut d = ModelDraft::new();
    let x = d.endogenous("X", &[0, 1]);
    d.equation(x, Expr::Const(2));
    let report = validate_model(&d);
    assert!(report.violations.iter().any(|v| matches!(v, Violation::NonTotal { .. })), "{report:?}");
}

#[test]
fn solve_examples() {
    let ff = fixture("forest_fire");
    assert_eq!(ff.model.solve(ctx(&ff, "u11")), world(&ff.model, &[("L", 1), ("M", 1), ("F", 1)]));
    let conj = fixture("forest_fire_conjunctive");
    let c10 = conj.model.context(&[("UL", 1), ("UM", 0)]).unwrap();
    assert_eq!(conj.model.solve(&c10), world(&conj.model, &[("L", 1), ("M", 0), ("F", 0)]));
    let p = fixture("poisoning");
    assert_eq!(p.model.solve(ctx(&p, "u11")), world(&p.model, &[("A", 1), ("R", 1), ("B", 0), ("D", 1)]));
}

#[test]
fn intervention_examples() {
    let ff = fixture("forest_fire");
    let m = &ff.model;
    let u = ctx(&ff, "u11");
    let (l, mm, f) = (m.var_id("L").unwrap(), m.var_id("M").unwrap(), m.var_id("F").unwrap());
    assert_eq!(m.intervene(&[(mm, 0)]).unwrap().solve(u).get(m, f), 1);
    assert_eq!(m.intervene(&[(l, 0), (mm, 0)]).unwrap().solve(u).get(m, f), 0);
    let once = m.intervene(&[(mm, 0)]).unwrap();
    let twice = once.intervene(&[(mm, 0)]).unwrap();
    for c in m.all_contexts() {
        assert_eq!(once.solve(&c), twice.solve(&c));
    }
    // The original model is unchanged.
    assert_eq!(m.solve(u).get(m, mm), 1);
}

#[test]
fn exogenous_interventions_are_rejected() {
    let ff = fixture("forest_fire");
    let ul = ff.model.var_id("UL").unwrap();
    assert!(matches!(ff.model.intervene(&[(ul, 0)]), Err(ModelError::NotEndogenous(_))));
}

#[test]
fn intervening_on_the_effect_does_not_backtrack() {
    let ff = fixture("forest_fire");
    let m = &ff.model;
    let f = m.var_id("F").unwrap();
    for c in m.all_contexts() {
        let before = m.solve(&c);
        let after = m.intervene(&[(f, 0)]).unwrap().solve(&c);
        for name in ["L", "M"] {
            let id = m.var_id(name).unwrap();
            assert_eq!(before.get(m, id), after.get(m, id));
        }
    }
}

#[test]
fn dependence_graph_examples() {
    let ff = fixture("forest_fire");
    let m = &ff.model;
    let g = m.dependence_graph();
    let id = |n: &str| m.var_id(n).unwrap();
    assert!(g.has_edge(id("L"), id("F")) && g.has_edge(id("M"), id("F")));
    assert_eq!(g.parents(id("F")), vec![id("L"), id("M")]);

    let mut d = ModelDraft::new();
    let u = d.exogenous("U", &[0, 1]);
    let y = d.endogenous("Y", &[0, 1]);
    let x = d.endogenous("X", &[0]);
    d.equation(y, Expr::Var(u)).equation(x, Expr::Sub(Box::new(Expr::Var(y)), Box::new(Expr::Var(y))));
    let m2 = d.build().unwrap();
    assert!(!m2.dependence_graph().has_edge(y, x));

    let legal = fixture("legal_careless");
    let m = &legal.model;
    let endo: Vec<VarId> = m.endogenous().to_vec();
    let mut edges: Vec<(String, String)> = m
        .dependence_graph()
        .edges()
        .filter(|(a, b)| endo.contains(a) && endo.contains(b))
        .map(|(a, b)| (m.name(a).to_string(), m.name(b).to_string()))
        .collect();
    edges.sort();
    let mut want: Vec<(String, String)> =
        [("AN", "AS"), ("AS", "BT"), ("AS", "F"), ("BC", "BT"), ("BM", "BT"), ("BT", "F")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
    want.sort();
    assert_eq!(edges, want);
    assert!(m.dependence_graph().is_acyclic());
}

#[test]
fn worlds_need_not_satisfy_equations() {
    let ff = fixture("forest_fire");
    let w = world(&ff.model, &[("L", 1), ("M", 1), ("F", 0)]);
    assert!(!w.satisfies_equations(&ff.model, ctx(&ff, "u11")));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

    #[test]
    fn solver_respects_equations(seed in proptest::prelude::any::<u64>()) {
        prop_solver(seed).map_err(proptest::prelude::TestCaseError::fail)?;
    }
}
