//! Canonical text for parsed documents. Printing, parsing and printing again
//! yields the same text.

use std::fmt::Write;

use super::{ParsedDocument, Query, QueryKind};
use crate::expr::Expr;
use crate::formula::BooleanFormula;
use crate::hp::CandidateCause;
use crate::model::{CausalModel, VarKind, World};
use crate::normality::Judgement;

pub fn print_document(doc: &ParsedDocument) -> String {
    let m = &doc.model;
    let mut out = String::new();
    for (i, var) in m.variables().iter().enumerate() {
        let range: Vec<String> = var.range.iter().map(|v| v.to_string()).collect();
        match var.kind {
            VarKind::Exogenous => {
                let _ = writeln!(out, "exo {} : {{{}}}", var.name, range.join(", "));
            }
            VarKind::Endogenous => {
                let body = m.equation(crate::model::VarId(i)).expect("endogenous");
                let _ = writeln!(out, "var {} : {{{}}} = {}", var.name, range.join(", "), expr(m, body, 0));
            }
        }
    }

    if let Some(spec) = &doc.typicality {
        out.push('\n');
        for r in &spec.values {
            let vals: Vec<String> = r.values.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "typical {} = {}", m.name(r.var), vals.join(" > "));
        }
        if !spec.severity.is_empty() {
            let feats: Vec<String> = spec.severity.iter().map(|e| e.display(m).to_string()).collect();
            let _ = writeln!(out, "severity {}", feats.join(" < "));
        }
        let _ = writeln!(out, "mechanism {}", if spec.mechanism { "on" } else { "off" });
        for b in &spec.behaviors {
            let rules: Vec<String> =
                b.behaviors.iter().map(|r| format!("{} = {}", quote(&r.label), expr(m, &r.rule, 0))).collect();
            let _ = writeln!(out, "behavior {} : {}", m.name(b.var), rules.join(" > "));
        }
    }

    if let Some(norms) = &doc.explicit_norms {
        out.push('\n');
        for (s, j, t) in norms {
            let rel = match j {
                Judgement::Greater => ">",
                Judgement::Equal => "==",
            };
            let _ = writeln!(out, "norm {} {rel} {}", world(m, s), world(m, t));
        }
    }

    if !doc.contexts.is_empty() {
        out.push('\n');
        for (name, ctx) in &doc.contexts {
            let assigns: Vec<String> =
                m.exogenous().iter().zip(ctx.values()).map(|(id, v)| format!("{}={v}", m.name(*id))).collect();
            let _ = writeln!(out, "context {name} : {}", assigns.join(", "));
        }
    }

    if !doc.queries.is_empty() {
        out.push('\n');
        for q in &doc.queries {
            out.push_str(&print_query(m, q));
            out.push('\n');
        }
    }
    out
}

pub fn print_query(model: &CausalModel, q: &Query) -> String {
    let mut out = match &q.kind {
        QueryKind::Cause { cause, effect } => format!("cause {} for {}", cause.display(model), effect.display(model)),
        QueryKind::Witnesses { cause, effect } => {
            format!("witnesses {} for {}", cause.display(model), effect.display(model))
        }
        QueryKind::Grade { candidates, effect } => {
            let cs: Vec<String> = candidates.iter().map(|c: &CandidateCause| c.display(model).to_string()).collect();
            format!("grade {{{}}} for {}", cs.join(", "), effect.display(model))
        }
        QueryKind::Causes { effect } => format!("causes {}", effect.display(model)),
        QueryKind::Solve => "solve".to_string(),
        QueryKind::Satisfies(f) => {
            if f.interventions.is_empty() {
                format!("satisfies {}", formula(model, &f.body))
            } else {
                format!("satisfies {}", f.display(model))
            }
        }
    };
    if let Some(ctx) = &q.context {
        let _ = write!(out, " @ {ctx}");
    }
    out
}

fn formula(m: &CausalModel, f: &BooleanFormula) -> String {
    f.display(m).to_string()
}

fn world(m: &CausalModel, w: &World) -> String {
    w.display(m).to_string()
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Precedence: 1 additive, 2 multiplicative, 3 atoms.
fn expr(m: &CausalModel, e: &Expr, min_prec: u8) -> String {
    let (text, prec) = match e {
        Expr::Const(v) => (v.to_string(), 3),
        Expr::Var(id) => (m.name(*id).to_string(), 3),
        Expr::Min(items) | Expr::Max(items) => {
            let name = if matches!(e, Expr::Min(_)) { "min" } else { "max" };
            let args: Vec<String> = items.iter().map(|i| expr(m, i, 0)).collect();
            (format!("{name}({})", args.join(", ")), 3)
        }
        Expr::Add(a, b) => (format!("{} + {}", expr(m, a, 1), expr(m, b, 2)), 1),
        Expr::Sub(a, b) => (format!("{} - {}", expr(m, a, 1), expr(m, b, 2)), 1),
        Expr::Mul(a, b) => (format!("{} * {}", expr(m, a, 2), expr(m, b, 3)), 2),
        Expr::Ite { lhs, rhs, then, otherwise } => (
            format!("ite({} == {}, {}, {})", expr(m, lhs, 0), expr(m, rhs, 0), expr(m, then, 0), expr(m, otherwise, 0)),
            3,
        ),
        Expr::Table { args, rows } => {
            let names: Vec<&str> = args.iter().map(|a| m.name(*a)).collect();
            let rows: Vec<String> = rows
                .iter()
                .map(|(k, v)| {
                    let key: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                    format!("({}) -> {v}", key.join(", "))
                })
                .collect();
            (format!("table({}){{{}}}", names.join(", "), rows.join(", ")), 3)
        }
    };
    if prec < min_prec {
        format!("({text})")
    } else {
        text
    }
}
