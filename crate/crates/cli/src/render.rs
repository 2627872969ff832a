//! Text and JSON output.

use std::fmt::Write;

use gradcause::dsl::{print_query, ParsedDocument, Query};
use gradcause::{CausalModel, CauseVerdict, Grade, Grading, Mode, NormalityError, Outcome, World};
use serde_json::{json, Map, Value as Json};

use crate::Format;

pub(crate) struct Answered<'a> {
    pub query: &'a Query,
    pub context: &'a str,
    pub outcome: Outcome,
}

pub(crate) fn validation(doc: &ParsedDocument, format: Format) -> String {
    let m = &doc.model;
    let normality = if doc.typicality.is_some() {
        "typicality"
    } else if doc.explicit_norms.is_some() {
        "explicit"
    } else {
        "none"
    };
    match format {
        Format::Text => format!(
            "ok: {} exogenous, {} endogenous, {} contexts, {} queries, normality {normality}\n",
            m.exogenous().len(),
            m.endogenous().len(),
            doc.contexts.len(),
            doc.queries.len()
        ),
        Format::Json => {
            let v = json!({
                "valid": true,
                "exogenous": m.exogenous().iter().map(|id| m.name(*id)).collect::<Vec<_>>(),
                "endogenous": m.endogenous().iter().map(|id| m.name(*id)).collect::<Vec<_>>(),
                "contexts": doc.contexts.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
                "queries": doc.queries.len(),
                "normality": normality,
            });
            pretty(&v)
        }
    }
}

pub(crate) fn answers(
    doc: &ParsedDocument,
    mode: Mode,
    results: &[Answered<'_>],
    features: bool,
    format: Format,
) -> Result<String, NormalityError> {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (i, a) in results.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                text_answer(&mut out, doc, mode, a, features)?;
            }
            Ok(out)
        }
        Format::Json => {
            let items: Vec<Json> = results.iter().map(|a| json_answer(doc, mode, a)).collect();
            Ok(pretty(&Json::Array(items)))
        }
    }
}

fn pretty(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn header(doc: &ParsedDocument, a: &Answered<'_>) -> String {
    let mut q = a.query.clone();
    q.context = Some(a.context.to_string());
    print_query(&doc.model, &q)
}

fn text_answer(
    out: &mut String,
    doc: &ParsedDocument,
    mode: Mode,
    a: &Answered<'_>,
    features: bool,
) -> Result<(), NormalityError> {
    let m = &doc.model;
    let _ = writeln!(out, "{}", header(doc, a));
    match &a.outcome {
        Outcome::Solve(w) => {
            let _ = writeln!(out, "  {}", w.display(m));
        }
        Outcome::Satisfies(b) => {
            let _ = writeln!(out, "  {b}");
        }
        Outcome::Verdict(v) => {
            let _ = writeln!(out, "  mode: {mode}");
            text_verdict(out, doc, v, features)?;
        }
        Outcome::Grading(g) => {
            let _ = writeln!(out, "  mode: {mode}");
            for v in &g.verdicts {
                let best: Vec<String> = v.best_witnesses.iter().map(|w| w.display(m).to_string()).collect();
                let _ = writeln!(
                    out,
                    "  {}: {}; best witnesses: {}",
                    v.cause.display(m),
                    verdict_word(v),
                    if best.is_empty() { "none".to_string() } else { best.join(" ") }
                );
            }
            for (i, j, g) in pairs(g) {
                let (ci, cj) = (g_name(m, i), g_name(m, j));
                let line = match g {
                    Grade::Above => format!("{ci} above {cj}"),
                    Grade::Below => format!("{cj} above {ci}"),
                    Grade::Equal => format!("{ci} equal to {cj}"),
                    Grade::Incomparable => format!("{ci} incomparable with {cj}"),
                };
                let _ = writeln!(out, "  {line}");
            }
        }
        Outcome::Causes(vs) => {
            let _ = writeln!(out, "  mode: {mode}");
            if vs.is_empty() {
                let _ = writeln!(out, "  no causes");
            }
            for v in vs {
                let _ = writeln!(out, "  {}", v.cause.display(m));
            }
        }
    }
    Ok(())
}

fn g_name<'a>(m: &'a CausalModel, v: &'a CauseVerdict) -> String {
    v.cause.display(m).to_string()
}

fn pairs(g: &Grading) -> Vec<(&CauseVerdict, &CauseVerdict, Grade)> {
    let n = g.verdicts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((&g.verdicts[i], &g.verdicts[j], g.grade(i, j)));
        }
    }
    out
}

fn verdict_word(v: &CauseVerdict) -> String {
    match v.failed {
        None => "cause".to_string(),
        Some(c) => format!("not a cause ({} fails)", c.as_str()),
    }
}

fn text_verdict(
    out: &mut String,
    doc: &ParsedDocument,
    v: &CauseVerdict,
    features: bool,
) -> Result<(), NormalityError> {
    let m = &doc.model;
    let _ = writeln!(out, "  actual world: {}", v.actual_world.display(m));
    let _ = writeln!(out, "  AC1: {}", if v.ac1 { "holds" } else { "fails" });
    if v.ac1 && v.hp_witnesses.is_empty() {
        let _ = writeln!(out, "  witnesses: none");
    }
    let order = doc.order().filter(|_| v.mode == Mode::Extended);
    for (k, (w, rel)) in v.hp_witnesses.iter().zip(&v.relations).enumerate() {
        let names: Vec<&str> = w.w_set.iter().map(|id| m.name(*id)).collect();
        let wv: Vec<String> = w.w_set.iter().zip(&w.w_values).map(|(id, x)| format!("{}={x}", m.name(*id))).collect();
        let xp: Vec<String> =
            v.cause.variables().zip(&w.x_prime).map(|(id, x)| format!("{}={x}", m.name(id))).collect();
        let _ = write!(
            out,
            "  witness {}: W={{{}}} w=({}) x'=({}) -> {}",
            k + 1,
            names.join(", "),
            wv.join(", "),
            xp.join(", "),
            w.witness_world.display(m)
        );
        if let Some(r) = rel {
            let admissible = if r.is_at_least() { "admissible" } else { "inadmissible" };
            let _ = write!(out, "  [{}, {admissible}]", r.as_str());
        }
        out.push('\n');
        if let (true, Some(o)) = (features, order) {
            let f = o.describe_features(&w.witness_world)?;
            let _ = writeln!(out, "    features: {{{}}}", f.join(", "));
        }
    }
    if let (true, Some(o)) = (features, order) {
        let f = o.describe_features(&v.actual_world)?;
        let _ = writeln!(out, "  actual features: {{{}}}", f.join(", "));
    }
    if let Some(ac3) = v.ac3 {
        let _ = write!(out, "  AC3: {}", if ac3 { "holds" } else { "fails" });
        if let Some(sub) = &v.ac3_violation {
            let _ = write!(out, " ({} suffices)", sub.display(m));
        }
        out.push('\n');
    }
    if !v.best_witnesses.is_empty() {
        let best: Vec<String> = v.best_witnesses.iter().map(|w| w.display(m).to_string()).collect();
        let _ = writeln!(out, "  best witnesses: {}", best.join(" "));
    }
    let _ = writeln!(out, "  verdict: {}", verdict_word(v));
    if v.mode == Mode::Extended {
        let _ = writeln!(out, "  plain HP verdict: {}", if v.is_cause_hp { "cause" } else { "not a cause" });
    }
    Ok(())
}

fn world_json(m: &CausalModel, w: &World) -> Json {
    let mut map = Map::new();
    for (name, value) in w.named(m) {
        map.insert(name.to_string(), json!(value));
    }
    Json::Object(map)
}

fn verdict_fields(m: &CausalModel, v: &CauseVerdict) -> Map<String, Json> {
    let witnesses: Vec<Json> = v
        .hp_witnesses
        .iter()
        .zip(&v.relations)
        .map(|(w, rel)| {
            let mut wv = Map::new();
            for (id, x) in w.w_set.iter().zip(&w.w_values) {
                wv.insert(m.name(*id).to_string(), json!(x));
            }
            let mut xp = Map::new();
            for (id, x) in v.cause.variables().zip(&w.x_prime) {
                xp.insert(m.name(id).to_string(), json!(x));
            }
            json!({
                "w_set": w.w_set.iter().map(|id| m.name(*id)).collect::<Vec<_>>(),
                "w_values": wv,
                "x_prime": xp,
                "world": world_json(m, &w.witness_world),
                "admissible": rel.is_none_or(|r| r.is_at_least()),
                "relation_to_actual": rel.map(|r| r.as_str()),
            })
        })
        .collect();
    let mut map = Map::new();
    map.insert("ac1".into(), json!(v.ac1));
    map.insert("is_cause".into(), json!(v.is_cause()));
    map.insert("witnesses".into(), Json::Array(witnesses));
    map.insert("best_witnesses".into(), Json::Array(v.best_witnesses.iter().map(|w| world_json(m, w)).collect()));
    map.insert("ac3".into(), json!(v.ac3));
    map
}

fn grading_json(m: &CausalModel, g: &Grading) -> Json {
    let items = pairs(g)
        .into_iter()
        .map(|(ci, cj, grade)| {
            let (a, b) = (g_name(m, ci), g_name(m, cj));
            match grade {
                Grade::Above => json!({ "above": a, "below": b }),
                Grade::Below => json!({ "above": b, "below": a }),
                Grade::Equal => json!({ "equal": [a, b] }),
                Grade::Incomparable => json!("incomparable"),
            }
        })
        .collect();
    Json::Array(items)
}

fn json_answer(doc: &ParsedDocument, mode: Mode, a: &Answered<'_>) -> Json {
    let m = &doc.model;
    let mut map = Map::new();
    map.insert("query".into(), json!(header(doc, a)));
    map.insert("mode".into(), json!(mode.as_str()));
    match &a.outcome {
        Outcome::Solve(w) => {
            map.insert("world".into(), world_json(m, w));
        }
        Outcome::Satisfies(b) => {
            map.insert("holds".into(), json!(b));
        }
        Outcome::Verdict(v) => {
            map.extend(verdict_fields(m, v));
            map.insert("grading".into(), json!([]));
            map.insert("actual_world".into(), world_json(m, &v.actual_world));
            map.insert("is_cause_hp".into(), json!(v.is_cause_hp));
            map.insert("failed".into(), json!(v.failed.map(|c| c.as_str())));
        }
        Outcome::Grading(g) => {
            let candidates: Vec<Json> = g
                .verdicts
                .iter()
                .map(|v| {
                    let mut c = Map::new();
                    c.insert("cause".into(), json!(g_name(m, v)));
                    c.extend(verdict_fields(m, v));
                    Json::Object(c)
                })
                .collect();
            map.insert("candidates".into(), Json::Array(candidates));
            map.insert("grading".into(), grading_json(m, g));
        }
        Outcome::Causes(vs) => {
            map.insert("causes".into(), json!(vs.iter().map(|v| g_name(m, v)).collect::<Vec<_>>()));
        }
    }
    Json::Object(map)
}
