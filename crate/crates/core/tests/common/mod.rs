//! Random models, random typicality specs and the shared property checks.
#![allow(dead_code)]

use std::collections::BTreeMap;

use gradcause::dsl::{parse_model, ParsedDocument};
use gradcause::oracle::{oracle_is_cause, oracle_is_extended_cause};
use gradcause::{
    derive_from_typicality, enumerate_for_events, explicit_order, is_actual_cause, is_extended_cause, satisfies,
    BooleanFormula, CandidateCause, CausalFormula, CausalModel, Context, Expr, ExtendedCausalModel, Judgement,
    ModelDraft, NormalityOrder, PrimitiveEvent, SearchLimits, TypicalitySpec, Value, ValueRanking, VarId, World,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn fixture(name: &str) -> ParsedDocument {
    let path = format!("{}/../../fixtures/{name}.scm.txt", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn ctx<'a>(doc: &'a ParsedDocument, name: &str) -> &'a Context {
    doc.context(name).unwrap_or_else(|| panic!("no context {name}"))
}

pub fn ev(m: &CausalModel, name: &str, value: Value) -> PrimitiveEvent {
    PrimitiveEvent::new(m, name, value).unwrap()
}

pub fn phi(m: &CausalModel, name: &str, value: Value) -> BooleanFormula {
    BooleanFormula::event(m, name, value).unwrap()
}

pub fn cause(m: &CausalModel, events: &[(&str, Value)]) -> CandidateCause {
    CandidateCause::new(events.iter().map(|(n, v)| ev(m, n, *v)).collect()).unwrap()
}

pub fn world(m: &CausalModel, values: &[(&str, Value)]) -> World {
    m.world(values).unwrap()
}

pub fn limits() -> SearchLimits {
    SearchLimits::default()
}

/// Random acyclic model: `n` binary endogenous variables `V0..`, each with a
/// random set of earlier parents and usually a private exogenous parent.
/// Equations are threshold functions (monotone) or arbitrary tables.
pub fn random_model(rng: &mut StdRng, max_endogenous: usize) -> CausalModel {
    let n = rng.gen_range(1..=max_endogenous);
    let mut d = ModelDraft::new();
    let mut endo: Vec<VarId> = Vec::new();
    let mut pending = Vec::new();
    for i in 0..n {
        let parents: Vec<VarId> = endo.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let own = if i == 0 || parents.is_empty() || rng.gen_bool(0.7) {
            Some(d.exogenous(&format!("U{i}"), &[0, 1]))
        } else {
            None
        };
        let v = d.endogenous(&format!("V{i}"), &[0, 1]);
        let mut args = parents;
        args.extend(own);
        pending.push((v, args));
        endo.push(v);
    }
    for (v, args) in pending {
        let monotone = rng.gen_bool(0.4);
        let threshold = rng.gen_range(0..=args.len() + 1) as Value;
        let mut rows = BTreeMap::new();
        for bits in 0..1u32 << args.len() {
            let key: Vec<Value> = (0..args.len()).map(|k| Value::from(bits >> k & 1)).collect();
            let out = if monotone { Value::from(key.iter().sum::<Value>() >= threshold) } else { rng.gen_range(0..=1) };
            rows.insert(key, out);
        }
        let body = if args.is_empty() { Expr::Const(rows[&Vec::new()]) } else { Expr::Table { args, rows } };
        d.equation(v, body);
    }
    d.build().expect("generated model is valid")
}

/// Random typicality spec over binary endogenous variables.
pub fn random_spec(rng: &mut StdRng, m: &CausalModel) -> TypicalitySpec {
    let mut spec = TypicalitySpec::default();
    let mut atypical = Vec::new();
    for &v in m.endogenous() {
        if rng.gen_bool(0.6) {
            let mut values = m.range(v).to_vec();
            values.shuffle(rng);
            for &x in &values[1..] {
                atypical.push(PrimitiveEvent { var: v, value: x });
            }
            spec.values.push(ValueRanking { var: v, values });
        }
    }
    if atypical.len() >= 2 && rng.gen_bool(0.4) {
        atypical.shuffle(rng);
        let k = rng.gen_range(2..=atypical.len());
        spec.severity = atypical[..k].to_vec();
    }
    spec.mechanism = rng.gen_bool(0.3);
    spec
}

/// Random consistent explicit order: a random score per mentioned world,
/// with judgements between random pairs that agree with the scores.
pub fn random_explicit(rng: &mut StdRng, m: &CausalModel) -> NormalityOrder {
    let worlds = m.all_worlds();
    let score: Vec<u8> = worlds.iter().map(|_| rng.gen_range(0..3)).collect();
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..6) {
        let (i, j) = (rng.gen_range(0..worlds.len()), rng.gen_range(0..worlds.len()));
        let (hi, lo) = if score[i] >= score[j] { (i, j) } else { (j, i) };
        let j = if score[hi] == score[lo] { Judgement::Equal } else { Judgement::Greater };
        rels.push((worlds[hi].clone(), j, worlds[lo].clone()));
    }
    explicit_order(m, &rels).expect("score-consistent judgements")
}

/// Every order family on one model: trivial, derived, explicit.
pub fn random_orders(rng: &mut StdRng, m: &CausalModel) -> Vec<NormalityOrder> {
    let spec = random_spec(rng, m);
    vec![
        NormalityOrder::trivial(m),
        derive_from_typicality(m, &spec).expect("random spec is valid"),
        random_explicit(rng, m),
    ]
}

pub fn random_formula(rng: &mut StdRng, m: &CausalModel, depth: u32) -> BooleanFormula {
    let endo = m.endogenous();
    if depth == 0 || rng.gen_bool(0.4) {
        let v = *endo.choose(rng).unwrap();
        return BooleanFormula::Event(PrimitiveEvent { var: v, value: rng.gen_range(0..=1) });
    }
    match rng.gen_range(0..3) {
        0 => random_formula(rng, m, depth - 1).negate(),
        1 => random_formula(rng, m, depth - 1).and(random_formula(rng, m, depth - 1)),
        _ => random_formula(rng, m, depth - 1).or(random_formula(rng, m, depth - 1)),
    }
}

/// Effects used in randomized runs: the last variable at its actual value,
/// and a random compound formula that holds actually (if one is found).
pub fn effects(rng: &mut StdRng, m: &CausalModel, c: &Context) -> Vec<BooleanFormula> {
    let actual = m.solve(c);
    let last = *m.endogenous().last().unwrap();
    let mut out = vec![BooleanFormula::Event(PrimitiveEvent { var: last, value: actual.get(m, last) })];
    for _ in 0..4 {
        let f = random_formula(rng, m, 2);
        if f.holds_in(m, &actual) {
            out.push(f);
            break;
        }
    }
    out
}

pub fn singletons(m: &CausalModel) -> Vec<CandidateCause> {
    let mut out = Vec::new();
    for &v in m.endogenous() {
        for &x in m.range(v) {
            out.push(CandidateCause::single(PrimitiveEvent { var: v, value: x }));
        }
    }
    out
}

pub fn actual_pairs(m: &CausalModel, c: &Context) -> Vec<CandidateCause> {
    let actual = m.solve(c);
    let endo = m.endogenous();
    let mut out = Vec::new();
    for i in 0..endo.len() {
        for j in i + 1..endo.len() {
            let events = vec![
                PrimitiveEvent { var: endo[i], value: actual.get(m, endo[i]) },
                PrimitiveEvent { var: endo[j], value: actual.get(m, endo[j]) },
            ];
            out.push(CandidateCause::new(events).unwrap());
        }
    }
    out
}

// Property checks. Each takes a seed and returns a description of the first
// violation found.

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Reflexivity, transitivity and swap consistency over all worlds.
pub fn prop_preorder(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    let worlds = m.all_worlds();
    for order in random_orders(&mut rng, &m) {
        let n = worlds.len();
        let mut geq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                geq[i][j] = order.at_least_as_normal(&worlds[i], &worlds[j]).map_err(|e| e.to_string())?;
                let c = order.compare(&worlds[i], &worlds[j]).map_err(|e| e.to_string())?;
                let back = order.compare(&worlds[j], &worlds[i]).map_err(|e| e.to_string())?;
                ensure(c.flip() == back, || format!("seed {seed}: compare not swap-consistent"))?;
            }
            ensure(geq[i][i], || format!("seed {seed}: not reflexive at {:?}", worlds[i]))?;
        }
        for i in 0..n {
            for j in 0..n {
                if !geq[i][j] {
                    continue;
                }
                let violated = (0..n).find(|&k| geq[j][k] && !geq[i][k]);
                ensure(violated.is_none(), || format!("seed {seed}: not transitive ({i},{j},{violated:?})"))?;
            }
        }
    }
    Ok(())
}

/// A but-for dependence with AC1 makes a singleton a cause with W empty.
pub fn prop_but_for(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    for c in m.all_contexts() {
        let actual = m.solve(&c);
        for f in effects(&mut rng, &m, &c) {
            for &v in m.endogenous() {
                let x = actual.get(&m, v);
                let but_for = m.range(v).iter().filter(|&&x2| x2 != x).any(|&x2| {
                    let cf = CausalFormula::new(vec![(v, x2)], f.clone().negate());
                    satisfies(&m, &c, &cf).unwrap()
                });
                if !but_for || !f.holds_in(&m, &actual) {
                    continue;
                }
                let cand = CandidateCause::single(PrimitiveEvent { var: v, value: x });
                let verdict = is_actual_cause(&m, &c, &cand, &f, limits()).map_err(|e| e.to_string())?;
                ensure(verdict.is_cause_hp, || format!("seed {seed}: but-for cause rejected"))?;
                ensure(verdict.hp_witnesses.iter().any(|w| w.w_set.is_empty()), || {
                    format!("seed {seed}: no empty-W witness")
                })?;
            }
        }
    }
    Ok(())
}

/// Extended implies HP for singletons; for conjunctions the extended
/// AC1+AC2 implies the HP AC1+AC2. Admissible witnesses are HP witnesses.
pub fn prop_extended_implies_hp(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    for order in random_orders(&mut rng, &m) {
        let ext = ExtendedCausalModel::new(m.clone(), order);
        for c in m.all_contexts() {
            for f in effects(&mut rng, &m, &c) {
                let mut candidates = singletons(&m);
                candidates.extend(actual_pairs(&m, &c));
                for cand in candidates {
                    let v = is_extended_cause(&ext, &c, &cand, &f, limits()).map_err(|e| e.to_string())?;
                    ensure(v.admissible_witnesses.iter().all(|w| v.hp_witnesses.contains(w)), || {
                        format!("seed {seed}: admissible witness not an HP witness")
                    })?;
                    let ext_ac12 = v.ac1 && !v.admissible_witnesses.is_empty();
                    let hp_ac12 = v.ac1 && !v.hp_witnesses.is_empty();
                    ensure(!ext_ac12 || hp_ac12, || format!("seed {seed}: extended AC2 without HP AC2"))?;
                    if cand.len() == 1 {
                        ensure(!v.is_cause_extended || v.is_cause_hp, || {
                            format!("seed {seed}: extended singleton cause is not an HP cause")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// `[]phi` agrees with evaluating `phi` in the solved world, and double
/// negation and De Morgan hold under random prefixes.
pub fn prop_empty_prefix(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    for c in m.all_contexts() {
        let f = random_formula(&mut rng, &m, 3);
        let g = random_formula(&mut rng, &m, 3);
        let plain = satisfies(&m, &c, &CausalFormula::plain(f.clone())).unwrap();
        ensure(plain == f.holds_in(&m, &m.solve(&c)), || format!("seed {seed}: empty prefix differs"))?;
        let v = *m.endogenous().choose(&mut rng).unwrap();
        let prefix = vec![(v, rng.gen_range(0..=1))];
        let sat = |body: BooleanFormula| satisfies(&m, &c, &CausalFormula::new(prefix.clone(), body)).unwrap();
        ensure(sat(f.clone().negate().negate()) == sat(f.clone()), || format!("seed {seed}: double negation"))?;
        let lhs = sat(f.clone().and(g.clone()).negate());
        let rhs = sat(f.clone().negate().or(g.clone().negate()));
        ensure(lhs == rhs, || format!("seed {seed}: De Morgan"))?;
    }
    Ok(())
}

/// Solved worlds satisfy every equation; intervened variables keep their
/// set values; intervening twice equals intervening once.
pub fn prop_solver(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    for c in m.all_contexts() {
        let w = m.solve(&c);
        ensure(w.satisfies_equations(&m, &c), || format!("seed {seed}: solution violates an equation"))?;
        let v = *m.endogenous().choose(&mut rng).unwrap();
        let x = rng.gen_range(0..=1);
        let once = m.intervene(&[(v, x)]).unwrap();
        let twice = once.intervene(&[(v, x)]).unwrap();
        let s1 = once.solve(&c);
        ensure(s1.get(&m, v) == x, || format!("seed {seed}: intervention not fixed"))?;
        ensure(s1 == twice.solve(&c), || format!("seed {seed}: intervention not idempotent"))?;
        ensure(s1.satisfies_equations(&once, &c), || format!("seed {seed}: submodel solution invalid"))?;
    }
    ensure(m.dependence_graph().is_acyclic(), || format!("seed {seed}: cyclic dependence graph"))
}

/// Enumeration with an empty event list yields no witnesses.
pub fn prop_empty_cause(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    for c in m.all_contexts() {
        for f in effects(&mut rng, &m, &c) {
            let s = enumerate_for_events(&m, &c, &[], &f, limits()).map_err(|e| e.to_string())?;
            ensure(s.records.is_empty(), || format!("seed {seed}: empty cause has witnesses"))?;
        }
    }
    Ok(())
}

/// Random text built from DSL fragments and arbitrary characters.
pub fn fuzz_input(rng: &mut StdRng, seeds: &[&str]) -> String {
    const PIECES: &[&str] = &[
        "exo ",
        "var ",
        "typical ",
        "severity ",
        "mechanism on",
        "behavior ",
        "norm ",
        "context ",
        "cause ",
        "grade ",
        "witnesses ",
        "solve",
        "satisfies ",
        " for ",
        " @ ",
        "{",
        "}",
        "(",
        ")",
        "[",
        "]",
        ",",
        ":",
        "=",
        "==",
        "!=",
        ">",
        "<",
        "<-",
        "->",
        "+",
        "-",
        "*",
        "&",
        "|",
        "!",
        "min",
        "max",
        "ite",
        "table",
        "\"",
        "#",
        "\n",
        " ",
        "0",
        "1",
        "2",
        "99999999999999999999",
        "A",
        "B",
        "U",
        "é",
        "\u{0}",
    ];
    match rng.gen_range(0..3) {
        0 => (0..rng.gen_range(0..40)).map(|_| *PIECES.choose(rng).unwrap()).collect(),
        1 => {
            let bytes: Vec<u8> = (0..rng.gen_range(0..80)).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        _ => {
            let base = seeds.choose(rng).unwrap();
            let mut chars: Vec<char> = base.chars().collect();
            for _ in 0..rng.gen_range(1..6) {
                if chars.is_empty() {
                    break;
                }
                let at = rng.gen_range(0..chars.len());
                match rng.gen_range(0..3) {
                    0 => {
                        chars.remove(at);
                    }
                    1 => chars
                        .insert(at, *PIECES.choose(rng).unwrap().chars().collect::<Vec<_>>().first().unwrap_or(&' ')),
                    _ => chars.truncate(at),
                }
            }
            chars.into_iter().collect()
        }
    }
}

/// The parser returns a document or diagnostics with in-bounds spans.
pub fn prop_parser_total(seed: u64, seeds: &[&str]) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let text = fuzz_input(&mut rng, seeds);
    let result = std::panic::catch_unwind(|| parse_model(&text));
    match result {
        Err(_) => Err(format!("parser panicked on {text:?}")),
        Ok(Ok(_)) => Ok(()),
        Ok(Err(e)) => {
            ensure(!e.diagnostics.is_empty(), || format!("empty error list for {text:?}"))?;
            for d in &e.diagnostics {
                ensure(d.span.start <= d.span.end && d.span.end <= text.len(), || {
                    format!("span {:?} outside input {text:?}", d.span)
                })?;
            }
            Ok(())
        }
    }
}

/// Fixture source text.
pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}.scm.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Replaces whole identifiers outside string literals.
pub fn rename_identifiers(text: &str, pairs: &[(&str, &str)]) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let mut quoted = false;
    let flush = |word: &mut String, out: &mut String| {
        let to = pairs.iter().find(|(from, _)| *from == word.as_str()).map_or(word.as_str(), |(_, to)| *to);
        out.push_str(to);
        word.clear();
    };
    for ch in text.chars() {
        if !quoted && (ch.is_ascii_alphanumeric() || ch == '_') {
            word.push(ch);
            continue;
        }
        flush(&mut word, &mut out);
        if ch == '"' {
            quoted = !quoted;
        }
        out.push(ch);
    }
    flush(&mut word, &mut out);
    out
}

/// Bogus prevention and the disjunctive forest fire: isomorphic equations,
/// equal plain-HP verdicts, different extended verdicts.
pub fn prop_isomorphism_discrimination() -> Check {
    use gradcause::iso::Renaming;
    let bp = fixture("bogus_prevention");
    let ff = fixture("forest_fire");
    let r = Renaming::new()
        .map_values("A", "L", &[(0, 1), (1, 0)])
        .map_values("UA", "UL", &[(0, 1), (1, 0)])
        .map("B", "M")
        .map("UB", "UM")
        .map("VS", "F");
    let iso = r.is_isomorphism(&bp.model, &ff.model).map_err(|e| e.to_string())?;
    ensure(iso, || "equations are not isomorphic under the renaming".into())?;
    let (bm, fm) = (&bp.model, &ff.model);
    let bctx = ctx(&bp, "u01");
    let fctx = r.map_context(bm, fm, bctx).map_err(|e| e.to_string())?;
    ensure(&fctx == ctx(&ff, "u11"), || "context does not map to u11".into())?;
    let (bext, fext) = (bp.extended().unwrap(), ff.extended().unwrap());
    let effect = phi(bm, "VS", 1);
    let feffect = r.map_formula(bm, fm, &effect).map_err(|e| e.to_string())?;
    let mut differs = Vec::new();
    for cand in singletons(bm) {
        let e = cand.conjuncts()[0];
        let fcand = CandidateCause::single(r.map_event(bm, fm, &e).map_err(|e| e.to_string())?);
        let hb = is_actual_cause(bm, bctx, &cand, &effect, limits()).map_err(|e| e.to_string())?;
        let hf = is_actual_cause(fm, &fctx, &fcand, &feffect, limits()).map_err(|e| e.to_string())?;
        ensure(hb.is_cause_hp == hf.is_cause_hp, || format!("HP verdicts differ for {}", cand.display(bm)))?;
        let xb = is_extended_cause(&bext, bctx, &cand, &effect, limits()).map_err(|e| e.to_string())?;
        let xf = is_extended_cause(&fext, &fctx, &fcand, &feffect, limits()).map_err(|e| e.to_string())?;
        if xb.is_cause_extended != xf.is_cause_extended {
            differs.push(cand.display(bm).to_string());
        }
    }
    let b1 = cause(bm, &[("B", 1)]);
    let m1 = cause(fm, &[("M", 1)]);
    let xb = is_extended_cause(&bext, bctx, &b1, &effect, limits()).map_err(|e| e.to_string())?;
    let xf = is_extended_cause(&fext, &fctx, &m1, &feffect, limits()).map_err(|e| e.to_string())?;
    ensure(xb.is_cause_hp && !xb.is_cause_extended, || "B=1 should be an HP but not an extended cause".into())?;
    ensure(xf.is_cause_extended, || "M=1 should be an extended cause".into())?;
    ensure(!differs.is_empty(), || "extended verdicts coincide".into())
}

/// Checker and oracle agree on a random model for every context, effect,
/// singleton and order family; the trivial order matches plain HP.
pub fn prop_differential(seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let m = random_model(&mut rng, 4);
    let orders = random_orders(&mut rng, &m);
    for c in m.all_contexts() {
        for f in effects(&mut rng, &m, &c) {
            for cand in singletons(&m) {
                let hp = is_actual_cause(&m, &c, &cand, &f, limits()).map_err(|e| e.to_string())?;
                let o = oracle_is_cause(&m, &c, cand.conjuncts(), &f).map_err(|e| e.to_string())?;
                if hp.is_cause_hp != o {
                    return Err(format!("seed {seed}: HP disagrees on {}", cand.display(&m)));
                }
                for (k, order) in orders.iter().enumerate() {
                    let ext = ExtendedCausalModel::new(m.clone(), order.clone());
                    let x = is_extended_cause(&ext, &c, &cand, &f, limits()).map_err(|e| e.to_string())?;
                    if k == 0 && x.is_cause_extended != hp.is_cause_hp {
                        return Err(format!("seed {seed}: trivial order differs from HP"));
                    }
                    let ox =
                        oracle_is_extended_cause(&m, order, &c, cand.conjuncts(), &f).map_err(|e| e.to_string())?;
                    if x.is_cause_extended != ox {
                        return Err(format!("seed {seed}: extended disagrees on {}", cand.display(&m)));
                    }
                }
                let trivial = oracle_is_extended_cause(&m, &NormalityOrder::trivial(&m), &c, cand.conjuncts(), &f)
                    .map_err(|e| e.to_string())?;
                if trivial != o {
                    return Err(format!("seed {seed}: trivial order differs from HP in the oracle"));
                }
            }
        }
    }
    Ok(())
}
