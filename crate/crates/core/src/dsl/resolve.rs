//! Name resolution and semantic checks from syntax tree to document.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::parser::{AExpr, AFormula, AQuery, AQueryKind, Assign, Name, Stmt};
use super::{Diagnostic, ParsedDocument, Query, QueryKind, SourceSpan};
use crate::expr::Expr;
use crate::formula::{BooleanFormula, CausalFormula, PrimitiveEvent};
use crate::hp::CandidateCause;
use crate::model::{CausalModel, Context, ModelDraft, Value, VarId, VarKind, Violation, World};
use crate::normality::{
    derive_from_typicality, explicit_order, Behavior, BehaviorRanking, Judgement, NormalityError, TypicalitySpec,
    ValueRanking,
};

type Diags = Vec<Diagnostic>;

pub(crate) fn document(stmts: &[Stmt]) -> Result<ParsedDocument, Diags> {
    let mut errors = Vec::new();
    let Some(model) = build_model(stmts, &mut errors) else {
        return Err(errors);
    };
    let mut r = Resolver { model: &model, errors: &mut errors };

    let (typicality, explicit_norms, order) = r.normality(stmts);
    let contexts = r.contexts(stmts);
    let names: BTreeSet<String> = contexts.iter().map(|(n, _)| n.clone()).collect();
    let queries: Vec<Query> = stmts
        .iter()
        .filter_map(|s| match s {
            Stmt::Query(q) => r.query(q, &names),
            _ => None,
        })
        .collect();

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(ParsedDocument { model, typicality, explicit_norms, contexts, queries, order })
}

pub(crate) fn queries(stmts: &[Stmt], doc: &ParsedDocument) -> Result<Vec<Query>, Diags> {
    let mut errors = Vec::new();
    let names: BTreeSet<String> = doc.contexts.iter().map(|(n, _)| n.clone()).collect();
    let mut r = Resolver { model: &doc.model, errors: &mut errors };
    let out: Vec<Query> = stmts
        .iter()
        .filter_map(|s| match s {
            Stmt::Query(q) => r.query(q, &names),
            _ => None,
        })
        .collect();
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn build_model(stmts: &[Stmt], errors: &mut Diags) -> Option<CausalModel> {
    let mut draft = ModelDraft::new();
    let mut decl_span: HashMap<String, SourceSpan> = HashMap::new();
    let mut ids: HashMap<String, VarId> = HashMap::new();
    let mut bodies: Vec<(VarId, &AExpr)> = Vec::new();
    for s in stmts {
        let (name, range, kind, span) = match s {
            Stmt::Exo { name, range, span } => (name, range, VarKind::Exogenous, *span),
            Stmt::Var { name, range, span, .. } => (name, range, VarKind::Endogenous, *span),
            _ => continue,
        };
        if decl_span.contains_key(&name.text) {
            errors.push(Diagnostic::new(name.span, format!("`{}` is declared more than once", name.text)));
            continue;
        }
        decl_span.insert(name.text.clone(), span);
        let id = match kind {
            VarKind::Exogenous => draft.exogenous(&name.text, range),
            VarKind::Endogenous => draft.endogenous(&name.text, range),
        };
        ids.insert(name.text.clone(), id);
        if let Stmt::Var { body, .. } = s {
            bodies.push((id, body));
        }
    }
    if draft.variables.iter().all(|v| v.kind == VarKind::Exogenous) && errors.is_empty() {
        let span = stmts.first().map(stmt_span).unwrap_or(SourceSpan { line: 1, column: 1, start: 0, end: 0 });
        errors.push(Diagnostic::new(span, "the model declares no endogenous variables"));
    }
    for (id, body) in bodies {
        if let Some(expr) = lower_expr(body, &ids, errors) {
            draft.equation(id, expr);
        }
    }
    if !errors.is_empty() {
        return None;
    }
    let names: Vec<String> = draft.variables.iter().map(|v| v.name.clone()).collect();
    match draft.build() {
        Ok(model) => Some(model),
        Err(report) => {
            for v in report.violations {
                let anchor = match &v {
                    Violation::DuplicateName(n)
                    | Violation::EmptyRange(n)
                    | Violation::DuplicateRangeValue { name: n, .. }
                    | Violation::MissingEquation(n)
                    | Violation::DuplicateEquation(n)
                    | Violation::EquationOnExogenous(n)
                    | Violation::DomainTooLarge(n)
                    | Violation::NonTotal { target: n, .. } => Some(n.clone()),
                    Violation::Cycle(path) => path.first().cloned(),
                    Violation::DanglingReference(i) => names.get(*i).cloned(),
                };
                let span = anchor.and_then(|n| decl_span.get(&n).copied()).unwrap_or(SourceSpan {
                    line: 1,
                    column: 1,
                    start: 0,
                    end: 0,
                });
                errors.push(Diagnostic::new(span, v.to_string()));
            }
            None
        }
    }
}

fn stmt_span(s: &Stmt) -> SourceSpan {
    match s {
        Stmt::Exo { span, .. }
        | Stmt::Var { span, .. }
        | Stmt::Typical { span, .. }
        | Stmt::Severity { span, .. }
        | Stmt::Mechanism { span, .. }
        | Stmt::Behavior { span, .. }
        | Stmt::Norm { span, .. }
        | Stmt::Context { span, .. } => *span,
        Stmt::Query(q) => q.span,
    }
}

fn lower_expr(e: &AExpr, ids: &HashMap<String, VarId>, errors: &mut Diags) -> Option<Expr> {
    let lookup = |n: &Name, errors: &mut Diags| match ids.get(&n.text) {
        Some(id) => Some(*id),
        None => {
            errors.push(Diagnostic::new(n.span, format!("undeclared variable `{}`", n.text)));
            None
        }
    };
    let bin = |a: &AExpr, b: &AExpr, errors: &mut Diags| {
        let a = lower_expr(a, ids, errors);
        let b = lower_expr(b, ids, errors);
        Some((Box::new(a?), Box::new(b?)))
    };
    Some(match e {
        AExpr::Int(v) => Expr::Const(*v),
        AExpr::Name(n) => Expr::Var(lookup(n, errors)?),
        AExpr::Min(args) | AExpr::Max(args) => {
            let lowered: Vec<Option<Expr>> = args.iter().map(|a| lower_expr(a, ids, errors)).collect();
            let items: Vec<Expr> = lowered.into_iter().collect::<Option<_>>()?;
            if matches!(e, AExpr::Min(..)) {
                Expr::Min(items)
            } else {
                Expr::Max(items)
            }
        }
        AExpr::Add(a, b) => {
            let (a, b) = bin(a, b, errors)?;
            Expr::Add(a, b)
        }
        AExpr::Sub(a, b) => {
            let (a, b) = bin(a, b, errors)?;
            Expr::Sub(a, b)
        }
        AExpr::Mul(a, b) => {
            let (a, b) = bin(a, b, errors)?;
            Expr::Mul(a, b)
        }
        AExpr::Ite { lhs, rhs, then, otherwise } => {
            let parts: Vec<Option<Expr>> =
                [lhs, rhs, then, otherwise].iter().map(|x| lower_expr(x, ids, errors)).collect();
            let mut parts = parts.into_iter().collect::<Option<Vec<_>>>()?.into_iter().map(Box::new);
            Expr::Ite { lhs: parts.next()?, rhs: parts.next()?, then: parts.next()?, otherwise: parts.next()? }
        }
        AExpr::Table { args, rows } => {
            let ids_: Vec<Option<VarId>> = args.iter().map(|n| lookup(n, errors)).collect();
            let mut table = BTreeMap::new();
            let mut ok = true;
            for (key, out, span) in rows {
                if key.len() != args.len() {
                    errors.push(Diagnostic::new(
                        *span,
                        format!("table row has {} values but the table has {} arguments", key.len(), args.len()),
                    ));
                    ok = false;
                } else if table.insert(key.clone(), *out).is_some() {
                    errors.push(Diagnostic::new(*span, "table row repeated"));
                    ok = false;
                }
            }
            let args: Vec<VarId> = ids_.into_iter().collect::<Option<_>>()?;
            if !ok {
                return None;
            }
            Expr::Table { args, rows: table }
        }
    })
}

struct Resolver<'a> {
    model: &'a CausalModel,
    errors: &'a mut Diags,
}

impl Resolver<'_> {
    fn err(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.errors.push(Diagnostic::new(span, message));
    }

    fn endogenous(&mut self, n: &Name) -> Option<VarId> {
        match self.model.lookup(&n.text) {
            Some(id) if self.model.is_endogenous(id) => Some(id),
            Some(_) => {
                self.err(n.span, format!("`{}` is exogenous; only endogenous variables are allowed here", n.text));
                None
            }
            None => {
                self.err(n.span, format!("undeclared variable `{}`", n.text));
                None
            }
        }
    }

    fn in_range(&mut self, id: VarId, value: Value, span: SourceSpan) -> bool {
        if self.model.range(id).contains(&value) {
            true
        } else {
            self.err(span, format!("value {value} is outside the range of `{}`", self.model.name(id)));
            false
        }
    }

    fn event(&mut self, a: &Assign) -> Option<PrimitiveEvent> {
        let id = self.endogenous(&a.name)?;
        self.in_range(id, a.value, a.span).then_some(PrimitiveEvent { var: id, value: a.value })
    }

    fn cause(&mut self, assigns: &[Assign]) -> Option<CandidateCause> {
        let mut events = Vec::new();
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for a in assigns {
            match self.event(a) {
                Some(e) if seen.insert(e.var) => events.push(e),
                Some(_) => {
                    self.err(a.span, format!("`{}` appears more than once in the cause", a.name.text));
                    ok = false;
                }
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        CandidateCause::new(events).ok()
    }

    fn formula(&mut self, f: &AFormula) -> Option<BooleanFormula> {
        Some(match f {
            AFormula::Event(a) => BooleanFormula::Event(self.event(a)?),
            AFormula::NotEvent(a) => BooleanFormula::Event(self.event(a)?).negate(),
            AFormula::Not(p) => self.formula(p)?.negate(),
            AFormula::And(p, q) => {
                let (p, q) = (self.formula(p), self.formula(q));
                p?.and(q?)
            }
            AFormula::Or(p, q) => {
                let (p, q) = (self.formula(p), self.formula(q));
                p?.or(q?)
            }
        })
    }

    /// Full assignment to the endogenous variables.
    fn world(&mut self, assigns: &[Assign], span: SourceSpan) -> Option<World> {
        let n = self.model.endogenous().len();
        let mut values: Vec<Option<Value>> = vec![None; n];
        let mut ok = true;
        for a in assigns {
            let Some(e) = self.event(a) else {
                ok = false;
                continue;
            };
            let slot = self.model.world_slot(e.var);
            if values[slot].replace(e.value).is_some() {
                self.err(a.span, format!("`{}` is assigned more than once", a.name.text));
                ok = false;
            }
        }
        let missing: Vec<&str> = values
            .iter()
            .zip(self.model.endogenous())
            .filter(|(v, _)| v.is_none())
            .map(|(_, id)| self.model.name(*id))
            .collect();
        if ok && !missing.is_empty() {
            let msg = format!("world leaves {} unassigned", missing.join(", "));
            self.err(span, msg);
            ok = false;
        }
        if !ok {
            return None;
        }
        self.model.world_from_values(&values.into_iter().map(|v| v.expect("checked")).collect::<Vec<_>>()).ok()
    }

    #[allow(clippy::type_complexity)]
    fn normality(
        &mut self,
        stmts: &[Stmt],
    ) -> (Option<TypicalitySpec>, Option<Vec<(World, Judgement, World)>>, Option<crate::normality::NormalityOrder>)
    {
        let mut spec = TypicalitySpec::default();
        let mut typicality_span: Option<SourceSpan> = None;
        let mut norm_span: Option<SourceSpan> = None;
        let mut relations = Vec::new();
        let mut value_spans: HashMap<VarId, SourceSpan> = HashMap::new();
        let mut behavior_spans: HashMap<VarId, SourceSpan> = HashMap::new();
        let mut severity_span: Option<SourceSpan> = None;
        let mut mechanism_span: Option<SourceSpan> = None;
        let mut ok = true;

        for s in stmts {
            match s {
                Stmt::Typical { name, values, span } => {
                    typicality_span.get_or_insert(*span);
                    let Some(id) = self.endogenous(name) else {
                        ok = false;
                        continue;
                    };
                    if value_spans.insert(id, *span).is_some() {
                        self.err(name.span, format!("typicality of `{}` is declared more than once", name.text));
                        ok = false;
                        continue;
                    }
                    let mut range = self.model.range(id).to_vec();
                    range.sort_unstable();
                    let mut listed = values.clone();
                    listed.sort_unstable();
                    if listed != range {
                        self.err(
                            *span,
                            format!("ranking for `{}` must list each of its values exactly once", name.text),
                        );
                        ok = false;
                        continue;
                    }
                    spec.values.push(ValueRanking { var: id, values: values.clone() });
                }
                Stmt::Severity { events, span } => {
                    typicality_span.get_or_insert(*span);
                    if severity_span.replace(*span).is_some() {
                        self.err(*span, "severity ranking is declared more than once");
                        ok = false;
                        continue;
                    }
                    for a in events {
                        match self.event(a) {
                            Some(e) => spec.severity.push(e),
                            None => ok = false,
                        }
                    }
                }
                Stmt::Mechanism { on, span } => {
                    typicality_span.get_or_insert(*span);
                    if mechanism_span.replace(*span).is_some() {
                        self.err(*span, "mechanism mode is declared more than once");
                        ok = false;
                        continue;
                    }
                    spec.mechanism = *on;
                }
                Stmt::Behavior { name, rules, span } => {
                    typicality_span.get_or_insert(*span);
                    let Some(id) = self.endogenous(name) else {
                        ok = false;
                        continue;
                    };
                    if behavior_spans.insert(id, *span).is_some() {
                        self.err(name.span, format!("behaviors of `{}` are declared more than once", name.text));
                        ok = false;
                        continue;
                    }
                    let ids: HashMap<String, VarId> =
                        self.model.variables().iter().enumerate().map(|(i, v)| (v.name.clone(), VarId(i))).collect();
                    let mut behaviors = Vec::new();
                    for (label, body) in rules {
                        match lower_expr(body, &ids, self.errors) {
                            Some(rule) => behaviors.push(Behavior { label: label.clone(), rule }),
                            None => ok = false,
                        }
                    }
                    spec.behaviors.push(BehaviorRanking { var: id, behaviors });
                }
                Stmt::Norm { worlds, rels, span } => {
                    norm_span.get_or_insert(*span);
                    let resolved: Vec<Option<World>> = worlds.iter().map(|(a, sp)| self.world(a, *sp)).collect();
                    if resolved.iter().any(Option::is_none) {
                        ok = false;
                        continue;
                    }
                    let resolved: Vec<World> = resolved.into_iter().map(Option::unwrap).collect();
                    for (i, rel) in rels.iter().enumerate() {
                        relations.push((resolved[i].clone(), *rel, resolved[i + 1].clone()));
                    }
                }
                _ => {}
            }
        }

        if let (Some(_), Some(n)) = (typicality_span, norm_span) {
            self.err(n, "explicit `norm` judgements cannot be combined with typicality declarations");
            return (None, None, None);
        }
        if !ok {
            return (None, None, None);
        }
        if let Some(span) = typicality_span {
            match derive_from_typicality(self.model, &spec) {
                Ok(order) => return (Some(spec), None, Some(order)),
                Err(e) => {
                    let anchor = match &e {
                        NormalityError::NotAtypical { .. }
                        | NormalityError::DuplicateSeverity(_)
                        | NormalityError::SeverityCycle(_) => severity_span,
                        NormalityError::BehaviorsWithoutMechanism => {
                            behavior_spans.values().min_by_key(|s| s.start).copied()
                        }
                        NormalityError::DuplicateLabel { var, .. }
                        | NormalityError::EmptyBehaviors(var)
                        | NormalityError::ExogenousInBehavior { var, .. } => {
                            self.model.lookup(var).and_then(|id| behavior_spans.get(&id).copied())
                        }
                        _ => None,
                    };
                    self.err(anchor.unwrap_or(span), e.to_string());
                    return (None, None, None);
                }
            }
        }
        if let Some(span) = norm_span {
            return match explicit_order(self.model, &relations) {
                Ok(order) => (None, Some(relations), Some(order)),
                Err(e) => {
                    self.err(span, e.to_string());
                    (None, None, None)
                }
            };
        }
        (None, None, None)
    }

    fn contexts(&mut self, stmts: &[Stmt]) -> Vec<(String, Context)> {
        let mut out: Vec<(String, Context)> = Vec::new();
        for s in stmts {
            let Stmt::Context { name, assigns, span } = s else { continue };
            if out.iter().any(|(n, _)| *n == name.text) {
                self.err(name.span, format!("context `{}` is declared more than once", name.text));
                continue;
            }
            let mut values: Vec<Option<Value>> = vec![None; self.model.exogenous().len()];
            let mut ok = true;
            for a in assigns {
                let id = match self.model.lookup(&a.name.text) {
                    Some(id) if !self.model.is_endogenous(id) => id,
                    Some(_) => {
                        self.err(
                            a.name.span,
                            format!("`{}` is endogenous; contexts set exogenous variables", a.name.text),
                        );
                        ok = false;
                        continue;
                    }
                    None => {
                        self.err(a.name.span, format!("undeclared variable `{}`", a.name.text));
                        ok = false;
                        continue;
                    }
                };
                if !self.in_range(id, a.value, a.span) {
                    ok = false;
                    continue;
                }
                let pos = self.model.exogenous().iter().position(|x| *x == id).expect("exogenous");
                if values[pos].replace(a.value).is_some() {
                    self.err(a.span, format!("`{}` is assigned more than once", a.name.text));
                    ok = false;
                }
            }
            let missing: Vec<&str> = values
                .iter()
                .zip(self.model.exogenous())
                .filter(|(v, _)| v.is_none())
                .map(|(_, id)| self.model.name(*id))
                .collect();
            if ok && !missing.is_empty() {
                let msg = format!("context `{}` leaves {} unassigned", name.text, missing.join(", "));
                self.err(*span, msg);
                ok = false;
            }
            if ok {
                let values: Vec<Value> = values.into_iter().map(|v| v.expect("checked")).collect();
                let ctx = self.model.context_from_values(&values).expect("checked");
                out.push((name.text.clone(), ctx));
            }
        }
        out
    }

    fn query(&mut self, q: &AQuery, contexts: &BTreeSet<String>) -> Option<Query> {
        let context = match &q.context {
            Some(n) if !contexts.contains(&n.text) => {
                self.err(n.span, format!("unknown context `{}`", n.text));
                None
            }
            other => Some(other.as_ref().map(|n| n.text.clone())),
        };
        let kind = match &q.kind {
            AQueryKind::Cause(c, f) | AQueryKind::Witnesses(c, f) => {
                let (cause, effect) = (self.cause(c), self.formula(f));
                let (cause, effect) = (cause?, effect?);
                if matches!(q.kind, AQueryKind::Cause(..)) {
                    QueryKind::Cause { cause, effect }
                } else {
                    QueryKind::Witnesses { cause, effect }
                }
            }
            AQueryKind::Grade(cs, f) => {
                let candidates: Vec<Option<CandidateCause>> = cs.iter().map(|c| self.cause(c)).collect();
                let effect = self.formula(f);
                QueryKind::Grade { candidates: candidates.into_iter().collect::<Option<_>>()?, effect: effect? }
            }
            AQueryKind::Causes(f) => QueryKind::Causes { effect: self.formula(f)? },
            AQueryKind::Solve => QueryKind::Solve,
            AQueryKind::Satisfies(setting, f) => {
                let mut interventions = Vec::new();
                let mut seen = BTreeSet::new();
                let mut ok = true;
                for a in setting {
                    match self.event(a) {
                        Some(e) if seen.insert(e.var) => interventions.push((e.var, e.value)),
                        Some(_) => {
                            self.err(a.span, format!("`{}` is intervened on more than once", a.name.text));
                            ok = false;
                        }
                        None => ok = false,
                    }
                }
                let body = self.formula(f);
                if !ok {
                    return None;
                }
                QueryKind::Satisfies(CausalFormula::new(interventions, body?))
            }
        };
        Some(Query { context: context?, kind, span: q.span })
    }
}
