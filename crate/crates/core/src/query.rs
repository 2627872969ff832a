//! Executes parsed queries against their document.

use thiserror::Error;

use crate::dsl::{ParsedDocument, Query, QueryKind};
use crate::formula::satisfies;
use crate::graded::{self, grade_candidates, CauseVerdict, ExtendedCausalModel, Grading, Mode};
use crate::hp::{find_all_causes, CandidateCause, CheckError, SearchLimits};
use crate::model::{Context, World};
use crate::normality::NormalityOrder;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("query names no context and the document declares {declared}")]
    NoContext { declared: usize },
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("extended mode needs typicality or norm declarations")]
    NoOrder,
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Settings shared by every query in a run.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions<'a> {
    pub mode: Mode,
    pub limits: SearchLimits,
    /// Used when a query names no context of its own.
    pub context: Option<&'a str>,
    /// Largest conjunction size for `causes` queries.
    pub max_conjuncts: usize,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        RunOptions { mode: Mode::Hp, limits: SearchLimits::default(), context: None, max_conjuncts: 1 }
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Solve(World),
    Satisfies(bool),
    Verdict(CauseVerdict),
    Grading(Grading),
    /// Causes with their verdicts, by size and then variable.
    Causes(Vec<CauseVerdict>),
}

/// The context a query runs in: its own, else the fallback, else the only
/// declared context.
pub fn resolve_context<'d>(
    doc: &'d ParsedDocument,
    query: &Query,
    fallback: Option<&str>,
) -> Result<(&'d str, &'d Context), QueryError> {
    let name = match (query.context.as_deref(), fallback) {
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) if doc.contexts.len() == 1 => doc.contexts[0].0.as_str(),
        (None, None) => return Err(QueryError::NoContext { declared: doc.contexts.len() }),
    };
    doc.contexts
        .iter()
        .find(|(n, _)| n == name)
        .map(|(n, c)| (n.as_str(), c))
        .ok_or_else(|| QueryError::UnknownContext(name.to_string()))
}

pub fn execute(doc: &ParsedDocument, query: &Query, opts: RunOptions<'_>) -> Result<Outcome, QueryError> {
    let (_, ctx) = resolve_context(doc, query, opts.context)?;
    let model = &doc.model;
    let order = match opts.mode {
        Mode::Hp => None,
        Mode::Extended => Some(doc.order().ok_or(QueryError::NoOrder)?),
    };
    let check =
        |cause: &CandidateCause, effect| graded::evaluate(model, order, ctx, cause, effect, opts.mode, opts.limits);
    Ok(match &query.kind {
        QueryKind::Solve => Outcome::Solve(model.solve(ctx)),
        QueryKind::Satisfies(f) => Outcome::Satisfies(satisfies(model, ctx, f).map_err(CheckError::from)?),
        QueryKind::Cause { cause, effect } | QueryKind::Witnesses { cause, effect } => {
            Outcome::Verdict(check(cause, effect)?)
        }
        QueryKind::Grade { candidates, effect } => {
            let ext = ExtendedCausalModel::new(
                model.clone(),
                order.cloned().unwrap_or_else(|| NormalityOrder::trivial(model)),
            );
            Outcome::Grading(grade_candidates(&ext, ctx, candidates, effect, opts.mode, opts.limits)?)
        }
        QueryKind::Causes { effect } => {
            let candidates = match opts.mode {
                Mode::Hp => find_all_causes(model, ctx, effect, opts.max_conjuncts, opts.limits)?,
                Mode::Extended => all_candidates(model, ctx, opts.max_conjuncts),
            };
            let mut out = Vec::new();
            for c in &candidates {
                let v = check(c, effect)?;
                if v.is_cause() {
                    out.push(v);
                }
            }
            Outcome::Causes(out)
        }
    })
}

fn all_candidates(model: &crate::model::CausalModel, ctx: &Context, max: usize) -> Vec<CandidateCause> {
    let actual = model.solve(ctx);
    let endo = model.endogenous();
    let mut out = Vec::new();
    for k in 1..=max.min(endo.len()) {
        for idx in crate::product::combinations(endo.len(), k) {
            let events = idx
                .iter()
                .map(|&i| crate::formula::PrimitiveEvent { var: endo[i], value: actual.get(model, endo[i]) })
                .collect();
            out.push(CandidateCause::new(events).expect("distinct variables"));
        }
    }
    out
}
