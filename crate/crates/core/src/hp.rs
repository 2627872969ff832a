//! The HP actual-cause test (AC1-AC3) and witness enumeration.
//!
//! The search visits `W` subsets of the non-cause endogenous variables by
//! increasing size and then lexicographically, then the settings `w` in
//! lexicographic order, then every alternative `x'` for the cause variables.
//! AC2(a) is checked first; AC2(b) is evaluated at most once per `(W, w)`.
//! Solutions are memoized by their full intervention vector.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{BooleanFormula, FormulaError, PrimitiveEvent};
use crate::graded::{self, CauseVerdict, Mode};
use crate::model::{CausalModel, Context, ModelError, Value, VarId, World};
use crate::normality::{Normality, NormalityError, NormalityOrder};
use crate::product::{combinations, product_size, Odometer};

/// Conjunction of primitive events over distinct endogenous variables,
/// kept sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateCause {
    conjuncts: Vec<PrimitiveEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CandidateError {
    #[error("a candidate cause needs at least one conjunct")]
    Empty,
    #[error("variable #{} appears in more than one conjunct", .0 .0)]
    RepeatedVariable(VarId),
}

impl CandidateCause {
    pub fn new(mut conjuncts: Vec<PrimitiveEvent>) -> Result<Self, CandidateError> {
        if conjuncts.is_empty() {
            return Err(CandidateError::Empty);
        }
        conjuncts.sort();
        if let Some(pair) = conjuncts.windows(2).find(|p| p[0].var == p[1].var) {
            return Err(CandidateError::RepeatedVariable(pair[0].var));
        }
        Ok(CandidateCause { conjuncts })
    }

    pub fn single(event: PrimitiveEvent) -> Self {
        CandidateCause { conjuncts: vec![event] }
    }

    pub fn conjuncts(&self) -> &[PrimitiveEvent] {
        &self.conjuncts
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.conjuncts.iter().map(|e| e.var)
    }

    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    /// Strict nonempty sub-conjunctions, smallest first.
    pub fn strict_subsets(&self) -> Vec<CandidateCause> {
        let n = self.conjuncts.len();
        (1..n)
            .flat_map(|k| combinations(n, k))
            .map(|idx| CandidateCause { conjuncts: idx.iter().map(|&i| self.conjuncts[i]).collect() })
            .collect()
    }

    pub fn display<'a>(&'a self, model: &'a CausalModel) -> impl fmt::Display + 'a {
        CauseDisplay { cause: self, model }
    }
}

struct CauseDisplay<'a> {
    cause: &'a CandidateCause,
    model: &'a CausalModel,
}

impl fmt::Display for CauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.cause.conjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{}", e.display(self.model))?;
        }
        Ok(())
    }
}

/// One choice of `(W, w, x')` satisfying AC2, with the world it produces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WitnessRecord {
    /// `W`, in declaration order.
    pub w_set: Vec<VarId>,
    pub w_values: Vec<Value>,
    /// Alternative values for the cause variables, in the cause's order.
    pub x_prime: Vec<Value>,
    pub witness_world: World,
}

/// Caps the number of `(W, w, x')` triples a single search may consider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_candidates: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_candidates: 1 << 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("search needs {required} candidate settings, above the limit of {limit}")]
    ResourceLimit { required: u128, limit: u128 },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Normality(#[from] NormalityError),
    #[error(transparent)]
    Candidate(#[from] CandidateError),
}

/// Number of `(W, w, x')` triples for a cause over `cause_vars`.
pub fn search_size(model: &CausalModel, cause_vars: &[VarId]) -> u128 {
    let others = model
        .endogenous()
        .iter()
        .filter(|v| !cause_vars.contains(v))
        .fold(1u128, |acc, v| acc.saturating_mul(model.range(*v).len() as u128 + 1));
    let alternatives = product_size(cause_vars.iter().map(|v| model.range(*v))).saturating_sub(1);
    others.saturating_mul(alternatives)
}

/// AC1: the cause and `effect` both hold in the actual world.
pub fn check_ac1(
    model: &CausalModel,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
) -> Result<bool, CheckError> {
    check_inputs(model, cause.conjuncts(), effect)?;
    let actual = model.solve(context);
    Ok(cause.conjuncts().iter().all(|e| e.holds_in(model, &actual)) && effect.holds_in(model, &actual))
}

/// AC2(a) and AC2(b) for one explicit choice of `W`, `w` and `x'`.
pub fn check_ac2(
    model: &CausalModel,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    w_set: &[VarId],
    w_values: &[Value],
    x_prime: &[Value],
) -> Result<bool, CheckError> {
    check_inputs(model, cause.conjuncts(), effect)?;
    for (expected, got) in [(w_set.len(), w_values.len()), (cause.len(), x_prime.len())] {
        if expected != got {
            return Err(FormulaError::from(ModelError::ArityMismatch { expected, got }).into());
        }
    }
    let mut seen: BTreeSet<VarId> = cause.variables().collect();
    for (&w, &value) in w_set.iter().zip(w_values) {
        if !seen.insert(w) {
            return Err(FormulaError::RepeatedIntervention(model.name(w).to_string()).into());
        }
        BooleanFormula::Event(PrimitiveEvent { var: w, value }).check(model)?;
    }
    for (e, &v) in cause.conjuncts().iter().zip(x_prime) {
        model.check_value(e.var, v).map_err(FormulaError::from)?;
    }
    let mut search = Search::new(model, context, cause.conjuncts(), effect);
    let w_slots: Vec<usize> = w_set.iter().map(|v| model.world_slot(*v)).collect();
    let (holds, _) = search.ac2a(x_prime, &w_slots, w_values);
    Ok(!holds && search.ac2b(&w_slots, w_values))
}

/// Result of enumerating witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearch {
    pub actual_world: World,
    pub ac1: bool,
    /// Empty when AC1 fails.
    pub records: Vec<WitnessRecord>,
}

/// Every `(W, w, x')` satisfying AC2, in search order.
pub fn enumerate_witnesses(
    model: &CausalModel,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<WitnessSearch, CheckError> {
    enumerate_for_events(model, context, cause.conjuncts(), effect, limits)
}

/// As [`enumerate_witnesses`], over an arbitrary (possibly empty) list of
/// events on distinct variables.
pub fn enumerate_for_events(
    model: &CausalModel,
    context: &Context,
    events: &[PrimitiveEvent],
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<WitnessSearch, CheckError> {
    check_inputs(model, events, effect)?;
    let mut search = Search::new(model, context, events, effect);
    let actual_world = model.world_of_env(&search.actual);
    if !search.ac1() {
        return Ok(WitnessSearch { actual_world, ac1: false, records: Vec::new() });
    }
    let records = search.run(None, false, limits)?.into_iter().map(|(r, _)| r).collect();
    Ok(WitnessSearch { actual_world, ac1: true, records })
}

/// Plain HP verdict.
pub fn is_actual_cause(
    model: &CausalModel,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<CauseVerdict, CheckError> {
    graded::evaluate(model, None, context, cause, effect, Mode::Hp, limits)
}

/// Every plain-HP cause of `effect` with at most `max_conjuncts` conjuncts,
/// ordered by size and then by variable.
pub fn find_all_causes(
    model: &CausalModel,
    context: &Context,
    effect: &BooleanFormula,
    max_conjuncts: usize,
    limits: SearchLimits,
) -> Result<Vec<CandidateCause>, CheckError> {
    effect.check(model)?;
    let actual = model.solve(context);
    let endo = model.endogenous();
    let mut out = Vec::new();
    for k in 1..=max_conjuncts.min(endo.len()) {
        for idx in combinations(endo.len(), k) {
            let cause = CandidateCause {
                conjuncts: idx
                    .iter()
                    .map(|&i| PrimitiveEvent { var: endo[i], value: actual.get(model, endo[i]) })
                    .collect(),
            };
            if is_actual_cause(model, context, &cause, effect, limits)?.is_cause_hp {
                out.push(cause);
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_inputs(
    model: &CausalModel,
    events: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<(), CheckError> {
    let mut seen = BTreeSet::new();
    for e in events {
        BooleanFormula::Event(*e).check(model)?;
        if !seen.insert(e.var) {
            return Err(CandidateError::RepeatedVariable(e.var).into());
        }
    }
    effect.check(model)?;
    Ok(())
}

/// Witness search state for one cause, effect and context.
pub(crate) struct Search<'a> {
    model: &'a CausalModel,
    context: &'a Context,
    effect: &'a BooleanFormula,
    /// World slots and values of the cause conjuncts.
    x_slots: Vec<usize>,
    x_values: Vec<Value>,
    /// World slots of the remaining endogenous variables, in order.
    others: Vec<usize>,
    actual: Vec<Value>,
    actual_slots: Vec<Value>,
    memo: HashMap<Vec<Option<Value>>, bool>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        model: &'a CausalModel,
        context: &'a Context,
        events: &[PrimitiveEvent],
        effect: &'a BooleanFormula,
    ) -> Self {
        let x_slots: Vec<usize> = events.iter().map(|e| model.world_slot(e.var)).collect();
        let others = (0..model.endogenous().len()).filter(|s| !x_slots.contains(s)).collect();
        let actual = model.solve_env(context, &[]);
        let actual_slots = model.endogenous().iter().map(|v| actual[v.0]).collect();
        Search {
            model,
            context,
            effect,
            x_slots,
            x_values: events.iter().map(|e| e.value).collect(),
            others,
            actual,
            actual_slots,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn actual_world(&self) -> World {
        self.model.world_of_env(&self.actual)
    }

    pub(crate) fn ac1(&self) -> bool {
        self.x_slots.iter().zip(&self.x_values).all(|(s, v)| self.actual_slots[*s] == *v)
            && self.effect.holds_in_env(&self.actual)
    }

    fn holds(&mut self, overrides: Vec<Option<Value>>) -> bool {
        if let Some(&b) = self.memo.get(&overrides) {
            return b;
        }
        let env = self.model.solve_env(self.context, &overrides);
        let b = self.effect.holds_in_env(&env);
        self.memo.insert(overrides, b);
        b
    }

    fn base(&self) -> Vec<Option<Value>> {
        vec![None; self.actual_slots.len()]
    }

    /// Whether `effect` still holds under `X <- x', W <- w`, and the world.
    fn ac2a(&mut self, x_prime: &[Value], w_slots: &[usize], w_values: &[Value]) -> (bool, World) {
        let mut ov = self.base();
        for (s, v) in self.x_slots.iter().zip(x_prime) {
            ov[*s] = Some(*v);
        }
        for (s, v) in w_slots.iter().zip(w_values) {
            ov[*s] = Some(*v);
        }
        let env = self.model.solve_env(self.context, &ov);
        let holds = self.effect.holds_in_env(&env);
        self.memo.insert(ov, holds);
        (holds, self.model.world_of_env(&env))
    }

    /// AC2(b): for every `W' ⊆ W` and `Z' ⊆ Z \ X`, the effect survives
    /// `X <- x, W' <- w, Z' <- z*`.
    fn ac2b(&mut self, w_slots: &[usize], w_values: &[Value]) -> bool {
        let rest: Vec<usize> = self.others.iter().copied().filter(|s| !w_slots.contains(s)).collect();
        let wn = w_slots.len();
        let rn = rest.len();
        for wmask in 0u64..(1u64 << wn) {
            for zmask in 0u64..(1u64 << rn) {
                let mut ov = self.base();
                for (s, v) in self.x_slots.iter().zip(&self.x_values) {
                    ov[*s] = Some(*v);
                }
                for (i, (s, v)) in w_slots.iter().zip(w_values).enumerate() {
                    if wmask >> i & 1 == 1 {
                        ov[*s] = Some(*v);
                    }
                }
                for (i, s) in rest.iter().enumerate() {
                    if zmask >> i & 1 == 1 {
                        ov[*s] = Some(self.actual_slots[*s]);
                    }
                }
                if !self.holds(ov) {
                    return false;
                }
            }
        }
        true
    }

    /// Runs the enumeration. With an order, each record carries its relation
    /// to the actual world. With `first_only`, stops at the first record that
    /// is admissible (any record when no order is given).
    pub(crate) fn run(
        &mut self,
        order: Option<&NormalityOrder>,
        first_only: bool,
        limits: SearchLimits,
    ) -> Result<Vec<(WitnessRecord, Option<Normality>)>, CheckError> {
        let endo = self.model.endogenous();
        let cause_vars: Vec<VarId> = self.x_slots.iter().map(|s| endo[*s]).collect();
        let required = search_size(self.model, &cause_vars);
        if required > limits.max_candidates {
            return Err(CheckError::ResourceLimit { required, limit: limits.max_candidates });
        }
        let actual_world = self.actual_world();
        let x_ranges: Vec<&[Value]> = cause_vars.iter().map(|v| self.model.range(*v)).collect();
        let mut out = Vec::new();
        let n = self.others.len();
        for k in 0..=n {
            for pick in combinations(n, k) {
                let w_slots: Vec<usize> = pick.iter().map(|&i| self.others[i]).collect();
                let w_ranges: Vec<&[Value]> = w_slots.iter().map(|s| self.model.range(endo[*s])).collect();
                for w_values in Odometer::new(w_ranges) {
                    let mut ac2b: Option<bool> = None;
                    for x_prime in Odometer::new(x_ranges.clone()) {
                        if x_prime == self.x_values {
                            continue;
                        }
                        let (holds, world) = self.ac2a(&x_prime, &w_slots, &w_values);
                        if holds {
                            continue;
                        }
                        let b = match ac2b {
                            Some(b) => b,
                            None => *ac2b.insert(self.ac2b(&w_slots, &w_values)),
                        };
                        if !b {
                            break;
                        }
                        let relation = match order {
                            Some(o) => Some(o.compare(&world, &actual_world)?),
                            None => None,
                        };
                        let admissible = relation.is_none_or(Normality::is_at_least);
                        out.push((
                            WitnessRecord {
                                w_set: w_slots.iter().map(|s| endo[*s]).collect(),
                                w_values: w_values.clone(),
                                x_prime,
                                witness_world: world,
                            },
                            relation,
                        ));
                        if first_only && admissible {
                            return Ok(out);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
