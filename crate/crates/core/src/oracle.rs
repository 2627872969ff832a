//! Brute-force reference for the HP and extended cause tests.
//!
//! Every quantifier is expanded literally, every counterfactual is evaluated
//! by building the intervened submodel and solving it, and nothing is cached
//! or pruned. Only small models are accepted. Intended for cross-checking the
//! main checker in tests.

use thiserror::Error;

use crate::formula::{satisfies, BooleanFormula, CausalFormula, FormulaError, PrimitiveEvent};
use crate::model::{CausalModel, Context, Value, VarId};
use crate::normality::{NormalityError, NormalityOrder};

/// Largest number of endogenous variables the oracle accepts.
pub const ORACLE_MAX_ENDOGENOUS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle accepts at most {ORACLE_MAX_ENDOGENOUS} endogenous variables, model has {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Normality(#[from] NormalityError),
}

/// Plain HP verdict for the conjunction `cause`.
pub fn oracle_is_cause(
    model: &CausalModel,
    context: &Context,
    cause: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<bool, OracleError> {
    decide(model, None, context, cause, effect)
}

/// Extended verdict: AC2(a) witnesses must be at least as normal as the
/// actual world, and AC3 uses the same restricted AC2.
pub fn oracle_is_extended_cause(
    model: &CausalModel,
    order: &NormalityOrder,
    context: &Context,
    cause: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<bool, OracleError> {
    decide(model, Some(order), context, cause, effect)
}

fn decide(
    model: &CausalModel,
    order: Option<&NormalityOrder>,
    context: &Context,
    cause: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<bool, OracleError> {
    let n = model.endogenous().len();
    if n > ORACLE_MAX_ENDOGENOUS {
        return Err(OracleError::TooLarge(n));
    }
    if !ac1(model, context, cause, effect)? || !ac2(model, order, context, cause, effect)? {
        return Ok(false);
    }
    // AC3: no strict nonempty sub-conjunction satisfies AC1 and AC2.
    let k = cause.len();
    for mask in 1..(1usize << k) - 1 {
        let sub: Vec<PrimitiveEvent> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cause[i]).collect();
        if ac1(model, context, &sub, effect)? && ac2(model, order, context, &sub, effect)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ac1(
    model: &CausalModel,
    context: &Context,
    cause: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<bool, OracleError> {
    let mut conj = effect.clone();
    for e in cause {
        conj = conj.and(BooleanFormula::Event(*e));
    }
    Ok(satisfies(model, context, &CausalFormula::plain(conj))?)
}

/// Every assignment to `vars` over their ranges.
fn assignments(model: &CausalModel, vars: &[VarId]) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for v in vars {
        let mut next = Vec::new();
        for prefix in &out {
            for &value in model.range(*v) {
                let mut item = prefix.clone();
                item.push(value);
                next.push(item);
            }
        }
        out = next;
    }
    out
}

/// Every subset of `vars`.
fn subsets(vars: &[VarId]) -> Vec<Vec<VarId>> {
    (0..1usize << vars.len())
        .map(|mask| (0..vars.len()).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect())
        .collect()
}

fn ac2(
    model: &CausalModel,
    order: Option<&NormalityOrder>,
    context: &Context,
    cause: &[PrimitiveEvent],
    effect: &BooleanFormula,
) -> Result<bool, OracleError> {
    let x_vars: Vec<VarId> = cause.iter().map(|e| e.var).collect();
    let actual = model.solve(context);
    let rest: Vec<VarId> = model.endogenous().iter().copied().filter(|v| !x_vars.contains(v)).collect();
    for w_set in subsets(&rest) {
        // Z = V \ W, which contains X.
        let z_set: Vec<VarId> = model.endogenous().iter().copied().filter(|v| !w_set.contains(v)).collect();
        for w in assignments(model, &w_set) {
            for x_prime in assignments(model, &x_vars) {
                // AC2(a): [X <- x', W <- w] not phi.
                let mut setting: Vec<(VarId, Value)> = x_vars.iter().copied().zip(x_prime.iter().copied()).collect();
                setting.extend(w_set.iter().copied().zip(w.iter().copied()));
                let negated = CausalFormula::new(setting.clone(), effect.clone().negate());
                if !satisfies(model, context, &negated)? {
                    continue;
                }
                if let Some(order) = order {
                    let witness = model.intervene(&setting).map_err(FormulaError::from)?.solve(context);
                    if !order.at_least_as_normal(&witness, &actual)? {
                        continue;
                    }
                }
                // AC2(b): for all W' in W and Z' in Z, [X <- x, W' <- w, Z' <- z*] phi.
                let mut all_hold = true;
                'outer: for w_sub in subsets(&w_set) {
                    for z_sub in subsets(&z_set) {
                        let mut setting: Vec<(VarId, Value)> = cause.iter().map(|e| (e.var, e.value)).collect();
                        for v in &w_sub {
                            let pos = w_set.iter().position(|x| x == v).expect("subset of W");
                            setting.push((*v, w[pos]));
                        }
                        for v in &z_sub {
                            // Members of X are already set to x, which equals
                            // their actual value because AC1 holds.
                            if !x_vars.contains(v) {
                                setting.push((*v, actual.get(model, *v)));
                            }
                        }
                        if !satisfies(model, context, &CausalFormula::new(setting, effect.clone()))? {
                            all_hold = false;
                            break 'outer;
                        }
                    }
                }
                if all_hold {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
