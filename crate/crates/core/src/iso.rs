//! Renamings between models: variable bijections with per-variable value maps.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{BooleanFormula, PrimitiveEvent};
use crate::model::{CausalModel, Context, Value, VarId, World};
use crate::product::{product_size, Odometer};

/// Largest joint domain checked exhaustively by [`Renaming::is_isomorphism`].
const MAX_JOINT_ASSIGNMENTS: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenamingError {
    #[error("`{0}` has no image")]
    Unmapped(String),
    #[error("two variables map to `{0}`")]
    NotInjective(String),
    #[error("`{from}` and `{to}` differ in kind")]
    KindMismatch { from: String, to: String },
    #[error("value map for `{0}` is not a bijection between the ranges")]
    BadValueMap(String),
    #[error("joint domain too large to compare exhaustively")]
    TooLarge,
}

/// Maps each variable of a source model to a variable of a target model, and
/// its values through an optional per-variable bijection (identity if absent).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Renaming {
    pub vars: BTreeMap<String, String>,
    pub values: BTreeMap<String, BTreeMap<Value, Value>>,
}

impl Renaming {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn map(mut self, from: &str, to: &str) -> Self {
        self.vars.insert(from.to_string(), to.to_string());
        self
    }

    pub fn map_values(mut self, from: &str, to: &str, pairs: &[(Value, Value)]) -> Self {
        self.vars.insert(from.to_string(), to.to_string());
        self.values.insert(from.to_string(), pairs.iter().copied().collect());
        self
    }

    fn var(&self, source: &CausalModel, target: &CausalModel, id: VarId) -> Result<VarId, RenamingError> {
        let name = source.name(id);
        let to = self.vars.get(name).ok_or_else(|| RenamingError::Unmapped(name.to_string()))?;
        target.lookup(to).ok_or_else(|| RenamingError::Unmapped(name.to_string()))
    }

    fn value(&self, source: &CausalModel, id: VarId, v: Value) -> Value {
        self.values.get(source.name(id)).and_then(|m| m.get(&v)).copied().unwrap_or(v)
    }

    /// Checks that the renaming is a kind- and range-preserving bijection.
    pub fn validate(&self, source: &CausalModel, target: &CausalModel) -> Result<(), RenamingError> {
        let mut images = BTreeSet::new();
        if source.variables().len() != target.variables().len() {
            return Err(RenamingError::NotInjective(String::from("<size mismatch>")));
        }
        for i in 0..source.variables().len() {
            let id = VarId(i);
            let to = self.var(source, target, id)?;
            if !images.insert(to) {
                return Err(RenamingError::NotInjective(target.name(to).to_string()));
            }
            if source.is_endogenous(id) != target.is_endogenous(to) {
                return Err(RenamingError::KindMismatch {
                    from: source.name(id).to_string(),
                    to: target.name(to).to_string(),
                });
            }
            let mapped: BTreeSet<Value> = source.range(id).iter().map(|&v| self.value(source, id, v)).collect();
            let target_range: BTreeSet<Value> = target.range(to).iter().copied().collect();
            if mapped.len() != source.range(id).len() || mapped != target_range {
                return Err(RenamingError::BadValueMap(source.name(id).to_string()));
            }
        }
        Ok(())
    }

    /// Whether every equation of `source`, evaluated on every joint
    /// assignment, agrees with the corresponding equation of `target` on the
    /// renamed assignment.
    pub fn is_isomorphism(&self, source: &CausalModel, target: &CausalModel) -> Result<bool, RenamingError> {
        self.validate(source, target)?;
        let n = source.variables().len();
        let ranges: Vec<&[Value]> = (0..n).map(|i| source.range(VarId(i))).collect();
        if product_size(ranges.iter().copied()) > MAX_JOINT_ASSIGNMENTS {
            return Err(RenamingError::TooLarge);
        }
        let image: Vec<VarId> = (0..n).map(|i| self.var(source, target, VarId(i))).collect::<Result<_, _>>()?;
        let mut mapped = vec![0; n];
        for env in Odometer::new(ranges) {
            for i in 0..n {
                mapped[image[i].0] = self.value(source, VarId(i), env[i]);
            }
            for &x in source.endogenous() {
                let here = source.equation(x).expect("endogenous").eval(&env).expect("total");
                let there = target.equation(image[x.0]).expect("endogenous").eval(&mapped).expect("total");
                if self.value(source, x, here) != there {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn map_context(
        &self,
        source: &CausalModel,
        target: &CausalModel,
        ctx: &Context,
    ) -> Result<Context, RenamingError> {
        let mut values = vec![0; target.exogenous().len()];
        for (id, v) in source.exogenous().iter().zip(ctx.values()) {
            let to = self.var(source, target, *id)?;
            let pos = target.exogenous().iter().position(|x| *x == to).expect("kind preserved");
            values[pos] = self.value(source, *id, *v);
        }
        target.context_from_values(&values).map_err(|_| RenamingError::BadValueMap(String::from("<context>")))
    }

    pub fn map_world(&self, source: &CausalModel, target: &CausalModel, world: &World) -> Result<World, RenamingError> {
        let mut values = vec![0; target.endogenous().len()];
        for (id, v) in source.endogenous().iter().zip(world.values()) {
            let to = self.var(source, target, *id)?;
            values[target.world_slot(to)] = self.value(source, *id, *v);
        }
        target.world_from_values(&values).map_err(|_| RenamingError::BadValueMap(String::from("<world>")))
    }

    pub fn map_event(
        &self,
        source: &CausalModel,
        target: &CausalModel,
        e: &PrimitiveEvent,
    ) -> Result<PrimitiveEvent, RenamingError> {
        Ok(PrimitiveEvent { var: self.var(source, target, e.var)?, value: self.value(source, e.var, e.value) })
    }

    pub fn map_formula(
        &self,
        source: &CausalModel,
        target: &CausalModel,
        f: &BooleanFormula,
    ) -> Result<BooleanFormula, RenamingError> {
        Ok(match f {
            BooleanFormula::Event(e) => BooleanFormula::Event(self.map_event(source, target, e)?),
            BooleanFormula::Not(p) => BooleanFormula::Not(Box::new(self.map_formula(source, target, p)?)),
            BooleanFormula::And(p, q) => BooleanFormula::And(
                Box::new(self.map_formula(source, target, p)?),
                Box::new(self.map_formula(source, target, q)?),
            ),
            BooleanFormula::Or(p, q) => BooleanFormula::Or(
                Box::new(self.map_formula(source, target, p)?),
                Box::new(self.map_formula(source, target, q)?),
            ),
        })
    }
}
