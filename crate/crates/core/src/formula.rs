//! Causal formulas `[Y1 <- y1, ..., Yk <- yk] phi` and their satisfaction.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{CausalModel, Context, ModelError, Value, VarId, World};

/// `X = x` for an endogenous `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveEvent {
    pub var: VarId,
    pub value: Value,
}

impl PrimitiveEvent {
    pub fn new(model: &CausalModel, name: &str, value: Value) -> Result<Self, ModelError> {
        let var = model.endogenous_id(name)?;
        model.check_value(var, value)?;
        Ok(PrimitiveEvent { var, value })
    }

    pub fn holds_in(&self, model: &CausalModel, world: &World) -> bool {
        world.get(model, self.var) == self.value
    }

    pub fn display<'a>(&'a self, model: &'a CausalModel) -> impl fmt::Display + 'a {
        EventDisplay { event: self, model }
    }
}

struct EventDisplay<'a> {
    event: &'a PrimitiveEvent,
    model: &'a CausalModel,
}

impl fmt::Display for EventDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.model.name(self.event.var), self.event.value)
    }
}

/// Boolean combination of primitive events.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BooleanFormula {
    Event(PrimitiveEvent),
    Not(Box<BooleanFormula>),
    And(Box<BooleanFormula>, Box<BooleanFormula>),
    Or(Box<BooleanFormula>, Box<BooleanFormula>),
}

impl BooleanFormula {
    pub fn event(model: &CausalModel, name: &str, value: Value) -> Result<Self, ModelError> {
        Ok(BooleanFormula::Event(PrimitiveEvent::new(model, name, value)?))
    }

    pub fn negate(self) -> Self {
        BooleanFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        BooleanFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        BooleanFormula::Or(Box::new(self), Box::new(other))
    }

    /// Evaluates with `lookup` giving the value of each variable.
    pub fn eval_with(&self, lookup: &impl Fn(VarId) -> Value) -> bool {
        match self {
            BooleanFormula::Event(e) => lookup(e.var) == e.value,
            BooleanFormula::Not(p) => !p.eval_with(lookup),
            BooleanFormula::And(p, q) => p.eval_with(lookup) && q.eval_with(lookup),
            BooleanFormula::Or(p, q) => p.eval_with(lookup) || q.eval_with(lookup),
        }
    }

    pub fn holds_in(&self, model: &CausalModel, world: &World) -> bool {
        self.eval_with(&|v| world.get(model, v))
    }

    /// Evaluates against a full variable assignment.
    pub(crate) fn holds_in_env(&self, env: &[Value]) -> bool {
        self.eval_with(&|v| env[v.0])
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            BooleanFormula::Event(e) => {
                out.insert(e.var);
            }
            BooleanFormula::Not(p) => p.collect_vars(out),
            BooleanFormula::And(p, q) | BooleanFormula::Or(p, q) => {
                p.collect_vars(out);
                q.collect_vars(out);
            }
        }
    }

    pub fn check(&self, model: &CausalModel) -> Result<(), FormulaError> {
        match self {
            BooleanFormula::Event(e) => check_event(model, e),
            BooleanFormula::Not(p) => p.check(model),
            BooleanFormula::And(p, q) | BooleanFormula::Or(p, q) => {
                p.check(model)?;
                q.check(model)
            }
        }
    }

    pub fn display<'a>(&'a self, model: &'a CausalModel) -> impl fmt::Display + 'a {
        BoolDisplay { formula: self, model, prec: 0 }
    }
}

fn check_event(model: &CausalModel, e: &PrimitiveEvent) -> Result<(), FormulaError> {
    if e.var.0 >= model.variables().len() {
        return Err(FormulaError::UnknownVariable(e.var.0));
    }
    if !model.is_endogenous(e.var) {
        return Err(ModelError::NotEndogenous(model.name(e.var).to_string()).into());
    }
    model.check_value(e.var, e.value)?;
    Ok(())
}

struct BoolDisplay<'a> {
    formula: &'a BooleanFormula,
    model: &'a CausalModel,
    prec: u8,
}

impl fmt::Display for BoolDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |formula, prec| BoolDisplay { formula, model: self.model, prec };
        // precedence: | = 1, & = 2, ! and atoms = 3
        match self.formula {
            BooleanFormula::Event(e) => write!(f, "{}", e.display(self.model)),
            BooleanFormula::Not(p) => write!(f, "!{}", sub(p, 3)),
            BooleanFormula::And(p, q) => {
                let wrap = self.prec > 2;
                if wrap {
                    write!(f, "(")?;
                }
                write!(f, "{} & {}", sub(p, 2), sub(q, 3))?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
            BooleanFormula::Or(p, q) => {
                let wrap = self.prec > 1;
                if wrap {
                    write!(f, "(")?;
                }
                write!(f, "{} | {}", sub(p, 1), sub(q, 2))?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("variable #{0} is not part of the model")]
    UnknownVariable(usize),
    #[error("`{0}` is intervened on more than once")]
    RepeatedIntervention(String),
}

/// `[Y <- y] phi`; an empty intervention list is plain evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CausalFormula {
    pub interventions: Vec<(VarId, Value)>,
    pub body: BooleanFormula,
}

impl CausalFormula {
    pub fn new(interventions: Vec<(VarId, Value)>, body: BooleanFormula) -> Self {
        CausalFormula { interventions, body }
    }

    pub fn plain(body: BooleanFormula) -> Self {
        CausalFormula { interventions: Vec::new(), body }
    }

    pub fn check(&self, model: &CausalModel) -> Result<(), FormulaError> {
        let mut seen = BTreeSet::new();
        for &(var, value) in &self.interventions {
            check_event(model, &PrimitiveEvent { var, value })?;
            if !seen.insert(var) {
                return Err(FormulaError::RepeatedIntervention(model.name(var).to_string()));
            }
        }
        self.body.check(model)
    }

    pub fn display<'a>(&'a self, model: &'a CausalModel) -> impl fmt::Display + 'a {
        CausalDisplay { formula: self, model }
    }
}

struct CausalDisplay<'a> {
    formula: &'a CausalFormula,
    model: &'a CausalModel,
}

impl fmt::Display for CausalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.formula.interventions.is_empty() {
            write!(f, "[")?;
            for (i, (var, value)) in self.formula.interventions.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}<-{}", self.model.name(*var), value)?;
            }
            write!(f, "](")?;
        }
        write!(f, "{}", self.formula.body.display(self.model))?;
        if !self.formula.interventions.is_empty() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `(M, u) |= [Y <- y] phi`.
pub fn satisfies(model: &CausalModel, context: &Context, formula: &CausalFormula) -> Result<bool, FormulaError> {
    formula.check(model)?;
    let submodel = model.intervene(&formula.interventions)?;
    Ok(formula.body.holds_in(model, &submodel.solve(context)))
}
