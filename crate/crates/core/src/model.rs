//! Finite-domain structural causal models.
//!
//! A model is built as a [`ModelDraft`] and only becomes a [`CausalModel`]
//! after validation, so every `CausalModel` is acyclic and has total equations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::expr::Expr;
use crate::product::{product_size, Odometer};

pub type Value = i64;

/// Index of a variable in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Exogenous,
    Endogenous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Ordered, duplicate-free, nonempty.
    pub range: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub target: VarId,
    pub body: Expr,
}

/// Equations whose totality check would exceed this many parent tuples are
/// rejected outright.
const MAX_TOTALITY_TUPLES: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),
    #[error("variable `{name}` lists value {value} more than once")]
    DuplicateRangeValue { name: String, value: Value },
    #[error("endogenous variable `{0}` has no equation")]
    MissingEquation(String),
    #[error("variable `{0}` has more than one equation")]
    DuplicateEquation(String),
    #[error("exogenous variable `{0}` cannot have an equation")]
    EquationOnExogenous(String),
    #[error("equation refers to undeclared variable #{0}")]
    DanglingReference(usize),
    #[error("cyclic dependence: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("equation for `{target}` is not total at {}: {reason}", fmt_tuple(.parents))]
    NonTotal { target: String, parents: Vec<(String, Value)>, reason: String },
    #[error("equation for `{0}` has too many parent tuples to check totality")]
    DomainTooLarge(String),
}

fn fmt_tuple(parents: &[(String, Value)]) -> String {
    let inner: Vec<String> = parents.iter().map(|(n, v)| format!("{n}={v}")).collect();
    format!("({})", inner.join(", "))
}

/// Result of [`validate_model`]: empty means the draft is a valid model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is exogenous; interventions and events range over endogenous variables")]
    NotEndogenous(String),
    #[error("`{0}` is not exogenous")]
    NotExogenous(String),
    #[error("value {value} is outside the range of `{var}`")]
    OutOfRange { var: String, value: Value },
    #[error("`{0}` is assigned more than once")]
    DuplicateAssignment(String),
    #[error("missing a value for `{0}`")]
    MissingAssignment(String),
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// A model under construction.
#[derive(Debug, Clone, Default)]
pub struct ModelDraft {
    pub variables: Vec<Variable>,
    pub equations: Vec<Equation>,
}

impl ModelDraft {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn exogenous(&mut self, name: &str, range: &[Value]) -> VarId {
        self.push(name, VarKind::Exogenous, range)
    }

    pub fn endogenous(&mut self, name: &str, range: &[Value]) -> VarId {
        self.push(name, VarKind::Endogenous, range)
    }

    fn push(&mut self, name: &str, kind: VarKind, range: &[Value]) -> VarId {
        self.variables.push(Variable { name: name.to_string(), kind, range: range.to_vec() });
        VarId(self.variables.len() - 1)
    }

    pub fn equation(&mut self, target: VarId, body: Expr) -> &mut Self {
        self.equations.push(Equation { target, body });
        self
    }

    pub fn build(self) -> Result<CausalModel, ValidationReport> {
        let report = validate_model(&self);
        if !report.is_ok() {
            return Err(report);
        }
        let n = self.variables.len();
        let mut bodies: Vec<Option<Expr>> = vec![None; n];
        for eq in self.equations {
            bodies[eq.target.0] = Some(eq.body);
        }
        let order = topological_order(&self.variables, &bodies).expect("acyclicity was validated");
        Ok(CausalModel::assemble(self.variables, bodies, order))
    }
}

/// Checks names, ranges, equation coverage, acyclicity and totality.
pub fn validate_model(draft: &ModelDraft) -> ValidationReport {
    let mut violations = Vec::new();
    let n = draft.variables.len();

    let mut seen = HashMap::new();
    for var in &draft.variables {
        if seen.insert(var.name.as_str(), ()).is_some() {
            violations.push(Violation::DuplicateName(var.name.clone()));
        }
        if var.range.is_empty() {
            violations.push(Violation::EmptyRange(var.name.clone()));
        }
        let mut vals = BTreeSet::new();
        for &v in &var.range {
            if !vals.insert(v) {
                violations.push(Violation::DuplicateRangeValue { name: var.name.clone(), value: v });
            }
        }
    }

    let mut bodies: Vec<Option<Expr>> = vec![None; n];
    let mut structurally_sound = true;
    for eq in &draft.equations {
        let Some(target) = draft.variables.get(eq.target.0) else {
            violations.push(Violation::DanglingReference(eq.target.0));
            structurally_sound = false;
            continue;
        };
        if let Some(bad) = eq.body.references().into_iter().find(|r| r.0 >= n) {
            violations.push(Violation::DanglingReference(bad.0));
            structurally_sound = false;
            continue;
        }
        if target.kind == VarKind::Exogenous {
            violations.push(Violation::EquationOnExogenous(target.name.clone()));
            continue;
        }
        if bodies[eq.target.0].is_some() {
            violations.push(Violation::DuplicateEquation(target.name.clone()));
            continue;
        }
        bodies[eq.target.0] = Some(eq.body.clone());
    }
    for (i, var) in draft.variables.iter().enumerate() {
        if var.kind == VarKind::Endogenous && bodies[i].is_none() {
            violations.push(Violation::MissingEquation(var.name.clone()));
        }
    }
    if !structurally_sound {
        return ValidationReport { violations };
    }

    for cycle in find_cycles(&draft.variables, &bodies) {
        violations.push(Violation::Cycle(cycle.iter().map(|id| draft.variables[id.0].name.clone()).collect()));
    }

    if draft.variables.iter().all(|v| !v.range.is_empty()) {
        for (i, body) in bodies.iter().enumerate() {
            if let Some(body) = body {
                if let Some(v) = check_totality(&draft.variables, VarId(i), body) {
                    violations.push(v);
                }
            }
        }
    }

    ValidationReport { violations }
}

fn check_totality(variables: &[Variable], target: VarId, body: &Expr) -> Option<Violation> {
    let refs: Vec<VarId> = body.references().into_iter().collect();
    let ranges: Vec<&[Value]> = refs.iter().map(|r| variables[r.0].range.as_slice()).collect();
    if product_size(ranges.iter().copied()) > MAX_TOTALITY_TUPLES {
        return Some(Violation::DomainTooLarge(variables[target.0].name.clone()));
    }
    let target_var = &variables[target.0];
    let mut env = vec![0; variables.len()];
    for tuple in Odometer::new(ranges) {
        for (r, v) in refs.iter().zip(&tuple) {
            env[r.0] = *v;
        }
        let reason = match body.eval(&env) {
            Ok(out) if target_var.range.contains(&out) => continue,
            Ok(out) => format!("value {out} is outside the range of `{}`", target_var.name),
            Err(e) => e.to_string(),
        };
        return Some(Violation::NonTotal {
            target: target_var.name.clone(),
            parents: refs.iter().zip(&tuple).map(|(r, v)| (variables[r.0].name.clone(), *v)).collect(),
            reason,
        });
    }
    None
}

/// Cycles in the syntactic dependence graph, each reported once as a path
/// that starts and ends at the same variable.
fn find_cycles(variables: &[Variable], bodies: &[Option<Expr>]) -> Vec<Vec<VarId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = variables.len();
    let parents: Vec<Vec<VarId>> =
        bodies.iter().map(|b| b.as_ref().map(|b| b.references().into_iter().collect()).unwrap_or_default()).collect();
    let mut marks = vec![Mark::New; n];
    let mut cycles = Vec::new();

    for root in 0..n {
        if marks[root] != Mark::New {
            continue;
        }
        // Iterative DFS following parent links; a back edge closes a cycle.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        marks[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < parents[node].len() {
                let p = parents[node][*next].0;
                *next += 1;
                match marks[p] {
                    Mark::New => {
                        marks[p] = Mark::Active;
                        stack.push((p, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|(s, _)| *s == p).unwrap();
                        let mut cycle: Vec<VarId> = stack[start..].iter().map(|(s, _)| VarId(*s)).collect();
                        cycle.reverse();
                        cycle.insert(0, VarId(p));
                        cycles.push(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                marks[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    cycles
}

/// Kahn's algorithm over endogenous variables, smallest index first.
fn topological_order(variables: &[Variable], bodies: &[Option<Expr>]) -> Option<Vec<VarId>> {
    let n = variables.len();
    let mut indegree = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, body) in bodies.iter().enumerate() {
        if let Some(body) = body {
            for p in body.references() {
                if bodies[p.0].is_some() {
                    indegree[i] += 1;
                    children[p.0].push(i);
                }
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| bodies[i].is_some() && indegree[i] == 0).collect();
    let mut order = Vec::new();
    while let Some(i) = ready.pop_first() {
        order.push(VarId(i));
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    let endogenous = bodies.iter().filter(|b| b.is_some()).count();
    (order.len() == endogenous).then_some(order)
}

/// A validated, acyclic causal model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalModel {
    variables: Vec<Variable>,
    bodies: Vec<Option<Expr>>,
    order: Vec<VarId>,
    exogenous: Vec<VarId>,
    endogenous: Vec<VarId>,
    /// Position of each variable within its kind's list.
    slot: Vec<usize>,
    by_name: HashMap<String, VarId>,
}

impl CausalModel {
    fn assemble(variables: Vec<Variable>, bodies: Vec<Option<Expr>>, order: Vec<VarId>) -> Self {
        let mut exogenous = Vec::new();
        let mut endogenous = Vec::new();
        let mut slot = Vec::with_capacity(variables.len());
        let mut by_name = HashMap::new();
        for (i, var) in variables.iter().enumerate() {
            by_name.insert(var.name.clone(), VarId(i));
            match var.kind {
                VarKind::Exogenous => {
                    slot.push(exogenous.len());
                    exogenous.push(VarId(i));
                }
                VarKind::Endogenous => {
                    slot.push(endogenous.len());
                    endogenous.push(VarId(i));
                }
            }
        }
        CausalModel { variables, bodies, order, exogenous, endogenous, slot, by_name }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.variables[id.0].name
    }

    pub fn range(&self, id: VarId) -> &[Value] {
        &self.variables[id.0].range
    }

    pub fn is_endogenous(&self, id: VarId) -> bool {
        self.variables[id.0].kind == VarKind::Endogenous
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn var_id(&self, name: &str) -> Result<VarId, ModelError> {
        self.lookup(name).ok_or_else(|| ModelError::UnknownVariable(name.to_string()))
    }

    /// Endogenous variable by name; exogenous names are rejected.
    pub fn endogenous_id(&self, name: &str) -> Result<VarId, ModelError> {
        let id = self.var_id(name)?;
        if !self.is_endogenous(id) {
            return Err(ModelError::NotEndogenous(name.to_string()));
        }
        Ok(id)
    }

    pub fn exogenous(&self) -> &[VarId] {
        &self.exogenous
    }

    /// Endogenous variables in declaration order; this is also the order of
    /// values inside a [`World`].
    pub fn endogenous(&self) -> &[VarId] {
        &self.endogenous
    }

    /// Index of an endogenous variable within a [`World`].
    pub fn world_slot(&self, id: VarId) -> usize {
        debug_assert!(self.is_endogenous(id));
        self.slot[id.0]
    }

    pub fn equation(&self, id: VarId) -> Option<&Expr> {
        self.bodies[id.0].as_ref()
    }

    /// Endogenous variables in evaluation order.
    pub fn evaluation_order(&self) -> &[VarId] {
        &self.order
    }

    pub fn check_value(&self, id: VarId, value: Value) -> Result<(), ModelError> {
        if self.range(id).contains(&value) {
            Ok(())
        } else {
            Err(ModelError::OutOfRange { var: self.name(id).to_string(), value })
        }
    }

    /// Builds a context from named exogenous assignments, which must cover
    /// every exogenous variable exactly once.
    pub fn context(&self, assignment: &[(&str, Value)]) -> Result<Context, ModelError> {
        let mut values: Vec<Option<Value>> = vec![None; self.exogenous.len()];
        for &(name, value) in assignment {
            let id = self.var_id(name)?;
            if self.is_endogenous(id) {
                return Err(ModelError::NotExogenous(name.to_string()));
            }
            self.check_value(id, value)?;
            let slot = &mut values[self.slot[id.0]];
            if slot.is_some() {
                return Err(ModelError::DuplicateAssignment(name.to_string()));
            }
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .zip(&self.exogenous)
            .map(|(v, id)| v.ok_or_else(|| ModelError::MissingAssignment(self.name(*id).to_string())))
            .collect::<Result<_, _>>()?;
        Ok(Context { values })
    }

    /// Context from values listed in exogenous declaration order.
    pub fn context_from_values(&self, values: &[Value]) -> Result<Context, ModelError> {
        if values.len() != self.exogenous.len() {
            return Err(ModelError::ArityMismatch { expected: self.exogenous.len(), got: values.len() });
        }
        for (id, v) in self.exogenous.iter().zip(values) {
            self.check_value(*id, *v)?;
        }
        Ok(Context { values: values.to_vec() })
    }

    /// Every context of the model, in lexicographic order.
    pub fn all_contexts(&self) -> Vec<Context> {
        Odometer::new(self.exogenous.iter().map(|id| self.range(*id)).collect())
            .map(|values| Context { values })
            .collect()
    }

    /// Builds a world from named endogenous assignments covering every
    /// endogenous variable exactly once.
    pub fn world(&self, assignment: &[(&str, Value)]) -> Result<World, ModelError> {
        let mut values: Vec<Option<Value>> = vec![None; self.endogenous.len()];
        for &(name, value) in assignment {
            let id = self.endogenous_id(name)?;
            self.check_value(id, value)?;
            let slot = &mut values[self.slot[id.0]];
            if slot.is_some() {
                return Err(ModelError::DuplicateAssignment(name.to_string()));
            }
            *slot = Some(value);
        }
        let values = values
            .into_iter()
            .zip(&self.endogenous)
            .map(|(v, id)| v.ok_or_else(|| ModelError::MissingAssignment(self.name(*id).to_string())))
            .collect::<Result<_, _>>()?;
        Ok(World { values })
    }

    pub fn world_from_values(&self, values: &[Value]) -> Result<World, ModelError> {
        if values.len() != self.endogenous.len() {
            return Err(ModelError::ArityMismatch { expected: self.endogenous.len(), got: values.len() });
        }
        for (id, v) in self.endogenous.iter().zip(values) {
            self.check_value(*id, *v)?;
        }
        Ok(World { values: values.to_vec() })
    }

    /// Every world of the model (equations need not hold), lexicographically.
    pub fn all_worlds(&self) -> Vec<World> {
        Odometer::new(self.endogenous.iter().map(|id| self.range(*id)).collect())
            .map(|values| World { values })
            .collect()
    }

    /// The unique solution of the equations under `context`.
    pub fn solve(&self, context: &Context) -> World {
        let env = self.solve_env(context, &[]);
        self.world_of_env(&env)
    }

    /// Solves with endogenous overrides indexed by world slot; a shorter
    /// override slice leaves the remaining variables to their equations.
    pub(crate) fn solve_env(&self, context: &Context, overrides: &[Option<Value>]) -> Vec<Value> {
        let mut env = vec![0; self.variables.len()];
        for (id, v) in self.exogenous.iter().zip(&context.values) {
            env[id.0] = *v;
        }
        for id in &self.order {
            let slot = self.slot[id.0];
            env[id.0] = match overrides.get(slot).copied().flatten() {
                Some(v) => v,
                None => self.bodies[id.0]
                    .as_ref()
                    .expect("endogenous variable has an equation")
                    .eval(&env)
                    .expect("validated equations are total"),
            };
        }
        env
    }

    pub(crate) fn world_of_env(&self, env: &[Value]) -> World {
        World { values: self.endogenous.iter().map(|id| env[id.0]).collect() }
    }

    /// Full assignment for a world; exogenous positions are zero.
    pub(crate) fn env_of_world(&self, world: &World) -> Vec<Value> {
        let mut env = vec![0; self.variables.len()];
        for (id, v) in self.endogenous.iter().zip(&world.values) {
            env[id.0] = *v;
        }
        env
    }

    /// The submodel in which each targeted equation is replaced by a constant.
    pub fn intervene(&self, setting: &[(VarId, Value)]) -> Result<CausalModel, ModelError> {
        let mut model = self.clone();
        for &(id, value) in setting {
            if id.0 >= self.variables.len() {
                return Err(ModelError::UnknownVariable(format!("#{}", id.0)));
            }
            if !self.is_endogenous(id) {
                return Err(ModelError::NotEndogenous(self.name(id).to_string()));
            }
            self.check_value(id, value)?;
            model.bodies[id.0] = Some(Expr::Const(value));
        }
        Ok(model)
    }

    /// Solution of the intervened model, without materializing it.
    pub fn solve_intervened(&self, context: &Context, setting: &[(VarId, Value)]) -> Result<World, ModelError> {
        let mut overrides = vec![None; self.endogenous.len()];
        for &(id, value) in setting {
            if !self.is_endogenous(id) {
                return Err(ModelError::NotEndogenous(self.name(id).to_string()));
            }
            self.check_value(id, value)?;
            overrides[self.slot[id.0]] = Some(value);
        }
        Ok(self.world_of_env(&self.solve_env(context, &overrides)))
    }

    /// Semantic dependence graph: `Y -> X` iff the equation for `X` gives
    /// different outputs for two parent tuples differing only in `Y`.
    pub fn dependence_graph(&self) -> DependenceGraph {
        let mut edges = BTreeSet::new();
        let mut env = vec![0; self.variables.len()];
        for &x in &self.endogenous {
            let body = self.bodies[x.0].as_ref().expect("endogenous");
            let refs: Vec<VarId> = body.references().into_iter().collect();
            let ranges: Vec<&[Value]> = refs.iter().map(|r| self.range(*r)).collect();
            for (pos, &y) in refs.iter().enumerate() {
                let depends = Odometer::new(ranges.clone()).any(|tuple| {
                    for (r, v) in refs.iter().zip(&tuple) {
                        env[r.0] = *v;
                    }
                    let base = body.eval(&env).expect("total");
                    let differs = self.range(y).iter().any(|&alt| {
                        env[y.0] = alt;
                        body.eval(&env).expect("total") != base
                    });
                    env[y.0] = tuple[pos];
                    differs
                });
                if depends {
                    edges.insert((y, x));
                }
            }
        }
        DependenceGraph { nodes: self.variables.len(), edges }
    }
}

/// Total assignment to the exogenous variables, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    values: Vec<Value>,
}

impl Context {
    pub fn values(&self) -> &[Value] {
        &self.values
    }
}

/// Total assignment to the endogenous variables, in declaration order.
/// A world need not satisfy the model's equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World {
    values: Vec<Value>,
}

impl World {
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn get(&self, model: &CausalModel, id: VarId) -> Value {
        self.values[model.world_slot(id)]
    }

    pub fn display<'a>(&'a self, model: &'a CausalModel) -> WorldDisplay<'a> {
        WorldDisplay { world: self, model }
    }

    /// Named values in declaration order.
    pub fn named<'a>(&'a self, model: &'a CausalModel) -> impl Iterator<Item = (&'a str, Value)> + 'a {
        model.endogenous().iter().zip(&self.values).map(move |(id, v)| (model.name(*id), *v))
    }

    /// Whether every equation holds given the world's values and `context`.
    pub fn satisfies_equations(&self, model: &CausalModel, context: &Context) -> bool {
        let mut env = model.env_of_world(self);
        for (id, v) in model.exogenous().iter().zip(context.values()) {
            env[id.0] = *v;
        }
        model.endogenous().iter().all(|id| model.equation(*id).expect("endogenous").eval(&env) == Ok(env[id.0]))
    }
}

pub struct WorldDisplay<'a> {
    world: &'a World,
    model: &'a CausalModel,
}

impl fmt::Display for WorldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (name, v)) in self.world.named(self.model).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceGraph {
    nodes: usize,
    edges: BTreeSet<(VarId, VarId)>,
}

impl DependenceGraph {
    pub fn edges(&self) -> impl Iterator<Item = (VarId, VarId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, from: VarId, to: VarId) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn parents(&self, of: VarId) -> Vec<VarId> {
        self.edges.iter().filter(|(_, to)| *to == of).map(|(from, _)| *from).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.nodes];
        for (_, to) in &self.edges {
            indegree[to.0] += 1;
        }
        let mut ready: Vec<usize> = (0..self.nodes).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = ready.pop() {
            seen += 1;
            for (from, to) in &self.edges {
                if from.0 == i {
                    indegree[to.0] -= 1;
                    if indegree[to.0] == 0 {
                        ready.push(to.0);
                    }
                }
            }
        }
        seen == self.nodes
    }
}
