//! Normality orderings: partial preorders over worlds.
//!
//! An order is either trivial (all worlds equally normal), given explicitly as
//! a list of `>`/`==` judgements closed under reflexivity and transitivity, or
//! derived from typicality declarations.
//!
//! A derived order maps each world to a set of *atypicality features*: one per
//! variable sitting at a non-top value of its typicality ranking, and, in
//! mechanism mode, one per variable whose most typical consistent behavior is
//! not its top-ranked behavior. Features are related by a severity preorder
//! (a more atypical value of the same variable, a lower-ranked behavior of the
//! same variable, or a declared cross-variable severity ranking), and
//! `s >= t` holds iff the features of `s` can be injected into those of `t`
//! with every feature mapped to one at least as severe.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::expr::Expr;
use crate::formula::PrimitiveEvent;
use crate::model::{CausalModel, ModelError, Value, VarId, World};

/// Outcome of comparing two worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normality {
    MoreNormal,
    LessNormal,
    EquallyNormal,
    Incomparable,
}

impl Normality {
    pub fn from_geq(s_geq_t: bool, t_geq_s: bool) -> Self {
        match (s_geq_t, t_geq_s) {
            (true, true) => Normality::EquallyNormal,
            (true, false) => Normality::MoreNormal,
            (false, true) => Normality::LessNormal,
            (false, false) => Normality::Incomparable,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Normality::MoreNormal => Normality::LessNormal,
            Normality::LessNormal => Normality::MoreNormal,
            other => other,
        }
    }

    /// `s >= t` given `compare(s, t)`.
    pub fn is_at_least(self) -> bool {
        matches!(self, Normality::MoreNormal | Normality::EquallyNormal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Normality::MoreNormal => "more_normal",
            Normality::LessNormal => "less_normal",
            Normality::EquallyNormal => "equally_normal",
            Normality::Incomparable => "incomparable",
        }
    }
}

impl fmt::Display for Normality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalityError {
    #[error("world has {got} values but the order ranges over {expected} variables")]
    WorldMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("typicality ranking for `{var}` must list each value of its range exactly once")]
    BadRanking { var: String },
    #[error("typicality declared twice for `{0}`")]
    DuplicateRanking(String),
    #[error("behaviors declared twice for `{0}`")]
    DuplicateBehaviors(String),
    #[error("behavior label `{label}` repeated for `{var}`")]
    DuplicateLabel { var: String, label: String },
    #[error("behavior ranking for `{0}` is empty")]
    EmptyBehaviors(String),
    #[error("behavior `{label}` of `{var}` refers to exogenous variable `{exo}`")]
    ExogenousInBehavior { var: String, label: String, exo: String },
    #[error("severity feature {feature} is not an atypical value (declare a typicality ranking where it is not the top value)")]
    NotAtypical { feature: String },
    #[error("severity feature {0} listed twice")]
    DuplicateSeverity(String),
    #[error("severity ranking contradicts the typicality rankings around {0}")]
    SeverityCycle(String),
    #[error("behavior rankings are declared but mechanism mode is off")]
    BehaviorsWithoutMechanism,
    #[error("no declared behavior of `{var}` is consistent with world {world}")]
    NoConsistentBehavior { var: String, world: String },
    #[error("inconsistent normality judgements: {}", .cycle.join(" >= "))]
    Inconsistent { cycle: Vec<String> },
}

/// Strict ranking of one variable's values, most typical first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueRanking {
    pub var: VarId,
    pub values: Vec<Value>,
}

/// One way for a variable to depend on the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub label: String,
    /// The value the variable takes under this behavior, computed from the
    /// world's endogenous values.
    pub rule: Expr,
}

/// Behaviors of one variable, most typical first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorRanking {
    pub var: VarId,
    pub behaviors: Vec<Behavior>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypicalitySpec {
    pub values: Vec<ValueRanking>,
    /// Atypical values, least severe first.
    pub severity: Vec<PrimitiveEvent>,
    pub mechanism: bool,
    pub behaviors: Vec<BehaviorRanking>,
}

/// Behavior label the implicit two-level ranking gives a variable that obeys
/// its equation.
pub const FOLLOWS_EQUATION: &str = "follows equation";
pub const VIOLATES_EQUATION: &str = "violates equation";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Feature {
    Value { var: VarId, rank: usize },
    Behavior { var: VarId, rank: usize },
}

#[derive(Debug, Clone)]
enum RuleKind {
    Expr(Expr),
    Anything,
}

#[derive(Debug, Clone)]
struct Mechanism {
    var: VarId,
    labels: Vec<String>,
    rules: Vec<RuleKind>,
}

#[derive(Debug, Clone)]
struct DerivedOrder {
    model: CausalModel,
    spec: TypicalitySpec,
    value_rank: HashMap<(VarId, Value), usize>,
    mechanisms: Vec<Mechanism>,
    index: HashMap<Feature, usize>,
    features: Vec<Feature>,
    /// `leq[f][g]`: `g` is at least as severe as `f`. Reflexive, transitive.
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone)]
struct ExplicitOrder {
    index: HashMap<World, usize>,
    geq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone)]
enum OrderKind {
    Trivial,
    Explicit(ExplicitOrder),
    Derived(Box<DerivedOrder>),
}

/// Where an order came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Trivial,
    Explicit,
    Derived,
}

/// A partial preorder over the worlds of one model.
#[derive(Debug, Clone)]
pub struct NormalityOrder {
    arity: usize,
    kind: OrderKind,
}

impl NormalityOrder {
    /// Every world is as normal as every other.
    pub fn trivial(model: &CausalModel) -> Self {
        NormalityOrder { arity: model.endogenous().len(), kind: OrderKind::Trivial }
    }

    pub fn provenance(&self) -> Provenance {
        match self.kind {
            OrderKind::Trivial => Provenance::Trivial,
            OrderKind::Explicit(_) => Provenance::Explicit,
            OrderKind::Derived(_) => Provenance::Derived,
        }
    }

    fn check_arity(&self, w: &World) -> Result<(), NormalityError> {
        if w.values().len() != self.arity {
            return Err(NormalityError::WorldMismatch { expected: self.arity, got: w.values().len() });
        }
        Ok(())
    }

    /// `s >= t`: `s` is at least as normal as `t`.
    pub fn at_least_as_normal(&self, s: &World, t: &World) -> Result<bool, NormalityError> {
        self.check_arity(s)?;
        self.check_arity(t)?;
        match &self.kind {
            OrderKind::Trivial => Ok(true),
            OrderKind::Explicit(e) => Ok(e.geq(s, t)),
            OrderKind::Derived(d) => {
                let fs = d.features(s)?;
                let ft = d.features(t)?;
                Ok(d.dominates(&fs, &ft))
            }
        }
    }

    pub fn compare(&self, s: &World, t: &World) -> Result<Normality, NormalityError> {
        self.check_arity(s)?;
        self.check_arity(t)?;
        match &self.kind {
            OrderKind::Trivial => Ok(Normality::EquallyNormal),
            OrderKind::Explicit(e) => Ok(Normality::from_geq(e.geq(s, t), e.geq(t, s))),
            OrderKind::Derived(d) => {
                let fs = d.features(s)?;
                let ft = d.features(t)?;
                Ok(Normality::from_geq(d.dominates(&fs, &ft), d.dominates(&ft, &fs)))
            }
        }
    }

    /// Human-readable atypicality features of a world (derived orders only).
    pub fn describe_features(&self, world: &World) -> Result<Vec<String>, NormalityError> {
        self.check_arity(world)?;
        match &self.kind {
            OrderKind::Derived(d) => {
                let fs = d.features(world)?;
                Ok(fs.iter().map(|&f| d.describe(d.features[f], world)).collect())
            }
            _ => Ok(Vec::new()),
        }
    }
}

impl ExplicitOrder {
    fn geq(&self, s: &World, t: &World) -> bool {
        if s == t {
            return true;
        }
        match (self.index.get(s), self.index.get(t)) {
            (Some(&i), Some(&j)) => self.geq[i][j],
            _ => false,
        }
    }
}

/// A stated judgement between two worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Judgement {
    /// Strictly more normal.
    Greater,
    /// Equally normal.
    Equal,
}

/// Reflexive-transitive closure of the stated judgements. Worlds never
/// mentioned are comparable only to themselves.
pub fn explicit_order(
    model: &CausalModel,
    relations: &[(World, Judgement, World)],
) -> Result<NormalityOrder, NormalityError> {
    let arity = model.endogenous().len();
    let mut worlds: Vec<World> = Vec::new();
    let mut index: HashMap<World, usize> = HashMap::new();
    let mut intern = |w: &World| -> Result<usize, NormalityError> {
        model.world_from_values(w.values())?;
        if let Some(&i) = index.get(w) {
            return Ok(i);
        }
        worlds.push(w.clone());
        index.insert(w.clone(), worlds.len() - 1);
        Ok(worlds.len() - 1)
    };
    let mut stated = Vec::new();
    for (s, j, t) in relations {
        stated.push((intern(s)?, *j, intern(t)?));
    }
    let n = worlds.len();
    let mut geq = vec![vec![false; n]; n];
    for (i, row) in geq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j, k) in &stated {
        geq[i][k] = true;
        if j == Judgement::Equal {
            geq[k][i] = true;
        }
    }
    let direct = geq.clone();
    transitive_closure(&mut geq);
    for &(i, j, k) in &stated {
        if j == Judgement::Greater && geq[k][i] {
            let path = shortest_path(&direct, k, i).expect("closure implies a path");
            let mut cycle: Vec<String> = vec![worlds[i].display(model).to_string()];
            cycle.extend(path.iter().map(|&p| worlds[p].display(model).to_string()));
            return Err(NormalityError::Inconsistent { cycle });
        }
    }
    Ok(NormalityOrder { arity, kind: OrderKind::Explicit(ExplicitOrder { index, geq }) })
}

fn shortest_path(adj: &[Vec<bool>], from: usize, to: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for v in 0..n {
            if adj[u][v] && prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Builds the order induced by typicality declarations.
pub fn derive_from_typicality(model: &CausalModel, spec: &TypicalitySpec) -> Result<NormalityOrder, NormalityError> {
    let mut value_rank = HashMap::new();
    let mut features = Vec::new();
    let mut ranked = BTreeSet::new();
    for ranking in &spec.values {
        let name = model.name(ranking.var).to_string();
        if !model.is_endogenous(ranking.var) {
            return Err(ModelError::NotEndogenous(name).into());
        }
        if !ranked.insert(ranking.var) {
            return Err(NormalityError::DuplicateRanking(name));
        }
        let mut listed: Vec<Value> = ranking.values.clone();
        listed.sort_unstable();
        let mut range = model.range(ranking.var).to_vec();
        range.sort_unstable();
        if listed != range {
            return Err(NormalityError::BadRanking { var: name });
        }
        for (rank, &v) in ranking.values.iter().enumerate() {
            value_rank.insert((ranking.var, v), rank);
            if rank > 0 {
                features.push(Feature::Value { var: ranking.var, rank });
            }
        }
    }

    if !spec.mechanism && !spec.behaviors.is_empty() {
        return Err(NormalityError::BehaviorsWithoutMechanism);
    }
    let mut mechanisms = Vec::new();
    if spec.mechanism {
        let mut declared = BTreeMap::new();
        for ranking in &spec.behaviors {
            let name = model.name(ranking.var).to_string();
            if !model.is_endogenous(ranking.var) {
                return Err(ModelError::NotEndogenous(name).into());
            }
            if declared.insert(ranking.var, ranking).is_some() {
                return Err(NormalityError::DuplicateBehaviors(name));
            }
            if ranking.behaviors.is_empty() {
                return Err(NormalityError::EmptyBehaviors(name));
            }
            let mut labels = BTreeSet::new();
            for b in &ranking.behaviors {
                if !labels.insert(b.label.as_str()) {
                    return Err(NormalityError::DuplicateLabel { var: name, label: b.label.clone() });
                }
                if let Some(exo) = b.rule.references().into_iter().find(|r| !model.is_endogenous(*r)) {
                    return Err(NormalityError::ExogenousInBehavior {
                        var: name,
                        label: b.label.clone(),
                        exo: model.name(exo).to_string(),
                    });
                }
            }
        }
        for &var in model.endogenous() {
            let mechanism = if let Some(ranking) = declared.get(&var) {
                Mechanism {
                    var,
                    labels: ranking.behaviors.iter().map(|b| b.label.clone()).collect(),
                    rules: ranking.behaviors.iter().map(|b| RuleKind::Expr(b.rule.clone())).collect(),
                }
            } else {
                // Equations are typically obeyed; only checkable when the
                // equation reads endogenous variables alone.
                let body = model.equation(var).expect("endogenous");
                if body.references().iter().any(|r| !model.is_endogenous(*r)) {
                    continue;
                }
                Mechanism {
                    var,
                    labels: vec![FOLLOWS_EQUATION.to_string(), VIOLATES_EQUATION.to_string()],
                    rules: vec![RuleKind::Expr(body.clone()), RuleKind::Anything],
                }
            };
            for rank in 1..mechanism.rules.len() {
                features.push(Feature::Behavior { var, rank });
            }
            mechanisms.push(mechanism);
        }
    }

    let index: HashMap<Feature, usize> = features.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let n = features.len();
    let mut leq = vec![vec![false; n]; n];
    for (i, fi) in features.iter().enumerate() {
        for (j, fj) in features.iter().enumerate() {
            leq[i][j] = match (fi, fj) {
                (Feature::Value { var: a, rank: r }, Feature::Value { var: b, rank: s })
                | (Feature::Behavior { var: a, rank: r }, Feature::Behavior { var: b, rank: s }) => a == b && r <= s,
                _ => false,
            };
        }
    }
    let mut severity_idx = Vec::new();
    let mut seen = BTreeSet::new();
    for e in &spec.severity {
        let label = format!("{}={}", model.name(e.var), e.value);
        model.check_value(e.var, e.value)?;
        let rank = value_rank.get(&(e.var, e.value)).copied();
        let Some(rank) = rank.filter(|r| *r > 0) else {
            return Err(NormalityError::NotAtypical { feature: label });
        };
        if !seen.insert((e.var, e.value)) {
            return Err(NormalityError::DuplicateSeverity(label));
        }
        severity_idx.push((index[&Feature::Value { var: e.var, rank }], label));
    }
    for pair in severity_idx.windows(2) {
        leq[pair[0].0][pair[1].0] = true;
    }
    transitive_closure(&mut leq);
    for (i, label) in &severity_idx {
        if (0..n).any(|j| j != *i && leq[*i][j] && leq[j][*i]) {
            return Err(NormalityError::SeverityCycle(label.clone()));
        }
    }

    Ok(NormalityOrder {
        arity: model.endogenous().len(),
        kind: OrderKind::Derived(Box::new(DerivedOrder {
            model: model.clone(),
            spec: spec.clone(),
            value_rank,
            mechanisms,
            index,
            features,
            leq,
        })),
    })
}

impl DerivedOrder {
    fn features(&self, world: &World) -> Result<Vec<usize>, NormalityError> {
        let mut out = Vec::new();
        for ranking in &self.spec.values {
            let v = world.get(&self.model, ranking.var);
            let rank = self.value_rank[&(ranking.var, v)];
            if rank > 0 {
                out.push(self.index[&Feature::Value { var: ranking.var, rank }]);
            }
        }
        if !self.mechanisms.is_empty() {
            let env = self.model.env_of_world(world);
            for m in &self.mechanisms {
                let rank = self.behavior_rank(m, world, &env)?;
                if rank > 0 {
                    out.push(self.index[&Feature::Behavior { var: m.var, rank }]);
                }
            }
        }
        Ok(out)
    }

    fn behavior_rank(&self, m: &Mechanism, world: &World, env: &[Value]) -> Result<usize, NormalityError> {
        let actual = env[m.var.0];
        m.rules
            .iter()
            .position(|rule| match rule {
                RuleKind::Anything => true,
                RuleKind::Expr(e) => e.eval(env).map(|v| v == actual).unwrap_or(false),
            })
            .ok_or_else(|| NormalityError::NoConsistentBehavior {
                var: self.model.name(m.var).to_string(),
                world: world.display(&self.model).to_string(),
            })
    }

    /// Injection of `from` into `into` along `leq`, via augmenting paths.
    fn dominates(&self, from: &[usize], into: &[usize]) -> bool {
        if from.len() > into.len() {
            return false;
        }
        let mut owner: Vec<Option<usize>> = vec![None; into.len()];
        for (i, _) in from.iter().enumerate() {
            let mut visited = vec![false; into.len()];
            if !self.augment(i, from, into, &mut owner, &mut visited) {
                return false;
            }
        }
        true
    }

    fn augment(
        &self,
        i: usize,
        from: &[usize],
        into: &[usize],
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for (j, &g) in into.iter().enumerate() {
            if visited[j] || !self.leq[from[i]][g] {
                continue;
            }
            visited[j] = true;
            let free = match owner[j] {
                None => true,
                Some(k) => self.augment(k, from, into, owner, visited),
            };
            if free {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    fn describe(&self, f: Feature, world: &World) -> String {
        match f {
            Feature::Value { var, .. } => {
                format!("{}={}", self.model.name(var), world.get(&self.model, var))
            }
            Feature::Behavior { var, rank } => {
                let m = self.mechanisms.iter().find(|m| m.var == var).expect("mechanism");
                format!("{}: {}", self.model.name(var), m.labels[rank])
            }
        }
    }
}

/// Most typical declared behavior consistent with each ranked variable's value
/// in `world`. Variables covered by the implicit equation-conformance ranking
/// are included.
pub fn assign_behavior(
    model: &CausalModel,
    spec: &TypicalitySpec,
    world: &World,
) -> Result<Vec<(VarId, String)>, NormalityError> {
    let order = derive_from_typicality(model, spec)?;
    order.check_arity(world)?;
    let OrderKind::Derived(d) = &order.kind else {
        unreachable!("derive_from_typicality builds a derived order");
    };
    let env = model.env_of_world(world);
    d.mechanisms.iter().map(|m| Ok((m.var, m.labels[d.behavior_rank(m, world, &env)?].clone()))).collect()
}

/// Warshall closure of a square boolean relation, in place.
fn transitive_closure(rel: &mut [Vec<bool>]) {
    for m in 0..rel.len() {
        let through = rel[m].clone();
        for row in rel.iter_mut() {
            if row[m] {
                for (cell, &reach) in row.iter_mut().zip(&through) {
                    *cell |= reach;
                }
            }
        }
    }
}
