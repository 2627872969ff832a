//! Expression language for structural equation bodies.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{Value, VarId};

/// Body of a structural equation.
///
/// Arithmetic is over `i64` with overflow treated as an evaluation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Value),
    Var(VarId),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `ite(lhs == rhs, then, otherwise)`
    Ite {
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
    /// Explicit lookup table from argument tuples to values.
    Table {
        args: Vec<VarId>,
        rows: BTreeMap<Vec<Value>, Value>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("arithmetic overflow")]
    Overflow,
    #[error("no table row for arguments {0:?}")]
    MissingRow(Vec<Value>),
    #[error("min/max over an empty argument list")]
    EmptyAggregate,
}

impl Expr {
    pub fn var(id: VarId) -> Self {
        Expr::Var(id)
    }

    pub fn constant(v: Value) -> Self {
        Expr::Const(v)
    }

    /// Evaluates against a full assignment indexed by [`VarId`].
    pub fn eval(&self, env: &[Value]) -> Result<Value, EvalError> {
        match self {
            Expr::Const(v) => Ok(*v),
            Expr::Var(id) => Ok(env[id.0]),
            Expr::Min(items) => fold(items, env, Value::min),
            Expr::Max(items) => fold(items, env, Value::max),
            Expr::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?).ok_or(EvalError::Overflow),
            Expr::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?).ok_or(EvalError::Overflow),
            Expr::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?).ok_or(EvalError::Overflow),
            Expr::Ite { lhs, rhs, then, otherwise } => {
                if lhs.eval(env)? == rhs.eval(env)? {
                    then.eval(env)
                } else {
                    otherwise.eval(env)
                }
            }
            Expr::Table { args, rows } => {
                let key: Vec<Value> = args.iter().map(|a| env[a.0]).collect();
                rows.get(&key).copied().ok_or(EvalError::MissingRow(key))
            }
        }
    }

    /// Variables syntactically referenced by this expression.
    pub fn references(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(id) => {
                out.insert(*id);
            }
            Expr::Min(items) | Expr::Max(items) => {
                for item in items {
                    item.collect_refs(out);
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            Expr::Ite { lhs, rhs, then, otherwise } => {
                lhs.collect_refs(out);
                rhs.collect_refs(out);
                then.collect_refs(out);
                otherwise.collect_refs(out);
            }
            Expr::Table { args, .. } => out.extend(args.iter().copied()),
        }
    }

    /// Rewrites every variable reference through `f`.
    pub fn map_vars(&self, f: &impl Fn(VarId) -> VarId) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Var(id) => Expr::Var(f(*id)),
            Expr::Min(items) => Expr::Min(items.iter().map(|e| e.map_vars(f)).collect()),
            Expr::Max(items) => Expr::Max(items.iter().map(|e| e.map_vars(f)).collect()),
            Expr::Add(a, b) => Expr::Add(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Expr::Ite { lhs, rhs, then, otherwise } => Expr::Ite {
                lhs: Box::new(lhs.map_vars(f)),
                rhs: Box::new(rhs.map_vars(f)),
                then: Box::new(then.map_vars(f)),
                otherwise: Box::new(otherwise.map_vars(f)),
            },
            Expr::Table { args, rows } => {
                Expr::Table { args: args.iter().map(|a| f(*a)).collect(), rows: rows.clone() }
            }
        }
    }
}

fn fold(items: &[Expr], env: &[Value], op: fn(Value, Value) -> Value) -> Result<Value, EvalError> {
    let mut iter = items.iter();
    let first = iter.next().ok_or(EvalError::EmptyAggregate)?.eval(env)?;
    iter.try_fold(first, |acc, e| Ok(op(acc, e.eval(env)?)))
}
