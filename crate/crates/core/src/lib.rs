//! Actual causation over finite structural causal models, with normality
//! orderings over worlds and graded comparison of candidate causes.

pub mod corpus;
pub mod dsl;
pub mod expr;
pub mod formula;
pub mod graded;
pub mod hp;
pub mod iso;
pub mod model;
pub mod normality;
pub mod oracle;
mod product;
pub mod query;

pub use expr::{EvalError, Expr};
pub use formula::{satisfies, BooleanFormula, CausalFormula, FormulaError, PrimitiveEvent};
pub use graded::{
    best_witnesses, grade_candidates, grade_pair, is_extended_cause, CauseVerdict, Clause, ExtendedCausalModel, Grade,
    Grading, Mode,
};
pub use hp::{
    check_ac1, check_ac2, enumerate_for_events, enumerate_witnesses, find_all_causes, is_actual_cause, CandidateCause,
    CandidateError, CheckError, SearchLimits, WitnessRecord, WitnessSearch,
};
pub use model::{
    validate_model, CausalModel, Context, DependenceGraph, ModelDraft, ModelError, ValidationReport, Value, VarId,
    VarKind, Variable, Violation, World,
};
pub use normality::{
    assign_behavior, derive_from_typicality, explicit_order, Behavior, BehaviorRanking, Judgement, Normality,
    NormalityError, NormalityOrder, TypicalitySpec, ValueRanking,
};
pub use query::{execute, resolve_context, Outcome, QueryError, RunOptions};
