//! Normality-filtered causes, best witnesses and grading of candidate causes.

use std::fmt;

use crate::formula::BooleanFormula;
use crate::hp::{CandidateCause, CheckError, Search, SearchLimits, WitnessRecord};
use crate::model::{CausalModel, Context, World};
use crate::normality::{Normality, NormalityError, NormalityOrder};

/// A causal model together with a normality order over its worlds.
#[derive(Debug, Clone)]
pub struct ExtendedCausalModel {
    pub base: CausalModel,
    pub order: NormalityOrder,
}

impl ExtendedCausalModel {
    pub fn new(base: CausalModel, order: NormalityOrder) -> Self {
        ExtendedCausalModel { base, order }
    }

    /// The model with every world equally normal.
    pub fn trivial(base: CausalModel) -> Self {
        let order = NormalityOrder::trivial(&base);
        ExtendedCausalModel { base, order }
    }
}

/// Which cause test a verdict answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Plain HP: every witness is admissible.
    Hp,
    /// Witnesses must be at least as normal as the actual world.
    Extended,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Hp => "hp",
            Mode::Extended => "extended",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The first clause that failed for a verdict in its own mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    Ac1,
    Ac2,
    Ac3,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::Ac1 => "AC1",
            Clause::Ac2 => "AC2",
            Clause::Ac3 => "AC3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseVerdict {
    pub cause: CandidateCause,
    pub effect: BooleanFormula,
    pub mode: Mode,
    pub actual_world: World,
    pub ac1: bool,
    pub hp_witnesses: Vec<WitnessRecord>,
    /// Relation of each HP witness world to the actual world; `None` in HP mode.
    pub relations: Vec<Option<Normality>>,
    pub admissible_witnesses: Vec<WitnessRecord>,
    /// AC3 in this verdict's mode; `None` when AC1 or AC2 already failed.
    pub ac3: Option<bool>,
    /// A strict sub-conjunction that satisfies AC1 and AC2 in this mode.
    pub ac3_violation: Option<CandidateCause>,
    pub is_cause_hp: bool,
    pub is_cause_extended: bool,
    /// Maximal admissible witness worlds, first appearance order.
    pub best_witnesses: Vec<World>,
    pub failed: Option<Clause>,
}

impl CauseVerdict {
    /// The verdict in this verdict's own mode.
    pub fn is_cause(&self) -> bool {
        match self.mode {
            Mode::Hp => self.is_cause_hp,
            Mode::Extended => self.is_cause_extended,
        }
    }
}

/// Extended verdict; plain-HP fields are filled in as well.
pub fn is_extended_cause(
    ext: &ExtendedCausalModel,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<CauseVerdict, CheckError> {
    evaluate(&ext.base, Some(&ext.order), context, cause, effect, Mode::Extended, limits)
}

fn has_witness(
    model: &CausalModel,
    order: Option<&NormalityOrder>,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<bool, CheckError> {
    let mut search = Search::new(model, context, cause.conjuncts(), effect);
    if !search.ac1() {
        return Ok(false);
    }
    let found = search.run(order, true, limits)?;
    Ok(found.iter().any(|(_, rel)| rel.is_none_or(Normality::is_at_least)))
}

/// First strict sub-conjunction satisfying AC1 and AC2 (normality-filtered
/// when `order` is given).
fn ac3_violation(
    model: &CausalModel,
    order: Option<&NormalityOrder>,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    limits: SearchLimits,
) -> Result<Option<CandidateCause>, CheckError> {
    for sub in cause.strict_subsets() {
        if has_witness(model, order, context, &sub, effect, limits)? {
            return Ok(Some(sub));
        }
    }
    Ok(None)
}

pub(crate) fn evaluate(
    model: &CausalModel,
    order: Option<&NormalityOrder>,
    context: &Context,
    cause: &CandidateCause,
    effect: &BooleanFormula,
    mode: Mode,
    limits: SearchLimits,
) -> Result<CauseVerdict, CheckError> {
    crate::hp::check_inputs(model, cause.conjuncts(), effect)?;
    let mut search = Search::new(model, context, cause.conjuncts(), effect);
    let actual_world = search.actual_world();
    let ac1 = search.ac1();
    let filter = match mode {
        Mode::Hp => None,
        Mode::Extended => Some(order.expect("extended mode needs an order")),
    };
    let found = if ac1 { search.run(filter, false, limits)? } else { Vec::new() };
    let (hp_witnesses, relations): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let admissible_witnesses: Vec<WitnessRecord> = hp_witnesses
        .iter()
        .zip(&relations)
        .filter(|(_, rel)| rel.is_none_or(Normality::is_at_least))
        .map(|(w, _)| w.clone())
        .collect();

    let hp_ac2 = !hp_witnesses.is_empty();
    let ext_ac2 = !admissible_witnesses.is_empty();

    let hp_violation =
        if ac1 && hp_ac2 { Some(ac3_violation(model, None, context, cause, effect, limits)?) } else { None };
    let is_cause_hp = matches!(hp_violation, Some(None));

    let (ac3, ac3_violation_found, is_cause_extended) = match mode {
        Mode::Hp => (hp_violation.as_ref().map(Option::is_none), hp_violation.flatten(), is_cause_hp),
        Mode::Extended => {
            let ext_violation =
                if ac1 && ext_ac2 { Some(ac3_violation(model, filter, context, cause, effect, limits)?) } else { None };
            let is_ext = matches!(ext_violation, Some(None));
            (ext_violation.as_ref().map(Option::is_none), ext_violation.flatten(), is_ext)
        }
    };

    let mode_ac2 = match mode {
        Mode::Hp => hp_ac2,
        Mode::Extended => ext_ac2,
    };
    let failed = if !ac1 {
        Some(Clause::Ac1)
    } else if !mode_ac2 {
        Some(Clause::Ac2)
    } else if ac3 == Some(false) {
        Some(Clause::Ac3)
    } else {
        None
    };

    let worlds: Vec<World> = admissible_witnesses.iter().map(|w| w.witness_world.clone()).collect();
    let best = match filter {
        Some(o) => best_witnesses(o, &worlds)?,
        None => dedup(&worlds),
    };

    Ok(CauseVerdict {
        cause: cause.clone(),
        effect: effect.clone(),
        mode,
        actual_world,
        ac1,
        hp_witnesses,
        relations,
        admissible_witnesses,
        ac3,
        ac3_violation: ac3_violation_found,
        is_cause_hp,
        is_cause_extended,
        best_witnesses: best,
        failed,
    })
}

fn dedup(worlds: &[World]) -> Vec<World> {
    let mut out: Vec<World> = Vec::new();
    for w in worlds {
        if !out.contains(w) {
            out.push(w.clone());
        }
    }
    out
}

/// Worlds not strictly dominated by another world in the list; duplicates
/// collapsed, first appearance order kept.
pub fn best_witnesses(order: &NormalityOrder, worlds: &[World]) -> Result<Vec<World>, NormalityError> {
    let distinct = dedup(worlds);
    let mut best = Vec::new();
    for w in &distinct {
        let mut dominated = false;
        for other in &distinct {
            if order.compare(other, w)? == Normality::MoreNormal {
                dominated = true;
                break;
            }
        }
        if !dominated {
            best.push(w.clone());
        }
    }
    Ok(best)
}

/// Relation of one candidate to another in a grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grade {
    Above,
    Below,
    Equal,
    Incomparable,
}

impl Grade {
    pub fn flip(self) -> Self {
        match self {
            Grade::Above => Grade::Below,
            Grade::Below => Grade::Above,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grade::Above => "above",
            Grade::Below => "below",
            Grade::Equal => "equal",
            Grade::Incomparable => "incomparable",
        }
    }
}

/// Every `b2` in `second` is matched by some `b1` in `first` with `b1 >= b2`.
fn covers(order: &NormalityOrder, first: &[World], second: &[World]) -> Result<bool, NormalityError> {
    for b2 in second {
        let mut matched = false;
        for b1 in first {
            if order.at_least_as_normal(b1, b2)? {
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

fn strictly_beats(order: &NormalityOrder, first: &[World], second: &[World]) -> Result<bool, NormalityError> {
    for b1 in first {
        for b2 in second {
            if order.compare(b1, b2)? == Normality::MoreNormal {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Compares two candidates by their best witnesses. Non-causes sit in a tier
/// below every cause and are equal to each other.
pub fn grade_pair(order: &NormalityOrder, c1: &CauseVerdict, c2: &CauseVerdict) -> Result<Grade, NormalityError> {
    match (c1.is_cause(), c2.is_cause()) {
        (false, false) => return Ok(Grade::Equal),
        (true, false) => return Ok(Grade::Above),
        (false, true) => return Ok(Grade::Below),
        (true, true) => {}
    }
    let (b1, b2) = (&c1.best_witnesses, &c2.best_witnesses);
    let forward = covers(order, b1, b2)?;
    let backward = covers(order, b2, b1)?;
    Ok(match (forward, backward) {
        (true, true) => Grade::Equal,
        (true, false) if strictly_beats(order, b1, b2)? => Grade::Above,
        (false, true) if strictly_beats(order, b2, b1)? => Grade::Below,
        _ => Grade::Incomparable,
    })
}

/// Verdicts for each candidate and their pairwise grades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub verdicts: Vec<CauseVerdict>,
    /// `grades[i][j]` is how candidate `i` compares to candidate `j`.
    pub grades: Vec<Vec<Grade>>,
}

impl Grading {
    pub fn grade(&self, i: usize, j: usize) -> Grade {
        self.grades[i][j]
    }
}

/// Checks each candidate in `mode` and grades every pair. In HP mode the
/// trivial order is used, so all causes grade equal.
pub fn grade_candidates(
    ext: &ExtendedCausalModel,
    context: &Context,
    candidates: &[CandidateCause],
    effect: &BooleanFormula,
    mode: Mode,
    limits: SearchLimits,
) -> Result<Grading, CheckError> {
    let verdicts = candidates
        .iter()
        .map(|c| evaluate(&ext.base, Some(&ext.order), context, c, effect, mode, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let trivial;
    let order = match mode {
        Mode::Extended => &ext.order,
        Mode::Hp => {
            trivial = NormalityOrder::trivial(&ext.base);
            &trivial
        }
    };
    let n = verdicts.len();
    let mut grades = vec![vec![Grade::Equal; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let g = grade_pair(order, &verdicts[i], &verdicts[j])?;
            grades[i][j] = g;
            grades[j][i] = g.flip();
        }
    }
    Ok(Grading { verdicts, grades })
}
