//! Bundled example models with their expected verdicts.

use crate::dsl::{parse_model, parse_query, ParseErrors, ParsedDocument};
use crate::graded::{Grade, Mode};
use crate::query::{execute, Outcome, QueryError, RunOptions};

/// What a query should produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    /// `solve`: the actual world, as displayed.
    World(&'static str),
    /// `satisfies`.
    Holds(bool),
    /// `cause`: the verdict in the expectation's mode.
    Cause(bool),
    /// `grade` over two candidates: how the first compares to the second.
    Grade(Grade),
    /// `witnesses`: the best witness worlds, as displayed.
    BestWitnesses(&'static [&'static str]),
    /// `witnesses`: this world is among the best witnesses.
    AmongBest(&'static str),
}

#[derive(Debug, Clone)]
pub struct Expectation {
    pub query: &'static str,
    pub mode: Mode,
    pub expected: Expected,
    /// The story-level claim this verdict encodes.
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub text: &'static str,
    pub expectations: Vec<Expectation>,
}

impl Fixture {
    pub fn parse(&self) -> Result<ParsedDocument, ParseErrors> {
        parse_model(self.text)
    }
}

/// One expectation that did not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub fixture: &'static str,
    pub query: &'static str,
    pub mode: Mode,
    pub expected: String,
    pub got: String,
}

use Expected::*;
use Mode::{Extended, Hp};

fn e(query: &'static str, mode: Mode, expected: Expected, note: &'static str) -> Expectation {
    Expectation { query, mode, expected, note }
}

macro_rules! fixture {
    ($name:literal, [$($exp:expr),* $(,)?]) => {
        Fixture {
            name: $name,
            file: concat!($name, ".scm.txt"),
            text: include_str!(concat!("../../../fixtures/", $name, ".scm.txt")),
            expectations: vec![$($exp),*],
        }
    };
}

pub fn load_corpus() -> Vec<Fixture> {
    vec![
        fixture!(
            "forest_fire",
            [
                e("solve @ u11", Hp, World("(L=1, M=1, F=1)"), "both lightning and match occur"),
                e("satisfies [M<-0](F=1) @ u11", Hp, Holds(true), "lightning alone still burns the forest"),
                e("cause L=1 for F=1 @ u11", Hp, Cause(true), "lightning is a cause"),
                e("cause M=1 for F=1 @ u11", Hp, Cause(true), "the match is a cause"),
                e("cause L=1 & M=1 for F=1 @ u11", Hp, Cause(false), "the conjunction is not minimal"),
                e("cause L=1 for F=1 @ u11", Extended, Cause(true), "lightning remains a cause"),
                e("grade {L=1, M=1} for F=1 @ u11", Extended, Grade(Grade::Equal), "symmetric roles"),
            ]
        ),
        fixture!(
            "forest_fire_conjunctive",
            [
                e("cause L=1 for F=1 @ u11", Hp, Cause(true), "but-for cause"),
                e("cause M=1 for F=1 @ u11", Hp, Cause(true), "but-for cause"),
                e("cause L=1 & M=1 for F=1 @ u11", Hp, Cause(false), "the conjunction is not minimal"),
                e("cause L=1 for F=1 @ u11", Extended, Cause(true), "the witness drops an atypical value"),
            ]
        ),
        fixture!(
            "poisoning",
            [
                e("solve @ u11", Hp, World("(A=1, R=1, B=0, D=1)"), "assassin poisons, backup stands by"),
                e("cause A=1 for D=1 @ u11", Hp, Cause(true), "the assassin is a cause"),
                e("cause R=1 for D=1 @ u11", Hp, Cause(false), "the backup's readiness is not"),
                e("cause A=1 for D=1 @ u11", Extended, Cause(true), "the assassin remains a cause"),
            ]
        ),
        fixture!(
            "preemption",
            [
                e("cause A=1 for D=1 @ u1", Hp, Cause(true), "the preempting poisoner is a cause"),
                e("cause A=1 for D=1 @ u1", Extended, Cause(true), "its witness is more normal"),
                e("witnesses A=1 for D=1 @ u1", Extended, BestWitnesses(&["(A=0, B=0, D=0)"]), "nobody poisons"),
            ]
        ),
        fixture!(
            "bogus_prevention",
            [
                e("cause B=1 for VS=1 @ u01", Hp, Cause(true), "plain HP counts the antidote"),
                e("cause A=0 for VS=1 @ u01", Hp, Cause(true), "plain HP counts the absent poison"),
                e("cause B=1 for VS=1 @ u01", Extended, Cause(false), "the antidote is not a cause"),
                e("cause A=0 for VS=1 @ u01", Extended, Cause(false), "the absent poison is not a cause"),
            ]
        ),
        fixture!(
            "bogus_prevention_pn",
            [e("cause B=1 for VS=1 @ u01", Hp, Cause(false), "the antidote neutralizes nothing"),]
        ),
        fixture!(
            "omission_a",
            [
                e("cause H=1 for D=1 @ u10", Hp, Cause(true), "heat is an HP cause"),
                e("cause W=0 for D=1 @ u10", Hp, Cause(true), "the omission is an HP cause"),
                e("cause H=1 for D=1 @ u10", Extended, Cause(true), "heat is a cause"),
                e("cause W=0 for D=1 @ u10", Extended, Cause(false), "omissions are never causes"),
                e("grade {H=1, W=0} for D=1 @ u10", Extended, Grade(Grade::Above), "only heat is a cause"),
            ]
        ),
        fixture!(
            "omission_b",
            [
                e("cause H=1 for D=1 @ u10", Extended, Cause(true), "heat is a cause"),
                e("cause W=0 for D=1 @ u10", Extended, Cause(true), "the omission is a cause"),
                e("grade {H=1, W=0} for D=1 @ u10", Extended, Grade(Grade::Equal), "equally good causes"),
            ]
        ),
        fixture!(
            "omission_c",
            [
                e("cause H=1 for D=1 @ u10", Extended, Cause(true), "heat is a cause"),
                e("cause W=0 for D=1 @ u10", Extended, Cause(true), "the omission is a cause"),
                e("grade {H=1, W=0} for D=1 @ u10", Extended, Grade(Grade::Above), "heat is the better cause"),
            ]
        ),
        fixture!(
            "omission_d",
            [
                e("cause H=1 for D=1 @ u10", Extended, Cause(true), "heat is a cause"),
                e("cause W=0 for D=1 @ u10", Extended, Cause(true), "neglecting a duty is a cause"),
                e("grade {H=1, W=0} for D=1 @ u10", Extended, Grade(Grade::Incomparable), "different norms violated"),
            ]
        ),
        fixture!(
            "knobe_pens",
            [
                e("cause PT=1 for PO=1 @ u11", Extended, Cause(true), "the professor is a cause"),
                e("cause AT=1 for PO=1 @ u11", Extended, Cause(true), "the administrator is a cause"),
                e(
                    "witnesses PT=1 for PO=1 @ u11",
                    Extended,
                    BestWitnesses(&["(PT=0, AT=1, PO=0)"]),
                    "only the professor refrains"
                ),
                e(
                    "grade {PT=1, AT=1} for PO=1 @ u11",
                    Extended,
                    Grade(Grade::Above),
                    "the norm violator is the better cause"
                ),
            ]
        ),
        fixture!(
            "background",
            [
                e("cause M=1 for F=1 @ u11", Hp, Cause(true), "the match is an HP cause"),
                e("cause O=1 for F=1 @ u11", Hp, Cause(true), "oxygen is an HP cause"),
                e("cause M=1 for F=1 @ u11", Extended, Cause(true), "the match is a cause"),
                e("cause O=1 for F=1 @ u11", Extended, Cause(false), "oxygen is a background condition"),
            ]
        ),
        fixture!(
            "faulkner_chain",
            [
                e("cause M=1 for ES=1 @ actual", Extended, Cause(true), "lighting the match is a cause"),
                e("cause LL=1 for ES=1 @ actual", Extended, Cause(true), "the burning lining is a cause"),
                e(
                    "witnesses LL=1 for ES=1 @ actual",
                    Extended,
                    AmongBest("(M=0, R=0, RI=0, F=0, SD=0, LI=0, LL=0, EU=1, ES=0)"),
                    "only the explosive stays",
                ),
                e(
                    "grade {LL=1, M=1} for ES=1 @ actual",
                    Extended,
                    Grade(Grade::Above),
                    "the proximate link is the better cause"
                ),
            ]
        ),
        fixture!(
            "legal_careless",
            [
                e("solve @ careless", Hp, World("(BM=0, BC=1, BT=1, AN=1, AS=1, F=1)"), "careless throw"),
                e("cause AN=1 for F=1 @ careless", Extended, Cause(true), "Anne's negligence is a cause"),
                e("cause BC=1 for F=1 @ careless", Extended, Cause(true), "Bob's carelessness is a cause"),
                e(
                    "grade {AN=1, BC=1} for F=1 @ careless",
                    Extended,
                    Grade(Grade::Above),
                    "negligence outranks carelessness"
                ),
            ]
        ),
        fixture!(
            "legal_malicious",
            [
                e("cause BM=1 for F=1 @ malicious", Extended, Cause(true), "Bob's malice is a cause"),
                e("cause AN=1 for F=1 @ malicious", Extended, Cause(true), "Anne's negligence is a cause"),
                e(
                    "grade {BM=1, AN=1} for F=1 @ malicious",
                    Extended,
                    Grade(Grade::Above),
                    "malice supersedes negligence"
                ),
            ]
        ),
        fixture!(
            "short_circuit",
            [
                e("cause A=1 for VS=1 @ u1", Hp, Cause(true), "plain HP counts the antidote"),
                e("cause A=1 for VS=1 @ u1", Extended, Cause(false), "the antidote prevents only its own threat"),
            ]
        ),
        fixture!(
            "short_circuit_intentions",
            [
                e("cause A=1 for VS=1 @ u11", Hp, Cause(true), "plain HP counts the antidote"),
                e("cause A=1 for VS=1 @ u11", Extended, Cause(false), "no witness is as normal as the actual world"),
            ]
        ),
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    load_corpus().into_iter().find(|f| f.name == name)
}

#[derive(Debug)]
pub enum VerifyError {
    Parse(ParseErrors),
    Query { query: &'static str, error: String },
}

/// Runs every expectation of `fixture` and reports those that fail.
pub fn verify(fixture: &Fixture) -> Result<Vec<Mismatch>, VerifyError> {
    let doc = fixture.parse().map_err(VerifyError::Parse)?;
    let mut out = Vec::new();
    for exp in &fixture.expectations {
        let got = evaluate(&doc, exp).map_err(|error| VerifyError::Query { query: exp.query, error })?;
        let want = render(&exp.expected);
        if got != want {
            out.push(Mismatch { fixture: fixture.name, query: exp.query, mode: exp.mode, expected: want, got });
        }
    }
    Ok(out)
}

fn evaluate(doc: &ParsedDocument, exp: &Expectation) -> Result<String, String> {
    let queries = parse_query(exp.query, doc).map_err(|e| e.to_string())?;
    let [query] = queries.as_slice() else {
        return Err("expected exactly one query".to_string());
    };
    let opts = RunOptions { mode: exp.mode, ..RunOptions::default() };
    let outcome = execute(doc, query, opts).map_err(|e: QueryError| e.to_string())?;
    let m = &doc.model;
    Ok(match (&exp.expected, outcome) {
        (World(_), Outcome::Solve(w)) => w.display(m).to_string(),
        (Holds(_), Outcome::Satisfies(b)) => b.to_string(),
        (Cause(_), Outcome::Verdict(v)) => v.is_cause().to_string(),
        (BestWitnesses(_), Outcome::Verdict(v)) => {
            let ws: Vec<String> = v.best_witnesses.iter().map(|w| w.display(m).to_string()).collect();
            ws.join(" ")
        }
        (AmongBest(want), Outcome::Verdict(v)) => {
            let found = v.best_witnesses.iter().any(|w| w.display(m).to_string() == *want);
            if found {
                want.to_string()
            } else {
                format!("absent from {} best witnesses", v.best_witnesses.len())
            }
        }
        (Grade(_), Outcome::Grading(g)) if g.verdicts.len() == 2 => g.grade(0, 1).as_str().to_string(),
        (_, other) => return Err(format!("query produced an unexpected outcome: {other:?}")),
    })
}

fn render(expected: &Expected) -> String {
    match expected {
        World(w) => w.to_string(),
        Holds(b) | Cause(b) => b.to_string(),
        Grade(g) => g.as_str().to_string(),
        BestWitnesses(ws) => ws.join(" "),
        AmongBest(w) => w.to_string(),
    }
}
