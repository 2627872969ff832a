//! Text format for models, normality declarations, contexts and queries.
//!
//! The format is line oriented; `#` starts a comment and newlines inside
//! brackets are ignored.
//!
//! ```text
//! exo UL : {0, 1}
//! exo UM : {0, 1}
//! var L : {0, 1} = UL
//! var M : {0, 1} = UM
//! var F : {0, 1} = max(L, M)
//! typical L = 0 > 1
//! context u11 : UL=1, UM=1
//! cause L=1 for F=1 @ u11
//! ```
//!
//! Normality is given either by typicality declarations (`typical`,
//! `severity`, `mechanism`, `behavior`) or by explicit `norm` judgements,
//! not both.

mod lexer;
mod parser;
mod printer;
mod resolve;

use std::fmt;

use crate::formula::{BooleanFormula, CausalFormula};
use crate::graded::ExtendedCausalModel;
use crate::hp::CandidateCause;
use crate::model::{CausalModel, Context, World};
use crate::normality::{Judgement, NormalityOrder, TypicalitySpec};

pub use printer::{print_document, print_query};

/// Location of a diagnostic. `line` and `column` are 1-based (columns count
/// characters); `start..end` are byte offsets into the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: SourceSpan,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic { span, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)
    }
}

/// Nonempty list of diagnostics, in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

/// Whether to report every diagnostic or stop at the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMode {
    FirstError,
    #[default]
    AllErrors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    Cause {
        cause: CandidateCause,
        effect: BooleanFormula,
    },
    Witnesses {
        cause: CandidateCause,
        effect: BooleanFormula,
    },
    Grade {
        candidates: Vec<CandidateCause>,
        effect: BooleanFormula,
    },
    /// All causes up to a size chosen by the caller.
    Causes {
        effect: BooleanFormula,
    },
    Solve,
    Satisfies(CausalFormula),
}

impl QueryKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            QueryKind::Cause { .. } => "cause",
            QueryKind::Witnesses { .. } => "witnesses",
            QueryKind::Grade { .. } => "grade",
            QueryKind::Causes { .. } => "causes",
            QueryKind::Solve => "solve",
            QueryKind::Satisfies(_) => "satisfies",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    /// Named context, if the query gives one.
    pub context: Option<String>,
    pub kind: QueryKind,
    pub span: SourceSpan,
}

/// A fully resolved document.
#[derive(Debug, Clone)]
pub struct ParsedDocument {
    pub model: CausalModel,
    pub typicality: Option<TypicalitySpec>,
    pub explicit_norms: Option<Vec<(World, Judgement, World)>>,
    pub contexts: Vec<(String, Context)>,
    pub queries: Vec<Query>,
    order: Option<NormalityOrder>,
}

impl ParsedDocument {
    pub fn context(&self, name: &str) -> Option<&Context> {
        self.contexts.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// The declared normality order, if the document declares one.
    pub fn order(&self) -> Option<&NormalityOrder> {
        self.order.as_ref()
    }

    /// The model paired with its declared order, if any.
    pub fn extended(&self) -> Option<ExtendedCausalModel> {
        self.order.as_ref().map(|o| ExtendedCausalModel::new(self.model.clone(), o.clone()))
    }
}

/// Parses a document, reporting all diagnostics.
pub fn parse_model(text: &str) -> Result<ParsedDocument, ParseErrors> {
    parse_model_with(text, ErrorMode::AllErrors)
}

pub fn parse_model_with(text: &str, mode: ErrorMode) -> Result<ParsedDocument, ParseErrors> {
    let (tokens, mut errors) = lexer::lex(text);
    let (stmts, syntax) = parser::parse(&tokens, false);
    errors.extend(syntax);
    let result = if errors.is_empty() { resolve::document(&stmts) } else { Err(errors) };
    result.map_err(|d| finish(d, mode))
}

/// Parses query statements against an already parsed document.
pub fn parse_query(text: &str, doc: &ParsedDocument) -> Result<Vec<Query>, ParseErrors> {
    let (tokens, mut errors) = lexer::lex(text);
    let (stmts, syntax) = parser::parse(&tokens, true);
    errors.extend(syntax);
    if !errors.is_empty() {
        return Err(finish(errors, ErrorMode::AllErrors));
    }
    resolve::queries(&stmts, doc).map_err(|d| finish(d, ErrorMode::AllErrors))
}

fn finish(mut diagnostics: Vec<Diagnostic>, mode: ErrorMode) -> ParseErrors {
    diagnostics.sort_by_key(|d| (d.span.start, d.span.end));
    if mode == ErrorMode::FirstError {
        diagnostics.truncate(1);
    }
    ParseErrors { diagnostics }
}
