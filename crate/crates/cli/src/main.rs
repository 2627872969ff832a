//! `gradcause`: decide and grade actual causes in model files.

mod render;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gradcause::dsl::{parse_model, parse_query, ParsedDocument, Query, QueryKind};
use gradcause::{execute, CheckError, Mode, QueryError, RunOptions, SearchLimits};

const EXIT_USAGE: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "gradcause", version, about = "Actual and graded causation in structural causal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a model file.
    Validate(Common),
    /// Print the actual world of a context.
    Solve(Common),
    /// Evaluate a causal formula.
    Satisfies(Common),
    /// Decide whether a conjunction of events is a cause.
    Check(Common),
    /// List every witness for a candidate cause.
    Witnesses(Common),
    /// Compare candidate causes by their best witnesses.
    Grade(Common),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Validate,
    Solve,
    Satisfies,
    Check,
    Witnesses,
    Grade,
}

#[derive(clap::Args)]
struct Common {
    /// Model file.
    file: PathBuf,
    /// Query text; the subcommand keyword may be omitted. Without a query,
    /// the file's own queries of the matching kind are run.
    query: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Hp)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest number of (W, w, x') settings one search may consider.
    #[arg(long, value_name = "N")]
    max_search: Option<u128>,
    /// Context for queries that name none.
    #[arg(long, value_name = "NAME")]
    context: Option<String>,
    /// Largest conjunction size when listing all causes.
    #[arg(long, value_name = "K")]
    all_causes: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Hp,
    Extended,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Format {
    Text,
    Json,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        let code = match &e {
            QueryError::Check(CheckError::ResourceLimit { .. }) => EXIT_LIMIT,
            QueryError::Check(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, common) = match cli.command {
        Command::Validate(c) => (Kind::Validate, c),
        Command::Solve(c) => (Kind::Solve, c),
        Command::Satisfies(c) => (Kind::Satisfies, c),
        Command::Check(c) => (Kind::Check, c),
        Command::Witnesses(c) => (Kind::Witnesses, c),
        Command::Grade(c) => (Kind::Grade, c),
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| run(kind, &common)));
    match result {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => {
            eprintln!("error: internal invariant failure");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Validate => "validate",
            Kind::Solve => "solve",
            Kind::Satisfies => "satisfies",
            Kind::Check => "cause",
            Kind::Witnesses => "witnesses",
            Kind::Grade => "grade",
        }
    }

    fn accepts(self, kind: &QueryKind) -> bool {
        matches!(
            (self, kind),
            (Kind::Solve, QueryKind::Solve)
                | (Kind::Satisfies, QueryKind::Satisfies(_))
                | (Kind::Check, QueryKind::Cause { .. } | QueryKind::Causes { .. })
                | (Kind::Witnesses, QueryKind::Witnesses { .. } | QueryKind::Cause { .. })
                | (Kind::Grade, QueryKind::Grade { .. })
        )
    }
}

const KEYWORDS: [&str; 6] = ["cause", "witnesses", "grade", "causes", "solve", "satisfies"];

fn run(command: Kind, common: &Common) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", common.file.display())))?;
    let doc = parse_model(&text).map_err(|e| Failure::usage(format!("{}:{e}", common.file.display())))?;

    if let Some(name) = &common.context {
        if doc.context(name).is_none() {
            return Err(Failure::usage(format!("unknown context `{name}`")));
        }
    }
    let mode = match common.mode {
        ModeArg::Hp => Mode::Hp,
        ModeArg::Extended if doc.order().is_none() => {
            return Err(QueryError::NoOrder.into());
        }
        ModeArg::Extended => Mode::Extended,
    };

    if command == Kind::Validate {
        if let Some(q) = &common.query {
            parse_query(q, &doc).map_err(|e| Failure::usage(format!("query:{e}")))?;
        }
        return Ok(render::validation(&doc, common.format));
    }

    let queries = select_queries(command, common, &doc)?;
    let opts = RunOptions {
        mode,
        limits: common.max_search.map_or_else(SearchLimits::default, |n| SearchLimits { max_candidates: n }),
        context: common.context.as_deref(),
        max_conjuncts: common.all_causes.unwrap_or(1),
    };
    let mut results = Vec::new();
    for q in &queries {
        let outcome = execute(&doc, q, opts)?;
        let (ctx, _) = gradcause::resolve_context(&doc, q, opts.context)?;
        results.push(render::Answered { query: q, context: ctx, outcome });
    }
    render::answers(&doc, mode, &results, command == Kind::Witnesses, common.format)
        .map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })
}

fn select_queries(command: Kind, common: &Common, doc: &ParsedDocument) -> Result<Vec<Query>, Failure> {
    if let Some(q) = &common.query {
        let first = q.split_whitespace().next().unwrap_or("");
        let text = if KEYWORDS.contains(&first) {
            q.clone()
        } else if command == Kind::Check && common.all_causes.is_some() {
            format!("causes {q}")
        } else {
            format!("{} {q}", command.keyword())
        };
        let parsed = parse_query(&text, doc).map_err(|e| Failure::usage(format!("query:{e}")))?;
        if let Some(bad) = parsed.iter().find(|q| !command.accepts(&q.kind)) {
            return Err(Failure::usage(format!(
                "`{}` queries are not answered by this subcommand",
                bad.kind.keyword()
            )));
        }
        return Ok(parsed);
    }
    let mut own: Vec<Query> = doc.queries.iter().filter(|q| command.accepts(&q.kind)).cloned().collect();
    if command == Kind::Witnesses && own.iter().any(|q| matches!(q.kind, QueryKind::Witnesses { .. })) {
        own.retain(|q| matches!(q.kind, QueryKind::Witnesses { .. }));
    }
    if !own.is_empty() {
        return Ok(own);
    }
    if command == Kind::Solve {
        // Every context, or just the selected one.
        let names: Vec<&str> = match &common.context {
            Some(n) => vec![n.as_str()],
            None => doc.contexts.iter().map(|(n, _)| n.as_str()).collect(),
        };
        let text: Vec<String> = names.iter().map(|n| format!("solve @ {n}")).collect();
        return parse_query(&text.join("\n"), doc).map_err(|e| Failure::usage(e.to_string()));
    }
    Err(Failure::usage(format!("{} declares no `{}` queries", common.file.display(), command.keyword())))
}
