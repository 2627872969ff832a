//! Recursive-descent parser from tokens to an unresolved syntax tree.

use super::lexer::{Tok, Token};
use super::{Diagnostic, SourceSpan};
use crate::normality::Judgement;

/// Deepest nesting accepted in expressions and formulas.
const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone)]
pub(crate) struct Name {
    pub text: String,
    pub span: SourceSpan,
}

/// `name = value`
#[derive(Debug, Clone)]
pub(crate) struct Assign {
    pub name: Name,
    pub value: i64,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
pub(crate) enum AExpr {
    Int(i64),
    Name(Name),
    Min(Vec<AExpr>),
    Max(Vec<AExpr>),
    Add(Box<AExpr>, Box<AExpr>),
    Sub(Box<AExpr>, Box<AExpr>),
    Mul(Box<AExpr>, Box<AExpr>),
    Ite { lhs: Box<AExpr>, rhs: Box<AExpr>, then: Box<AExpr>, otherwise: Box<AExpr> },
    Table { args: Vec<Name>, rows: Vec<(Vec<i64>, i64, SourceSpan)> },
}

#[derive(Debug, Clone)]
pub(crate) enum AFormula {
    Event(Assign),
    NotEvent(Assign),
    Not(Box<AFormula>),
    And(Box<AFormula>, Box<AFormula>),
    Or(Box<AFormula>, Box<AFormula>),
}

#[derive(Debug, Clone)]
pub(crate) enum AQueryKind {
    Cause(Vec<Assign>, AFormula),
    Witnesses(Vec<Assign>, AFormula),
    Grade(Vec<Vec<Assign>>, AFormula),
    Causes(AFormula),
    Solve,
    Satisfies(Vec<Assign>, AFormula),
}

#[derive(Debug, Clone)]
pub(crate) struct AQuery {
    pub kind: AQueryKind,
    pub context: Option<Name>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
pub(crate) enum Stmt {
    Exo { name: Name, range: Vec<i64>, span: SourceSpan },
    Var { name: Name, range: Vec<i64>, body: AExpr, span: SourceSpan },
    Typical { name: Name, values: Vec<i64>, span: SourceSpan },
    Severity { events: Vec<Assign>, span: SourceSpan },
    Mechanism { on: bool, span: SourceSpan },
    Behavior { name: Name, rules: Vec<(String, AExpr)>, span: SourceSpan },
    Norm { worlds: Vec<(Vec<Assign>, SourceSpan)>, rels: Vec<Judgement>, span: SourceSpan },
    Context { name: Name, assigns: Vec<Assign>, span: SourceSpan },
    Query(AQuery),
}

pub(crate) const QUERY_KEYWORDS: [&str; 6] = ["cause", "witnesses", "grade", "causes", "solve", "satisfies"];

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    errors: Vec<Diagnostic>,
    depth: usize,
}

type PResult<T> = Result<T, ()>;

/// Parses statements. With `queries_only`, declarations are rejected.
pub(crate) fn parse(tokens: &[Token], queries_only: bool) -> (Vec<Stmt>, Vec<Diagnostic>) {
    let mut p = Parser { tokens, pos: 0, errors: Vec::new(), depth: 0 };
    let mut stmts = Vec::new();
    loop {
        while p.peek() == &Tok::Newline {
            p.pos += 1;
        }
        if p.peek() == &Tok::Eof {
            break;
        }
        p.depth = 0;
        match p.statement(queries_only) {
            Ok(s) => {
                if !matches!(p.peek(), Tok::Newline | Tok::Eof) {
                    let t = p.current().clone();
                    p.error(t.span, format!("expected end of line, found {}", t.tok.describe()));
                    p.skip_line();
                } else {
                    stmts.push(s);
                }
            }
            Err(()) => p.skip_line(),
        }
    }
    (stmts, p.errors)
}

impl Parser<'_> {
    fn current(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek(&self) -> &Tok {
        &self.current().tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.current().clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.tokens[self.pos - 1].span.end
        }
    }

    fn span_from(&self, start: SourceSpan) -> SourceSpan {
        SourceSpan { end: self.prev_end().max(start.start), ..start }
    }

    fn error(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.errors.push(Diagnostic::new(span, message));
    }

    fn fail<T>(&mut self, what: &str) -> PResult<T> {
        let t = self.current().clone();
        self.error(t.span, format!("expected {what}, found {}", t.tok.describe()));
        Err(())
    }

    fn skip_line(&mut self) {
        while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<SourceSpan> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            self.fail(what)
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => self.fail("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            _ => self.fail(&format!("`{kw}`")),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    /// Integer with an optional leading minus.
    fn value(&mut self) -> PResult<i64> {
        let negative = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => self.fail("an integer"),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let span = self.current().span;
            self.error(span, "nesting too deep");
            return Err(());
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn statement(&mut self, queries_only: bool) -> PResult<Stmt> {
        let start = self.current().span;
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.fail("a statement");
        };
        if QUERY_KEYWORDS.contains(&kw.as_str()) {
            return Ok(Stmt::Query(self.query()?));
        }
        if queries_only {
            return self.fail("a query");
        }
        self.bump();
        let stmt = match kw.as_str() {
            "exo" => {
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let range = self.range()?;
                Stmt::Exo { name, range, span: self.span_from(start) }
            }
            "var" => {
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let range = self.range()?;
                self.expect(Tok::Assign, "`=`")?;
                let body = self.expr()?;
                Stmt::Var { name, range, body, span: self.span_from(start) }
            }
            "typical" => {
                let name = self.name()?;
                self.expect(Tok::Assign, "`=`")?;
                let mut values = vec![self.value()?];
                while self.eat(&Tok::Gt) {
                    values.push(self.value()?);
                }
                Stmt::Typical { name, values, span: self.span_from(start) }
            }
            "severity" => {
                let mut events = vec![self.assign()?];
                while self.eat(&Tok::Lt) {
                    events.push(self.assign()?);
                }
                Stmt::Severity { events, span: self.span_from(start) }
            }
            "mechanism" => {
                let on = if self.is_keyword("on") {
                    self.bump();
                    true
                } else if self.is_keyword("off") {
                    self.bump();
                    false
                } else {
                    return self.fail("`on` or `off`");
                };
                Stmt::Mechanism { on, span: self.span_from(start) }
            }
            "behavior" => {
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let mut rules = vec![self.behavior_rule()?];
                while self.eat(&Tok::Gt) {
                    rules.push(self.behavior_rule()?);
                }
                Stmt::Behavior { name, rules, span: self.span_from(start) }
            }
            "norm" => {
                let mut worlds = vec![self.world()?];
                let mut rels = Vec::new();
                loop {
                    let rel = match self.peek() {
                        Tok::Gt => Judgement::Greater,
                        Tok::EqEq => Judgement::Equal,
                        _ => break,
                    };
                    self.bump();
                    rels.push(rel);
                    worlds.push(self.world()?);
                }
                if rels.is_empty() {
                    return self.fail("`>` or `==`");
                }
                Stmt::Norm { worlds, rels, span: self.span_from(start) }
            }
            "context" => {
                let name = self.name()?;
                self.expect(Tok::Colon, "`:`")?;
                let assigns = self.assign_list()?;
                Stmt::Context { name, assigns, span: self.span_from(start) }
            }
            _ => {
                self.error(start, format!("unknown statement `{kw}`"));
                return Err(());
            }
        };
        Ok(stmt)
    }

    fn range(&mut self) -> PResult<Vec<i64>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut values = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                values.push(self.value()?);
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `}`")?;
            }
        }
        Ok(values)
    }

    fn assign(&mut self) -> PResult<Assign> {
        let name = self.name()?;
        self.expect(Tok::Assign, "`=`")?;
        let value = self.value()?;
        Ok(Assign { span: self.span_from(name.span), name, value })
    }

    fn assign_list(&mut self) -> PResult<Vec<Assign>> {
        let mut out = vec![self.assign()?];
        while self.eat(&Tok::Comma) {
            out.push(self.assign()?);
        }
        Ok(out)
    }

    fn world(&mut self) -> PResult<(Vec<Assign>, SourceSpan)> {
        let start = self.expect(Tok::LParen, "`(`")?;
        let assigns = self.assign_list()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((assigns, self.span_from(start)))
    }

    fn behavior_rule(&mut self) -> PResult<(String, AExpr)> {
        let label = match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                s
            }
            _ => return self.fail("a quoted behavior label"),
        };
        self.expect(Tok::Assign, "`=`")?;
        Ok((label, self.expr()?))
    }

    fn expr(&mut self) -> PResult<AExpr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = AExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = AExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.leave();
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<AExpr> {
        let mut lhs = self.atom()?;
        while self.eat(&Tok::Star) {
            lhs = AExpr::Mul(Box::new(lhs), Box::new(self.atom()?));
        }
        Ok(lhs)
    }

    fn args(&mut self) -> PResult<Vec<AExpr>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    fn atom(&mut self) -> PResult<AExpr> {
        let start = self.current().span;
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => Ok(AExpr::Int(self.value()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if self.peek_at(1) == &Tok::LParen => match name.as_str() {
                "min" | "max" => {
                    self.bump();
                    self.enter()?;
                    let args = self.args()?;
                    self.leave();
                    Ok(if name == "min" { AExpr::Min(args) } else { AExpr::Max(args) })
                }
                "ite" => {
                    self.bump();
                    self.enter()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let lhs = self.expr()?;
                    self.expect(Tok::EqEq, "`==`")?;
                    let rhs = self.expr()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let then = self.expr()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let otherwise = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.leave();
                    Ok(AExpr::Ite {
                        lhs: Box::new(lhs),
                        rhs: Box::new(rhs),
                        then: Box::new(then),
                        otherwise: Box::new(otherwise),
                    })
                }
                "table" => {
                    self.bump();
                    self.table()
                }
                _ => {
                    self.error(start, format!("unknown function `{name}`"));
                    Err(())
                }
            },
            Tok::Ident(_) => Ok(AExpr::Name(self.name()?)),
            _ => self.fail("an expression"),
        }
    }

    fn table(&mut self) -> PResult<AExpr> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.name()?];
        while self.eat(&Tok::Comma) {
            args.push(self.name()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut rows = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let row_start = self.current().span;
                let key = if self.eat(&Tok::LParen) {
                    let mut key = vec![self.value()?];
                    while self.eat(&Tok::Comma) {
                        key.push(self.value()?);
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    key
                } else {
                    vec![self.value()?]
                };
                self.expect(Tok::Arrow, "`->`")?;
                let out = self.value()?;
                rows.push((key, out, self.span_from(row_start)));
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `}`")?;
            }
        }
        Ok(AExpr::Table { args, rows })
    }

    fn formula(&mut self) -> PResult<AFormula> {
        self.enter()?;
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            lhs = AFormula::Or(Box::new(lhs), Box::new(self.conjunction()?));
        }
        self.leave();
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<AFormula> {
        let mut lhs = self.negation()?;
        while self.eat(&Tok::Amp) {
            lhs = AFormula::And(Box::new(lhs), Box::new(self.negation()?));
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> PResult<AFormula> {
        if self.eat(&Tok::Bang) {
            self.enter()?;
            let inner = self.negation()?;
            self.leave();
            return Ok(AFormula::Not(Box::new(inner)));
        }
        if self.eat(&Tok::LParen) {
            let inner = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        let name = self.name()?;
        let negated = match self.peek() {
            Tok::Assign => false,
            Tok::NotEq => true,
            _ => return self.fail("`=` or `!=`"),
        };
        self.bump();
        let value = self.value()?;
        let a = Assign { span: self.span_from(name.span), name, value };
        Ok(if negated { AFormula::NotEvent(a) } else { AFormula::Event(a) })
    }

    fn conjunction_of_events(&mut self) -> PResult<Vec<Assign>> {
        let mut out = vec![self.assign()?];
        while self.eat(&Tok::Amp) {
            out.push(self.assign()?);
        }
        Ok(out)
    }

    fn query(&mut self) -> PResult<AQuery> {
        let start = self.current().span;
        let Tok::Ident(kw) = self.bump().tok else { unreachable!("checked by caller") };
        let kind = match kw.as_str() {
            "cause" | "witnesses" => {
                let cause = self.conjunction_of_events()?;
                self.keyword("for")?;
                let effect = self.formula()?;
                if kw == "cause" {
                    AQueryKind::Cause(cause, effect)
                } else {
                    AQueryKind::Witnesses(cause, effect)
                }
            }
            "grade" => {
                self.expect(Tok::LBrace, "`{`")?;
                let mut candidates = vec![self.conjunction_of_events()?];
                while self.eat(&Tok::Comma) {
                    candidates.push(self.conjunction_of_events()?);
                }
                self.expect(Tok::RBrace, "`,` or `}`")?;
                self.keyword("for")?;
                AQueryKind::Grade(candidates, self.formula()?)
            }
            "causes" => AQueryKind::Causes(self.formula()?),
            "solve" => AQueryKind::Solve,
            "satisfies" => {
                let mut setting = Vec::new();
                if self.eat(&Tok::LBracket) && !self.eat(&Tok::RBracket) {
                    loop {
                        let name = self.name()?;
                        self.expect(Tok::LeftArrow, "`<-`")?;
                        let value = self.value()?;
                        setting.push(Assign { span: self.span_from(name.span), name, value });
                        if self.eat(&Tok::RBracket) {
                            break;
                        }
                        self.expect(Tok::Comma, "`,` or `]`")?;
                    }
                }
                AQueryKind::Satisfies(setting, self.formula()?)
            }
            _ => unreachable!("only query keywords reach here"),
        };
        let context = if self.eat(&Tok::At) { Some(self.name()?) } else { None };
        Ok(AQuery { kind, context, span: self.span_from(start) })
    }
}
