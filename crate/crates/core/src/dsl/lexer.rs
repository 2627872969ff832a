use super::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Assign,
    EqEq,
    NotEq,
    Gt,
    Lt,
    Plus,
    Minus,
    Star,
    Amp,
    Pipe,
    Bang,
    At,
    Arrow,
    LeftArrow,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Newline => "end of line".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Gt => ">",
            Tok::Lt => "<",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Bang => "!",
            Tok::At => "@",
            Tok::Arrow => "->",
            Tok::LeftArrow => "<-",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens. Newlines inside brackets are dropped so that
/// long declarations may wrap. Lexical errors are collected and the offending
/// characters skipped.
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut pos = 0;
    let mut line = 1;
    let mut line_start = 0;
    let mut depth: usize = 0;

    let span = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        line,
        column: text[line_start..start].chars().count() + 1,
        start,
        end,
    };

    while pos < bytes.len() {
        let c = bytes[pos];
        let start = pos;
        match c {
            b'\n' => {
                if depth == 0 {
                    tokens.push(Token { tok: Tok::Newline, span: span(start, start + 1, line, line_start) });
                }
                pos += 1;
                line += 1;
                line_start = pos;
            }
            b' ' | b'\t' | b'\r' => pos += 1,
            b'#' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let sp = span(start, pos, line, line_start);
                match text[start..pos].parse::<i64>() {
                    Ok(v) => tokens.push(Token { tok: Tok::Int(v), span: sp }),
                    Err(_) => errors.push(Diagnostic::new(sp, "integer literal out of range")),
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(text[start..pos].to_string()),
                    span: span(start, pos, line, line_start),
                });
            }
            b'"' => {
                pos += 1;
                let mut value = String::new();
                let mut closed = false;
                while pos < bytes.len() {
                    match bytes[pos] {
                        b'"' => {
                            pos += 1;
                            closed = true;
                            break;
                        }
                        b'\n' => break,
                        b'\\' if pos + 1 < bytes.len() && matches!(bytes[pos + 1], b'"' | b'\\') => {
                            value.push(bytes[pos + 1] as char);
                            pos += 2;
                        }
                        _ => {
                            let ch = text[pos..].chars().next().expect("in bounds");
                            value.push(ch);
                            pos += ch.len_utf8();
                        }
                    }
                }
                let sp = span(start, pos, line, line_start);
                if closed {
                    tokens.push(Token { tok: Tok::Str(value), span: sp });
                } else {
                    errors.push(Diagnostic::new(sp, "unterminated string"));
                }
            }
            _ => {
                let two = bytes.get(pos + 1).copied();
                let (tok, len) = match (c, two) {
                    (b'=', Some(b'=')) => (Tok::EqEq, 2),
                    (b'!', Some(b'=')) => (Tok::NotEq, 2),
                    (b'-', Some(b'>')) => (Tok::Arrow, 2),
                    (b'<', Some(b'-')) => (Tok::LeftArrow, 2),
                    (b'{', _) => (Tok::LBrace, 1),
                    (b'}', _) => (Tok::RBrace, 1),
                    (b'(', _) => (Tok::LParen, 1),
                    (b')', _) => (Tok::RParen, 1),
                    (b'[', _) => (Tok::LBracket, 1),
                    (b']', _) => (Tok::RBracket, 1),
                    (b',', _) => (Tok::Comma, 1),
                    (b':', _) => (Tok::Colon, 1),
                    (b'=', _) => (Tok::Assign, 1),
                    (b'>', _) => (Tok::Gt, 1),
                    (b'<', _) => (Tok::Lt, 1),
                    (b'+', _) => (Tok::Plus, 1),
                    (b'-', _) => (Tok::Minus, 1),
                    (b'*', _) => (Tok::Star, 1),
                    (b'&', _) => (Tok::Amp, 1),
                    (b'|', _) => (Tok::Pipe, 1),
                    (b'!', _) => (Tok::Bang, 1),
                    (b'@', _) => (Tok::At, 1),
                    _ => {
                        let ch = text[pos..].chars().next().expect("in bounds");
                        pos += ch.len_utf8();
                        errors.push(Diagnostic::new(
                            span(start, pos, line, line_start),
                            format!("unexpected character `{}`", ch.escape_debug()),
                        ));
                        continue;
                    }
                };
                match tok {
                    Tok::LBrace | Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RBrace | Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
                    _ => {}
                }
                pos += len;
                tokens.push(Token { tok, span: span(start, pos, line, line_start) });
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, span: span(bytes.len(), bytes.len(), line, line_start) });
    (tokens, errors)
}
