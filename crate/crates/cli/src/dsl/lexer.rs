use finality_core::{CmpOp, Level};

use super::{ErrorKind, Loc, SpecError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Int(Level),
    DotDot,
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Amp,
    /// `=` doubles as assignment and equality.
    Cmp(CmpOp),
    Newline,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("`{name}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::DotDot => "`..`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(super) fn tokenize(text: &str) -> Result<Vec<(Tok, Loc)>, SpecError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            chars.next();
            column += 1;
        };
        match c {
            '\n' => {
                chars.next();
                out.push((Tok::Newline, loc));
                line += 1;
                column = 1;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => bump(&mut chars),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                    name.push(c);
                    bump(&mut chars);
                }
                out.push((Tok::Ident(name), loc));
            }
            c if c.is_ascii_digit() || c == '-' => {
                bump(&mut chars);
                if c == '-' && chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push((Tok::Arrow, loc));
                    continue;
                }
                let mut digits = String::from(c);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    bump(&mut chars);
                }
                let n = digits
                    .parse()
                    .map_err(|_| SpecError::new(ErrorKind::Syntax, loc, format!("bad integer `{digits}`")))?;
                out.push((Tok::Int(n), loc));
            }
            _ => {
                bump(&mut chars);
                let next = chars.peek().copied();
                let tok = match (c, next) {
                    ('.', Some('.')) => Some(Tok::DotDot),
                    ('<', Some('=')) => Some(Tok::Cmp(CmpOp::Le)),
                    ('>', Some('=')) => Some(Tok::Cmp(CmpOp::Ge)),
                    ('!', Some('=')) => Some(Tok::Cmp(CmpOp::Ne)),
                    _ => None,
                };
                if let Some(tok) = tok {
                    bump(&mut chars);
                    out.push((tok, loc));
                    continue;
                }
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    '&' => Tok::Amp,
                    '=' => Tok::Cmp(CmpOp::Eq),
                    '<' => Tok::Cmp(CmpOp::Lt),
                    '>' => Tok::Cmp(CmpOp::Gt),
                    '≤' => Tok::Cmp(CmpOp::Le),
                    '≥' => Tok::Cmp(CmpOp::Ge),
                    '≠' => Tok::Cmp(CmpOp::Ne),
                    other => {
                        return Err(SpecError::new(ErrorKind::Syntax, loc, format!("unexpected character `{other}`")));
                    }
                };
                out.push((tok, loc));
            }
        }
    }
    out.push((Tok::Eof, Loc { line, column }));
    Ok(out)
}
