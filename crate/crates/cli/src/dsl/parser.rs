use finality_core::{CmpOp, Level};

use super::lexer::{tokenize, Tok};
use super::{Document, Domain, ErrorKind, Goal, Loc, MechExpr, Row, SpecError, Statement};

/// Parses spec text into a [`Document`], stopping at the first syntax error.
pub fn parse_model(text: &str) -> Result<Document, SpecError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut statements = Vec::new();
    loop {
        p.skip_newlines();
        if p.peek() == &Tok::Eof {
            break;
        }
        statements.push(p.statement()?);
        match p.peek() {
            Tok::Newline | Tok::Eof => {}
            other => return Err(p.error(format!("expected end of line, found {}", other.describe()))),
        }
    }
    Ok(Document { statements })
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> Loc {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> SpecError {
        SpecError::new(ErrorKind::Syntax, self.loc(), message)
    }

    fn expected(&self, what: &str) -> SpecError {
        self.error(format!("expected {what}, found {}", self.peek().describe()))
    }

    fn skip_newlines(&mut self) {
        while self.peek() == &Tok::Newline {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SpecError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.expected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, SpecError> {
        match self.peek() {
            Tok::Ident(name) => {
                let name = name.clone();
                self.advance();
                Ok(name)
            }
            _ => Err(self.expected("a name")),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), SpecError> {
        match self.peek() {
            Tok::Ident(w) if w == word => {
                self.advance();
                Ok(())
            }
            _ => Err(self.expected(&format!("`{word}`"))),
        }
    }

    fn int(&mut self) -> Result<Level, SpecError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.expected("an integer level")),
        }
    }

    /// `first, second, ...` with at least one item.
    fn comma_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, SpecError>) -> Result<Vec<T>, SpecError> {
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        Ok(out)
    }

    /// Skips separators inside a braced block; reports whether any were found.
    fn separators(&mut self) -> bool {
        let mut any = false;
        while matches!(self.peek(), Tok::Semi | Tok::Newline) {
            self.advance();
            any = true;
        }
        any
    }

    fn statement(&mut self) -> Result<Statement, SpecError> {
        let loc = self.loc();
        let keyword = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.expected("a statement")),
        };
        self.advance();
        match keyword.as_str() {
            "var" => {
                let name = self.ident()?;
                self.keyword("in")?;
                let domain = self.domain()?;
                Ok(Statement::Var { name, domain, loc })
            }
            "edge" => {
                let from = self.ident()?;
                self.expect(Tok::Arrow)?;
                let to = self.ident()?;
                Ok(Statement::Edge { from, to, loc })
            }
            "mech" => {
                let child = self.ident()?;
                self.expect(Tok::Cmp(CmpOp::Eq))?;
                let expr = self.mech_expr()?;
                Ok(Statement::Mech { child, expr, loc })
            }
            "do" => Ok(Statement::Do {
                target: self.ident()?,
                loc,
            }),
            "rest" => {
                let variable = self.ident()?;
                self.expect(Tok::Cmp(CmpOp::Eq))?;
                let level = self.int()?;
                Ok(Statement::Rest { variable, level, loc })
            }
            "final" => self.final_block(loc),
            other => Err(SpecError::new(
                ErrorKind::Syntax,
                loc,
                format!("unknown statement `{other}`; expected var, edge, mech, do, rest or final"),
            )),
        }
    }

    fn domain(&mut self) -> Result<Domain, SpecError> {
        if self.eat(&Tok::LBrace) {
            let levels = self.comma_list(Self::int)?;
            self.expect(Tok::RBrace)?;
            return Ok(Domain::Set(levels));
        }
        let lo = self.int()?;
        self.expect(Tok::DotDot)?;
        let hi = self.int()?;
        Ok(Domain::Range(lo, hi))
    }

    fn mech_expr(&mut self) -> Result<MechExpr, SpecError> {
        match self.peek() {
            Tok::Ident(w) if w == "sum" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let args = self.comma_list(Self::ident)?;
                self.expect(Tok::RParen)?;
                Ok(MechExpr::Sum(args))
            }
            Tok::Ident(w) if w == "table" => {
                self.advance();
                let parents = if self.eat(&Tok::LParen) {
                    let ps = self.comma_list(Self::ident)?;
                    self.expect(Tok::RParen)?;
                    Some(ps)
                } else {
                    None
                };
                self.expect(Tok::LBrace)?;
                let mut rows = Vec::new();
                self.separators();
                while !self.eat(&Tok::RBrace) {
                    rows.push(self.row()?);
                    if !self.separators() && self.peek() != &Tok::RBrace {
                        return Err(self.expected("`;` or `}`"));
                    }
                }
                Ok(MechExpr::Table { parents, rows })
            }
            _ => Err(self.expected("`sum(...)` or `table { ... }`")),
        }
    }

    fn row(&mut self) -> Result<Row, SpecError> {
        let loc = self.loc();
        self.expect(Tok::LParen)?;
        let key = self.comma_list(Self::int)?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Arrow)?;
        let value = self.int()?;
        Ok(Row { key, value, loc })
    }

    fn final_block(&mut self, loc: Loc) -> Result<Statement, SpecError> {
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut effects = None;
        let mut goal = None;
        self.separators();
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            let field_loc = self.loc();
            let field = self.ident()?;
            self.expect(Tok::Colon)?;
            let slot_taken = match field.as_str() {
                "effects" => effects.replace(self.comma_list(Self::ident)?).is_some(),
                "goal" => goal.replace(self.goal()?).is_some(),
                other => {
                    return Err(SpecError::new(
                        ErrorKind::Syntax,
                        field_loc,
                        format!("unknown field `{other}`; expected effects or goal"),
                    ))
                }
            };
            if slot_taken {
                return Err(SpecError::new(
                    ErrorKind::Duplicate,
                    field_loc,
                    format!("field `{field}` given twice in final `{name}`"),
                ));
            }
            if !self.separators() && self.peek() != &Tok::RBrace {
                return Err(self.expected("`;` or `}`"));
            }
        }
        let missing = |field: &str| SpecError::new(ErrorKind::Syntax, loc, format!("final `{name}` has no `{field}` field"));
        let effects = effects.ok_or_else(|| missing("effects"))?;
        let goal = goal.ok_or_else(|| missing("goal"))?;
        Ok(Statement::Final {
            name,
            effects,
            goal,
            loc,
        })
    }

    fn goal(&mut self) -> Result<Vec<Goal>, SpecError> {
        let mut out = Vec::new();
        loop {
            let variable = self.ident()?;
            let op = match *self.peek() {
                Tok::Cmp(op) => {
                    self.advance();
                    op
                }
                _ => return Err(self.expected("a comparison (=, !=, <, <=, >, >=)")),
            };
            let level = self.int()?;
            out.push(Goal { variable, op, level });
            if !self.eat(&Tok::Amp) {
                return Ok(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn final_block_spans_lines() {
        let doc = parse_model("final f {\n  effects: T, B\n  goal: T >= 1 & B != 0\n}\n").unwrap();
        let Statement::Final { effects, goal, .. } = &doc.statements[0] else {
            panic!("not a final block");
        };
        assert_eq!(effects, &["T", "B"]);
        assert_eq!(goal.len(), 2);
        assert_eq!(goal[1].op, CmpOp::Ne);
    }

    #[test]
    fn table_rows_need_separators() {
        let err = parse_model("mech B = table { (0)->0 (1)->1 }").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!(err.loc.column, 25);
    }

    #[test]
    fn trailing_separator_is_allowed() {
        let doc = parse_model("mech B = table(H) {\n (0)->0;\n (1)->1;\n}").unwrap();
        let Statement::Mech { expr: MechExpr::Table { parents, rows }, .. } = &doc.statements[0] else {
            panic!("not a table");
        };
        assert_eq!(parents.as_deref(), Some(&["H".to_string()][..]));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].loc.line, 3);
    }

    #[test]
    fn junk_after_statement() {
        let err = parse_model("do H T").unwrap_err();
        assert_eq!((err.loc.line, err.loc.column), (1, 6));
        assert!(err.message.contains("end of line"), "{}", err.message);
    }

    #[test]
    fn repeated_field() {
        let err = parse_model("final f { effects: T; effects: B; goal: T = 1 }").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Duplicate);
        assert_eq!(err.loc.column, 23);
    }
}
