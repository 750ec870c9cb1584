use thiserror::Error;

use super::lexer::{lex_line, Spanned, Tok};
use super::{Assertion, Concept, KnowledgeBase, Query};

const KEYWORDS: [&str; 4] = ["Top", "Bot", "all", "some"];
const TYPICALITY: &str = "T";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lex(char),
    #[error("found {found}, expected {expected}")]
    Syntax { found: String, expected: &'static str },
    #[error("typicality not allowed inside concepts")]
    TypicalityInConcept,
    #[error("nested typicality: `T(C) ~> D` would mean T(T(C)); write `C ~> D`")]
    NestedTypicality,
    #[error("typicality on a strict inclusion; write `C ~> D` for T(C) ⊑ D")]
    ExplicitTypicality,
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("a query must be a single `C => D` or `C ~> D` statement")]
    NotAQuery,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Strict(Concept, Concept),
    Defeasible(Concept, Concept),
    Assertion(Assertion),
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut kb = KnowledgeBase::new();
    for (idx, line) in text.lines().enumerate() {
        match parse_statement(line, idx + 1)? {
            None => {}
            Some(Statement::Strict(l, r)) => {
                kb.add_strict(l, r);
            }
            Some(Statement::Defeasible(l, r)) => {
                kb.add_defeasible(l, r);
            }
            Some(Statement::Assertion(a)) => {
                kb.add_assertion(a);
            }
        }
    }
    Ok(kb)
}

pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut found = None;
    for (idx, line) in text.lines().enumerate() {
        let Some(stmt) = parse_statement(line, idx + 1)? else {
            continue;
        };
        let q = match stmt {
            Statement::Strict(c, d) => Query::Strict(c, d),
            Statement::Defeasible(c, d) => Query::Defeasible(c, d),
            Statement::Assertion(_) => return Err(not_a_query(idx + 1)),
        };
        if found.replace(q).is_some() {
            return Err(not_a_query(idx + 1));
        }
    }
    found.ok_or_else(|| not_a_query(1))
}

/// Parses a bare concept such as a focus for base enumeration.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let toks = lex_line(text).map_err(|e| ParseError {
        line: 1,
        col: e.col,
        kind: ParseErrorKind::Lex(e.found),
    })?;
    let mut p = Parser { toks: &toks, pos: 0, line: 1, eol: text.chars().count() + 1 };
    let c = p.concept()?;
    p.expect_end()?;
    Ok(c)
}

fn not_a_query(line: usize) -> ParseError {
    ParseError { line, col: 1, kind: ParseErrorKind::NotAQuery }
}

/// Parses one line; `None` for blank and comment-only lines.
pub fn parse_statement(line: &str, line_no: usize) -> Result<Option<Statement>, ParseError> {
    let toks = lex_line(line).map_err(|e| ParseError {
        line: line_no,
        col: e.col,
        kind: ParseErrorKind::Lex(e.found),
    })?;
    if toks.is_empty() {
        return Ok(None);
    }
    let eol = line.find('#').map_or(line, |i| &line[..i]).trim_end().chars().count() + 1;
    let mut p = Parser { toks: &toks, pos: 0, line: line_no, eol };
    p.statement().map(Some)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    eol: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol, |s| s.col)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col(), kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = self.peek().map_or_else(|| "end of line".to_string(), |t| t.to_string());
        self.err(ParseErrorKind::Syntax { found, expected })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }

    fn name(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()) => {
                Err(self.err(ParseErrorKind::Reserved(s.clone())))
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn is_name_at(&self, offset: usize) -> bool {
        matches!(self.peek_at(offset), Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        if let Some(a) = self.assertion_shape() {
            return Ok(Statement::Assertion(a));
        }
        if matches!(self.peek(), Some(Tok::Ident(t)) if t == TYPICALITY)
            && self.peek_at(1) == Some(&Tok::LParen)
        {
            return Err(self.typicality_lhs());
        }
        let lhs = self.concept()?;
        if self.peek() == Some(&Tok::LParen) {
            // `(C)(a)`: concept assertion on a compound concept
            self.pos += 1;
            let individual = self.name("individual name")?;
            self.expect(Tok::RParen, "`)`")?;
            self.expect_end()?;
            return Ok(Statement::Assertion(Assertion::Concept { concept: lhs, individual }));
        }
        let strict = match self.peek() {
            Some(Tok::Strict) => true,
            Some(Tok::Defeasible) => false,
            _ => return Err(self.unexpected("`=>` or `~>`")),
        };
        self.pos += 1;
        let rhs = self.concept()?;
        self.expect_end()?;
        Ok(if strict {
            Statement::Strict(lhs, rhs)
        } else {
            Statement::Defeasible(lhs, rhs)
        })
    }

    /// `IDENT(IDENT)` or `IDENT(IDENT, IDENT)` filling the whole line.
    fn assertion_shape(&mut self) -> Option<Assertion> {
        let name = |i: usize| match &self.toks[i].tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        };
        let t = &self.toks;
        if t.len() == 4 && t[1].tok == Tok::LParen && t[3].tok == Tok::RParen {
            if let (Some(c), Some(a)) = (name(0), name(2)) {
                return Some(Assertion::Concept { concept: Concept::Atom(c), individual: a });
            }
        }
        if t.len() == 6
            && t[1].tok == Tok::LParen
            && t[3].tok == Tok::Comma
            && t[5].tok == Tok::RParen
        {
            if let (Some(r), Some(a), Some(b)) = (name(0), name(2), name(4)) {
                return Some(Assertion::Role { role: r, subject: a, object: b });
            }
        }
        None
    }

    /// A line opening with `T(`: classify the mistake.
    fn typicality_lhs(&mut self) -> ParseError {
        let start = self.pos;
        self.pos += 2;
        let inner = self.concept().and_then(|_| self.expect(Tok::RParen, "`)`"));
        if let Err(e) = inner {
            return e;
        }
        let kind = match self.peek() {
            Some(Tok::Strict) => ParseErrorKind::ExplicitTypicality,
            Some(Tok::Defeasible) => ParseErrorKind::NestedTypicality,
            _ => ParseErrorKind::TypicalityInConcept,
        };
        self.pos = start;
        self.err(kind)
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut c = self.conj()?;
        while self.eat(&Tok::Pipe) {
            c = Concept::or(c, self.conj()?);
        }
        Ok(c)
    }

    fn conj(&mut self) -> Result<Concept, ParseError> {
        let mut c = self.unary()?;
        while self.eat(&Tok::Amp) {
            c = Concept::and(c, self.unary()?);
        }
        Ok(c)
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(Concept::not(self.unary()?));
        }
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "all" || kw == "some" {
                let universal = kw == "all";
                self.pos += 1;
                let role = self.name("role name")?;
                self.expect(Tok::Dot, "`.`")?;
                let c = self.unary()?;
                return Ok(if universal { Concept::all(role, c) } else { Concept::some(role, c) });
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Concept, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "Top" => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Ident(s)) if s == "Bot" => {
                self.pos += 1;
                Ok(Concept::Bot)
            }
            Some(Tok::Ident(s)) if s == TYPICALITY && self.peek_at(1) == Some(&Tok::LParen) => {
                Err(self.err(ParseErrorKind::TypicalityInConcept))
            }
            Some(Tok::Ident(_)) if self.is_name_at(0) => Ok(Concept::Atom(self.name("concept")?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => Err(self.unexpected("concept")),
        }
    }
}
