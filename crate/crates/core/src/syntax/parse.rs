//! Recursive-descent parser for the ASCII surface syntax.

use std::fmt;

use thiserror::Error;

use crate::semiring::Semiring;
use crate::syntax::{Name, Side, Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        if let Some(m) = &self.message {
            return f.write_str(m);
        }
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

const KEYWORDS: [&str; 14] = [
    "star", "let1", "tens", "lettens", "unit", "abort", "pair", "fst", "snd", "inl", "inr", "case",
    "bang", "letbang",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

/// Parse a single term, with scalars read in `semiring`. `--` starts a line
/// comment.
pub fn parse_term(text: &str, semiring: Semiring) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, semiring);
    let t = p.expr()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, Semiring::Nat);
    let ty = p.ty()?;
    p.expect_end()?;
    Ok(ty)
}

/// Reads a `-- type: T` pin from the comment lines leading a term file.
pub fn pinned_type(text: &str) -> Result<Option<Type>, ParseError> {
    for line in text.lines() {
        let l = line.trim();
        if l.is_empty() {
            continue;
        }
        let Some(comment) = l.strip_prefix("--") else {
            break;
        };
        if let Some(ty) = comment.trim().strip_prefix("type:") {
            return parse_type(ty).map(Some);
        }
    }
    Ok(None)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    semiring: Semiring,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str, semiring: Semiring) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            semiring,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error_at(&self, pos: usize, expected: &[&str]) -> ParseError {
        let (line, col) = self.location(pos);
        let found = match self.chars.get(pos) {
            None => "end of input".to_string(),
            Some(_) => {
                let word: String = self.chars[pos..]
                    .iter()
                    .take_while(|c| !c.is_whitespace())
                    .take(12)
                    .collect();
                format!("`{word}`")
            }
        };
        ParseError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
            message: None,
        }
    }

    fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        self.error_at(self.pos, expected)
    }

    fn skip_ws(&mut self) {
        loop {
            while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
                self.pos += 1;
            }
            if self.rest_starts_with("--") {
                while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(k, c)| self.chars.get(self.pos + k) == Some(&c))
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest_starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let quoted = format!("`{s}`");
            Err(self.error(&[quoted.as_str()]))
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn peek_word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let first = *self.chars.get(start)?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let mut end = start + 1;
        while self
            .chars
            .get(end)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
        {
            end += 1;
        }
        Some(self.chars[start..end].iter().collect())
    }

    fn word(&mut self) -> Option<String> {
        let w = self.peek_word()?;
        self.pos += w.chars().count();
        Some(w)
    }

    fn ident(&mut self) -> PResult<Name> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.word() {
            Some(w) if !is_keyword(&w) => Ok(w),
            _ => Err(self.error_at(start, &["identifier"])),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<Type> {
        let lhs = self.ty_plus()?;
        if self.eat("-o") {
            let rhs = self.ty()?;
            Ok(Type::lolli(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_plus(&mut self) -> PResult<Type> {
        let mut lhs = self.ty_with()?;
        while self.eat("(+)") {
            lhs = Type::plus(lhs, self.ty_with()?);
        }
        Ok(lhs)
    }

    fn ty_with(&mut self) -> PResult<Type> {
        let mut lhs = self.ty_tensor()?;
        while self.eat("&") {
            lhs = Type::with(lhs, self.ty_tensor()?);
        }
        Ok(lhs)
    }

    fn ty_tensor(&mut self) -> PResult<Type> {
        let mut lhs = self.ty_bang()?;
        while self.eat("*") {
            lhs = Type::tensor(lhs, self.ty_bang()?);
        }
        Ok(lhs)
    }

    fn ty_bang(&mut self) -> PResult<Type> {
        if self.eat("!") {
            return Ok(Type::bang(self.ty_bang()?));
        }
        if self.peek() == Some('(') && !self.rest_starts_with("(+)") {
            self.pos += 1;
            let inner = self.ty()?;
            self.expect(")")?;
            return Ok(inner);
        }
        const EXPECTED: [&str; 5] = ["`I`", "`Top`", "`Zero`", "`!`", "`(`"];
        match self.peek_word().as_deref() {
            Some("I") => {
                self.pos += 1;
                Ok(Type::One)
            }
            Some("Top") => {
                self.pos += 3;
                Ok(Type::Top)
            }
            Some("Zero") => {
                self.pos += 4;
                Ok(Type::Zero)
            }
            _ => Err(self.error(&EXPECTED)),
        }
    }

    // ---- scalars ----

    fn scalar_start(&mut self) -> bool {
        let Some(c) = self.peek() else {
            return false;
        };
        let next = |k: usize| self.chars.get(self.pos + k).copied();
        match c {
            '0'..='9' | '@' => true,
            '-' => next(1).is_some_and(|d| d.is_ascii_digit()),
            // `(re, im)`; a parenthesised term can never look like this.
            '(' => {
                let mut k = 1;
                let mut comma = false;
                loop {
                    match next(k) {
                        Some(')') => break comma && k > 1,
                        Some(',') => comma = true,
                        Some(c) if c.is_ascii_digit() || c == '/' || c == '-' || c.is_whitespace() => {}
                        _ => break false,
                    }
                    k += 1;
                }
            }
            _ => false,
        }
    }

    fn scalar(&mut self) -> PResult<crate::semiring::Scalar> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(start) == Some(&'(') {
            while self.chars.get(self.pos).is_some_and(|&c| c != ')') {
                self.pos += 1;
            }
            if self.chars.get(self.pos).is_none() {
                return Err(self.error_at(self.pos, &["`)`"]));
            }
            self.pos += 1;
        } else {
            while self
                .chars
                .get(self.pos)
                .is_some_and(|&c| c.is_ascii_digit() || c == '/' || c == '@' || (c == '-' && self.pos == start))
            {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() {
            return Err(self.error_at(start, &["scalar literal"]));
        }
        self.semiring.parse(&text).map_err(|e| {
            let mut err = self.error_at(start, &["scalar literal"]);
            err.message = Some(e.to_string());
            err
        })
    }

    // ---- terms ----

    fn expr(&mut self) -> PResult<Term> {
        if self.peek() == Some('\\') {
            return self.lambda();
        }
        self.sum()
    }

    fn lambda(&mut self) -> PResult<Term> {
        self.expect("\\")?;
        let x = self.ident()?;
        self.expect(":")?;
        let ty = self.ty()?;
        self.expect(".")?;
        let body = self.expr()?;
        Ok(Term::lam(x, ty, body))
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut lhs = self.smul()?;
        while self.eat("<+>") {
            let rhs = self.smul()?;
            lhs = Term::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn smul(&mut self) -> PResult<Term> {
        if self.peek() == Some('\\') {
            return self.lambda();
        }
        if self.scalar_start() {
            let a = self.scalar()?;
            self.expect("<.>")?;
            let t = self.smul()?;
            return Ok(Term::smul(a, t));
        }
        self.app()
    }

    fn atom_start(&mut self) -> bool {
        match self.peek() {
            Some('(') => !self.scalar_start(),
            Some(c) => c.is_ascii_alphabetic() || c == '_',
            None => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.atom()?;
        while self.atom_start() {
            let a = self.atom()?;
            f = Term::app(f, a);
        }
        Ok(f)
    }

    fn binder(&mut self) -> PResult<(Name, Type)> {
        let x = self.ident()?;
        self.expect(":")?;
        let ty = self.ty()?;
        self.expect(".")?;
        Ok((x, ty))
    }

    fn atom(&mut self) -> PResult<Term> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let t = self.expr()?;
            self.expect(")")?;
            return Ok(t);
        }
        let Some(word) = self.word() else {
            return Err(self.error(&["term"]));
        };
        match word.as_str() {
            "star" => {
                self.expect("(")?;
                let a = self.scalar()?;
                self.expect(")")?;
                Ok(Term::star(a))
            }
            "unit" => Ok(Term::Unit),
            "let1" | "tens" | "pair" => {
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(",")?;
                let u = self.expr()?;
                self.expect(")")?;
                Ok(match word.as_str() {
                    "let1" => Term::let1(t, u),
                    "tens" => Term::tens(t, u),
                    _ => Term::pair(t, u),
                })
            }
            "lettens" => {
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(",")?;
                let x = self.ident()?;
                self.expect(":")?;
                let a = self.ty()?;
                self.expect(",")?;
                let (y, b) = self.binder()?;
                let body = self.expr()?;
                self.expect(")")?;
                Ok(Term::lettens(t, x, a, y, b, body))
            }
            "abort" => {
                let ty = if self.eat("[") {
                    let ty = self.ty()?;
                    self.expect("]")?;
                    Some(ty)
                } else {
                    None
                };
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(")")?;
                Ok(Term::abort(t, ty))
            }
            "fst" | "snd" | "letbang" => {
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(",")?;
                let (x, a) = self.binder()?;
                let body = self.expr()?;
                self.expect(")")?;
                Ok(match word.as_str() {
                    "fst" => Term::fst(t, x, a, body),
                    "snd" => Term::snd(t, x, a, body),
                    _ => Term::letbang(t, x, a, body),
                })
            }
            "inl" | "inr" => {
                self.expect("[")?;
                let other = self.ty()?;
                self.expect("]")?;
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(")")?;
                let side = if word == "inl" { Side::Left } else { Side::Right };
                Ok(Term::inj(side, t, other))
            }
            "case" => {
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(",")?;
                let (x, a) = self.binder()?;
                let u = self.expr()?;
                self.expect(",")?;
                let (y, b) = self.binder()?;
                let v = self.expr()?;
                self.expect(")")?;
                Ok(Term::case(t, x, a, u, y, b, v))
            }
            "bang" => {
                self.expect("(")?;
                let t = self.expr()?;
                self.expect(")")?;
                Ok(Term::bang(t))
            }
            _ => Ok(Term::Var(word)),
        }
    }
}
