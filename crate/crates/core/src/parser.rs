//! Text front-end for polynomials and exponential sums.
//!
//! Polynomial grammar (whitespace is insignificant between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('-' | '+') factor | atom ('^' exp)?
//! exp    := ['-' | '+'] int | '(' ['-' | '+'] int ')'
//! atom   := int | int/int | 'i' | var | '(' expr ')'
//! ```
//!
//! A numeric literal written directly against `i` (`2i`, `3/4i`) is an
//! imaginary literal. `p/q` is a single literal; there is no division.
//!
//! Exponential-sum grammar:
//!
//! ```text
//! sum  := ['-'] item (('+' | '-') item)*
//! item := [coef ['*']] int '^' 'n'
//! coef := int | int/int | '(' ['-'] (int | int/int) ')'
//! ```

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;
use core::fmt;

use num_traits::{One, Zero};

use crate::coeffield::{BigInt, GaussianRational, Rational};
use crate::polycore::{PolyError, SparsePoly};
use crate::uhs::ExpSum;

/// Half-open byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(message: impl Into<String>, span: Span) -> Self {
        ParseError { message: message.into(), span, expected: Vec::new() }
    }

    fn expecting(mut self, expected: &[&str]) -> Self {
        self.expected = expected.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Two-line diagnostic: the source and a caret marker under the span.
    pub fn annotate(&self, src: &str) -> String {
        let pad = src[..self.span.start.min(src.len())].chars().count();
        let width = src
            .get(self.span.start..self.span.end)
            .map(|s| s.chars().count())
            .unwrap_or(0)
            .max(1);
        format!("{src}\n{}{}", " ".repeat(pad), "^".repeat(width))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}..{}", self.message, self.span.start, self.span.end)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Integer(BigInt),
    Fraction(Rational),
    ImagUnit,
    Variable(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Integer(n) => format!("integer {n}"),
            TokenKind::Fraction(q) => format!("fraction {q}"),
            TokenKind::ImagUnit => "'i'".into(),
            TokenKind::Variable(v) => format!("name '{v}'"),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < src.len() {
        let c = src[pos..].chars().next().unwrap();
        let start = pos;
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' | '\u{2212}' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            pos += c.len_utf8();
            out.push(Token { kind, span: Span::new(start, pos) });
            continue;
        }
        if c.is_ascii_digit() {
            while pos < src.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let num: BigInt = src[start..pos].parse().unwrap();
            let kind = if pos + 1 < src.len() && bytes[pos] == b'/' && bytes[pos + 1].is_ascii_digit() {
                let dstart = pos + 1;
                pos = dstart;
                while pos < src.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let den: BigInt = src[dstart..pos].parse().unwrap();
                if den.is_zero() {
                    return Err(ParseError::new("zero denominator", Span::new(start, pos)));
                }
                TokenKind::Fraction(Rational::new(num, den))
            } else {
                TokenKind::Integer(num)
            };
            if pos < src.len() && (bytes[pos] == b'.' || bytes[pos] == b'/') {
                return Err(ParseError::new("malformed number literal", Span::new(start, pos + 1))
                    .expecting(&["integer", "p/q"]));
            }
            out.push(Token { kind, span: Span::new(start, pos) });
            continue;
        }
        if is_ident_start(c) {
            while pos < src.len() && is_ident_continue(bytes[pos] as char) {
                pos += 1;
            }
            let name = &src[start..pos];
            let kind = if name == "i" { TokenKind::ImagUnit } else { TokenKind::Variable(name.to_string()) };
            out.push(Token { kind, span: Span::new(start, pos) });
            continue;
        }
        return Err(ParseError::new(format!("unexpected character '{c}'"), Span::new(start, start + c.len_utf8())));
    }
    Ok(out)
}

fn validate_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue) && name != "i"
}

struct Cursor<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Cursor { src, tokens: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eof_span(&self) -> Span {
        // Point at the last visible character so the span is non-empty.
        let n = self.src.trim_end().len();
        match self.src[..n].chars().next_back() {
            Some(c) => Span::new(n - c.len_utf8(), n),
            None => Span::new(0, 0),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(format!("unexpected {}", t.kind.describe()), t.span).expecting(expected),
            None => ParseError::new("unexpected end of input", self.eof_span()).expecting(expected),
        }
    }

    /// True if the next token is `i` written directly after the previous one.
    fn glued_imag(&self) -> bool {
        match (self.pos.checked_sub(1).and_then(|p| self.tokens.get(p)), self.peek()) {
            (Some(prev), Some(t)) => t.kind == TokenKind::ImagUnit && t.span.start == prev.span.end,
            _ => false,
        }
    }
}

struct PolyParser<'a> {
    cur: Cursor<'a>,
    vars: &'a [String],
}

const ATOM_START: &[&str] = &["number", "'i'", "variable", "'('", "'-'"];

impl<'a> PolyParser<'a> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn lift(&self, e: PolyError, span: Span) -> ParseError {
        ParseError::new(e.to_string(), span)
    }

    fn span_from(&self, start: usize) -> Span {
        let end = self.cur.tokens[..self.cur.pos].last().map(|t| t.span.end).unwrap_or(start);
        Span::new(start, end.max(start))
    }

    fn start(&self) -> usize {
        self.cur.peek().map(|t| t.span.start).unwrap_or(self.cur.eof_span().start)
    }

    fn expr(&mut self) -> Result<SparsePoly, ParseError> {
        let start = self.start();
        let mut acc = self.term()?;
        loop {
            let neg = if self.cur.eat(&TokenKind::Plus) {
                false
            } else if self.cur.eat(&TokenKind::Minus) {
                true
            } else {
                break;
            };
            let rhs = self.term()?;
            let rhs = if neg { rhs.neg() } else { rhs };
            acc = acc.add(&rhs).map_err(|e| self.lift(e, self.span_from(start)))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly, ParseError> {
        let start = self.start();
        let mut acc = self.factor()?;
        while self.cur.eat(&TokenKind::Star) {
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).map_err(|e| self.lift(e, self.span_from(start)))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly, ParseError> {
        if self.cur.eat(&TokenKind::Minus) {
            return Ok(self.factor()?.neg());
        }
        if self.cur.eat(&TokenKind::Plus) {
            return self.factor();
        }
        let start = self.start();
        let base = self.atom()?;
        if !self.cur.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let (e, espan) = self.exponent()?;
        let span = Span::new(start, espan.end);
        if e >= 0 {
            let e = u32::try_from(e).map_err(|_| ParseError::new("exponent too large", espan))?;
            return base.pow(e).map_err(|err| self.lift(err, span));
        }
        if base.is_zero() {
            return Err(ParseError::new("zero raised to a negative power", span));
        }
        // Negative powers are only defined for monomials.
        if base.term_count() != 1 {
            return Err(ParseError::new("negative exponent needs a monomial base", span));
        }
        let (exp, c) = base.terms().next().unwrap();
        let c = c.pow(e).expect("nonzero coefficient");
        let exp = exp.checked_scale(e).map_err(|err| self.lift(err, span))?;
        Ok(SparsePoly::monomial(self.nvars(), c, exp))
    }

    fn exponent(&mut self) -> Result<(i64, Span), ParseError> {
        let paren = self.cur.eat(&TokenKind::LParen);
        let neg = if self.cur.eat(&TokenKind::Minus) {
            true
        } else {
            self.cur.eat(&TokenKind::Plus);
            false
        };
        let tok = match self.cur.peek() {
            Some(Token { kind: TokenKind::Integer(_), .. }) => self.cur.next().unwrap(),
            Some(Token { kind: TokenKind::Fraction(_), span }) => {
                return Err(ParseError::new("non-integer exponent", *span).expecting(&["integer"]))
            }
            _ => return Err(self.cur.unexpected(&["integer"])),
        };
        let TokenKind::Integer(n) = &tok.kind else { unreachable!() };
        let n = if neg { -n } else { n.clone() };
        let n: i64 = n.try_into().map_err(|_| ParseError::new("exponent out of range", tok.span))?;
        let mut span = tok.span;
        if paren {
            if !self.cur.eat(&TokenKind::RParen) {
                return Err(self.cur.unexpected(&["')'"]));
            }
            span.end += 1;
        }
        Ok((n, span))
    }

    fn number(&mut self, q: Rational) -> SparsePoly {
        let c = if self.cur.glued_imag() {
            self.cur.next();
            GaussianRational::new(Rational::zero(), q)
        } else {
            GaussianRational::from_rational(q)
        };
        SparsePoly::constant(self.nvars(), c)
    }

    fn atom(&mut self) -> Result<SparsePoly, ParseError> {
        let Some(tok) = self.cur.peek().cloned() else {
            return Err(self.cur.unexpected(ATOM_START));
        };
        match tok.kind {
            TokenKind::Integer(n) => {
                self.cur.next();
                Ok(self.number(Rational::from_integer(n)))
            }
            TokenKind::Fraction(q) => {
                self.cur.next();
                Ok(self.number(q))
            }
            TokenKind::ImagUnit => {
                self.cur.next();
                Ok(SparsePoly::constant(self.nvars(), GaussianRational::i()))
            }
            TokenKind::Variable(name) => {
                self.cur.next();
                match self.vars.iter().position(|v| *v == name) {
                    Some(k) => Ok(SparsePoly::var(self.nvars(), k)),
                    None => {
                        let expected: Vec<&str> = self.vars.iter().map(String::as_str).collect();
                        Err(ParseError::new(format!("unknown variable '{name}'"), tok.span).expecting(&expected))
                    }
                }
            }
            TokenKind::LParen => {
                self.cur.next();
                let inner = self.expr()?;
                if !self.cur.eat(&TokenKind::RParen) {
                    return Err(self.cur.unexpected(&["')'", "'+'", "'-'", "'*'"]));
                }
                Ok(inner)
            }
            _ => Err(self.cur.unexpected(ATOM_START)),
        }
    }
}

/// Parses a polynomial in the given ordered variables.
pub fn parse_poly(src: &str, variables: &[String]) -> Result<SparsePoly, ParseError> {
    if variables.is_empty() {
        return Err(ParseError::new("variable list is empty", Span::new(0, 0)));
    }
    let mut seen = BTreeSet::new();
    for v in variables {
        if !validate_name(v) {
            return Err(ParseError::new(format!("invalid variable name '{v}'"), Span::new(0, 0)));
        }
        if !seen.insert(v.as_str()) {
            return Err(ParseError::new(format!("duplicate variable name '{v}'"), Span::new(0, 0)));
        }
    }
    let mut p = PolyParser { cur: Cursor::new(src)?, vars: variables };
    let poly = p.expr()?;
    if p.cur.peek().is_some() {
        return Err(p.cur.unexpected(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(poly)
}

/// Variable names appearing in `src`, in natural order (`X2` before `X10`).
pub fn collect_variables(src: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = tokenize(src)?
        .into_iter()
        .filter_map(|t| match t.kind {
            TokenKind::Variable(v) => Some(v),
            _ => None,
        })
        .collect();
    names.sort_by(|a, b| natural_key(a).cmp(&natural_key(b)));
    names.dedup();
    Ok(names)
}

fn natural_key(s: &str) -> (&str, usize, &str) {
    let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, digits) = s.split_at(split);
    (head, digits.len(), digits)
}

/// Parses an exponential sum `Σ c_i α_i^n`, merging repeated bases.
pub fn parse_expsum(src: &str) -> Result<ExpSum, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut items: Vec<(Rational, BigInt, Span)> = Vec::new();
    let mut first = true;
    loop {
        let neg = if first {
            if cur.eat(&TokenKind::Minus) {
                true
            } else {
                cur.eat(&TokenKind::Plus);
                false
            }
        } else if cur.eat(&TokenKind::Plus) {
            false
        } else if cur.eat(&TokenKind::Minus) {
            true
        } else if cur.peek().is_none() {
            break;
        } else {
            return Err(cur.unexpected(&["'+'", "'-'", "end of input"]));
        };
        first = false;
        let (coeff, base, span) = expsum_item(&mut cur)?;
        items.push((if neg { -coeff } else { coeff }, base, span));
    }

    let mut merged: Vec<(Rational, BigInt, Span)> = Vec::new();
    for (c, b, span) in items {
        if b <= BigInt::one() {
            return Err(ParseError::new(format!("base {b} must be at least 2"), span));
        }
        match merged.iter_mut().find(|(_, mb, _)| *mb == b) {
            Some(slot) => {
                slot.0 += c;
                slot.2 = span;
            }
            None => merged.push((c, b, span)),
        }
    }
    if let Some((_, b, span)) = merged.iter().find(|(c, _, _)| c.is_zero()) {
        return Err(ParseError::new(format!("coefficient of {b}^n is zero"), *span));
    }
    Ok(ExpSum::from_merged(merged.into_iter().map(|(c, b, _)| (c, b)).collect()))
}

fn expsum_item(cur: &mut Cursor<'_>) -> Result<(Rational, BigInt, Span), ParseError> {
    let start = cur.peek().map(|t| t.span.start).unwrap_or(cur.eof_span().start);
    let mut coeff = Rational::one();
    let mut base: Option<BigInt> = None;

    match cur.peek().map(|t| t.kind.clone()) {
        Some(TokenKind::LParen) => {
            cur.next();
            let neg = cur.eat(&TokenKind::Minus);
            coeff = match cur.next().map(|t| t.kind) {
                Some(TokenKind::Integer(n)) => Rational::from_integer(n),
                Some(TokenKind::Fraction(q)) => q,
                _ => {
                    cur.pos = cur.pos.saturating_sub(1);
                    return Err(cur.unexpected(&["number"]));
                }
            };
            if neg {
                coeff = -coeff;
            }
            if !cur.eat(&TokenKind::RParen) {
                return Err(cur.unexpected(&["')'"]));
            }
            cur.eat(&TokenKind::Star);
        }
        Some(TokenKind::Fraction(q)) => {
            cur.next();
            coeff = q;
            cur.eat(&TokenKind::Star);
        }
        Some(TokenKind::Integer(n)) => {
            cur.next();
            if cur.peek().map(|t| &t.kind) == Some(&TokenKind::Caret) {
                base = Some(n);
            } else {
                coeff = Rational::from_integer(n);
                cur.eat(&TokenKind::Star);
            }
        }
        _ => return Err(cur.unexpected(&["number"])),
    }

    let base = match base {
        Some(b) => b,
        None => match cur.next() {
            Some(Token { kind: TokenKind::Integer(n), .. }) => n,
            Some(Token { kind: TokenKind::Fraction(_), span }) => {
                return Err(ParseError::new("base must be an integer", span).expecting(&["integer"]))
            }
            _ => {
                cur.pos = cur.pos.saturating_sub(1);
                return Err(cur.unexpected(&["integer base"]));
            }
        },
    };
    if !cur.eat(&TokenKind::Caret) {
        return Err(cur.unexpected(&["'^'"]));
    }
    match cur.next() {
        Some(Token { kind: TokenKind::Variable(v), .. }) if v == "n" => {}
        _ => {
            cur.pos = cur.pos.saturating_sub(1);
            return Err(cur.unexpected(&["'n'"]));
        }
    }
    let end = cur.tokens[cur.pos - 1].span.end;
    Ok((coeff, base, Span::new(start, end)))
}
