//! Text syntax for rings, series, group elements and Lie elements.
//!
//! ```text
//! ring    := "Q" bracket*
//! bracket := "[" gen ("," gen)* (";" "cap" "=" int)? "]"
//! gen     := name "^" int "=" "0"
//! series  := sign? term (sign term)* ("+" big_o)? | big_o
//! big_o   := "O" "(" "t" "^" int ")"
//! term    := factor ("*"? factor)*
//! factor  := rational | "(" sign? rational ")" | name ("^" int)? | "t" ("^" int)?
//! group   := "(" "h" "=" series ";" "phi" "=" series ")"
//! lie     := "(" "s" "=" series ";" "r" "=" series ")"
//! ```
//!
//! Whitespace is ignored. Only the first bracket of a ring may carry a cap,
//! which then bounds the total degree in that bracket's generators. This is
//! the form in which rings print.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use punctured_core::{Error, GroupElem, LaurentSeries, LieElem, Precision, Rational, Ring, RingElem, RingSpec};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    UnboundGenerator,
    /// The text is well formed but does not denote a valid value, e.g. a
    /// group element whose `h` is not invertible.
    Elaboration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub span: Span,
    pub message: String,
}

impl ParseError {
    fn syntax(span: Span, message: impl Into<String>) -> Self {
        ParseError { kind: ErrorKind::Syntax, span, message: message.into() }
    }

    fn elab(span: Span, err: Error) -> Self {
        ParseError { kind: ErrorKind::Elaboration, span, message: err.to_string() }
    }

    /// The message followed by the source line with a caret marker under the span.
    pub fn render(&self, src: &str) -> String {
        let start = self.span.start.min(src.len());
        let end = self.span.end.clamp(start, src.len());
        let width = src[start..end].chars().count().max(1);
        let pad = src[..start].chars().count();
        format!("{self}\n  {src}\n  {}{}", " ".repeat(pad), "^".repeat(width))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

/// What a piece of text is expected to denote.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Ring,
    Series,
    Group,
    Lie,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenAst {
    pub name: String,
    pub exponent: u32,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAst {
    pub gens: Vec<GenAst>,
    pub cap: Option<(u32, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAst {
    pub brackets: Vec<BracketAst>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPower {
    pub name: String,
    pub exponent: u32,
    pub span: Span,
}

/// `coeff * gens * t^t_exp`; the sign in front of the term is folded into `coeff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermAst {
    pub coeff: Rational,
    pub gens: Vec<GenPower>,
    pub t_exp: i64,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesAst {
    pub terms: Vec<TermAst>,
    pub big_o: Option<(i64, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Ring(RingAst),
    Series(SeriesAst),
    Group { h: SeriesAst, phi: SeriesAst, span: Span },
    Lie { s: SeriesAst, r: SeriesAst, span: Span },
}

impl Ast {
    pub fn span(&self) -> Span {
        match self {
            Ast::Ring(r) => r.span,
            Ast::Series(s) => s.span,
            Ast::Group { span, .. } | Ast::Lie { span, .. } => *span,
        }
    }
}

/// An elaborated value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Ring(Ring),
    Series(LaurentSeries),
    Group(GroupElem),
    Lie(LieElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> ParseResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push(Token { tok: Tok::Num(src[i..end].to_string()), span: Span { start: i, end } });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push(Token { tok: Tok::Ident(src[i..end].to_string()), span: Span { start: i, end } });
        } else if "+-*/^=,;()[]".contains(c) {
            chars.next();
            out.push(Token { tok: Tok::Punct(c), span: Span { start: i, end: i + 1 } });
        } else {
            return Err(ParseError::syntax(Span { start: i, end: i + c.len_utf8() }, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => Span { start: self.len, end: self.len },
        }
    }

    fn last_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Num(n)) => format!("`{n}`"),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Punct(c)) => format!("`{c}`"),
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> ParseResult<Span> {
        let span = self.here();
        if self.eat_punct(c) {
            Ok(span)
        } else {
            Err(ParseError::syntax(span, format!("expected `{c}`, found {}", self.describe())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> ParseResult<Span> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(span)
            }
            _ => Err(ParseError::syntax(span, format!("expected `{kw}`, found {}", self.describe()))),
        }
    }

    fn ident(&mut self) -> ParseResult<(String, Span)> {
        let span = self.here();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok((s, span))
            }
            _ => Err(ParseError::syntax(span, format!("expected a name, found {}", self.describe()))),
        }
    }

    fn digits(&mut self) -> ParseResult<(String, Span)> {
        let span = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok((n, span))
            }
            _ => Err(ParseError::syntax(span, format!("expected a number, found {}", self.describe()))),
        }
    }

    fn uint<T: FromStr>(&mut self) -> ParseResult<(T, Span)> {
        let (n, span) = self.digits()?;
        let v = n.parse().map_err(|_| ParseError::syntax(span, format!("number `{n}` is out of range")))?;
        Ok((v, span))
    }

    fn int(&mut self) -> ParseResult<(i64, Span)> {
        let start = self.here();
        let neg = self.eat_punct('-');
        let (v, span): (i64, Span) = self.uint()?;
        Ok((if neg { -v } else { v }, start.join(span)))
    }

    /// `digits ("/" digits)?`
    fn rational(&mut self) -> ParseResult<(Rational, Span)> {
        let (num, start) = self.digits()?;
        let mut span = start;
        let mut text = num;
        if self.eat_punct('/') {
            let (den, end) = self.digits()?;
            span = span.join(end);
            if den.bytes().all(|b| b == b'0') {
                return Err(ParseError::syntax(span, "zero denominator"));
            }
            text = format!("{text}/{den}");
        }
        let q = Rational::from_str(&text).map_err(|e| ParseError::syntax(span, e))?;
        Ok((q, span))
    }

    fn end(&self) -> ParseResult<()> {
        if self.pos < self.toks.len() {
            return Err(ParseError::syntax(self.here(), format!("unexpected {} after the expression", self.describe())));
        }
        Ok(())
    }

    fn ring(&mut self) -> ParseResult<RingAst> {
        let start = self.expect_keyword("Q")?;
        let mut brackets = Vec::new();
        while self.is_punct('[') {
            let open = self.expect_punct('[')?;
            let mut gens = Vec::new();
            let mut cap = None;
            loop {
                let (name, nspan) = self.ident()?;
                self.expect_punct('^')?;
                let (exponent, _) = self.uint::<u32>()?;
                self.expect_punct('=')?;
                let (zero, zspan) = self.digits()?;
                if zero != "0" {
                    return Err(ParseError::syntax(zspan, "a relation must read `name^k=0`"));
                }
                gens.push(GenAst { name, exponent, span: nspan.join(zspan) });
                if self.eat_punct(',') {
                    continue;
                }
                if self.eat_punct(';') {
                    let kw = self.expect_keyword("cap")?;
                    self.expect_punct('=')?;
                    let (c, cspan) = self.uint::<u32>()?;
                    cap = Some((c, kw.join(cspan)));
                }
                break;
            }
            let close = self.expect_punct(']')?;
            brackets.push(BracketAst { gens, cap, span: open.join(close) });
        }
        Ok(RingAst { brackets, span: start.join(Span { start: self.last_end(), end: self.last_end() }) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Punct('(')))
    }

    fn at_big_o(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "O")
            && self.peek_at(1) == Some(&Tok::Punct('('))
            && matches!(self.peek_at(2), Some(Tok::Ident(s)) if s == "t")
    }

    fn big_o(&mut self) -> ParseResult<(i64, Span)> {
        let start = self.expect_keyword("O")?;
        self.expect_punct('(')?;
        self.expect_keyword("t")?;
        self.expect_punct('^')?;
        let (k, _) = self.int()?;
        let end = self.expect_punct(')')?;
        Ok((k, start.join(end)))
    }

    fn term(&mut self, negative: bool, sign_span: Option<Span>) -> ParseResult<TermAst> {
        let mut coeff = Rational::from_int(if negative { -1 } else { 1 });
        let mut gens = Vec::new();
        let mut t_exp = 0i64;
        let mut span = sign_span.unwrap_or_else(|| self.here());
        let mut first = true;
        loop {
            if !first && !self.eat_punct('*') && (!self.starts_factor() || self.at_big_o()) {
                break;
            }
            first = false;
            let fspan = self.here();
            match self.peek().cloned() {
                Some(Tok::Num(_)) => {
                    let (q, s) = self.rational()?;
                    coeff = &coeff * &q;
                    span = span.join(s);
                }
                Some(Tok::Punct('(')) => {
                    self.pos += 1;
                    let neg = if self.eat_punct('-') {
                        true
                    } else {
                        self.eat_punct('+');
                        false
                    };
                    let (q, _) = self.rational()?;
                    let close = self.expect_punct(')')?;
                    coeff = &coeff * &if neg { -&q } else { q };
                    span = span.join(close);
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    let mut s = fspan;
                    let exp = if self.eat_punct('^') {
                        let (e, es) = self.int()?;
                        s = s.join(es);
                        e
                    } else {
                        1
                    };
                    if name == "t" {
                        t_exp += exp;
                    } else {
                        let exponent = u32::try_from(exp)
                            .map_err(|_| ParseError::syntax(s, format!("generator `{name}` needs a non-negative exponent")))?;
                        gens.push(GenPower { name, exponent, span: s });
                    }
                    span = span.join(s);
                }
                _ => {
                    return Err(ParseError::syntax(fspan, format!("expected a coefficient, generator or `t`, found {}", self.describe())));
                }
            }
        }
        Ok(TermAst { coeff, gens, t_exp, span })
    }

    fn series(&mut self) -> ParseResult<SeriesAst> {
        let start = self.here();
        let mut terms = Vec::new();
        let mut big_o = None;
        if self.at_big_o() {
            big_o = Some(self.big_o()?);
        } else {
            let mut sign_span = None;
            let mut negative = false;
            if self.is_punct('-') || self.is_punct('+') {
                negative = self.is_punct('-');
                sign_span = Some(self.here());
                self.pos += 1;
            }
            terms.push(self.term(negative, sign_span)?);
            while self.is_punct('+') || self.is_punct('-') {
                let negative = self.is_punct('-');
                let sign_span = self.here();
                self.pos += 1;
                if self.at_big_o() {
                    if negative {
                        return Err(ParseError::syntax(sign_span, "write the error term as `+ O(t^k)`"));
                    }
                    big_o = Some(self.big_o()?);
                    break;
                }
                terms.push(self.term(negative, Some(sign_span))?);
            }
        }
        let end = self.last_end();
        Ok(SeriesAst { terms, big_o, span: start.join(Span { start: end, end }) })
    }

    fn pair(&mut self, first: &str, second: &str) -> ParseResult<(SeriesAst, SeriesAst, Span)> {
        let open = self.expect_punct('(')?;
        self.expect_keyword(first)?;
        self.expect_punct('=')?;
        let a = self.series()?;
        self.expect_punct(';')?;
        self.expect_keyword(second)?;
        self.expect_punct('=')?;
        let b = self.series()?;
        let close = self.expect_punct(')')?;
        Ok((a, b, open.join(close)))
    }
}

/// Parses `text` as an expression of the given kind.
pub fn parse_expr(text: &str, kind: ExprKind) -> ParseResult<Ast> {
    let mut p = Parser { toks: lex(text)?, pos: 0, len: text.len() };
    let ast = match kind {
        ExprKind::Ring => Ast::Ring(p.ring()?),
        ExprKind::Series => Ast::Series(p.series()?),
        ExprKind::Group => {
            let (h, phi, span) = p.pair("h", "phi")?;
            Ast::Group { h, phi, span }
        }
        ExprKind::Lie => {
            let (s, r, span) = p.pair("s", "r")?;
            Ast::Lie { s, r, span }
        }
    };
    p.end()?;
    Ok(ast)
}

pub fn elaborate_ring(ast: &RingAst) -> ParseResult<Ring> {
    let mut names = Vec::new();
    let mut exps = Vec::new();
    let mut cap = None;
    let mut scope = 0;
    for (i, b) in ast.brackets.iter().enumerate() {
        if let Some((c, span)) = b.cap {
            if i > 0 {
                return Err(ParseError::syntax(span, "only the first bracket may carry a cap"));
            }
            cap = Some(c);
        }
        for g in &b.gens {
            if names.contains(&g.name) {
                return Err(ParseError::elab(g.span, Error::NameCollision(g.name.clone())));
            }
            names.push(g.name.clone());
            exps.push(g.exponent);
        }
        if i == 0 {
            scope = b.gens.len();
        }
    }
    RingSpec::with_cap_scope(names, exps, cap, scope).map_err(|e| ParseError::elab(ast.span, e))
}

pub fn elaborate_series(ast: &SeriesAst, ring: &Ring) -> ParseResult<LaurentSeries> {
    let mut coeffs: BTreeMap<i64, RingElem> = BTreeMap::new();
    for term in &ast.terms {
        let mut c = RingElem::from_rational(ring, term.coeff.clone());
        for g in &term.gens {
            let x = RingElem::generator(ring, &g.name).map_err(|_| ParseError {
                kind: ErrorKind::UnboundGenerator,
                span: g.span,
                message: format!("generator `{}` is not in the ring {ring}", g.name),
            })?;
            c = &c * &x.pow(g.exponent);
        }
        if let Some((k, _)) = ast.big_o {
            if term.t_exp >= k {
                continue;
            }
        }
        let slot = coeffs.entry(term.t_exp).or_insert_with(|| RingElem::zero(ring));
        *slot = &*slot + &c;
    }
    let prec = match ast.big_o {
        Some((k, _)) => Precision::Finite(k),
        None => Precision::Exact,
    };
    LaurentSeries::from_terms(ring, coeffs, prec).map_err(|e| ParseError::elab(ast.span, e))
}

pub fn elaborate(ast: &Ast, ring: &Ring) -> ParseResult<Value> {
    Ok(match ast {
        Ast::Ring(r) => Value::Ring(elaborate_ring(r)?),
        Ast::Series(s) => Value::Series(elaborate_series(s, ring)?),
        Ast::Group { h, phi, span } => {
            let h = elaborate_series(h, ring)?;
            let phi = elaborate_series(phi, ring)?;
            Value::Group(GroupElem::new(h, phi).map_err(|e| ParseError::elab(*span, e))?)
        }
        Ast::Lie { s, r, span } => {
            let s = elaborate_series(s, ring)?;
            let r = elaborate_series(r, ring)?;
            Value::Lie(LieElem::new(s, r).map_err(|e| ParseError::elab(*span, e))?)
        }
    })
}

pub fn ring(text: &str) -> ParseResult<Ring> {
    match parse_expr(text, ExprKind::Ring)? {
        Ast::Ring(r) => elaborate_ring(&r),
        _ => unreachable!(),
    }
}

pub fn series(text: &str, ring: &Ring) -> ParseResult<LaurentSeries> {
    match parse_expr(text, ExprKind::Series)? {
        Ast::Series(s) => elaborate_series(&s, ring),
        _ => unreachable!(),
    }
}

pub fn group(text: &str, ring: &Ring) -> ParseResult<GroupElem> {
    match elaborate(&parse_expr(text, ExprKind::Group)?, ring)? {
        Value::Group(g) => Ok(g),
        _ => unreachable!(),
    }
}

pub fn lie(text: &str, ring: &Ring) -> ParseResult<LieElem> {
    match elaborate(&parse_expr(text, ExprKind::Lie)?, ring)? {
        Value::Lie(l) => Ok(l),
        _ => unreachable!(),
    }
}
