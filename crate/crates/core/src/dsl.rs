//! Right-hand sides of evolution systems, written one equation per line:
//!
//! ```text
//! # coupled waves
//! u' = -11/4 + 11*(u - 1)^2
//! v' = -5.5 * v_x + d_x^3(u)
//! ```
//!
//! Field names are alphanumeric identifiers starting with a letter and are
//! declared by appearing on a left-hand side; their order is the order of first
//! appearance. Spatial derivatives are written `u_x`, `u_xx`, ... or
//! `d_x^k(u)` (`d_x(u)` for `k = 1`) and may only be applied to a field.
//!
//! Precedence, loosest first: binary `+ -`, `*`, unary `-`, `^`. So `-u^2` is
//! `-(u^2)` and `-5.5 * u` multiplies by the constant `-11/2`. A minus sign
//! directly in front of a number literal (not followed by `^`) is folded into
//! the literal. `^` takes a positive integer exponent and does not chain.
//! Literals are exact: `5.5` is `11/2`, `-11/4` is `-11/4`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::ParseErrorKind;
use crate::series::{TanhPoly, TimeSeries};
use crate::{Error, Result};

/// Reduced fraction `num/den`, `den > 0`, with its `f64` value fixed at
/// construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rational {
    num: i64,
    den: i64,
    value: f64,
}

impl Rational {
    /// Returns `None` for a zero denominator.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        let (num, den) = (sign * num / g, sign * den / g);
        Some(Rational {
            num,
            den,
            value: num as f64 / den as f64,
        })
    }

    pub fn integer(n: i64) -> Self {
        Rational {
            num: n,
            den: 1,
            value: n as f64,
        }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    fn negate(self) -> Self {
        Rational {
            num: -self.num,
            den: self.den,
            value: -self.value,
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Right-hand-side expression tree. Field indices refer to
/// [`PdeSystem::fields`].
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rational),
    Field(usize),
    /// `order`-th spatial derivative of a field, `order >= 1`.
    Deriv {
        field: usize,
        order: u32,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Positive integer power.
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Highest spatial derivative order appearing in the tree.
    pub fn max_spatial_order(&self) -> u32 {
        match self {
            Expr::Const(_) | Expr::Field(_) => 0,
            Expr::Deriv { order, .. } => *order,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.max_spatial_order().max(b.max_spatial_order())
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_spatial_order(),
        }
    }

    fn check_indices(&self, n: usize) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Field(i) => *i < n,
            Expr::Deriv { field, order } => *field < n && *order >= 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.check_indices(n) && b.check_indices(n)
            }
            Expr::Neg(a) => a.check_indices(n),
            Expr::Pow(a, e) => *e >= 1 && a.check_indices(n),
        }
    }

    /// Formats the expression with the given field names.
    pub fn display<'a>(&'a self, fields: &'a [String]) -> impl fmt::Display + 'a {
        DisplayExpr { expr: self, fields }
    }
}

/// A parsed, validated system `name_i' = rhs_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeSystem {
    fields: Vec<String>,
    rhs: Vec<Expr>,
}

impl PdeSystem {
    /// Builds a system directly from its parts, checking that every field
    /// reference is in range.
    pub fn new(fields: Vec<String>, rhs: Vec<Expr>) -> Result<Self> {
        if fields.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: fields.len(),
                found: rhs.len(),
            });
        }
        if fields.is_empty() {
            return Err(Error::InvalidArgument("a system needs at least one field"));
        }
        if !rhs.iter().all(|e| e.check_indices(fields.len())) {
            return Err(Error::InvalidArgument(
                "expression references an undeclared field",
            ));
        }
        Ok(PdeSystem { fields, rhs })
    }

    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn rhs(&self) -> &[Expr] {
        &self.rhs
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    pub fn max_spatial_order(&self) -> u32 {
        self.rhs
            .iter()
            .map(Expr::max_spatial_order)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, rhs) in self.fields.iter().zip(&self.rhs) {
            writeln!(f, "{name}' = {}", rhs.display(&self.fields))?;
        }
        Ok(())
    }
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

struct DisplayExpr<'a> {
    expr: &'a Expr,
    fields: &'a [String],
}

impl DisplayExpr<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
        let paren = |p: u8| p < min_prec;
        let open =
            |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str("(") } else { Ok(()) };
        let close =
            |f: &mut fmt::Formatter<'_>, wrap: bool| if wrap { f.write_str(")") } else { Ok(()) };
        match e {
            Expr::Const(r) => {
                let wrap = if r.is_negative() {
                    paren(PREC_UNARY)
                } else if r.denom() != 1 {
                    // keep `11/4` away from a following `^`
                    min_prec >= PREC_ATOM
                } else {
                    false
                };
                open(f, wrap)?;
                write!(f, "{r}")?;
                close(f, wrap)
            }
            Expr::Field(i) => f.write_str(&self.fields[*i]),
            Expr::Deriv { field, order } => {
                write!(f, "{}_", self.fields[*field])?;
                for _ in 0..*order {
                    f.write_str("x")?;
                }
                Ok(())
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let wrap = paren(PREC_SUM);
                open(f, wrap)?;
                self.write(f, a, PREC_SUM)?;
                f.write_str(if matches!(e, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                self.write(f, b, PREC_PRODUCT)?;
                close(f, wrap)
            }
            Expr::Mul(a, b) => {
                let wrap = paren(PREC_PRODUCT);
                open(f, wrap)?;
                self.write(f, a, PREC_PRODUCT)?;
                f.write_str(" * ")?;
                self.write(f, b, PREC_UNARY)?;
                close(f, wrap)
            }
            Expr::Neg(a) => {
                let wrap = paren(PREC_UNARY);
                open(f, wrap)?;
                f.write_str("-")?;
                if let Expr::Const(_) = **a {
                    // a bare literal here would be folded back into the constant
                    f.write_str("(")?;
                    self.write(f, a, PREC_SUM)?;
                    f.write_str(")")?;
                } else {
                    self.write(f, a, PREC_UNARY)?;
                }
                close(f, wrap)
            }
            Expr::Pow(base, exp) => {
                let wrap = paren(PREC_POWER);
                open(f, wrap)?;
                let base_wrap = match **base {
                    Expr::Const(r) => r.is_negative() || r.denom() != 1,
                    Expr::Field(_) | Expr::Deriv { .. } => false,
                    _ => true,
                };
                open(f, base_wrap)?;
                self.write(f, base, PREC_SUM)?;
                close(f, base_wrap)?;
                write!(f, "^{exp}")?;
                close(f, wrap)
            }
        }
    }
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, PREC_SUM)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Prime,
    Equals,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::End => f.write_str("end of line"),
        }
    }
}

/// Token with its 1-based column.
#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '\'' => Some(Tok::Prime),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Number(text),
                col,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(text),
                col,
            });
        } else {
            return Err(Error::parse(
                ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                line_no,
                col,
            ));
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}

/// Exact value of an unsigned decimal literal such as `12`, `5.5` or `.25`.
fn decimal_literal(text: &str) -> Option<Rational> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let mut num: i64 = 0;
    let mut den: i64 = 1;
    for d in int.chars().chain(frac.chars()) {
        num = num.checked_mul(10)?.checked_add(d.to_digit(10)? as i64)?;
    }
    for _ in frac.chars() {
        den = den.checked_mul(10)?;
    }
    Rational::new(num, den)
}

fn is_field_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    fields: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, kind: ParseErrorKind, col: usize) -> Error {
        Error::parse(kind, self.line, col)
    }

    fn syntax(&self, msg: String) -> Error {
        self.err_at(ParseErrorKind::Syntax(msg), self.col())
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    return Err(self.syntax(
                        "`/` is only allowed inside rational literals such as 11/4".to_string(),
                    ))
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// Whether the tokens at the cursor form a literal that is not the base of
    /// a power.
    fn literal_ahead(&self) -> bool {
        if !matches!(self.peek(), Tok::Number(_)) {
            return false;
        }
        let after = if *self.peek_at(1) == Tok::Slash { 3 } else { 1 };
        *self.peek_at(after) != Tok::Caret
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            if self.literal_ahead() {
                let r = self.literal()?;
                return Ok(Expr::Const(r.negate()));
            }
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let exp = match self.bump().tok {
            Tok::Number(text) => text.parse::<u32>().ok().filter(|&e| e >= 1),
            _ => None,
        };
        let Some(exp) = exp else {
            return Err(self.err_at(
                ParseErrorKind::Syntax("exponent must be a positive integer".to_string()),
                col,
            ));
        };
        if *self.peek() == Tok::Caret {
            return Err(self.syntax("chained `^` is ambiguous; add parentheses".to_string()));
        }
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn literal(&mut self) -> Result<Rational> {
        let col = self.col();
        let Tok::Number(text) = self.bump().tok else {
            return Err(self.err_at(ParseErrorKind::Syntax("expected a number".to_string()), col));
        };
        let bad = |p: &Self| {
            p.err_at(
                ParseErrorKind::Syntax(format!("invalid or out-of-range literal `{text}`")),
                col,
            )
        };
        let mut r = decimal_literal(&text).ok_or_else(|| bad(self))?;
        if *self.peek() == Tok::Slash {
            self.bump();
            let dcol = self.col();
            let den = match self.bump().tok {
                Tok::Number(d) => d.parse::<i64>().ok().filter(|&d| d != 0),
                _ => None,
            };
            let Some(den) = den else {
                return Err(self.err_at(
                    ParseErrorKind::Syntax("denominator must be a nonzero integer".to_string()),
                    dcol,
                ));
            };
            let scaled = r.denom().checked_mul(den).ok_or_else(|| bad(self))?;
            r = Rational::new(r.numer(), scaled).ok_or_else(|| bad(self))?;
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        let atom = match self.peek().clone() {
            Tok::Number(_) => Expr::Const(self.literal()?),
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                inner
            }
            Tok::Ident(name) => {
                self.bump();
                self.identifier(&name, col)?
            }
            other => return Err(self.syntax(format!("expected an operand, found {other}"))),
        };
        if let Tok::Ident(s) = self.peek() {
            if s.starts_with('_') {
                return Err(self.err_at(
                    ParseErrorKind::UnsupportedDerivative(
                        "derivatives apply to fields only, not to subexpressions".to_string(),
                    ),
                    self.col(),
                ));
            }
        }
        Ok(atom)
    }

    fn resolve_field(&self, name: &str, col: usize) -> Result<usize> {
        self.fields
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| self.err_at(ParseErrorKind::UnknownField(name.to_string()), col))
    }

    fn identifier(&mut self, name: &str, col: usize) -> Result<Expr> {
        let Some((base, suffix)) = name.split_once('_') else {
            return Ok(Expr::Field(self.resolve_field(name, col)?));
        };
        if base == "d" {
            return self.operator_derivative(suffix, col);
        }
        if base.is_empty() {
            return Err(self.err_at(
                ParseErrorKind::Syntax(format!("malformed identifier `{name}`")),
                col,
            ));
        }
        let field = self.resolve_field(base, col)?;
        if !suffix.is_empty() && suffix.chars().all(|c| c == 'x') {
            return Ok(Expr::Deriv {
                field,
                order: suffix.len() as u32,
            });
        }
        let kind = if suffix.contains('t') {
            ParseErrorKind::UnsupportedDerivative(format!(
                "`{name}`: time derivatives are not allowed on the right-hand side"
            ))
        } else {
            ParseErrorKind::Syntax(format!("malformed derivative `{name}`"))
        };
        Err(self.err_at(kind, col))
    }

    /// `d_x(u)` or `d_x^k(u)`, after the `d_x` identifier.
    fn operator_derivative(&mut self, var: &str, col: usize) -> Result<Expr> {
        if var != "x" {
            let kind = if var == "t" {
                ParseErrorKind::UnsupportedDerivative(
                    "time derivatives are not allowed on the right-hand side".to_string(),
                )
            } else {
                ParseErrorKind::Syntax(format!("unknown derivative operator `d_{var}`"))
            };
            return Err(self.err_at(kind, col));
        }
        let mut order = 1;
        if *self.peek() == Tok::Caret {
            self.bump();
            let ecol = self.col();
            order = match self.bump().tok {
                Tok::Number(text) => text.parse::<u32>().ok().filter(|&k| k >= 1),
                _ => None,
            }
            .ok_or_else(|| {
                self.err_at(
                    ParseErrorKind::Syntax(
                        "derivative order must be a positive integer".to_string(),
                    ),
                    ecol,
                )
            })?;
        }
        self.expect(Tok::LParen)?;
        let icol = self.col();
        let inner = match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Ident(name), Tok::RParen) => {
                self.bump();
                self.identifier(&name, icol)?
            }
            _ => {
                return Err(self.err_at(
                    ParseErrorKind::UnsupportedDerivative(
                        "d_x applies to a single field, not to a subexpression".to_string(),
                    ),
                    icol,
                ))
            }
        };
        self.expect(Tok::RParen)?;
        match inner {
            Expr::Field(field) => Ok(Expr::Deriv { field, order }),
            Expr::Deriv { field, order: k } => Ok(Expr::Deriv {
                field,
                order: order + k,
            }),
            _ => unreachable!("identifiers resolve to fields or derivatives"),
        }
    }
}

/// Parses a system description; see the module docs for the syntax.
pub fn parse_system(text: &str) -> Result<PdeSystem> {
    let lines: Vec<(usize, Vec<Spanned>)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            lex(content, i + 1).map(|toks| (i + 1, toks))
        })
        .filter(|r| !matches!(r, Ok((_, toks)) if toks.len() == 1))
        .collect::<Result<_>>()?;
    if lines.is_empty() {
        return Err(Error::parse(
            ParseErrorKind::Syntax("no equations found".to_string()),
            1,
            1,
        ));
    }

    // Pass 1: left-hand sides declare the fields.
    let mut fields: Vec<String> = Vec::new();
    for (line, toks) in &lines {
        let name = match (&toks[0].tok, &toks[1].tok, &toks[2].tok) {
            (Tok::Ident(name), Tok::Prime, Tok::Equals) => name,
            _ => {
                return Err(Error::parse(
                    ParseErrorKind::Syntax("expected `name' = expression`".to_string()),
                    *line,
                    toks[0].col,
                ))
            }
        };
        if !is_field_name(name) {
            return Err(Error::parse(
                ParseErrorKind::Syntax(format!(
                    "field names are letters and digits starting with a letter, got `{name}`"
                )),
                *line,
                toks[0].col,
            ));
        }
        if fields.contains(name) {
            return Err(Error::parse(
                ParseErrorKind::DuplicateEquation(name.clone()),
                *line,
                toks[0].col,
            ));
        }
        fields.push(name.clone());
    }

    // Pass 2: right-hand sides.
    let mut rhs = Vec::with_capacity(lines.len());
    for (line, toks) in lines {
        let mut p = Parser {
            toks,
            pos: 3,
            line,
            fields: &fields,
        };
        let e = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(p.syntax(format!("unexpected {}", p.peek())));
        }
        rhs.push(e);
    }
    PdeSystem::new(fields, rhs)
}

/// Substitutes `state` (one series per field, each of order `>= order`) into
/// every right-hand side, truncating all products at `order`.
pub fn eval_rhs(sys: &PdeSystem, state: &[TimeSeries], order: usize) -> Result<Vec<TimeSeries>> {
    if state.len() != sys.len() {
        return Err(Error::DimensionMismatch {
            expected: sys.len(),
            found: state.len(),
        });
    }
    sys.rhs.iter().map(|e| eval_expr(e, state, order)).collect()
}

fn eval_expr(e: &Expr, state: &[TimeSeries], order: usize) -> Result<TimeSeries> {
    Ok(match e {
        Expr::Const(r) => TimeSeries::constant(TanhPoly::constant(r.value()), order),
        Expr::Field(i) => state[*i].truncate(order)?,
        Expr::Deriv { field, order: k } => state[*field].truncate(order)?.dx_n(*k),
        Expr::Add(a, b) => eval_expr(a, state, order)?.add(&eval_expr(b, state, order)?),
        Expr::Sub(a, b) => eval_expr(a, state, order)?.sub(&eval_expr(b, state, order)?),
        Expr::Mul(a, b) => eval_expr(a, state, order)?.mul(&eval_expr(b, state, order)?, order)?,
        Expr::Neg(a) => eval_expr(a, state, order)?.neg(),
        Expr::Pow(base, exp) => {
            let b = eval_expr(base, state, order)?;
            let mut acc = b.clone();
            for _ in 1..*exp {
                acc = acc.mul(&b, order)?;
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn c(n: i64, d: i64) -> Expr {
        Expr::Const(Rational::new(n, d).unwrap())
    }

    fn bx(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    fn kind(r: Result<PdeSystem>) -> ParseErrorKind {
        match r {
            Err(Error::Parse { kind, .. }) => kind,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn literals_are_exact() {
        assert_eq!(decimal_literal("5.5"), Rational::new(11, 2));
        assert_eq!(decimal_literal(".25"), Rational::new(1, 4));
        assert_eq!(decimal_literal("12"), Some(Rational::integer(12)));
        assert_eq!(decimal_literal("1.2.3"), None);
        assert_eq!(Rational::new(6, -4).unwrap().to_string(), "-3/2");
    }

    #[test]
    fn advection_line() {
        let sys = parse_system("u' = -5.5 * u_x").unwrap();
        assert_eq!(sys.fields(), &["u".to_string()]);
        assert_eq!(
            sys.rhs()[0],
            Expr::Mul(bx(c(-11, 2)), bx(Expr::Deriv { field: 0, order: 1 }))
        );
        assert_eq!(sys.max_spatial_order(), 1);
    }

    #[test]
    fn rational_and_power() {
        let sys = parse_system("u' = -11/4 + 11*(u - 1)^2").unwrap();
        let expected = Expr::Add(
            bx(c(-11, 4)),
            bx(Expr::Mul(
                bx(c(11, 1)),
                bx(Expr::Pow(bx(Expr::Sub(bx(Expr::Field(0)), bx(c(1, 1)))), 2)),
            )),
        );
        assert_eq!(sys.rhs()[0], expected);
    }

    #[test]
    fn precedence() {
        let sys = parse_system("a' = a + b * c\nb' = -a^2\nc' = -2^2 - -3").unwrap();
        let (a, b, cc) = (Expr::Field(0), Expr::Field(1), Expr::Field(2));
        assert_eq!(
            sys.rhs()[0],
            Expr::Add(bx(a.clone()), bx(Expr::Mul(bx(b), bx(cc))))
        );
        assert_eq!(sys.rhs()[1], Expr::Neg(bx(Expr::Pow(bx(a), 2))));
        assert_eq!(
            sys.rhs()[2],
            Expr::Sub(bx(Expr::Neg(bx(Expr::Pow(bx(c(2, 1)), 2)))), bx(c(-3, 1)))
        );
    }

    #[test]
    fn derivative_spellings() {
        let sys = parse_system("u' = u_xxx + d_x^3(u) + d_x(u) + d_x^2(u_x)").unwrap();
        let d = |k| bx(Expr::Deriv { field: 0, order: k });
        assert_eq!(
            sys.rhs()[0],
            Expr::Add(bx(Expr::Add(bx(Expr::Add(d(3), d(3))), d(1))), d(3))
        );
    }

    #[test]
    fn comments_blank_lines_and_order() {
        let text = "# header\n\nz' = u   # trailing\nu' = z\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.fields(), &["z".to_string(), "u".to_string()]);
        assert_eq!(sys.rhs()[0], Expr::Field(1));
    }

    #[test]
    fn errors() {
        assert_eq!(
            kind(parse_system("u' = w_x")),
            ParseErrorKind::UnknownField("w".into())
        );
        assert_eq!(
            kind(parse_system("u' = w")),
            ParseErrorKind::UnknownField("w".into())
        );
        assert!(matches!(
            kind(parse_system("u' = d_x(u*u)")),
            ParseErrorKind::UnsupportedDerivative(_)
        ));
        assert!(matches!(
            kind(parse_system("u' = (u+1)_x")),
            ParseErrorKind::UnsupportedDerivative(_)
        ));
        assert!(matches!(
            kind(parse_system("u' = u_t")),
            ParseErrorKind::UnsupportedDerivative(_)
        ));
        assert!(matches!(
            kind(parse_system("u' = u_tx")),
            ParseErrorKind::UnsupportedDerivative(_)
        ));
        assert_eq!(
            kind(parse_system("u' = 1\nu' = 2")),
            ParseErrorKind::DuplicateEquation("u".into())
        );
        for bad in [
            "u' = u^0",
            "u' = u^1.5",
            "u' = u / 2",
            "u' = (u",
            "u = u",
            "",
            "u' = 1/0",
            "u' = u^2^2",
        ] {
            assert!(
                matches!(kind(parse_system(bad)), ParseErrorKind::Syntax(_)),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn error_positions() {
        match parse_system("u' = 1\nv' = u + $") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 10)),
            other => panic!("{other:?}"),
        }
        match parse_system("u' = u + q") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eval_examples() {
        let sys = parse_system("u' = u_x").unwrap();
        let state = vec![TimeSeries::constant(TanhPoly::tanh(), 0)];
        let out = eval_rhs(&sys, &state, 0).unwrap();
        assert_eq!(out[0].coeffs(), &[TanhPoly::new(vec![1.0, 0.0, -1.0])]);

        let sys = parse_system("u' = u^2").unwrap();
        let u = TimeSeries::new(vec![
            TanhPoly::tanh(),
            TanhPoly::constant(1.0),
            TanhPoly::zero(),
        ]);
        let out = eval_rhs(&sys, &[u], 2).unwrap();
        assert_eq!(
            out[0].coeffs(),
            &[
                TanhPoly::new(vec![0.0, 0.0, 1.0]),
                TanhPoly::new(vec![0.0, 2.0]),
                TanhPoly::constant(1.0)
            ]
        );

        let sys = parse_system("u' = 3").unwrap();
        let out = eval_rhs(&sys, &[TimeSeries::from_scalars(&[5.0, 1.0])], 1).unwrap();
        assert_eq!(out[0], TimeSeries::from_scalars(&[3.0, 0.0]));
    }

    #[test]
    fn eval_errors() {
        let sys = parse_system("u' = u^2").unwrap();
        let short = TimeSeries::from_scalars(&[1.0]);
        assert!(matches!(
            eval_rhs(&sys, core::slice::from_ref(&short), 2),
            Err(Error::TruncationTooDeep { .. })
        ));
        assert!(matches!(
            eval_rhs(&sys, &[short.clone(), short], 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn fields() -> Vec<String> {
        vec!["u".into(), "v".into()]
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-30i64..30, 1i64..6).prop_map(|(n, d)| c(n, d)),
            (0usize..2).prop_map(Expr::Field),
            (0usize..2, 1u32..4).prop_map(|(field, order)| Expr::Deriv { field, order }),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(bx(a), bx(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(bx(a), bx(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(bx(a), bx(b))),
                inner.clone().prop_map(|a| Expr::Neg(bx(a))),
                (inner, 1u32..4).prop_map(|(a, e)| Expr::Pow(bx(a), e)),
            ]
        })
    }

    fn arb_state(order: usize) -> impl Strategy<Value = Vec<TimeSeries>> {
        let poly = prop::collection::vec(-1.0f64..1.0, 1..4).prop_map(TanhPoly::new);
        let series = prop::collection::vec(poly, order + 1).prop_map(TimeSeries::new);
        prop::collection::vec(series, 2)
    }

    fn close(a: &TimeSeries, b: &TimeSeries) -> bool {
        let scale = 1.0 + a.max_abs().max(b.max_abs());
        a.order() == b.order() && a.sub(b).max_abs() <= 1e-12 * scale
    }

    proptest! {
        #[test]
        fn print_parse_fixed_point(u in arb_expr(), v in arb_expr()) {
            let sys = PdeSystem::new(fields(), vec![u, v]).unwrap();
            let text = sys.to_string();
            let reparsed = parse_system(&text).unwrap();
            prop_assert_eq!(&reparsed, &sys, "{}", text);
        }

        #[test]
        fn additive_nodes_are_linear(a in arb_expr(), b in arb_expr(), state in arb_state(3)) {
            let f = fields();
            let eval = |e: Expr| {
                let sys = PdeSystem::new(f.clone(), vec![e, Expr::Field(0)]).unwrap();
                eval_rhs(&sys, &state, 3).unwrap().swap_remove(0)
            };
            let (ea, eb) = (eval(a.clone()), eval(b.clone()));
            prop_assert!(close(&eval(Expr::Add(bx(a.clone()), bx(b.clone()))), &ea.add(&eb)));
            prop_assert!(close(&eval(Expr::Sub(bx(a.clone()), bx(b))), &ea.sub(&eb)));
            prop_assert!(close(&eval(Expr::Neg(bx(a))), &ea.neg()));
        }

        #[test]
        fn deriv_commutes_with_truncation(state in arb_state(5), k in 1u32..4, n in 0usize..5) {
            let s = &state[0];
            prop_assert_eq!(s.truncate(n).unwrap().dx_n(k), s.dx_n(k).truncate(n).unwrap());
        }
    }
}
