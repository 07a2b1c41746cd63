//! Operator expressions.
//!
//! Grammar, version 1:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := INT | 'i' | 't' | 'D' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC  := 'exp' | 'sin' | 'cos'
//! ```
//!
//! Products compose operators, so `D*t` is `t*D + 1`. A run of letters that
//! is not a function name is read as a product of the single-letter atoms,
//! which makes `tD` mean `t*D`. `·` and `−` are accepted for `*` and `-`.

use std::fmt;

use bcurve_core::{DiffOp, Elementary, ExactScalar, TaylorSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub const GRAMMAR_VERSION: u32 = 1;

const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    I,
    T,
    D,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

/// A node with its source span. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }

    /// Upper bound on the order in `D`, counting divisors and function
    /// arguments as well. Used as headroom for validity lost to products.
    pub fn d_bound(&self) -> usize {
        use ExprKind::*;
        match &self.kind {
            Int(_) | I | T => 0,
            D => 1,
            Neg(a) | Call(_, a) => a.d_bound(),
            Add(a, b) | Sub(a, b) => a.d_bound().max(b.d_bound()),
            Mul(a, b) | Div(a, b) => a.d_bound() + b.d_bound(),
            Pow(a, k) => a.d_bound() * *k as usize,
        }
    }
}

/// A diagnostic anchored at a source position (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &src[..offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Diagnostic { line, column, message: message.into() }
    }

    /// The message followed by the offending source line and a caret.
    pub fn render(&self, src: &str) -> String {
        let text = src.lines().nth(self.line - 1).unwrap_or("");
        format!("{self}\n  {text}\n  {}^", " ".repeat(self.column - 1))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Atom(ExprKind),
    Func(Func),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, ch)) = it.peek() {
        let one = |t: Tok| (t, Span { start: i, end: i + ch.len_utf8() });
        match ch {
            c if c.is_whitespace() => {
                it.next();
            }
            '0'..='9' => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                if it.peek().is_some_and(|&(_, c)| c == '.') {
                    return Err(Diagnostic::at(src, end, "decimal literals are not supported; write a fraction"));
                }
                let n: BigInt = src[i..end].parse().expect("ascii digits");
                out.push((Tok::Int(n), Span { start: i, end }));
            }
            c if c.is_alphabetic() => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if !d.is_alphabetic() {
                        break;
                    }
                    end = j + d.len_utf8();
                    it.next();
                }
                let word = &src[i..end];
                let func = match word {
                    "exp" => Some(Func::Exp),
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    _ => None,
                };
                if let Some(f) = func {
                    out.push((Tok::Func(f), Span { start: i, end }));
                    continue;
                }
                let calls = src[end..].trim_start().starts_with('(');
                if calls && word.chars().count() > 1 {
                    return Err(Diagnostic::at(src, i, format!("unsupported function '{word}'")));
                }
                for (k, c) in word.char_indices() {
                    let atom = match c {
                        't' => ExprKind::T,
                        'D' => ExprKind::D,
                        'i' => ExprKind::I,
                        _ => return Err(Diagnostic::at(src, i + k, format!("unknown identifier '{word}'"))),
                    };
                    out.push((Tok::Atom(atom), Span { start: i + k, end: i + k + 1 }));
                }
            }
            _ => {
                let t = match ch {
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '*' | '·' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => return Err(Diagnostic::at(src, i, format!("unexpected character '{ch}'"))),
                };
                out.push(one(t));
                it.next();
            }
        }
    }
    out.push((Tok::Eof, Span { start: src.len(), end: src.len() }));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::at(self.src, self.span().start, msg)
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = Expr { kind: if add { ExprKind::Add(a, b) } else { ExprKind::Sub(a, b) }, span };
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let div = match self.peek() {
                Tok::Star => {
                    self.bump();
                    false
                }
                Tok::Slash => {
                    self.bump();
                    true
                }
                Tok::Int(_) | Tok::Atom(_) | Tok::Func(_) | Tok::LParen => false,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = Expr { kind: if div { ExprKind::Div(a, b) } else { ExprKind::Mul(a, b) }, span };
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if *self.peek() == Tok::Minus {
            let (_, s) = self.bump();
            let inner = self.unary()?;
            let span = Span { start: s.start, end: inner.span.end };
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, s) = self.bump();
        let Tok::Int(k) = tok else {
            return Err(Diagnostic::at(self.src, s.start, "exponent must be a non-negative integer"));
        };
        let k = k.to_u32().filter(|&k| k <= MAX_EXPONENT).ok_or_else(|| {
            Diagnostic::at(self.src, s.start, format!("exponent larger than {MAX_EXPONENT}"))
        })?;
        let span = Span { start: base.span.start, end: s.end };
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), span })
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let (tok, s) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr { kind: ExprKind::Int(n), span: s }),
            Tok::Atom(a) => Ok(Expr { kind: a, span: s }),
            Tok::Func(f) => {
                if *self.peek() != Tok::LParen {
                    return Err(self.err(format!("expected '(' after {}", f.name())));
                }
                self.bump();
                let arg = self.expr()?;
                let close = self.expect_close()?;
                Ok(Expr { kind: ExprKind::Call(f, Box::new(arg)), span: Span { start: s.start, end: close.end } })
            }
            Tok::LParen => {
                let mut inner = self.expr()?;
                let close = self.expect_close()?;
                inner.span = Span { start: s.start, end: close.end };
                Ok(inner)
            }
            Tok::Eof => Err(Diagnostic::at(self.src, s.start, "unexpected end of input")),
            _ => Err(Diagnostic::at(self.src, s.start, "expected an operand")),
        }
    }

    fn expect_close(&mut self) -> Result<Span, Diagnostic> {
        if *self.peek() != Tok::RParen {
            return Err(self.err("expected ')'"));
        }
        Ok(self.bump().1)
    }
}

pub fn parse_operator(src: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    if *p.peek() == Tok::Eof {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected token"));
    }
    Ok(e)
}

// binding strength: sums 1, products 2, negation 3, powers 4, atoms 5
fn level(e: &Expr) -> u8 {
    use ExprKind::*;
    match e.kind {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(_) => 3,
        Pow(..) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExprKind::*;
        let bin = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, l: u8| {
            write_at(f, a, l)?;
            write!(f, "{op}")?;
            write_at(f, b, l + 1)
        };
        match &self.kind {
            Int(n) => write!(f, "{n}"),
            I => write!(f, "i"),
            T => write!(f, "t"),
            D => write!(f, "D"),
            Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, 3)
            }
            Add(a, b) => bin(f, a, " + ", b, 1),
            Sub(a, b) => bin(f, a, " - ", b, 1),
            Mul(a, b) => bin(f, a, "*", b, 2),
            Div(a, b) => bin(f, a, "/", b, 2),
            Pow(a, k) => {
                write_at(f, a, 5)?;
                write!(f, "^{k}")
            }
            Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Lowers an expression to an operator expanded at `t0` with validity `n`.
pub fn lower(src: &str, e: &Expr, t0: &ExactScalar, n: usize) -> Result<DiffOp, Diagnostic> {
    let work = n + e.d_bound();
    let op = Lowering { src, t0, n: work }.go(e)?;
    Ok(if op.valid_to() > n { op.truncate(n) } else { op })
}

struct Lowering<'a> {
    src: &'a str,
    t0: &'a ExactScalar,
    n: usize,
}

impl Lowering<'_> {
    fn diag(&self, e: &Expr, err: impl fmt::Display) -> Diagnostic {
        Diagnostic::at(self.src, e.span.start, err.to_string())
    }

    fn scalar(&self, c: ExactScalar) -> DiffOp {
        DiffOp::scalar(c, self.t0.clone(), self.n)
    }

    /// The multiplication function of an order-zero operator.
    fn function(&self, e: &Expr, what: &str) -> Result<TaylorSeries, Diagnostic> {
        let op = self.go(e)?;
        match op.coeffs().len() {
            0 => Ok(TaylorSeries::zero(self.t0.clone(), op.valid_to())),
            1 => Ok(op.coeff(0)),
            _ => Err(self.diag(e, format!("{what} must not contain D"))),
        }
    }

    fn go(&self, e: &Expr) -> Result<DiffOp, Diagnostic> {
        use ExprKind::*;
        let wrap = |r: bcurve_core::Result<DiffOp>| r.map_err(|err| self.diag(e, err));
        match &e.kind {
            Int(k) => Ok(self.scalar(ExactScalar::real(BigRational::from_integer(k.clone())))),
            I => Ok(self.scalar(ExactScalar::i())),
            T => Ok(DiffOp::function(TaylorSeries::t(self.t0.clone(), self.n))),
            D => Ok(DiffOp::d_power(1, self.t0.clone(), self.n)),
            Neg(a) => Ok(self.go(a)?.neg()),
            Add(a, b) => wrap(self.go(a)?.add(&self.go(b)?)),
            Sub(a, b) => wrap(self.go(a)?.sub(&self.go(b)?)),
            Mul(a, b) => wrap(self.go(a)?.mul(&self.go(b)?)),
            Pow(a, k) => wrap(self.go(a)?.pow(*k)),
            Div(a, b) => {
                let f = self.function(b, "a divisor")?;
                if f.constant_term().is_zero() {
                    let msg = if f.is_zero() { "division by zero" } else { "divisor vanishes at the base point" };
                    return Err(self.diag(b, msg));
                }
                let inv = f.invert().map_err(|err| self.diag(b, err))?;
                wrap(self.go(a)?.mul(&DiffOp::function(inv)))
            }
            Call(func, a) => {
                let arg = self.function(a, "a function argument")?;
                if !arg.constant_term().is_zero() {
                    return Err(self.diag(
                        a,
                        format!("{} needs an argument vanishing at the base point (value {})", func.name(), arg.constant_term()),
                    ));
                }
                let kind = match func {
                    Func::Exp => Elementary::Exp { at_constant: None },
                    Func::Sin => Elementary::Sin { at_constant: None },
                    Func::Cos => Elementary::Cos { at_constant: None },
                };
                let s = arg.elementary(&kind).map_err(|err| self.diag(e, err))?;
                Ok(DiffOp::function(s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExprKind::*;

    fn b(k: ExprKind) -> Box<Expr> {
        Box::new(Expr::new(k))
    }

    fn int(n: i64) -> ExprKind {
        Int(n.into())
    }

    #[test]
    fn shapes() {
        assert_eq!(parse_operator("D^2").unwrap().kind, Pow(b(D), 2));
        let e = parse_operator("D^2 - 2/(t+1)^2").unwrap();
        let rhs = Div(b(int(2)), b(Pow(b(Add(b(T), b(int(1)))), 2)));
        assert_eq!(e.kind, Sub(b(Pow(b(D), 2)), b(rhs)));
        assert_eq!(parse_operator("tD").unwrap().kind, Mul(b(T), b(D)));
        assert_eq!(parse_operator("2 t").unwrap().kind, Mul(b(int(2)), b(T)));
        assert_eq!(parse_operator("-t^2").unwrap().kind, Neg(b(Pow(b(T), 2))));
        assert_eq!(parse_operator("exp(t)").unwrap().kind, Call(Func::Exp, b(T)));
    }

    #[test]
    fn diagnostics() {
        let d = parse_operator("D^2 +\n  log(t)").unwrap_err();
        assert_eq!((d.line, d.column), (2, 3));
        assert!(d.message.contains("unsupported function"));
        let d = parse_operator("D^").unwrap_err();
        assert_eq!(d.column, 3);
        assert!(parse_operator("").is_err());
        assert!(parse_operator("(t").unwrap_err().message.contains("')'"));
        assert!(parse_operator("x").unwrap_err().message.contains("unknown identifier"));
        assert!(parse_operator("1.5").is_err());
    }

    fn lowered(src: &str, n: usize) -> Result<DiffOp, Diagnostic> {
        lower(src, &parse_operator(src).unwrap(), &ExactScalar::zero(), n)
    }

    #[test]
    fn weyl_relation() {
        let op = lowered("D*t - t*D", 10).unwrap();
        assert_eq!(op, DiffOp::scalar(ExactScalar::one(), ExactScalar::zero(), 10));
    }

    #[test]
    fn lowering_errors() {
        let d = lowered("D/t", 8).unwrap_err();
        assert_eq!(d.column, 3);
        assert!(d.message.contains("vanishes"));
        assert!(lowered("1/D", 8).unwrap_err().message.contains("must not contain D"));
        assert!(lowered("1/(t-t)", 8).unwrap_err().message.contains("division by zero"));
        assert!(lowered("exp(1+t)", 8).unwrap_err().message.contains("vanishing"));
    }

    #[test]
    fn cusp_p_lowers() {
        let op = lowered("D^2 - 2/(t+1)^2", 12).unwrap();
        let c: Vec<ExactScalar> = [-2, 4, -6, 8].map(ExactScalar::from).to_vec();
        assert_eq!(&op.coeff(0).coeffs()[..4], &c[..]);
        assert_eq!(op.valid_to(), 12);
    }

    #[test]
    fn exp_and_trig() {
        let e = lowered("exp(2t)", 6).unwrap().coeff(0);
        assert_eq!(e.coeff(3), ExactScalar::ratio(8, 6));
        let s = lowered("sin(t)^2 + cos(t)^2", 8).unwrap();
        assert_eq!(s, DiffOp::scalar(ExactScalar::one(), ExactScalar::zero(), 8));
    }

    #[test]
    fn printing() {
        for src in ["D^2 - 2/(t + 1)^2", "-(t*D)", "(t^2)^3"] {
            let e = parse_operator(src).unwrap();
            assert_eq!(parse_operator(&e.to_string()).unwrap(), e);
        }
        assert_eq!(parse_operator("t - -t").unwrap().to_string(), "t - -t");
        assert_eq!(parse_operator("t - (t - t)").unwrap().to_string(), "t - (t - t)");
    }
}
