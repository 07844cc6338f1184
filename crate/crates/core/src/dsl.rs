//! A small expression language for weight schemes, exponent sequences,
//! moduli, and fuzzy-number sequences.
//!
//! Scalar grammar (conventional precedence, `^` right-associative and
//! binding tighter than unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | 'k' | '(' expr ')'
//!         | ('sqrt' | 'floor' | 'abs') '(' expr ')'
//!         | 'select' '(' 'k' ('even' | 'odd' | 'is_square') ',' expr ',' expr ')'
//!         | 'crisp' '(' expr ')' | 'tri' '(' expr ',' expr ',' expr ')'
//! ```
//!
//! `(-1)^e` is recognized at parse time as a dedicated alternation node so
//! both evaluators treat it by parity instead of through `powf`. Modulus
//! expressions use a separate entry point ([`parse_modulus`]) with the
//! grammar `sum := comp ('+' comp)*`, `comp := iter ('.' iter)*`,
//! `iter := atom ('^' int)*`, `atom := 'id' | 'rat' | 'pow' number |
//! '(' sum ')'`.
//!
//! Printing is precedence-aware and `parse(print(e)) = e` holds for every
//! AST; the same guarantee holds for custom-free moduli.
//!
//! Every expression can be evaluated in two modes: binary floating point
//! ([`eval_scalar`], [`eval_fuzzy`]) for the main pipeline, and exact
//! rationals ([`eval_scalar_exact`]) for oracle recomputation. `k
//! is_square` uses integer square roots in both modes, never floating
//! point.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fuzzy::FuzzyNumber;
use crate::modulus::ModulusFn;
use crate::weighted::{FuzzyFn, ScalarFn};
use crate::GenError;

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Floor,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pred {
    Even,
    Odd,
    IsSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Decimal literal `num / den` with `den` the power of ten implied by
    /// the written digits; `0.250` keeps `num = 250, den = 1000` so
    /// printing reproduces the source digits.
    Literal { num: i64, den: u64 },
    /// The index variable.
    K,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// `(-1)^e`, evaluated by the parity of the integer exponent.
    Alternation(Box<Expr>),
    /// `select(k <pred>, a, b)`; only the selected branch is evaluated.
    Select { pred: Pred, then: Box<Expr>, otherwise: Box<Expr> },
    Crisp(Box<Expr>),
    Tri(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn literal(n: i64) -> Expr {
        Expr::Literal { num: n, den: 1 }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) | Expr::Alternation(_) => 4,
            _ => 5,
        }
    }

    /// True when evaluation depends on the index variable `k`; select
    /// predicates count even when both branches are constant.
    pub fn depends_on_k(&self) -> bool {
        match self {
            Expr::K | Expr::Select { .. } => true,
            Expr::Literal { .. } => false,
            Expr::Neg(e) | Expr::Call(_, e) | Expr::Alternation(e) | Expr::Crisp(e) => {
                e.depends_on_k()
            }
            Expr::Bin(_, l, r) => l.depends_on_k() || r.depends_on_k(),
            Expr::Tri(a, b, c) => {
                a.depends_on_k() || b.depends_on_k() || c.depends_on_k()
            }
        }
    }

    /// True when the expression contains a fuzzy constructor at any
    /// branch; such expressions only make sense under [`eval_fuzzy`].
    pub fn is_fuzzy(&self) -> bool {
        match self {
            Expr::Crisp(_) | Expr::Tri(..) => true,
            Expr::Select { then, otherwise, .. } => then.is_fuzzy() || otherwise.is_fuzzy(),
            Expr::Neg(e) | Expr::Call(_, e) | Expr::Alternation(e) => e.is_fuzzy(),
            Expr::Bin(_, l, r) => l.is_fuzzy() || r.is_fuzzy(),
            Expr::Literal { .. } | Expr::K => false,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(out: &mut fmt::Formatter<'_>, node: &Expr, min: u8) -> fmt::Result {
            if node.precedence() < min {
                write!(out, "(")?;
                write!(out, "{node}")?;
                write!(out, ")")
            } else {
                write!(out, "{node}")
            }
        }
        match self {
            Expr::Literal { num, den } => {
                if *den == 1 {
                    write!(out, "{num}")
                } else {
                    let scale = den.ilog10() as usize;
                    let digits = format!("{num:0>width$}", width = scale + 1);
                    let (int, frac) = digits.split_at(digits.len() - scale);
                    write!(out, "{int}.{frac}")
                }
            }
            Expr::K => write!(out, "k"),
            Expr::Neg(e) => {
                write!(out, "-")?;
                child(out, e, 4)
            }
            Expr::Bin(op, l, r) => {
                let (sym, lmin, rmin) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    // Right-associative: the left operand must be atomic.
                    BinOp::Pow => ("^", 5, 3),
                };
                child(out, l, lmin)?;
                write!(out, "{sym}")?;
                child(out, r, rmin)
            }
            Expr::Call(func, e) => {
                let name = match func {
                    Func::Sqrt => "sqrt",
                    Func::Floor => "floor",
                    Func::Abs => "abs",
                };
                write!(out, "{name}({e})")
            }
            Expr::Alternation(e) => {
                write!(out, "(-1)^")?;
                child(out, e, 3)
            }
            Expr::Select { pred, then, otherwise } => {
                let name = match pred {
                    Pred::Even => "even",
                    Pred::Odd => "odd",
                    Pred::IsSquare => "is_square",
                };
                write!(out, "select(k {name}, {then}, {otherwise})")
            }
            Expr::Crisp(e) => write!(out, "crisp({e})"),
            Expr::Tri(a, b, c) => write!(out, "tri({a}, {b}, {c})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
#[error("column {col}: {message}")]
pub struct ParseError {
    /// 1-based character position in the input.
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(col: usize, message: impl Into<String>) -> Self {
        ParseError { col, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { num: i64, den: u64 },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Dot,
    Comma,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num { .. } => write!(f, "number"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Comma => write!(f, "','"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '.' if i + 1 < chars.len() && chars[i + 1].is_ascii_digit() => {
                return Err(ParseError::new(col, "decimal literals need a leading digit".to_string()));
            }
            '.' => {
                toks.push((Tok::Dot, col));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut den: u64 = 1;
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1; // consume '.'
                    let frac_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let frac_digits = i - frac_start;
                    if frac_digits > 18 {
                        return Err(ParseError::new(col, "number literal has too many digits"));
                    }
                    den = 10u64.pow(frac_digits as u32);
                }
                let digits: String = chars[start..i].iter().filter(|&&c| c != '.').collect();
                let num: i64 = digits
                    .parse()
                    .map_err(|_| ParseError::new(col, "number literal too large"))?;
                toks.push((Tok::Num { num, den }, col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(ParseError::new(col, format!("unexpected character {other:?}")));
            }
        }
    }
    toks.push((Tok::Eof, chars.len() + 1));
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.next();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.next();
            let exp = self.factor()?;
            // `(-1)^e` becomes the dedicated alternation node.
            if base == Expr::Neg(Box::new(Expr::literal(1))) {
                return Ok(Expr::Alternation(Box::new(exp)));
            }
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn call(&mut self, f: Func) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Call(f, Box::new(e)))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.next() {
            Tok::Num { num, den } => Ok(Expr::Literal { num, den }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "k" => Ok(Expr::K),
                "sqrt" => self.call(Func::Sqrt),
                "floor" => self.call(Func::Floor),
                "abs" => self.call(Func::Abs),
                "crisp" => {
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Crisp(Box::new(e)))
                }
                "tri" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let c = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Tri(Box::new(a), Box::new(b), Box::new(c)))
                }
                "select" => {
                    self.expect(Tok::LParen)?;
                    let kpos = self.pos();
                    match self.next() {
                        Tok::Ident(v) if v == "k" => {}
                        other => {
                            return Err(ParseError::new(
                                kpos,
                                format!("expected 'k' before a predicate, found {other}"),
                            ))
                        }
                    }
                    let ppos = self.pos();
                    let pred = match self.next() {
                        Tok::Ident(p) => match p.as_str() {
                            "even" => Pred::Even,
                            "odd" => Pred::Odd,
                            "is_square" => Pred::IsSquare,
                            other => {
                                return Err(ParseError::new(
                                    ppos,
                                    format!(
                                        "unknown predicate '{other}'; expected even, odd, or is_square"
                                    ),
                                ))
                            }
                        },
                        other => {
                            return Err(ParseError::new(
                                ppos,
                                format!("expected a predicate name, found {other}"),
                            ))
                        }
                    };
                    self.expect(Tok::Comma)?;
                    let then = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let otherwise = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Select {
                        pred,
                        then: Box::new(then),
                        otherwise: Box::new(otherwise),
                    })
                }
                other => Err(ParseError::new(pos, format!("unknown identifier '{other}'"))),
            },
            other => Err(ParseError::new(
                pos,
                format!("expected a number, 'k', a function, or '(', found {other}"),
            )),
        }
    }

    // -- modulus sub-grammar --------------------------------------------------

    fn modulus(&mut self) -> Result<ModulusFn, ParseError> {
        let mut lhs = self.modulus_comp()?;
        while *self.peek() == Tok::Plus {
            self.next();
            let rhs = self.modulus_comp()?;
            lhs = ModulusFn::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn modulus_comp(&mut self) -> Result<ModulusFn, ParseError> {
        let mut lhs = self.modulus_iter()?;
        while *self.peek() == Tok::Dot {
            self.next();
            let rhs = self.modulus_iter()?;
            lhs = ModulusFn::compose(lhs, rhs);
        }
        Ok(lhs)
    }

    fn modulus_iter(&mut self) -> Result<ModulusFn, ParseError> {
        let mut f = self.modulus_atom()?;
        while *self.peek() == Tok::Caret {
            self.next();
            let pos = self.pos();
            match self.next() {
                Tok::Num { num, den: 1 } if num >= 0 && num <= u32::MAX as i64 => {
                    f = ModulusFn::iterate(f, num as u32)
                        .map_err(|e| ParseError::new(pos, e.to_string()))?;
                }
                other => {
                    return Err(ParseError::new(
                        pos,
                        format!("expected a nonnegative integer iterate count, found {other}"),
                    ))
                }
            }
        }
        Ok(f)
    }

    fn modulus_atom(&mut self) -> Result<ModulusFn, ParseError> {
        let pos = self.pos();
        match self.next() {
            Tok::Ident(name) => match name.as_str() {
                "id" => Ok(ModulusFn::identity()),
                "rat" => Ok(ModulusFn::rational_saturating()),
                "pow" => {
                    let ppos = self.pos();
                    match self.next() {
                        Tok::Num { num, den } => ModulusFn::power(num as f64 / den as f64)
                            .map_err(|e| ParseError::new(ppos, e.to_string())),
                        other => Err(ParseError::new(
                            ppos,
                            format!("expected an exponent after 'pow', found {other}"),
                        )),
                    }
                }
                other => Err(ParseError::new(
                    pos,
                    format!("unknown modulus '{other}'; expected id, rat, or pow"),
                )),
            },
            Tok::LParen => {
                let f = self.modulus()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(ParseError::new(
                pos,
                format!("expected id, rat, pow, or '(', found {other}"),
            )),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::Eof {
            return Err(ParseError::new(
                self.pos(),
                format!("unexpected trailing input starting with {}", self.peek()),
            ));
        }
        Ok(())
    }
}

/// Parses a scalar or fuzzy generator expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a modulus expression (`id`, `rat`, `pow p`, `+`, `.`, `^n`).
pub fn parse_modulus(text: &str) -> Result<ModulusFn, ParseError> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let f = p.modulus()?;
    p.finish()?;
    Ok(f)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value {0}")]
    NegativeSqrt(f64),
    #[error("negative base {base} with non-integer exponent {exp}")]
    NegativeBaseFractionalPow { base: f64, exp: f64 },
    #[error("exponent {0} out of the supported integer range")]
    HugeExponent(f64),
    #[error("fuzzy constructor used where a scalar is required")]
    FuzzyInScalarContext,
    #[error("triangular endpoints must satisfy a <= b <= c, got ({a}, {b}, {c})")]
    BadTriangle { a: f64, b: f64, c: f64 },
    #[error("result is not a finite real")]
    NonFinite,
    #[error("exact evaluation does not support {0}")]
    ExactUnsupported(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("at k = {k}: {kind}")]
pub struct EvalError {
    pub k: u64,
    pub kind: EvalErrorKind,
}

impl EvalError {
    fn new(k: u64, kind: EvalErrorKind) -> Self {
        EvalError { k, kind }
    }
}

pub(crate) fn pred_holds(pred: Pred, k: u64) -> bool {
    match pred {
        Pred::Even => k % 2 == 0,
        Pred::Odd => k % 2 == 1,
        // Exact integer arithmetic; square detection must never go through
        // floating point.
        Pred::IsSquare => {
            let r = k.isqrt();
            r * r == k
        }
    }
}

/// Evaluates a scalar expression at index `k` in binary floating point.
pub fn eval_scalar(e: &Expr, k: u64) -> Result<f64, EvalError> {
    let err = |kind| EvalError::new(k, kind);
    let v = match e {
        Expr::Literal { num, den } => *num as f64 / *den as f64,
        Expr::K => k as f64,
        Expr::Neg(e) => -eval_scalar(e, k)?,
        Expr::Bin(op, l, r) => {
            let a = eval_scalar(l, k)?;
            let b = eval_scalar(r, k)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(err(EvalErrorKind::DivisionByZero));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
                        a.powi(b as i32)
                    } else if a < 0.0 {
                        return Err(err(EvalErrorKind::NegativeBaseFractionalPow {
                            base: a,
                            exp: b,
                        }));
                    } else {
                        a.powf(b)
                    }
                }
            }
        }
        Expr::Call(func, inner) => {
            let x = eval_scalar(inner, k)?;
            match func {
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(err(EvalErrorKind::NegativeSqrt(x)));
                    }
                    x.sqrt()
                }
                Func::Floor => x.floor(),
                Func::Abs => x.abs(),
            }
        }
        Expr::Alternation(inner) => {
            let e = eval_scalar(inner, k)?;
            if e.fract() != 0.0 || e.abs() > 9e15 {
                return Err(err(EvalErrorKind::HugeExponent(e)));
            }
            if (e as i64) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }
        Expr::Select { pred, then, otherwise } => {
            if pred_holds(*pred, k) {
                eval_scalar(then, k)?
            } else {
                eval_scalar(otherwise, k)?
            }
        }
        Expr::Crisp(_) | Expr::Tri(..) => return Err(err(EvalErrorKind::FuzzyInScalarContext)),
    };
    if !v.is_finite() {
        return Err(err(EvalErrorKind::NonFinite));
    }
    Ok(v)
}

/// Evaluates an expression at index `k` as a fuzzy number. Bare scalar
/// expressions embed as crisp numbers.
pub fn eval_fuzzy(e: &Expr, k: u64) -> Result<FuzzyNumber, EvalError> {
    match e {
        Expr::Crisp(inner) => {
            let v = eval_scalar(inner, k)?;
            FuzzyNumber::crisp(v).map_err(|_| EvalError::new(k, EvalErrorKind::NonFinite))
        }
        Expr::Tri(a, b, c) => {
            let a = eval_scalar(a, k)?;
            let b = eval_scalar(b, k)?;
            let c = eval_scalar(c, k)?;
            FuzzyNumber::triangular(a, b, c)
                .map_err(|_| EvalError::new(k, EvalErrorKind::BadTriangle { a, b, c }))
        }
        Expr::Select { pred, then, otherwise } => {
            if pred_holds(*pred, k) {
                eval_fuzzy(then, k)
            } else {
                eval_fuzzy(otherwise, k)
            }
        }
        scalar => {
            let v = eval_scalar(scalar, k)?;
            FuzzyNumber::crisp(v).map_err(|_| EvalError::new(k, EvalErrorKind::NonFinite))
        }
    }
}

/// Evaluates a scalar expression at index `k` in exact rational
/// arithmetic. `floor(sqrt(e))` with integer `e` is fused onto an integer
/// square root; a bare `sqrt` requires a perfect-square integer argument.
pub fn eval_scalar_exact(e: &Expr, k: u64) -> Result<BigRational, EvalError> {
    let err = |kind| EvalError::new(k, kind);
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    Ok(match e {
        Expr::Literal { num, den } => {
            BigRational::new(BigInt::from(*num), BigInt::from(*den))
        }
        Expr::K => BigRational::from_integer(BigInt::from(k)),
        Expr::Neg(e) => -eval_scalar_exact(e, k)?,
        Expr::Bin(op, l, r) => {
            let a = eval_scalar_exact(l, k)?;
            let b = eval_scalar_exact(r, k)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(err(EvalErrorKind::DivisionByZero));
                    }
                    a / b
                }
                BinOp::Pow => {
                    if !b.is_integer() {
                        return Err(err(EvalErrorKind::ExactUnsupported(
                            "non-integer exponents".to_string(),
                        )));
                    }
                    let exp = b
                        .to_integer()
                        .to_i32()
                        .ok_or_else(|| err(EvalErrorKind::HugeExponent(f64::INFINITY)))?;
                    if a.is_zero() && exp < 0 {
                        return Err(err(EvalErrorKind::DivisionByZero));
                    }
                    a.pow(exp)
                }
            }
        }
        Expr::Call(Func::Floor, inner) => {
            // Fused floor(sqrt(integer)) via integer square root, so the
            // box-function sequences stay exact.
            if let Expr::Call(Func::Sqrt, radicand) = inner.as_ref() {
                let r = eval_scalar_exact(radicand, k)?;
                return exact_isqrt_floor(&r).ok_or_else(|| {
                    err(EvalErrorKind::ExactUnsupported(
                        "floor(sqrt(..)) of a non-integer or negative value".to_string(),
                    ))
                });
            }
            eval_scalar_exact(inner, k)?.floor()
        }
        Expr::Call(Func::Sqrt, inner) => {
            let r = eval_scalar_exact(inner, k)?;
            if r.is_negative() {
                return Err(err(EvalErrorKind::NegativeSqrt(r.to_f64().unwrap_or(f64::NAN))));
            }
            let root = exact_isqrt_floor(&r).ok_or_else(|| {
                err(EvalErrorKind::ExactUnsupported("sqrt of a non-integer".to_string()))
            })?;
            if &root * &root != r {
                return Err(err(EvalErrorKind::ExactUnsupported(
                    "sqrt of a non-perfect-square".to_string(),
                )));
            }
            root
        }
        Expr::Call(Func::Abs, inner) => eval_scalar_exact(inner, k)?.abs(),
        Expr::Alternation(inner) => {
            let e = eval_scalar_exact(inner, k)?;
            if !e.is_integer() {
                return Err(err(EvalErrorKind::ExactUnsupported(
                    "non-integer alternation exponent".to_string(),
                )));
            }
            if (e.to_integer() % BigInt::from(2)).is_zero() {
                int(1)
            } else {
                int(-1)
            }
        }
        Expr::Select { pred, then, otherwise } => {
            if pred_holds(*pred, k) {
                eval_scalar_exact(then, k)?
            } else {
                eval_scalar_exact(otherwise, k)?
            }
        }
        Expr::Crisp(_) | Expr::Tri(..) => return Err(err(EvalErrorKind::FuzzyInScalarContext)),
    })
}

/// `floor(sqrt(r))` for a nonnegative integer rational `r` small enough
/// for `u128`; `None` otherwise.
fn exact_isqrt_floor(r: &BigRational) -> Option<BigRational> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    let n = r.to_integer().to_u128()?;
    Some(BigRational::from_integer(BigInt::from(n.isqrt())))
}

// ---------------------------------------------------------------------------
// Generator adapters
// ---------------------------------------------------------------------------

/// Wraps a parsed expression as a scalar generator; evaluation errors
/// surface as indexed generator failures.
pub fn scalar_generator(e: Expr) -> ScalarFn {
    Arc::new(move |k| eval_scalar(&e, k).map_err(|err| GenError::new(k, err.kind.to_string())))
}

/// Wraps a parsed expression as a fuzzy-sequence generator.
pub fn fuzzy_generator(e: Expr) -> FuzzyFn {
    Arc::new(move |k| eval_fuzzy(&e, k).map_err(|err| GenError::new(k, err.kind.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn parse(s: &str) -> Expr {
        parse_expr(s).unwrap_or_else(|e| panic!("parse {s:?}: {e}"))
    }

    #[test]
    fn parse_shapes_match_conventional_precedence() {
        assert_eq!(
            parse("1/k^2"),
            Expr::Bin(
                BinOp::Div,
                Box::new(Expr::literal(1)),
                Box::new(Expr::Bin(BinOp::Pow, Box::new(Expr::K), Box::new(Expr::literal(2)))),
            )
        );
        // ^ binds tighter than unary minus.
        assert_eq!(
            parse("-k^2"),
            Expr::Neg(Box::new(Expr::Bin(
                BinOp::Pow,
                Box::new(Expr::K),
                Box::new(Expr::literal(2))
            )))
        );
        // Right-associative exponentiation.
        assert_eq!(
            parse("2^3^2"),
            Expr::Bin(
                BinOp::Pow,
                Box::new(Expr::literal(2)),
                Box::new(Expr::Bin(
                    BinOp::Pow,
                    Box::new(Expr::literal(3)),
                    Box::new(Expr::literal(2))
                )),
            )
        );
        assert_eq!(parse("(-1)^k"), Expr::Alternation(Box::new(Expr::K)));
        assert_eq!(
            parse("select(k odd, tri(-1/k, 0, 1/k), crisp(0))"),
            Expr::Select {
                pred: Pred::Odd,
                then: Box::new(Expr::Tri(
                    Box::new(Expr::Bin(
                        BinOp::Div,
                        Box::new(Expr::Neg(Box::new(Expr::literal(1)))),
                        Box::new(Expr::K)
                    )),
                    Box::new(Expr::literal(0)),
                    Box::new(Expr::Bin(BinOp::Div, Box::new(Expr::literal(1)), Box::new(Expr::K))),
                )),
                otherwise: Box::new(Expr::Crisp(Box::new(Expr::literal(0)))),
            }
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_expr("1 + $").unwrap_err();
        assert_eq!(e.col, 5);
        let e = parse_expr("frob(k)").unwrap_err();
        assert!(e.message.contains("unknown identifier"));
        let e = parse_expr("select(k prime, 1, 2)").unwrap_err();
        assert!(e.message.contains("unknown predicate"));
        let e = parse_expr("1 + ").unwrap_err();
        assert!(e.message.contains("found end of input"));
        let e = parse_expr("1 2").unwrap_err();
        assert!(e.message.contains("trailing input"));
    }

    #[test]
    fn scalar_evaluation_examples() {
        assert_eq!(eval_scalar(&parse("1/k^4"), 10).unwrap(), 1e-4);
        assert_eq!(eval_scalar(&parse("floor(sqrt(k))"), 10).unwrap(), 3.0);
        assert_eq!(eval_scalar(&parse("floor(sqrt(k))"), 100).unwrap(), 10.0);
        assert_eq!(eval_scalar(&parse("(-1)^k"), 7).unwrap(), -1.0);
        assert_eq!(eval_scalar(&parse("(-1)^k"), 8).unwrap(), 1.0);
        assert_eq!(eval_scalar(&parse("abs(-3) + 0.5"), 1).unwrap(), 3.5);
        assert_eq!(eval_scalar(&parse("select(k even, k/2, k)"), 6).unwrap(), 3.0);
        assert_eq!(eval_scalar(&parse("select(k is_square, 1, 0)"), 9).unwrap(), 1.0);
        assert_eq!(eval_scalar(&parse("select(k is_square, 1, 0)"), 10).unwrap(), 0.0);
        assert_eq!(eval_scalar(&parse("2^-1"), 1).unwrap(), 0.5);
    }

    #[test]
    fn scalar_evaluation_errors() {
        let e = eval_scalar(&parse("1/(k - 3)"), 3).unwrap_err();
        assert_eq!(e.k, 3);
        assert_eq!(e.kind, EvalErrorKind::DivisionByZero);
        let e = eval_scalar(&parse("sqrt(1 - k)"), 5).unwrap_err();
        assert!(matches!(e.kind, EvalErrorKind::NegativeSqrt(_)));
        let e = eval_scalar(&parse("(0 - 2)^0.5"), 1).unwrap_err();
        assert!(matches!(e.kind, EvalErrorKind::NegativeBaseFractionalPow { .. }));
        let e = eval_scalar(&parse("crisp(1)"), 1).unwrap_err();
        assert_eq!(e.kind, EvalErrorKind::FuzzyInScalarContext);
    }

    #[test]
    fn fuzzy_evaluation_examples() {
        let x = eval_fuzzy(&parse("crisp(1/k)"), 5).unwrap();
        assert_eq!(x, FuzzyNumber::crisp(0.2).unwrap());
        let x = eval_fuzzy(&parse("tri(-1/k, 0, 1/k)"), 4).unwrap();
        assert_eq!(x, FuzzyNumber::triangular(-0.25, 0.0, 0.25).unwrap());
        // Only the selected branch evaluates, and bare scalars embed crisp.
        let sel = parse("select(k odd, tri(-1/k, 0, 1/k), 1/(k - 2))");
        assert_eq!(eval_fuzzy(&sel, 3).unwrap(), FuzzyNumber::triangular(-1.0 / 3.0, 0.0, 1.0 / 3.0).unwrap());
        assert_eq!(eval_fuzzy(&sel, 4).unwrap(), FuzzyNumber::crisp(0.5).unwrap());
        let e = eval_fuzzy(&parse("tri(1, 0, 2)"), 1).unwrap_err();
        assert!(matches!(e.kind, EvalErrorKind::BadTriangle { .. }));
    }

    #[test]
    fn exact_evaluation_matches_rational_arithmetic() {
        let r = eval_scalar_exact(&parse("1/k + 1/k^2"), 3).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(4), BigInt::from(9)));
        let r = eval_scalar_exact(&parse("floor(sqrt(k))/k"), 10_000).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(1), BigInt::from(100)));
        let r = eval_scalar_exact(&parse("0.25"), 1).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(25), BigInt::from(100)));
        let r = eval_scalar_exact(&parse("(-1)^k"), 11).unwrap();
        assert_eq!(r, -BigRational::one());
        let r = eval_scalar_exact(&parse("sqrt(49)"), 1).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(7)));
        assert!(matches!(
            eval_scalar_exact(&parse("sqrt(2)"), 1).unwrap_err().kind,
            EvalErrorKind::ExactUnsupported(_)
        ));
        // floor(sqrt(k)) at a non-square is still exact.
        let r = eval_scalar_exact(&parse("floor(sqrt(k))"), 99).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(9)));
    }

    #[test]
    fn exact_and_float_agree_on_simple_rationals() {
        let exprs =
            ["1/k", "1/k^2", "(-1)^k", "select(k even, 1/2, 1/4)", "floor(sqrt(k))/k"];
        for text in exprs {
            let e = parse(text);
            for k in 1..=50u64 {
                let f = eval_scalar(&e, k).unwrap();
                let x = eval_scalar_exact(&e, k).unwrap().to_f64().unwrap();
                assert!(
                    (f - x).abs() <= 1e-15 * x.abs().max(1.0),
                    "{text} at k = {k}: float {f} vs exact {x}"
                );
            }
        }
    }

    #[test]
    fn catalog_expressions_round_trip() {
        let exprs = [
            "1/k",
            "1",
            "1/k^2",
            "1/k^4",
            "k^2",
            "(-1)^k",
            "floor(sqrt(k))/k",
            "crisp(1/k)",
            "tri(-k^2, 0, k^2)",
            "select(k odd, tri(-1/k, 0, 1/k), crisp(0))",
            "select(k is_square, crisp(1), crisp(0))",
            "1 + 1/k",
            "0.25",
            "-k^2",
            "1/(k + 1)",
            "select(k even, crisp(1/2), tri(-1/k, 0, 1/k))",
        ];
        for text in exprs {
            let ast = parse(text);
            let printed = ast.to_string();
            assert_eq!(parse(&printed), ast, "{text} printed as {printed}");
        }
    }

    #[test]
    fn modulus_parsing_and_round_trip() {
        assert_eq!(parse_modulus("id").unwrap(), ModulusFn::identity());
        assert_eq!(
            parse_modulus("pow 0.5").unwrap(),
            ModulusFn::power(0.5).unwrap()
        );
        assert_eq!(
            parse_modulus("id + rat").unwrap(),
            ModulusFn::sum(ModulusFn::identity(), ModulusFn::rational_saturating())
        );
        assert_eq!(
            parse_modulus("pow 0.5 . rat").unwrap(),
            ModulusFn::compose(ModulusFn::power(0.5).unwrap(), ModulusFn::rational_saturating())
        );
        assert_eq!(
            parse_modulus("rat^3").unwrap(),
            ModulusFn::iterate(ModulusFn::rational_saturating(), 3).unwrap()
        );
        let texts =
            ["id", "rat", "pow 0.25", "id + rat", "pow 0.5 . rat", "rat^3", "(id + rat)^2", "id + (id + rat)"];
        for text in texts {
            let f = parse_modulus(text).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_modulus(&printed).unwrap(), f, "{text} printed as {printed}");
        }
        assert!(parse_modulus("pow 1.5").unwrap_err().message.contains("(0, 1]"));
        assert!(parse_modulus("rat^0").unwrap_err().message.contains("at least 1"));
        assert!(parse_modulus("banana").unwrap_err().message.contains("unknown modulus"));
    }

    #[test]
    fn purity_same_inputs_same_bits() {
        let e = parse("select(k odd, 1/k, floor(sqrt(k))/k)");
        for k in 1..=200u64 {
            let a = eval_scalar(&e, k).unwrap();
            let b = eval_scalar(&e, k).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    // Random ASTs print and reparse to themselves.
    fn arb_scalar_expr(depth: u32) -> BoxedStrategy<Expr> {
        let leaf = prop_oneof![
            (0i64..1000, prop_oneof![Just(1u64), Just(10), Just(100), Just(1000)])
                .prop_map(|(num, den)| Expr::Literal { num, den }),
            Just(Expr::K),
        ];
        leaf.prop_recursive(depth, 64, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| {
                        // The parser canonicalizes this shape to Alternation,
                        // so the generator must too.
                        if op == BinOp::Pow && l == Expr::Neg(Box::new(Expr::literal(1))) {
                            Expr::Alternation(Box::new(r))
                        } else {
                            Expr::Bin(op, Box::new(l), Box::new(r))
                        }
                    }),
                (prop_oneof![Just(Func::Sqrt), Just(Func::Floor), Just(Func::Abs)], inner.clone())
                    .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
                inner.clone().prop_map(|e| Expr::Alternation(Box::new(e))),
                (
                    prop_oneof![Just(Pred::Even), Just(Pred::Odd), Just(Pred::IsSquare)],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(pred, a, b)| Expr::Select {
                        pred,
                        then: Box::new(a),
                        otherwise: Box::new(b)
                    }),
            ]
        })
        .boxed()
    }

    proptest! {
        #[test]
        fn print_parse_identity(ast in arb_scalar_expr(3)) {
            let printed = ast.to_string();
            let reparsed = parse_expr(&printed)
                .unwrap_or_else(|e| panic!("reparse {printed:?}: {e}"));
            prop_assert_eq!(reparsed, ast);
        }
    }
}
