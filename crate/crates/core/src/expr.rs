//! Parser and evaluator for right-hand-side expressions `sigma(t)`.
//!
//! The accepted grammar, in order of increasing precedence:
//!
//! ```text
//! expr   := term   { ("+" | "-") term }
//! term   := factor { ("*" | "/") factor }
//! factor := "-" factor | power
//! power  := atom [ "^" factor ]
//! atom   := number | "t" | "pi" | "e"
//!         | func "(" expr ")" | "(" expr ")"
//! func   := sin | cos | exp | sinh | cosh | sqrt | abs
//! ```
//!
//! `^` binds tightest and associates to the right (`2^3^2 = 512`); unary
//! minus binds below it (`-2^2 = -4`). There is no implicit multiplication:
//! `2t` is a syntax error, `2*t` is not. Number literals accept an optional
//! fraction and scientific exponent (`1e-3`); a bare `e` is always the Euler
//! constant, so `2e` is `2` followed by an unexpected identifier.
//!
//! Parsing reports the byte offset of the failure and what was expected
//! there. Evaluation is total except for division by zero and even roots of
//! negative numbers, which return [`EvalError`] naming the offending
//! subexpression. Printing a parsed expression with `Display` and re-parsing
//! it reproduces an identically evaluating tree (number literals round-trip
//! through the shortest-decimal form).

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math;

/// Maximum parse (and therefore expression-tree) depth.
const MAX_DEPTH: u32 = 200;

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Unary function names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Expression tree. The only variable is `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Pi,
    E,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed, immutable right-hand side. `Clone`, `Send` and `Sync`; one
/// instance can be shared by parallel evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFn {
    root: Expr,
}

impl SigmaFn {
    /// Evaluates at `t`. Deterministic; errors only on division by zero or
    /// an even root / fractional power of a negative number.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        eval_expr(&self.root, t)
    }

    pub fn expr(&self) -> &Expr {
        &self.root
    }
}

impl From<Expr> for SigmaFn {
    /// Wraps a hand-built tree. The printer assumes finite number literals;
    /// trees containing `NaN`/infinite literals will not round-trip through
    /// `Display`.
    fn from(root: Expr) -> Self {
        SigmaFn { root }
    }
}

impl fmt::Display for SigmaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(&self.root, 0, f)
    }
}

impl FromStr for SigmaFn {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_sigma(s)
    }
}

/// Parses an expression string into a [`SigmaFn`].
pub fn parse_sigma(src: &str) -> Result<SigmaFn, ParseError> {
    let tokens = lex(src)?;
    let mut parser = Parser {
        src,
        tokens,
        pos: 0,
    };
    let root = parser.expr(0)?;
    if let Some(&(start, end, _)) = parser.peek() {
        return Err(ParseError {
            offset: start,
            kind: ParseErrorKind::Unexpected {
                found: Some(src[start..end].to_string()),
                expected: "an operator (`+`, `-`, `*`, `/`, `^`) or end of input",
            },
        });
    }
    Ok(SigmaFn { root })
}

/// Syntax error with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    /// A character that can never start a token.
    UnexpectedChar(char),
    /// A numeric literal that did not scan as an `f64`.
    InvalidNumber,
    /// An identifier that is neither `t`, `pi`, `e` nor a function name.
    UnknownIdentifier(String),
    /// Wrong token (or end of input, `found = None`) for this position.
    Unexpected {
        found: Option<String>,
        expected: &'static str,
    },
    /// Nesting exceeded [`MAX_DEPTH`].
    TooDeep,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::InvalidNumber => write!(f, "malformed number literal"),
            ParseErrorKind::UnknownIdentifier(name) => write!(
                f,
                "unknown identifier `{name}` (functions: sin, cos, exp, sinh, \
                 cosh, sqrt, abs; constants: pi, e; variable: t)"
            ),
            ParseErrorKind::Unexpected { found, expected } => match found {
                Some(tok) => write!(f, "expected {expected}, found `{tok}`"),
                None => write!(f, "expected {expected}, found end of input"),
            },
            ParseErrorKind::TooDeep => {
                write!(f, "expression nested deeper than {MAX_DEPTH} levels")
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// Runtime evaluation error, carrying the printed offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DivisionByZero { subexpr: String },
    Domain { subexpr: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero { subexpr } => {
                write!(f, "division by zero in `{subexpr}`")
            }
            EvalError::Domain { subexpr } => {
                write!(f, "domain error (negative argument to an even root) in `{subexpr}`")
            }
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

type SpannedTok = (usize, usize, Tok);

fn lex(src: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'(' => {
                i += 1;
                out.push((start, i, Tok::LParen));
            }
            b')' => {
                i += 1;
                out.push((start, i, Tok::RParen));
            }
            b'+' => {
                i += 1;
                out.push((start, i, Tok::Plus));
            }
            b'-' => {
                i += 1;
                out.push((start, i, Tok::Minus));
            }
            b'*' => {
                i += 1;
                out.push((start, i, Tok::Star));
            }
            b'/' => {
                i += 1;
                out.push((start, i, Tok::Slash));
            }
            b'^' => {
                i += 1;
                out.push((start, i, Tok::Caret));
            }
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, start)?;
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::InvalidNumber,
                })?;
                out.push((start, i, Tok::Num(value)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, i, Tok::Ident));
            }
            _ => {
                let c = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(c),
                });
            }
        }
    }
    Ok(out)
}

/// Scans a number starting at `start`; returns the exclusive end offset.
/// An `e`/`E` is only consumed as an exponent marker when digits follow
/// (after an optional sign), so `2*e` still lexes the constant `e`.
fn scan_number(bytes: &[u8], start: usize) -> Result<usize, ParseError> {
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i == start || (i == start + 1 && bytes[start] == b'.') {
        return Err(ParseError {
            offset: start,
            kind: ParseErrorKind::InvalidNumber,
        });
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    Ok(i)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<SpannedTok>,
    pos: usize,
}

const ATOM_EXPECTED: &str = "a number, `t`, `pi`, `e`, a function call, `(`, or `-`";

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&SpannedTok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<SpannedTok> {
        let t = self.tokens.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn text(&self, start: usize, end: usize) -> String {
        self.src[start..end].to_string()
    }

    fn err_here(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(&(start, end, _)) => ParseError {
                offset: start,
                kind: ParseErrorKind::Unexpected {
                    found: Some(self.text(start, end)),
                    expected,
                },
            },
            None => ParseError {
                offset: self.src.len(),
                kind: ParseErrorKind::Unexpected {
                    found: None,
                    expected,
                },
            },
        }
    }

    fn guard(&self, depth: u32) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            let offset = self
                .peek()
                .map(|&(start, _, _)| start)
                .unwrap_or(self.src.len());
            Err(ParseError {
                offset,
                kind: ParseErrorKind::TooDeep,
            })
        } else {
            Ok(())
        }
    }

    fn expr(&mut self, depth: u32) -> Result<Expr, ParseError> {
        self.guard(depth)?;
        let mut lhs = self.term(depth + 1)?;
        while let Some(&(_, _, tok)) = self.peek() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term(depth + 1)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self, depth: u32) -> Result<Expr, ParseError> {
        self.guard(depth)?;
        let mut lhs = self.factor(depth + 1)?;
        while let Some(&(_, _, tok)) = self.peek() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor(depth + 1)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self, depth: u32) -> Result<Expr, ParseError> {
        self.guard(depth)?;
        if let Some(&(_, _, Tok::Minus)) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor(depth + 1)?)));
        }
        self.power(depth + 1)
    }

    fn power(&mut self, depth: u32) -> Result<Expr, ParseError> {
        self.guard(depth)?;
        let base = self.atom(depth + 1)?;
        if let Some(&(_, _, Tok::Caret)) = self.peek() {
            self.bump();
            // right-associative: the exponent is a full factor, so `2^3^2`
            // is `2^(3^2)` and `2^-3` is legal
            let exponent = self.factor(depth + 1)?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self, depth: u32) -> Result<Expr, ParseError> {
        self.guard(depth)?;
        let Some(&(start, end, tok)) = self.peek() else {
            return Err(self.err_here(ATOM_EXPECTED));
        };
        match tok {
            Tok::Num(value) => {
                self.bump();
                Ok(Expr::Number(value))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr(depth + 1)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident => {
                let name = &self.src[start..end];
                match name {
                    "t" => {
                        self.bump();
                        Ok(Expr::Var)
                    }
                    "pi" => {
                        self.bump();
                        Ok(Expr::Pi)
                    }
                    "e" => {
                        self.bump();
                        Ok(Expr::E)
                    }
                    _ => match Func::from_name(name) {
                        Some(func) => {
                            self.bump();
                            match self.peek() {
                                Some(&(_, _, Tok::LParen)) => {
                                    self.bump();
                                }
                                _ => return Err(self.err_here("`(`")),
                            }
                            let arg = self.expr(depth + 1)?;
                            self.expect_rparen()?;
                            Ok(Expr::Call(func, Box::new(arg)))
                        }
                        None => Err(ParseError {
                            offset: start,
                            kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                        }),
                    },
                }
            }
            _ => Err(self.err_here(ATOM_EXPECTED)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(&(_, _, Tok::RParen)) => {
                self.bump();
                Ok(())
            }
            _ => Err(self.err_here("an operator (`+`, `-`, `*`, `/`, `^`) or `)`")),
        }
    }
}

fn eval_expr(e: &Expr, t: f64) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Number(v) => *v,
        Expr::Var => t,
        Expr::Pi => core::f64::consts::PI,
        Expr::E => core::f64::consts::E,
        Expr::Neg(x) => -eval_expr(x, t)?,
        Expr::Bin(op, a, b) => {
            let x = eval_expr(a, t)?;
            let y = eval_expr(b, t)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(EvalError::DivisionByZero {
                            subexpr: print_node(e),
                        });
                    }
                    x / y
                }
                BinOp::Pow => {
                    if x == 0.0 && y < 0.0 {
                        return Err(EvalError::DivisionByZero {
                            subexpr: print_node(e),
                        });
                    }
                    let r = math::pow(x, y);
                    if r.is_nan() && !x.is_nan() && !y.is_nan() {
                        // negative base, non-integer exponent
                        return Err(EvalError::Domain {
                            subexpr: print_node(e),
                        });
                    }
                    r
                }
            }
        }
        Expr::Call(func, a) => {
            let x = eval_expr(a, t)?;
            match func {
                Func::Sin => math::sin(x),
                Func::Cos => math::cos(x),
                Func::Exp => math::exp(x),
                Func::Sinh => math::sinh(x),
                Func::Cosh => math::cosh(x),
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(EvalError::Domain {
                            subexpr: print_node(e),
                        });
                    }
                    math::sqrt(x)
                }
                Func::Abs => math::abs(x),
            }
        }
    })
}

fn print_node(e: &Expr) -> String {
    struct P<'a>(&'a Expr);
    impl fmt::Display for P<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_expr(self.0, 0, f)
        }
    }
    P(e).to_string()
}

/// Precedence for printing; parenthesize a child whose precedence is below
/// the context. Negative number literals print with a leading `-`, so they
/// rank like a unary minus.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Number(v) if v.is_sign_negative() => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn fmt_expr(e: &Expr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = prec(e) < ctx;
    if parens {
        f.write_str("(")?;
    }
    match e {
        Expr::Number(v) => write!(f, "{v}")?,
        Expr::Var => f.write_str("t")?,
        Expr::Pi => f.write_str("pi")?,
        Expr::E => f.write_str("e")?,
        Expr::Neg(x) => {
            f.write_str("-")?;
            fmt_expr(x, 3, f)?;
        }
        Expr::Bin(op, a, b) => {
            let (sym, lhs_ctx, rhs_ctx) = match op {
                BinOp::Add => ("+", 1, 2),
                BinOp::Sub => ("-", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                // ^ is right-associative: parenthesize the left side even at
                // equal precedence, never the right
                BinOp::Pow => ("^", 5, 4),
            };
            fmt_expr(a, lhs_ctx, f)?;
            f.write_str(sym)?;
            fmt_expr(b, rhs_ctx, f)?;
        }
        Expr::Call(func, a) => {
            f.write_str(func.name())?;
            f.write_str("(")?;
            fmt_expr(a, 0, f)?;
            f.write_str(")")?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}
