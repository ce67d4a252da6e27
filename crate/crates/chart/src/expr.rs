//! Arithmetic expressions over chart coordinates `x1..xn`.
//!
//! Grammar: decimal literals, variables `x1`, `x2`, ..., the binary operators
//! `+ - * / ^` (with `^` binding tightest and associating to the right), unary
//! minus, the functions `sin cos exp ln`, and parentheses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ChartError;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Zero-based coordinate index; `x1` parses to `Var(0)`.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ChartError> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    /// Largest variable index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) | Expr::Ln(a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (Some(x), _) if x == 0.0 => Expr::neg(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::zero(),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != 0.0 => Expr::Const(x / y),
            (Some(x), _) if x == 0.0 => Expr::zero(),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x.powf(y)),
            (_, Some(y)) if y == 0.0 => Expr::Const(1.0),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Pow(Box::new(a), Box::new(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn sin(a: Expr) -> Expr {
        match a.as_const() {
            Some(x) => Expr::Const(x.sin()),
            None => Expr::Sin(Box::new(a)),
        }
    }

    pub fn cos(a: Expr) -> Expr {
        match a.as_const() {
            Some(x) => Expr::Const(x.cos()),
            None => Expr::Cos(Box::new(a)),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        match a.as_const() {
            Some(x) => Expr::Const(x.exp()),
            None => Expr::Exp(Box::new(a)),
        }
    }

    pub fn ln(a: Expr) -> Expr {
        match a.as_const() {
            Some(x) if x > 0.0 => Expr::Const(x.ln()),
            _ => Expr::Ln(Box::new(a)),
        }
    }

    /// Exact partial derivative with respect to the zero-based coordinate `v`.
    pub fn diff(&self, v: usize) -> Expr {
        use Expr as E;
        match self {
            E::Const(_) => E::zero(),
            E::Var(i) => E::Const(if *i == v { 1.0 } else { 0.0 }),
            E::Neg(a) => E::neg(a.diff(v)),
            E::Add(a, b) => E::add(a.diff(v), b.diff(v)),
            E::Sub(a, b) => E::sub(a.diff(v), b.diff(v)),
            E::Mul(a, b) => E::add(
                E::mul(a.diff(v), (**b).clone()),
                E::mul((**a).clone(), b.diff(v)),
            ),
            E::Div(a, b) => E::div(
                E::sub(
                    E::mul(a.diff(v), (**b).clone()),
                    E::mul((**a).clone(), b.diff(v)),
                ),
                E::pow((**b).clone(), E::Const(2.0)),
            ),
            E::Pow(a, b) => {
                if b.arity() == 0 {
                    let c = b.eval_f64(&[]);
                    E::mul(
                        E::mul(E::Const(c), E::pow((**a).clone(), E::Const(c - 1.0))),
                        a.diff(v),
                    )
                } else {
                    E::mul(
                        self.clone(),
                        E::add(
                            E::mul(b.diff(v), E::ln((**a).clone())),
                            E::div(E::mul((**b).clone(), a.diff(v)), (**a).clone()),
                        ),
                    )
                }
            }
            E::Sin(a) => E::mul(E::cos((**a).clone()), a.diff(v)),
            E::Cos(a) => E::neg(E::mul(E::sin((**a).clone()), a.diff(v))),
            E::Exp(a) => E::mul(self.clone(), a.diff(v)),
            E::Ln(a) => E::div(a.diff(v), (**a).clone()),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval_f64(x),
            Expr::Add(a, b) => a.eval_f64(x) + b.eval_f64(x),
            Expr::Sub(a, b) => a.eval_f64(x) - b.eval_f64(x),
            Expr::Mul(a, b) => a.eval_f64(x) * b.eval_f64(x),
            Expr::Div(a, b) => a.eval_f64(x) / b.eval_f64(x),
            Expr::Pow(a, b) => a.eval_f64(x).powf(b.eval_f64(x)),
            Expr::Sin(a) => a.eval_f64(x).sin(),
            Expr::Cos(a) => a.eval_f64(x).cos(),
            Expr::Exp(a) => a.eval_f64(x).exp(),
            Expr::Ln(a) => a.eval_f64(x).ln(),
        }
    }

    /// Evaluates over any [`Real`] number type; `x` must be non-empty so that
    /// constants can be lifted into the same type.
    pub fn eval<T: Real>(&self, x: &[T]) -> T {
        match self {
            Expr::Const(c) => x[0].lift(*c),
            Expr::Var(i) => x[*i].clone(),
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => {
                if b.arity() == 0 {
                    a.eval(x).powf(b.eval_f64(&[]))
                } else {
                    (b.eval(x) * a.eval(x).ln()).exp()
                }
            }
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Ln(a) => a.eval(x).ln(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if *c < 0.0 {
                    write!(f, "-{}", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 4)
            }
            Expr::Add(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" + ")?;
                write_operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" - ")?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("*")?;
                write_operand(f, b, 4)
            }
            Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str("/")?;
                write_operand(f, b, 4)
            }
            Expr::Pow(a, b) => {
                write_operand(f, a, 5)?;
                f.write_str("^")?;
                write_operand(f, b, 4)
            }
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
        }
    }
}

impl FromStr for Expr {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => Expr::parse(&s).map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Expr::Const)
                .ok_or_else(|| serde::de::Error::custom("number out of range")),
            other => Err(serde::de::Error::custom(format!("expected an expression string, got {other}"))),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ChartError {
        ChartError::Parse { pos: self.pos, msg: msg.to_string(), input: self.src.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ChartError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ChartError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ChartError> {
        if self.eat('-') {
            return Ok(Expr::neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ChartError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Err(self.error("unexpected end of input"));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if c.is_ascii_digit() || c == '.' {
            let len = number_len(rest);
            let text = &rest[..len];
            let v: f64 = text.parse().map_err(|_| self.error("malformed number"))?;
            self.pos += len;
            return Ok(Expr::Const(v));
        }
        if c.is_ascii_alphabetic() {
            let len = rest.find(|ch: char| !ch.is_ascii_alphanumeric()).unwrap_or(rest.len());
            let word = &rest[..len];
            let start = self.pos;
            self.pos += len;
            if let Some(digits) = word.strip_prefix('x') {
                if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                    let i: usize = digits.parse().map_err(|_| self.error("variable index too large"))?;
                    if i == 0 {
                        self.pos = start;
                        return Err(self.error("variables are numbered from x1"));
                    }
                    return Ok(Expr::Var(i - 1));
                }
            }
            let f: fn(Box<Expr>) -> Expr = match word {
                "sin" => Expr::Sin,
                "cos" => Expr::Cos,
                "exp" => Expr::Exp,
                "ln" => Expr::Ln,
                _ => {
                    self.pos = start;
                    return Err(self.error(&format!("unknown identifier `{word}`")));
                }
            };
            if !self.eat('(') {
                return Err(self.error("expected `(` after function name"));
            }
            let arg = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(f(Box::new(arg)));
        }
        Err(self.error(&format!("unexpected character `{c}`")))
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}
