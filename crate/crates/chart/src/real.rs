use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number types that chart expressions and geometric formulas evaluate over:
/// plain `f64` and truncated Taylor jets.
pub trait Real:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// The constant `c` in the same number system as `self`.
    fn lift(&self, c: f64) -> Self;
    fn value(&self) -> f64;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powf(&self, e: f64) -> Self;

    fn scale(&self, c: f64) -> Self {
        self.clone() * self.lift(c)
    }
}

impl Real for f64 {
    fn lift(&self, c: f64) -> Self {
        c
    }

    fn value(&self) -> f64 {
        *self
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn powf(&self, e: f64) -> Self {
        f64::powf(*self, e)
    }

    fn scale(&self, c: f64) -> Self {
        self * c
    }
}
