//! Rational functions `v(x, y)` with exact coefficients.
//!
//! Grammar (whitespace is insignificant, except that a rational literal
//! `n/d` is written without spaces; `n / d` is a division node):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ['-'] atom ['^' uint]
//! atom   := rational-literal | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! `-x^2` is `-(x^2)`. Trees deeper than [`MAX_DEPTH`] are rejected, as
//! are more than `MAX_DEPTH` open parentheses.

mod diff;
mod eval;
mod parse;
mod print;

use num::BigRational;

pub use diff::partial;
pub use eval::{Domain, EvalError, Plane, PlaneNum, PlanePoint, Real};
pub use parse::{parse, ParseError, ParseErrorKind, MAX_DEPTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RatExpr {
    Const(BigRational),
    Var(Var),
    Neg(Box<RatExpr>),
    Add(Box<RatExpr>, Box<RatExpr>),
    Sub(Box<RatExpr>, Box<RatExpr>),
    Mul(Box<RatExpr>, Box<RatExpr>),
    Div(Box<RatExpr>, Box<RatExpr>),
    Pow(Box<RatExpr>, u32),
}

// Plain constructors; the names read like the operators on purpose.
#[allow(clippy::should_implement_trait)]
impl RatExpr {
    pub fn konst(c: BigRational) -> Self {
        RatExpr::Const(c)
    }

    pub fn int(n: i64) -> Self {
        RatExpr::Const(crate::rational::int(n))
    }

    pub fn x() -> Self {
        RatExpr::Var(Var::X)
    }

    pub fn y() -> Self {
        RatExpr::Var(Var::Y)
    }

    pub fn neg(a: RatExpr) -> Self {
        RatExpr::Neg(Box::new(a))
    }

    pub fn add(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: RatExpr, n: u32) -> Self {
        RatExpr::Pow(Box::new(a), n)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => 1,
            RatExpr::Neg(a) | RatExpr::Pow(a, _) => 1 + a.size(),
            RatExpr::Add(a, b) | RatExpr::Sub(a, b) | RatExpr::Mul(a, b) | RatExpr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            RatExpr::Const(_) => false,
            RatExpr::Var(w) => *w == v,
            RatExpr::Neg(a) | RatExpr::Pow(a, _) => a.depends_on(v),
            RatExpr::Add(a, b) | RatExpr::Sub(a, b) | RatExpr::Mul(a, b) | RatExpr::Div(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }
}

impl std::str::FromStr for RatExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
