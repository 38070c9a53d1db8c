use std::marker::PhantomData;

use num::BigRational;
use thiserror::Error;

use super::{RatExpr, Var};
use crate::rational::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("pole: denominator `{subexpr}` vanishes")]
    Pole { subexpr: String },
}

/// A commutative ring with partial inversion in which expressions can be
/// evaluated.
pub trait Domain {
    type Value: Clone;

    fn lift(&self, c: &BigRational) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    /// `None` when `a` is not invertible.
    fn inv(&self, a: &Self::Value) -> Option<Self::Value>;
}

/// Plain scalars.
#[derive(Debug, Clone, Copy, Default)]
pub struct Real<S>(PhantomData<S>);

impl<S> Real<S> {
    pub fn new() -> Self {
        Real(PhantomData)
    }
}

impl<S: Scalar> Domain for Real<S> {
    type Value = S;

    fn lift(&self, c: &BigRational) -> S {
        S::from_rational(c)
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &S, b: &S) -> S {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &S, b: &S) -> S {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &S) -> S {
        -a.clone()
    }
    fn inv(&self, a: &S) -> Option<S> {
        (!a.is_zero()).then(|| S::one() / a.clone())
    }
}

/// `re + im·j` in the two-dimensional commutative algebra `j² = sigma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneNum<S> {
    pub re: S,
    pub im: S,
}

/// A point of the `e₁`-plane with exact coordinates.
pub type PlanePoint = PlaneNum<BigRational>;

impl<S: Scalar> PlaneNum<S> {
    pub fn new(re: S, im: S) -> Self {
        PlaneNum { re, im }
    }

    pub fn real(re: S) -> Self {
        PlaneNum { re, im: S::zero() }
    }
}

/// The plane `span{1, j}` with `j² = sigma`. `sigma = −1` gives the complex
/// numbers, `sigma > 0` a split algebra with zero divisors.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<S> {
    pub sigma: S,
}

impl<S: Scalar> Plane<S> {
    pub fn new(sigma: S) -> Self {
        Plane { sigma }
    }

    pub fn complex() -> Self {
        Plane { sigma: -S::one() }
    }
}

impl<S: Scalar> Domain for Plane<S> {
    type Value = PlaneNum<S>;

    fn lift(&self, c: &BigRational) -> PlaneNum<S> {
        PlaneNum::real(S::from_rational(c))
    }
    fn add(&self, a: &PlaneNum<S>, b: &PlaneNum<S>) -> PlaneNum<S> {
        PlaneNum::new(a.re.clone() + b.re.clone(), a.im.clone() + b.im.clone())
    }
    fn sub(&self, a: &PlaneNum<S>, b: &PlaneNum<S>) -> PlaneNum<S> {
        PlaneNum::new(a.re.clone() - b.re.clone(), a.im.clone() - b.im.clone())
    }
    fn mul(&self, a: &PlaneNum<S>, b: &PlaneNum<S>) -> PlaneNum<S> {
        let re = a.re.clone() * b.re.clone() + self.sigma.clone() * a.im.clone() * b.im.clone();
        let im = a.re.clone() * b.im.clone() + a.im.clone() * b.re.clone();
        PlaneNum::new(re, im)
    }
    fn neg(&self, a: &PlaneNum<S>) -> PlaneNum<S> {
        PlaneNum::new(-a.re.clone(), -a.im.clone())
    }
    fn inv(&self, a: &PlaneNum<S>) -> Option<PlaneNum<S>> {
        let n = a.re.clone() * a.re.clone() - self.sigma.clone() * a.im.clone() * a.im.clone();
        if n.is_zero() {
            return None;
        }
        Some(PlaneNum::new(a.re.clone() / n.clone(), -a.im.clone() / n))
    }
}

fn power<D: Domain>(d: &D, base: &D::Value, mut n: u32) -> D::Value {
    let mut acc = d.lift(&num::one());
    let mut sq = base.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = d.mul(&acc, &sq);
        }
        n >>= 1;
        if n > 0 {
            sq = d.mul(&sq, &sq);
        }
    }
    acc
}

impl RatExpr {
    pub fn eval<D: Domain>(&self, d: &D, x: &D::Value, y: &D::Value) -> Result<D::Value, EvalError> {
        Ok(match self {
            RatExpr::Const(c) => d.lift(c),
            RatExpr::Var(Var::X) => x.clone(),
            RatExpr::Var(Var::Y) => y.clone(),
            RatExpr::Neg(a) => d.neg(&a.eval(d, x, y)?),
            RatExpr::Add(a, b) => d.add(&a.eval(d, x, y)?, &b.eval(d, x, y)?),
            RatExpr::Sub(a, b) => d.sub(&a.eval(d, x, y)?, &b.eval(d, x, y)?),
            RatExpr::Mul(a, b) => d.mul(&a.eval(d, x, y)?, &b.eval(d, x, y)?),
            RatExpr::Div(a, b) => {
                let num = a.eval(d, x, y)?;
                let den = b.eval(d, x, y)?;
                let inv = d.inv(&den).ok_or_else(|| EvalError::Pole { subexpr: b.to_string() })?;
                d.mul(&num, &inv)
            }
            RatExpr::Pow(a, n) => power(d, &a.eval(d, x, y)?, *n),
        })
    }

    /// Exact evaluation in the complex `e₁`-plane.
    pub fn eval_plane(&self, x: &PlanePoint, y: &PlanePoint) -> Result<PlanePoint, EvalError> {
        self.eval(&Plane::<BigRational>::complex(), x, y)
    }

    pub fn eval_rational(&self, x: &BigRational, y: &BigRational) -> Result<BigRational, EvalError> {
        self.eval(&Real::<BigRational>::new(), x, y)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        self.eval(&Real::<f64>::new(), &x, &y)
    }
}
