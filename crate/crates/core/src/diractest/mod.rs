//! Hypercomplex-valued functions of the coordinates `x₀ … x_{n−1}`, their
//! Dirac operators, the generated `F_t` family, and the verifiers.

mod generate;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, Zero};
use thiserror::Error;

use crate::cdnum::{AlgebraError, AlgebraSignature, Element};
use crate::ratexpr::{partial, EvalError, Plane, PlaneNum, RatExpr, Var};
use crate::rational::{to_f64, Scalar};

pub use generate::{build_f, plane_pair_function, FTerm, GeneratedF, GeneratedFError};
pub use verify::{
    dirac_numeric, laplace_check, laplace_residual, random_point, verify_hyperholomorphic, PointReport,
    VerifyReport, MAX_RETRIES, SAMPLE_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiracError {
    #[error(transparent)]
    Pole(#[from] EvalError),
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("component {component} is only numerically defined")]
    NotExact { component: usize },
    #[error("component {component} of a holomorphic-form function depends on x0")]
    DependsOnX0 { component: usize },
    #[error("component index {index} out of range for dimension {dim}")]
    ComponentRange { index: usize, dim: usize },
    #[error("{what} needs t = {expected}, got t = {got}")]
    WrongT { what: &'static str, expected: usize, got: usize },
    #[error("no pole-free sample found for point {point} after {retries} retries")]
    PoleExhausted { point: usize, retries: usize },
    #[error("plane pair ({p}, {q}) is not admissible: {reason}")]
    BadPair { p: usize, q: usize, reason: &'static str },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which Dirac operator applies: `Σ_{k≥1}` (holomorphic form, no `x₀`
/// dependence) or `Σ_{k≥0}` (hyperholomorphic form).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Holomorphic,
    Hyper,
}

impl Kind {
    pub fn first_index(self) -> usize {
        match self {
            Kind::Holomorphic => 1,
            Kind::Hyper => 0,
        }
    }
}

/// `Σ c_i x_i` over coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm(pub Vec<(usize, BigRational)>);

impl LinearForm {
    pub fn coord(i: usize, c: BigRational) -> Self {
        LinearForm(vec![(i, c)])
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.0.iter().filter(|(j, _)| *j == i).map(|(_, c)| c.clone()).sum()
    }

    fn eval<S: Scalar>(&self, point: &[S]) -> S {
        self.0
            .iter()
            .fold(S::zero(), |acc, (i, c)| acc + S::from_rational(c) * point[*i].clone())
    }
}

/// A plane-valued linear argument `re + j·im`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlaneArg {
    pub re: LinearForm,
    pub im: LinearForm,
}

impl PlaneArg {
    fn eval<S: Scalar>(&self, point: &[S]) -> PlaneNum<S> {
        PlaneNum::new(self.re.eval(point), self.im.eval(point))
    }

    fn derivative(&self, i: usize) -> PlaneNum<BigRational> {
        PlaneNum::new(self.re.coeff(i), self.im.coeff(i))
    }

    fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        self.re.0.iter().chain(&self.im.0).map(|(i, _)| *i)
    }
}

/// `w = v(X, Y)` evaluated in the plane `j² = sigma`, with `X`, `Y` linear in
/// the coordinates. Components take its real or `j` part.
#[derive(Debug, Clone)]
pub struct PlaneTerm {
    pub v: RatExpr,
    pub sigma: BigRational,
    pub x: PlaneArg,
    pub y: PlaneArg,
    dvx: RatExpr,
    dvy: RatExpr,
}

impl PlaneTerm {
    pub fn new(v: RatExpr, sigma: BigRational, x: PlaneArg, y: PlaneArg) -> Self {
        let dvx = partial(&v, Var::X);
        let dvy = partial(&v, Var::Y);
        PlaneTerm { v, sigma, x, y, dvx, dvy }
    }

    fn coords(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.x.coords().chain(self.y.coords()).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    fn jet<S: Scalar>(&self, point: &[S]) -> Result<Jet<S>, DiracError> {
        let plane = Plane::new(S::from_rational(&self.sigma));
        let (x, y) = (self.x.eval(point), self.y.eval(point));
        Ok(Jet {
            w: self.v.eval(&plane, &x, &y)?,
            dx: self.dvx.eval(&plane, &x, &y)?,
            dy: self.dvy.eval(&plane, &x, &y)?,
        })
    }

    fn partial_of<S: Scalar>(&self, jet: &Jet<S>, i: usize) -> PlaneNum<S> {
        use crate::ratexpr::Domain;
        let plane = Plane::new(S::from_rational(&self.sigma));
        let lift = |p: PlaneNum<BigRational>| PlaneNum::new(S::from_rational(&p.re), S::from_rational(&p.im));
        let a = plane.mul(&jet.dx, &lift(self.x.derivative(i)));
        let b = plane.mul(&jet.dy, &lift(self.y.derivative(i)));
        plane.add(&a, &b)
    }
}

struct Jet<S> {
    w: PlaneNum<S>,
    dx: PlaneNum<S>,
    dy: PlaneNum<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    fn take<S>(self, p: PlaneNum<S>) -> S {
        match self {
            Part::Re => p.re,
            Part::Im => p.im,
        }
    }
}

pub type NumericFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// One summand of a component.
#[derive(Clone)]
pub enum Piece {
    Const(BigRational),
    /// `scale · part(w)` for a shared plane term.
    Plane { term: Arc<PlaneTerm>, part: Part, scale: BigRational },
    /// `scale · e(x_{x}, x_{y})`, real-valued.
    Expr { e: RatExpr, de: Box<[RatExpr; 2]>, x: usize, y: usize, scale: BigRational },
    /// Only evaluable in floating point; partials by central differences.
    Numeric { f: NumericFn, deps: Vec<usize> },
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Const(c) => write!(f, "Const({c})"),
            Piece::Plane { term, part, scale } => write!(f, "Plane({scale} * {part:?}[{}])", term.v),
            Piece::Expr { e, x, y, scale, .. } => write!(f, "Expr({scale} * ({e}) at x{x}, x{y})"),
            Piece::Numeric { deps, .. } => write!(f, "Numeric(deps {deps:?})"),
        }
    }
}

impl Piece {
    pub fn expr(e: RatExpr, x: usize, y: usize) -> Self {
        let de = Box::new([partial(&e, Var::X), partial(&e, Var::Y)]);
        Piece::Expr { e, de, x, y, scale: num::one() }
    }

    pub fn numeric(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, deps: Vec<usize>) -> Self {
        Piece::Numeric { f: Arc::new(f), deps }
    }

    /// Coordinates this piece depends on.
    pub fn deps(&self) -> Vec<usize> {
        match self {
            Piece::Const(_) => vec![],
            Piece::Plane { term, .. } => term.coords(),
            Piece::Expr { e, x, y, .. } => {
                let mut d = Vec::new();
                if e.depends_on(Var::X) {
                    d.push(*x);
                }
                if e.depends_on(Var::Y) && !d.contains(y) {
                    d.push(*y);
                }
                d.sort_unstable();
                d
            }
            Piece::Numeric { deps, .. } => deps.clone(),
        }
    }

    fn max_coord(&self) -> Option<usize> {
        match self {
            Piece::Expr { x, y, .. } => Some(*x.max(y)),
            _ => self.deps().into_iter().max(),
        }
    }
}

/// Per-point cache of plane-term jets, keyed by term identity.
struct Jets<'a, S> {
    point: &'a [S],
    map: HashMap<*const PlaneTerm, Jet<S>>,
}

impl<'a, S: Scalar> Jets<'a, S> {
    fn new(point: &'a [S]) -> Self {
        Jets { point, map: HashMap::new() }
    }

    fn get(&mut self, term: &Arc<PlaneTerm>) -> Result<&Jet<S>, DiracError> {
        let key = Arc::as_ptr(term);
        if !self.map.contains_key(&key) {
            let jet = term.jet(self.point)?;
            self.map.insert(key, jet);
        }
        Ok(&self.map[&key])
    }
}

fn exact_only(piece: &Piece, component: usize) -> Result<(), DiracError> {
    match piece {
        Piece::Numeric { .. } => Err(DiracError::NotExact { component }),
        _ => Ok(()),
    }
}

/// `Φ = Σ_m Φ_m e_m`, each `Φ_m` a sum of pieces.
#[derive(Debug, Clone)]
pub struct HyperFunction {
    sig: Arc<AlgebraSignature>,
    kind: Kind,
    components: Vec<Vec<Piece>>,
}

impl HyperFunction {
    pub fn zero(sig: Arc<AlgebraSignature>, kind: Kind) -> Self {
        let dim = sig.dim();
        HyperFunction { sig, kind, components: vec![Vec::new(); dim] }
    }

    pub fn add_piece(&mut self, component: usize, piece: Piece) -> Result<(), DiracError> {
        let dim = self.sig.dim();
        if component >= dim {
            return Err(DiracError::ComponentRange { index: component, dim });
        }
        if let Some(c) = piece.max_coord() {
            if c >= dim {
                return Err(DiracError::ComponentRange { index: c, dim });
            }
        }
        if self.kind == Kind::Holomorphic && piece.deps().contains(&0) {
            return Err(DiracError::DependsOnX0 { component });
        }
        self.components[component].push(piece);
        Ok(())
    }

    pub fn with_piece(mut self, component: usize, piece: Piece) -> Result<Self, DiracError> {
        self.add_piece(component, piece)?;
        Ok(self)
    }

    pub fn sig(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn sig_arc(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn components(&self) -> &[Vec<Piece>] {
        &self.components
    }

    /// Which coordinates each component depends on.
    pub fn sparsity(&self) -> Vec<Vec<usize>> {
        self.components
            .iter()
            .map(|pieces| {
                let mut d: Vec<usize> = pieces.iter().flat_map(Piece::deps).collect();
                d.sort_unstable();
                d.dedup();
                d
            })
            .collect()
    }

    fn check_len(&self, got: usize) -> Result<(), DiracError> {
        let expected = self.sig.dim();
        if got == expected {
            Ok(())
        } else {
            Err(DiracError::Dimension { expected, got })
        }
    }

    /// Exact component values.
    pub fn eval(&self, point: &[BigRational]) -> Result<Vec<BigRational>, DiracError> {
        self.check_len(point.len())?;
        let mut jets = Jets::new(point);
        let mut out = Vec::with_capacity(point.len());
        for (m, pieces) in self.components.iter().enumerate() {
            let mut acc = BigRational::zero();
            for piece in pieces {
                exact_only(piece, m)?;
                acc += eval_piece(piece, &mut jets)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<f64>, DiracError> {
        self.check_len(point.len())?;
        let mut jets = Jets::new(point);
        let mut out = Vec::with_capacity(point.len());
        for pieces in &self.components {
            let mut acc = 0.0;
            for piece in pieces {
                acc += match piece {
                    Piece::Numeric { f, .. } => f(point),
                    _ => eval_piece(piece, &mut jets)?,
                };
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Exact `∂Φ_m/∂x_k` for every `m`.
    pub fn partial(&self, k: usize, point: &[BigRational]) -> Result<Vec<BigRational>, DiracError> {
        self.check_len(point.len())?;
        let mut jets = Jets::new(point);
        self.components
            .iter()
            .enumerate()
            .map(|(m, pieces)| {
                let mut acc = BigRational::zero();
                for piece in pieces {
                    exact_only(piece, m)?;
                    acc += partial_piece(piece, k, &mut jets)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `D[Φ](ζ) = Σ e_k ∂Φ/∂x_k`, exactly; the sum starts at `k = 1` for the
    /// holomorphic form.
    pub fn dirac(&self, point: &[BigRational]) -> Result<Element, DiracError> {
        self.check_len(point.len())?;
        let dim = self.sig.dim();
        let first = self.kind.first_index();
        let mut jets = Jets::new(point);
        let mut acc = vec![BigRational::zero(); dim];
        for (m, pieces) in self.components.iter().enumerate() {
            for piece in pieces {
                exact_only(piece, m)?;
                // surface poles of the piece itself, not only of its partials
                eval_piece(piece, &mut jets)?;
                for k in piece.deps().into_iter().filter(|&k| k >= first) {
                    let d = partial_piece(piece, k, &mut jets)?;
                    if d.is_zero() {
                        continue;
                    }
                    let bp = self.sig.basis_product(k, m);
                    acc[bp.index] += d * bp.coefficient;
                }
            }
        }
        Ok(Element::new(self.sig.clone(), acc)?)
    }

    /// The same operator in floating point: exact partial formulas where the
    /// piece allows, central differences with step `h` for numeric pieces.
    pub fn dirac_f64(&self, point: &[f64], h: f64) -> Result<Vec<f64>, DiracError> {
        self.check_len(point.len())?;
        let dim = self.sig.dim();
        let first = self.kind.first_index();
        let mut jets = Jets::new(point);
        let mut acc = vec![0.0; dim];
        for (m, pieces) in self.components.iter().enumerate() {
            for piece in pieces {
                for k in piece.deps().into_iter().filter(|&k| k >= first) {
                    let d = match piece {
                        Piece::Numeric { f, .. } => {
                            let mut fwd = point.to_vec();
                            let mut bwd = point.to_vec();
                            fwd[k] += h;
                            bwd[k] -= h;
                            (f(&fwd) - f(&bwd)) / (2.0 * h)
                        }
                        _ => partial_piece(piece, k, &mut jets)?,
                    };
                    let bp = self.sig.basis_product(k, m);
                    acc[bp.index] += d * to_f64(&bp.coefficient);
                }
            }
        }
        Ok(acc)
    }
}

fn eval_piece<S: Scalar>(piece: &Piece, jets: &mut Jets<'_, S>) -> Result<S, DiracError> {
    Ok(match piece {
        Piece::Const(c) => S::from_rational(c),
        Piece::Plane { term, part, scale } => {
            let w = jets.get(term)?.w.clone();
            S::from_rational(scale) * part.take(w)
        }
        Piece::Expr { e, x, y, scale, .. } => {
            let v = e.eval(&crate::ratexpr::Real::<S>::new(), &jets.point[*x], &jets.point[*y])?;
            S::from_rational(scale) * v
        }
        Piece::Numeric { .. } => unreachable!("numeric pieces are handled by the caller"),
    })
}

fn partial_piece<S: Scalar>(piece: &Piece, k: usize, jets: &mut Jets<'_, S>) -> Result<S, DiracError> {
    Ok(match piece {
        Piece::Const(_) => S::zero(),
        Piece::Plane { term, part, scale } => {
            let jet = jets.get(term)?;
            let d = term.partial_of(jet, k);
            S::from_rational(scale) * part.take(d)
        }
        Piece::Expr { de, x, y, scale, .. } => {
            let real = crate::ratexpr::Real::<S>::new();
            let (px, py) = (&jets.point[*x], &jets.point[*y]);
            let mut acc = S::zero();
            if k == *x {
                acc = acc + de[0].eval(&real, px, py)?;
            }
            if k == *y {
                acc = acc + de[1].eval(&real, px, py)?;
            }
            S::from_rational(scale) * acc
        }
        Piece::Numeric { .. } => unreachable!("numeric pieces are handled by the caller"),
    })
}
