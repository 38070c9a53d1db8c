//! Diagonal scalings `e_m ↦ s_m e_m` between signatures, and the coordinate
//! dictionary that reduces any signature to one with `γ_i = ±1`.

use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

use crate::cdnum::{AlgebraError, AlgebraSignature, Element};
use crate::diractest::{dirac_numeric, DiracError, HyperFunction};
use crate::rational::{exact_sqrt, format_rational, to_f64};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("generator scale x{index} is zero")]
    ZeroScale { index: usize },
    #[error("expected {expected} generator scales, got {got}")]
    ScaleCount { expected: usize, got: usize },
    #[error("function lives over {found}, expected the sign signature {expected}")]
    NotSignSignature { expected: String, found: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Dirac(#[from] DiracError),
}

/// `τ(e′_m) = basis_scales[m] · e_m` from `A(γ₁x₁², …)` onto `A(γ₁, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingMap {
    pub source: Arc<AlgebraSignature>,
    pub target: Arc<AlgebraSignature>,
    pub generator_scales: Vec<BigRational>,
    pub basis_scales: Vec<BigRational>,
}

/// The scaling with generator images `e′_i ↦ x_i e_i`; composite basis
/// elements scale by the product over their bits.
pub fn scaling_map(target: &AlgebraSignature, x: &[BigRational]) -> Result<ScalingMap, IsoError> {
    if x.len() != target.t() {
        return Err(IsoError::ScaleCount { expected: target.t(), got: x.len() });
    }
    if let Some(index) = x.iter().position(Zero::is_zero) {
        return Err(IsoError::ZeroScale { index: index + 1 });
    }
    let source = AlgebraSignature::new(target.gammas().iter().zip(x).map(|(g, s)| g * s * s).collect())?;
    let mut basis_scales = vec![BigRational::one()];
    for s in x {
        let doubled: Vec<BigRational> = basis_scales.iter().map(|b| b * s).collect();
        basis_scales.extend(doubled);
    }
    Ok(ScalingMap {
        source: Arc::new(source),
        target: Arc::new(target.clone()),
        generator_scales: x.to_vec(),
        basis_scales,
    })
}

impl ScalingMap {
    pub fn apply(&self, a: &Element) -> Result<Element, IsoError> {
        if a.sig() != &*self.source {
            return Err(AlgebraError::SignatureMismatch { left: a.sig().to_string(), right: self.source.to_string() }.into());
        }
        let coeffs = a.coeffs().iter().zip(&self.basis_scales).map(|(c, s)| c * s).collect();
        Ok(Element::new(self.target.clone(), coeffs)?)
    }

    pub fn apply_inverse(&self, b: &Element) -> Result<Element, IsoError> {
        if b.sig() != &*self.target {
            return Err(AlgebraError::SignatureMismatch { left: b.sig().to_string(), right: self.target.to_string() }.into());
        }
        let coeffs = b.coeffs().iter().zip(&self.basis_scales).map(|(c, s)| c / s).collect();
        Ok(Element::new(self.source.clone(), coeffs)?)
    }
}

/// `1/√c` for a positive rational `c`: exact when `c` is a rational square.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleFactor {
    Exact(BigRational),
    Approx { radicand: BigRational, value: f64 },
}

impl ScaleFactor {
    pub fn inv_sqrt(c: &BigRational) -> Self {
        debug_assert!(c.is_positive());
        match exact_sqrt(c) {
            Some(r) => ScaleFactor::Exact(r.recip()),
            None => ScaleFactor::Approx { radicand: c.clone(), value: 1.0 / to_f64(c).sqrt() },
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ScaleFactor::Exact(q) => to_f64(q),
            ScaleFactor::Approx { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            ScaleFactor::Exact(q) => Some(q),
            ScaleFactor::Approx { .. } => None,
        }
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleFactor::Exact(q) => f.write_str(&format_rational(q)),
            ScaleFactor::Approx { radicand, value } => write!(f, "1/sqrt({}) ~ {value:.15}", format_rational(radicand)),
        }
    }
}

/// The dictionary `x_m = scale_factors[m−1] · x̃_m`, `m = 1 … n−1`, with
/// factor `1/√(Π_{j ∈ bits(m)} |γ_{j+1}|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateTransform {
    pub sig: Arc<AlgebraSignature>,
    pub scale_factors: Vec<ScaleFactor>,
}

impl CoordinateTransform {
    /// Factor for coordinate `m`; `x₀` is never rescaled.
    pub fn factor(&self, m: usize) -> ScaleFactor {
        if m == 0 {
            ScaleFactor::Exact(BigRational::one())
        } else {
            self.scale_factors[m - 1].clone()
        }
    }

    pub fn factors_f64(&self) -> Vec<f64> {
        (0..self.sig.dim()).map(|m| self.factor(m).to_f64()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.scale_factors.iter().all(|f| f.exact().is_some_and(One::is_one))
    }

    /// `x_m` from `x̃_m`.
    pub fn to_sign_coords(&self, tilde: &[f64]) -> Vec<f64> {
        tilde.iter().zip(self.factors_f64()).map(|(x, f)| x * f).collect()
    }
}

/// `(sign(γ₁), …, sign(γ_t))` together with the coordinate dictionary.
pub fn normalize_signature(sig: &AlgebraSignature) -> (AlgebraSignature, CoordinateTransform) {
    let signs: Vec<i64> = sig.gammas().iter().map(|g| if g.is_negative() { -1 } else { 1 }).collect();
    let sign_sig = AlgebraSignature::from_ints(&signs).expect("signs are nonzero");
    let abs = AlgebraSignature::new(sig.gammas().iter().map(Signed::abs).collect()).expect("nonzero");
    let scale_factors = (1..sig.dim()).map(|m| ScaleFactor::inv_sqrt(&abs.gamma_product(m))).collect();
    (sign_sig, CoordinateTransform { sig: Arc::new(sig.clone()), scale_factors })
}

pub fn normalize_json(sig: &AlgebraSignature) -> serde_json::Value {
    let (sign_sig, tr) = normalize_signature(sig);
    json!({
        "schema": crate::SCHEMA,
        "signature": sig.to_strings(),
        "sign_signature": sign_sig.to_strings(),
        "scale_factors": tr.scale_factors.iter().map(|f| match f {
            ScaleFactor::Exact(q) => json!({ "exact": format_rational(q) }),
            ScaleFactor::Approx { radicand, value } => json!({ "inv_sqrt": format_rational(radicand), "approx": value }),
        }).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackReport {
    /// Max residual magnitude of the transformed function over `sig`.
    pub residuals: Vec<f64>,
    /// The same, for `Φ` itself over the sign signature at the mapped points.
    pub base_residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Dirac residuals over `sig` of `Ψ̃_m(x̃) = f_m · Φ_m(x)`, `x_m = f_m x̃_m`,
/// where `Φ` lives over the sign signature of `sig` and `f_m` are the
/// dictionary factors. Points are in `x̃` coordinates; all partials are
/// central differences with step `h`.
pub fn pullback_check(
    phi: &HyperFunction,
    sig: &AlgebraSignature,
    points: &[Vec<f64>],
    h: f64,
) -> Result<PullbackReport, IsoError> {
    let (sign_sig, tr) = normalize_signature(sig);
    if phi.sig() != &sign_sig {
        return Err(IsoError::NotSignSignature { expected: sign_sig.to_string(), found: phi.sig().to_string() });
    }
    let f = tr.factors_f64();
    let psi = |tilde: &[f64]| -> Result<Vec<f64>, DiracError> {
        let vals = phi.eval_f64(&tr.to_sign_coords(tilde))?;
        Ok(vals.iter().zip(&f).map(|(v, s)| v * s).collect())
    };
    let max_abs = |v: Vec<f64>| v.into_iter().fold(0.0, |a: f64, r| a.max(r.abs()));
    let mut residuals = Vec::with_capacity(points.len());
    let mut base_residuals = Vec::with_capacity(points.len());
    for p in points {
        residuals.push(max_abs(dirac_numeric(sig, phi.kind(), psi, p, h)?));
        let x = tr.to_sign_coords(p);
        base_residuals.push(max_abs(dirac_numeric(&sign_sig, phi.kind(), |y| phi.eval_f64(y), &x, h)?));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(PullbackReport { residuals, base_residuals, max_residual })
}
