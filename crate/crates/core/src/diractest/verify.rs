use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{DiracError, GeneratedF, HyperFunction, Kind};
use crate::cdnum::AlgebraSignature;
use crate::rational::{format_rational, to_f64};

/// Numerators lie in `−SAMPLE_BOUND..=SAMPLE_BOUND`, denominators in
/// `1..=SAMPLE_BOUND`.
pub const SAMPLE_BOUND: i64 = 97;
/// Resamples allowed per point before giving up.
pub const MAX_RETRIES: usize = 100;

pub fn random_point(rng: &mut impl Rng, dim: usize) -> Vec<BigRational> {
    (0..dim)
        .map(|_| {
            let n = rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
            let d = rng.random_range(1..=SAMPLE_BOUND);
            BigRational::new(n.into(), d.into())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub coords: Vec<String>,
    pub residual: Vec<String>,
    pub zero: bool,
    pub resamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub t: usize,
    pub v: String,
    pub seed: u64,
    pub points: Vec<PointReport>,
    pub resamples: usize,
    pub all_zero: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn first_failure(&self) -> Option<(usize, &PointReport)> {
        self.points.iter().enumerate().find(|(_, p)| !p.zero)
    }
}

/// Exact Dirac residuals of `F` at `n_points` seeded rational points.
///
/// Point `i` draws from its own ChaCha stream, so the report does not
/// depend on how the points are scheduled across threads.
pub fn verify_hyperholomorphic(f: &GeneratedF, n_points: usize, seed: u64) -> Result<VerifyReport, DiracError> {
    let h = f.to_hyper();
    let dim = h.sig().dim();
    let points: Vec<PointReport> = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for attempt in 0..=MAX_RETRIES {
                let p = random_point(&mut rng, dim);
                match h.dirac(&p) {
                    Ok(d) => {
                        return Ok(PointReport {
                            coords: p.iter().map(format_rational).collect(),
                            residual: d.to_strings(),
                            zero: d.is_zero(),
                            resamples: attempt,
                        })
                    }
                    Err(DiracError::Pole(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(DiracError::PoleExhausted { point: i, retries: MAX_RETRIES })
        })
        .collect::<Result<_, _>>()?;
    Ok(VerifyReport {
        schema: crate::SCHEMA,
        t: f.t,
        v: f.v.to_string(),
        seed,
        resamples: points.iter().map(|p| p.resamples).sum(),
        all_zero: points.iter().all(|p| p.zero),
        points,
    })
}

/// `Σ e_k ∂f/∂x_k` for a vector-valued `f` with every partial taken by
/// central differences of step `h`, products from `sig`'s table.
pub fn dirac_numeric<E>(
    sig: &AlgebraSignature,
    kind: Kind,
    f: impl Fn(&[f64]) -> Result<Vec<f64>, E>,
    point: &[f64],
    h: f64,
) -> Result<Vec<f64>, E> {
    let dim = sig.dim();
    let mut acc = vec![0.0; dim];
    let mut shifted = point.to_vec();
    for k in kind.first_index()..dim {
        shifted[k] = point[k] + h;
        let fwd = f(&shifted)?;
        shifted[k] = point[k] - h;
        let bwd = f(&shifted)?;
        shifted[k] = point[k];
        for m in 0..dim {
            let d = (fwd[m] - bwd[m]) / (2.0 * h);
            if d != 0.0 {
                let bp = sig.basis_product(k, m);
                acc[bp.index] += d * to_f64(&bp.coefficient);
            }
        }
    }
    Ok(acc)
}

/// `Σ_k w_k ∂²Φ_m/∂x_k²` over `k = 1, 2, 3` by second central differences;
/// the largest magnitude over components.
pub fn laplace_residual(phi: &HyperFunction, point: &[f64], h: f64, weights: [f64; 3]) -> Result<f64, DiracError> {
    if phi.sig().t() != 2 {
        return Err(DiracError::WrongT { what: "the Laplace check", expected: 2, got: phi.sig().t() });
    }
    let centre = phi.eval_f64(point)?;
    let mut total = vec![0.0; centre.len()];
    let mut shifted = point.to_vec();
    for (k, w) in (1..4).zip(weights) {
        shifted[k] = point[k] + h;
        let fwd = phi.eval_f64(&shifted)?;
        shifted[k] = point[k] - h;
        let bwd = phi.eval_f64(&shifted)?;
        shifted[k] = point[k];
        for m in 0..centre.len() {
            total[m] += w * (fwd[m] - 2.0 * centre[m] + bwd[m]) / (h * h);
        }
    }
    Ok(total.into_iter().fold(0.0, |a: f64, r| a.max(r.abs())))
}

/// The second-order identity with the algebra's own squares
/// `e₁² = γ₁`, `e₂² = γ₂`, `e₃² = −γ₁γ₂`.
pub fn laplace_check(phi: &HyperFunction, point: &[f64], h: f64) -> Result<f64, DiracError> {
    let sig = phi.sig();
    let w = [1, 2, 3].map(|k| if k < sig.dim() { to_f64(&sig.square_of_basis(k)) } else { 0.0 });
    laplace_residual(phi, point, h, w)
}
