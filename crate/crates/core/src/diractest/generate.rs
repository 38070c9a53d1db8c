use std::sync::Arc;

use num::{BigRational, One};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DiracError, HyperFunction, Kind, LinearForm, Part, Piece, PlaneArg, PlaneTerm};
use crate::cdnum::{AlgebraSignature, MAX_T};
use crate::ratexpr::{parse, ParseError, RatExpr};
use crate::rational::int;
use crate::twistlab::chains::chain_product;

/// One `α e_a + β e_{a+1}` block, where `α + βe₁ = v(X, Y)` for the plane
/// pair named in `source_pair`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FTerm {
    pub alpha_index: usize,
    pub beta_index: usize,
    pub sign: i8,
    pub beta_sign: i8,
    pub source_pair: String,
    /// Generator indices whose nested product places the block.
    pub chain: Vec<usize>,
}

/// The generated function `F_t` for a rational `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedF {
    pub t: usize,
    pub v: RatExpr,
    pub terms: Vec<FTerm>,
}

#[derive(Debug, Error)]
pub enum GeneratedFError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("bad v: {0}")]
    Parse(#[from] ParseError),
    #[error("t = {0} outside 1..={MAX_T}")]
    BadT(usize),
    #[error("term {index}: {reason}")]
    BadTerm { index: usize, reason: String },
}

#[derive(Serialize, Deserialize)]
struct Doc {
    schema: String,
    t: usize,
    v: String,
    terms: Vec<FTerm>,
}

fn source_pair(alpha: usize) -> String {
    if alpha == 0 {
        "phi1,phi2".to_string()
    } else {
        format!("rho{},rho{}", alpha - 1, alpha)
    }
}

fn term(t: usize, chain: Vec<usize>) -> FTerm {
    let sig = AlgebraSignature::uniform(t, -1);
    let (sign, alpha) = if chain.is_empty() {
        (1, 0)
    } else {
        let bp = chain_product(&sig, &chain).expect("chain indices are below 2^t");
        (bp.sign(), bp.index)
    };
    FTerm { alpha_index: alpha, beta_index: alpha + 1, sign, beta_sign: sign, source_pair: source_pair(alpha), chain }
}

/// `F_t` for the rational function `v`: the `φ` block at `e₀, e₁`, one
/// block at each `e_{2^i}`, and one block per run `2^r … 2^k` closed by
/// `2^i`, `1 ≤ r ≤ k < i ≤ t−1`.
pub fn build_f(t: usize, v: &RatExpr) -> GeneratedF {
    assert!((1..=MAX_T).contains(&t), "t = {t} outside 1..={MAX_T}");
    let mut terms = vec![term(t, vec![])];
    for i in 1..t {
        terms.push(term(t, vec![1 << i]));
        for k in 1..i {
            for r in 1..=k {
                let mut chain: Vec<usize> = (r..=k).map(|j| 1 << j).collect();
                chain.push(1 << i);
                terms.push(term(t, chain));
            }
        }
    }
    terms.sort_by_key(|f| f.alpha_index);
    GeneratedF { t, v: v.clone(), terms }
}

impl GeneratedF {
    /// All basis indices carrying a component.
    pub fn index_set(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.terms.iter().flat_map(|f| [f.alpha_index, f.beta_index]).collect();
        out.sort_unstable();
        out
    }

    /// Number of independent signs (`sign` and `beta_sign` per term).
    pub fn sign_slots(&self) -> usize {
        2 * self.terms.len()
    }

    /// Copy with one sign flipped: slot `2j` is term `j`'s `sign`, `2j + 1`
    /// its `beta_sign`.
    pub fn mutate(&self, slot: usize) -> GeneratedF {
        let mut out = self.clone();
        let f = &mut out.terms[slot / 2];
        if slot % 2 == 0 {
            f.sign = -f.sign;
        } else {
            f.beta_sign = -f.beta_sign;
        }
        out
    }

    pub fn signature(&self) -> AlgebraSignature {
        AlgebraSignature::uniform(self.t, -1)
    }

    /// The function as a hyperholomorphic-form [`HyperFunction`] over
    /// `(−1, …, −1)`. With `1/e₁ = −e₁`: `φ₁ = x₀ + e₁x₁`, `φ₂ = x₁ − e₁x₀`,
    /// `ρ_{a−1} = x_a − e₁x_{a+1}`, `ρ_a = x_{a+1} + e₁x_a`.
    pub fn to_hyper(&self) -> HyperFunction {
        let mut f = HyperFunction::zero(Arc::new(self.signature()), Kind::Hyper);
        for ft in &self.terms {
            let (a, b) = (ft.alpha_index, ft.beta_index);
            let (x, y) = if a == 0 {
                (pair_arg(a, 1, b, 1), pair_arg(b, 1, a, -1))
            } else {
                (pair_arg(a, 1, b, -1), pair_arg(b, 1, a, 1))
            };
            let term = Arc::new(PlaneTerm::new(self.v.clone(), int(-1), x, y));
            let alpha = Piece::Plane { term: term.clone(), part: Part::Re, scale: int(ft.sign.into()) };
            let beta = Piece::Plane { term, part: Part::Im, scale: int(ft.beta_sign.into()) };
            f.add_piece(a, alpha).expect("index checked on construction");
            f.add_piece(b, beta).expect("index checked on construction");
        }
        f
    }

    pub fn to_json(&self) -> String {
        let doc = Doc { schema: crate::SCHEMA.into(), t: self.t, v: self.v.to_string(), terms: self.terms.clone() };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GeneratedFError> {
        let doc: Doc = serde_json::from_str(text)?;
        if doc.schema != crate::SCHEMA {
            return Err(GeneratedFError::Schema(doc.schema));
        }
        if !(1..=MAX_T).contains(&doc.t) {
            return Err(GeneratedFError::BadT(doc.t));
        }
        let v = parse(&doc.v)?;
        let dim = 1usize << doc.t;
        let mut seen = vec![false; dim];
        for (index, f) in doc.terms.iter().enumerate() {
            let bad = |reason: String| GeneratedFError::BadTerm { index, reason };
            if f.alpha_index % 2 != 0 || f.alpha_index >= dim {
                return Err(bad(format!("alpha_index {} must be even and below {dim}", f.alpha_index)));
            }
            if f.beta_index != f.alpha_index + 1 {
                return Err(bad(format!("beta_index {} must be alpha_index + 1", f.beta_index)));
            }
            if f.sign.abs() != 1 || f.beta_sign.abs() != 1 {
                return Err(bad("signs must be +1 or -1".into()));
            }
            if f.source_pair != source_pair(f.alpha_index) {
                return Err(bad(format!("source_pair {:?} does not match alpha_index", f.source_pair)));
            }
            if f.chain.iter().any(|&c| c >= dim) {
                return Err(bad("chain index out of range".into()));
            }
            if std::mem::replace(&mut seen[f.alpha_index], true) {
                return Err(bad(format!("duplicate alpha_index {}", f.alpha_index)));
            }
        }
        Ok(GeneratedF { t: doc.t, v, terms: doc.terms })
    }
}

fn pair_arg(re: usize, re_c: i64, im: usize, im_c: i64) -> PlaneArg {
    PlaneArg { re: LinearForm::coord(re, int(re_c)), im: LinearForm::coord(im, int(im_c)) }
}

/// `Σ (a e_P + b e_Q)` over the given pairs, with `a + jb = v(z, jz)` and
/// `z = x_P + c j x_Q` in the plane `j² = σ`. Choosing
/// `σ = −e_Q²/e_P²`, `c = 1/σ` (or `σ = e_Q²`, `c = −1/σ` when `P = 0`)
/// makes each block annihilated by `e_P∂_P + e_Q∂_Q`, in any signature.
pub fn plane_pair_function(
    sig: Arc<AlgebraSignature>,
    kind: Kind,
    v: &RatExpr,
    pairs: &[(usize, usize)],
) -> Result<HyperFunction, DiracError> {
    let mut f = HyperFunction::zero(sig.clone(), kind);
    let mut used = vec![false; sig.dim()];
    for &(p, q) in pairs {
        let bad = |reason| DiracError::BadPair { p, q, reason };
        if p >= sig.dim() || q >= sig.dim() {
            return Err(bad("index out of range"));
        }
        if p == q || q == 0 {
            return Err(bad("need distinct indices with Q >= 1"));
        }
        if used[p] || used[q] {
            return Err(bad("index already used by another pair"));
        }
        used[p] = true;
        used[q] = true;
        let (sigma, c) = if p == 0 {
            let s = sig.square_of_basis(q);
            let c = -BigRational::one() / &s;
            (s, c)
        } else {
            let s = -sig.square_of_basis(q) / sig.square_of_basis(p);
            let c = BigRational::one() / &s;
            (s, c)
        };
        let z = PlaneArg { re: LinearForm::coord(p, int(1)), im: LinearForm::coord(q, c.clone()) };
        // j·z = σ c x_Q + j x_P
        let jz = PlaneArg { re: LinearForm::coord(q, &sigma * &c), im: LinearForm::coord(p, int(1)) };
        let term = Arc::new(PlaneTerm::new(v.clone(), sigma, z, jz));
        f.add_piece(p, Piece::Plane { term: term.clone(), part: Part::Re, scale: int(1) })?;
        f.add_piece(q, Piece::Plane { term, part: Part::Im, scale: int(1) })?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn point(t: usize, salt: i64) -> Vec<BigRational> {
        (0..1usize << t).map(|i| ratio((i as i64 * 7 + salt) % 19 - 9, (i as i64 % 5) + 2)).collect()
    }

    #[test]
    fn f1_is_v_of_phi() {
        let f = build_f(1, &parse("x").unwrap());
        assert_eq!(f.terms.len(), 1);
        assert_eq!(f.terms[0].source_pair, "phi1,phi2");
        let h = f.to_hyper();
        let p = vec![ratio(2, 3), int(-5)];
        // φ₁ = x₀ + e₁x₁
        assert_eq!(h.eval(&p).unwrap(), p);
        // v = y picks φ₂ = x₁ − e₁x₀
        let g = build_f(1, &parse("y").unwrap()).to_hyper();
        assert_eq!(g.eval(&p).unwrap(), vec![int(-5), ratio(-2, 3)]);
    }

    #[test]
    fn f2_of_x_components() {
        let h = build_f(2, &parse("x").unwrap()).to_hyper();
        let p = vec![int(1), int(2), int(3), int(4)];
        assert_eq!(h.eval(&p).unwrap(), vec![int(1), int(2), int(3), int(-4)]);
    }

    #[test]
    fn t4_index_set() {
        let f = build_f(4, &parse("x*y").unwrap());
        assert_eq!(f.index_set(), (0..16).collect::<Vec<_>>());
        let alphas: Vec<usize> = f.terms.iter().map(|t| t.alpha_index).collect();
        assert_eq!(alphas, vec![0, 2, 4, 6, 8, 10, 12, 14]);
        let t14 = f.terms.iter().find(|t| t.alpha_index == 14).unwrap();
        assert_eq!(t14.chain, vec![2, 4, 8]);
        assert_eq!(t14.source_pair, "rho13,rho14");
        assert_eq!(t14.sign, -1);
    }

    #[test]
    fn recursion_restricts_to_previous_t() {
        let v = parse("x^2 - y").unwrap();
        for t in 2..=6 {
            let big = build_f(t, &v);
            let small = build_f(t - 1, &v);
            let half = 1 << (t - 1);
            let restricted: Vec<FTerm> = big.terms.iter().filter(|f| f.alpha_index < half).cloned().collect();
            assert_eq!(restricted, small.terms);
        }
    }

    #[test]
    fn generated_functions_are_exactly_annihilated() {
        for src in ["x", "x*y", "x^2 - y", "1/(x - y)", "(x*y + 1)/(x^2 + 1)"] {
            let v = parse(src).unwrap();
            for t in 1..=4 {
                let h = build_f(t, &v).to_hyper();
                assert!(h.dirac(&point(t, 3)).unwrap().is_zero(), "v={src} t={t}");
            }
        }
    }

    #[test]
    fn literal_beta_placement_is_not_annihilated() {
        // β with the e₁-prefixed chain sign, as the literal chain product
        // would give, breaks the pairing whenever the two signs differ.
        let mut f = build_f(4, &parse("x*y").unwrap());
        for ft in &mut f.terms {
            if ft.chain.len() >= 2 {
                let mut with_e1 = vec![1];
                with_e1.extend(&ft.chain);
                ft.beta_sign = chain_product(&f_sig(4), &with_e1).unwrap().sign();
            }
        }
        assert!(!f.to_hyper().dirac(&point(4, 1)).unwrap().is_zero());
    }

    fn f_sig(t: usize) -> AlgebraSignature {
        AlgebraSignature::uniform(t, -1)
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = build_f(3, &parse("x/(x - y)").unwrap());
        let text = f.to_json();
        assert!(text.contains("\"schema\": \"cdforge/1\""));
        assert_eq!(GeneratedF::from_json(&text).unwrap(), f);
        let broken = text.replacen("\"beta_index\": 1", "\"beta_index\": 2", 1);
        assert!(matches!(GeneratedF::from_json(&broken), Err(GeneratedFError::BadTerm { index: 0, .. })));
        assert!(GeneratedF::from_json("{").is_err());
        let wrong_schema = text.replacen("cdforge/1", "cdforge/0", 1);
        assert!(matches!(GeneratedF::from_json(&wrong_schema), Err(GeneratedFError::Schema(_))));
    }

    #[test]
    fn plane_pairs_in_other_signatures() {
        let v = parse("(x*y + 1)/(x^2 + 1)").unwrap();
        for (g, pairs) in [
            ("1,1", vec![(0, 1), (2, 3)]),
            ("4,-9", vec![(0, 3), (1, 2)]),
            ("-1,1,-1", vec![(0, 1), (2, 3), (4, 5), (6, 7)]),
            ("-2,3,-5", vec![(0, 7), (1, 6), (2, 4)]),
        ] {
            let sig = Arc::new(AlgebraSignature::parse(g).unwrap());
            let t = sig.t();
            let f = plane_pair_function(sig, Kind::Hyper, &v, &pairs).unwrap();
            assert!(f.dirac(&point(t, 5)).unwrap().is_zero(), "{g}");
        }
        let s = Arc::new(AlgebraSignature::parse("1,1").unwrap());
        assert!(plane_pair_function(s.clone(), Kind::Holomorphic, &v, &[(0, 1)]).is_err());
        assert!(plane_pair_function(s.clone(), Kind::Hyper, &v, &[(1, 1)]).is_err());
        assert!(plane_pair_function(s, Kind::Hyper, &v, &[(0, 1), (1, 2)]).is_err());
    }
}
