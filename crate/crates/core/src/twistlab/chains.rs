//! Nested generator chains `((e_{2^r} e_{2^{r+1}}) … e_{2^k}) e_{2^i}` and the
//! 2×2 product blocks built from them.
//!
//! Each quantity comes in two flavours: the stated closed form, and the
//! oracle evaluation of the same product. They are kept separate so that any
//! disagreement stays visible.

use super::TwistError;
use crate::cdnum::{basis_product_oracle, AlgebraError, AlgebraSignature, BasisProduct};

/// `2^r + 2^{r+1} + … + 2^k`.
pub fn run_index(r: usize, k: usize) -> usize {
    (r..=k).map(|j| 1usize << j).sum()
}

/// Indices of the factors of the chain, in multiplication order.
pub fn chain_factors(r: usize, k: usize, i: usize, with_e1: bool) -> Vec<usize> {
    let mut out = Vec::with_capacity(k - r + 3);
    if with_e1 {
        out.push(1);
    }
    out.extend((r..=k).map(|j| 1usize << j));
    out.push(1 << i);
    out
}

/// Left-nested product of basis elements, each step through the oracle.
pub fn chain_product(sig: &AlgebraSignature, factors: &[usize]) -> Result<BasisProduct, AlgebraError> {
    let mut acc = BasisProduct { index: 0, coefficient: num::one() };
    for &f in factors {
        let step = basis_product_oracle(acc.index, f, sig)?;
        acc = BasisProduct { index: step.index, coefficient: acc.coefficient * step.coefficient };
    }
    Ok(acc)
}

fn check_chain_range(r: usize, k: usize, i: usize, t: usize) -> Result<(), TwistError> {
    if 1 <= r && r < k && k < i && i < t {
        Ok(())
    } else {
        Err(TwistError::ChainRange { r, k, i, t })
    }
}

/// Closed forms for the chain with and without the leading `e₁`:
/// `(−1)^{k−r+2} e_T` and `(−1)^{k−r+3} e_{T+1}` with
/// `T = 2^r + … + 2^k + 2^i`, for `1 ≤ r < k < i < t`.
pub fn chain_sign(r: usize, k: usize, i: usize, with_e1: bool, t: usize) -> Result<(i8, usize), TwistError> {
    check_chain_range(r, k, i, t)?;
    let big_t = run_index(r, k) + (1 << i);
    let parity = if with_e1 { k - r + 3 } else { k - r + 2 };
    let sign = if parity % 2 == 0 { 1 } else { -1 };
    Ok((sign, if with_e1 { big_t + 1 } else { big_t }))
}

/// The same chain evaluated by the oracle over `(−1,…,−1)`.
pub fn chain_sign_oracle(
    r: usize,
    k: usize,
    i: usize,
    with_e1: bool,
    t: usize,
) -> Result<(i8, usize), TwistError> {
    check_chain_range(r, k, i, t)?;
    let bp = chain_product(&AlgebraSignature::uniform(t, -1), &chain_factors(r, k, i, with_e1))?;
    Ok((bp.sign(), bp.index))
}

/// `e₁ e_{2^i} = e_{2^i + 1}`, the single-factor case.
pub fn e1_times_generator(i: usize, t: usize) -> Result<(i8, usize), TwistError> {
    if i == 0 || i >= t {
        return Err(TwistError::ChainRange { r: 0, k: 0, i, t });
    }
    Ok((1, (1 << i) + 1))
}

/// Every `(r, k, i)` with `1 ≤ r < k < i < t`.
pub fn admissible_chains(t: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..t).flat_map(move |i| (1..i).flat_map(move |k| (1..k).map(move |r| (r, k, i))))
}

/// A 2×2 block of products `rows[a] · cols[b] = sign · e_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub entries: [[(i8, usize); 2]; 2],
}

/// The two product blocks over `(−1,…,−1)`.
///
/// For `r < k`: rows `e_{T₁}, e_{T₁+1}`, columns `e_T, e_{T+1}` with
/// `T₁ = 2^r + … + 2^k` and `T = T₁ + 2^i`; entries
/// `s e_{2^i}, −s e_{2^i+1}; −s e_{2^i+1}, −s e_{2^i}` with `s = (−1)^{k−r+1}`.
///
/// For `r = k`: rows `e_{2^k}, e_{2^k+1}`, columns `e_{2^i}, e_{2^i+1}`;
/// entries `e_M, −e_{M+1}; −e_{M+1}, −e_M` with `M = 2^k + 2^i`. The columns
/// are the generator pair: against `e_T, e_{T+1}` the index law would put the
/// products on `e_{2^i}`, not `e_M`.
pub fn pair_table(r: usize, k: usize, i: usize, t: usize) -> Result<PairTable, TwistError> {
    let (rows, cols) = pair_table_frame(r, k, i, t)?;
    let entries = if r < k {
        let s: i8 = if (k - r + 1) % 2 == 0 { 1 } else { -1 };
        let (g, g1) = (1usize << i, (1usize << i) + 1);
        [[(s, g), (-s, g1)], [(-s, g1), (-s, g)]]
    } else {
        let m = (1usize << k) + (1 << i);
        [[(1, m), (-1, m + 1)], [(-1, m + 1), (-1, m)]]
    };
    Ok(PairTable { rows, cols, entries })
}

/// The same block computed by the oracle.
pub fn pair_table_oracle(r: usize, k: usize, i: usize, t: usize) -> Result<PairTable, TwistError> {
    let (rows, cols) = pair_table_frame(r, k, i, t)?;
    let sig = AlgebraSignature::uniform(t, -1);
    let mut entries = [[(0i8, 0usize); 2]; 2];
    for (a, &p) in rows.iter().enumerate() {
        for (b, &q) in cols.iter().enumerate() {
            let bp = basis_product_oracle(p, q, &sig)?;
            entries[a][b] = (bp.sign(), bp.index);
        }
    }
    Ok(PairTable { rows, cols, entries })
}

fn pair_table_frame(r: usize, k: usize, i: usize, t: usize) -> Result<([usize; 2], [usize; 2]), TwistError> {
    if !(1 <= r && r <= k && k < i && i < t) {
        return Err(TwistError::ChainRange { r, k, i, t });
    }
    if r < k {
        let t1 = run_index(r, k);
        let big_t = t1 + (1 << i);
        Ok(([t1, t1 + 1], [big_t, big_t + 1]))
    } else {
        Ok(([1 << k, (1 << k) + 1], [1 << i, (1 << i) + 1]))
    }
}

/// Every `(r, k, i)` with `1 ≤ r ≤ k < i < t`, covering both block shapes.
pub fn admissible_pairs(t: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..t).flat_map(move |i| (1..i).flat_map(move |k| (1..=k).map(move |r| (r, k, i))))
}
