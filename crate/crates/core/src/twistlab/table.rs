//! Dense basis-product tables.
//!
//! The sign of `e_p e_q` does not depend on the γ's (they only enter through
//! the shared generators `p & q`), so one packed bit table per `t` serves every
//! signature.

use std::sync::{Arc, OnceLock};

use num::BigRational;
use rayon::prelude::*;

use super::TwistError;
use crate::cdnum::{AlgebraSignature, BasisProduct};

/// Sign of `e_p e_q` in the doubling recursion, `t` levels deep, with the γ
/// factors stripped. Bit loop version of the oracle recursion.
#[inline]
pub fn sign_kernel(mut p: usize, mut q: usize, t: usize) -> i8 {
    let mut negative = false;
    for _ in 0..t {
        let (pa, qa) = (p & 1, q & 1);
        p >>= 1;
        q >>= 1;
        if qa == 1 && p != 0 {
            negative = !negative;
        }
        if pa == 1 {
            std::mem::swap(&mut p, &mut q);
        }
    }
    if negative {
        -1
    } else {
        1
    }
}

/// Largest `t` kept in the process-wide cache (`2^26` bits, 8 MiB).
pub const CACHE_MAX_T: usize = 13;

/// Default cap on table entries (`dim²`), enough for `t = 14`.
pub const DEFAULT_ENTRY_CAP: usize = 1 << 28;

/// Packed `dim × dim` bit table; a set bit means the product is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    t: usize,
    words: Vec<u64>,
}

impl SignTable {
    pub fn build(t: usize, entry_cap: usize) -> Result<Self, TwistError> {
        let dim = 1usize << t;
        let entries = dim.saturating_mul(dim);
        if t > 14 || entries > entry_cap {
            return Err(TwistError::TableTooLarge { t, entries, cap: entry_cap });
        }
        let row_words = dim.div_ceil(64);
        let mut words = vec![0u64; dim * row_words];
        words.par_chunks_mut(row_words).enumerate().for_each(|(p, row)| {
            for q in 0..dim {
                if sign_kernel(p, q, t) < 0 {
                    row[q / 64] |= 1 << (q % 64);
                }
            }
        });
        Ok(Self { t, words })
    }

    /// Shared table for small `t`, built on first use.
    pub fn cached(t: usize) -> Option<Arc<SignTable>> {
        static CACHE: [OnceLock<Arc<SignTable>>; CACHE_MAX_T + 1] =
            [const { OnceLock::new() }; CACHE_MAX_T + 1];
        let slot = CACHE.get(t)?;
        Some(
            slot.get_or_init(|| Arc::new(Self::build(t, DEFAULT_ENTRY_CAP).expect("cached t fits")))
                .clone(),
        )
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        1 << self.t
    }

    #[inline]
    pub fn is_negative(&self, p: usize, q: usize) -> bool {
        let row_words = self.dim().div_ceil(64);
        self.words[p * row_words + q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn sign(&self, p: usize, q: usize) -> i8 {
        if self.is_negative(p, q) {
            -1
        } else {
            1
        }
    }
}

/// Full basis-product table of one signature: signs plus γ products.
#[derive(Debug, Clone)]
pub struct BasisTable {
    sig: AlgebraSignature,
    signs: Arc<SignTable>,
    gamma_products: Vec<BigRational>,
}

impl BasisTable {
    pub fn sig(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn signs(&self) -> &SignTable {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn get(&self, p: usize, q: usize) -> BasisProduct {
        let g = &self.gamma_products[p & q];
        let coefficient = if self.signs.is_negative(p, q) { -g } else { g.clone() };
        BasisProduct { index: p ^ q, coefficient }
    }

    /// Bits `j` (zero-based) whose γ_{j+1} enters `e_p e_q`.
    pub fn gamma_mask(&self, p: usize, q: usize) -> usize {
        p & q
    }
}

/// Builds the table for `sig` with the default entry cap.
pub fn build_sign_table(sig: &AlgebraSignature) -> Result<BasisTable, TwistError> {
    build_sign_table_capped(sig, DEFAULT_ENTRY_CAP)
}

pub fn build_sign_table_capped(
    sig: &AlgebraSignature,
    entry_cap: usize,
) -> Result<BasisTable, TwistError> {
    let t = sig.t();
    let signs = match SignTable::cached(t) {
        Some(tab) if tab.dim() * tab.dim() <= entry_cap => tab,
        _ => Arc::new(SignTable::build(t, entry_cap)?),
    };
    Ok(BasisTable { sig: sig.clone(), signs, gamma_products: sig.gamma_products() })
}
