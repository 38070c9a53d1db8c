//! Twist-map machinery: XOR indexing, shuffle sequences, the sign automaton,
//! chain sign formulas, and dense sign tables.

pub mod automaton;
pub mod chains;
pub mod render;
pub mod table;

use std::fmt;

use thiserror::Error;

use crate::cdnum::AlgebraError;

pub use automaton::{derive_twist_automaton, TwistAutomaton, TwistState};
pub use chains::{chain_sign, chain_sign_oracle, pair_table, pair_table_oracle, PairTable};
pub use table::{build_sign_table, BasisTable, SignTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("automaton derivation needs t_max >= 3, got {t_max}")]
    WidthTooSmall { t_max: usize },
    #[error("no automaton is consistent with the oracle at p={p}, q={q} (shuffle {prefix})")]
    Unsatisfiable { p: usize, q: usize, prefix: String },
    #[error("letter {letter} has undetermined transitions; widen the exploration")]
    Incomplete { letter: usize },
    #[error("(r, k, i) = ({r}, {k}, {i}) outside the admissible range for t = {t}")]
    ChainRange { r: usize, k: usize, i: usize, t: usize },
    #[error("a t = {t} table has {entries} entries, over the cap of {cap}")]
    TableTooLarge { t: usize, entries: usize, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn xor_index(p: usize, q: usize) -> usize {
    p ^ q
}

/// Bit pairs `(p_j, q_j)` of two `width`-bit indices, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleSeq {
    pairs: Vec<u8>,
}

impl ShuffleSeq {
    pub fn pairs(&self) -> &[u8] {
        &self.pairs
    }

    pub fn width(&self) -> usize {
        self.pairs.len()
    }
}

impl fmt::Display for ShuffleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|p| format!("{p:02b}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn shuffle(p: usize, q: usize, width: usize) -> ShuffleSeq {
    let pairs = (0..width)
        .rev()
        .map(|j| ((p >> j & 1) << 1 | (q >> j & 1)) as u8)
        .collect();
    ShuffleSeq { pairs }
}

/// `γ_n(p, q)` by walking the automaton.
pub fn twist_sign(p: usize, q: usize, t: usize, aut: &TwistAutomaton) -> i8 {
    aut.sign_out(aut.run(&shuffle(p, q, t)))
}
