//! The twist automaton: a Moore machine over signed letters that reads the
//! shuffled bit pairs of `(p, q)` most significant first and ends in a state
//! whose sign is the twist `γ_n(p, q)` of the all-(−1) tower.
//!
//! The table is not transcribed from a figure. It is recovered from the
//! doubling oracle by classing prefixes of shuffle words by their normalised
//! continuation signs, then checked exhaustively against the oracle.

use std::collections::HashMap;
use std::fmt;

use serde_json::json;

use super::{shuffle, ShuffleSeq, TwistError};
use crate::cdnum::{basis_product_oracle, AlgebraSignature};

/// A signed letter, e.g. `-C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwistState {
    pub letter: usize,
    pub sign: i8,
}

impl TwistState {
    pub fn negate(self) -> Self {
        Self { letter: self.letter, sign: -self.sign }
    }
}

/// Pair codes in reading order: `00, 01, 10, 11` (p bit, q bit).
pub const PAIRS: [u8; 4] = [0b00, 0b01, 0b10, 0b11];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistAutomaton {
    names: Vec<String>,
    /// `next[letter][pair] = (letter', relative sign)`; the absolute sign of
    /// the successor is the current sign times the relative one, which makes
    /// the machine negation equivariant by construction.
    next: Vec<[(usize, i8); 4]>,
}

impl TwistAutomaton {
    pub fn start(&self) -> TwistState {
        TwistState { letter: 0, sign: 1 }
    }

    pub fn step(&self, state: TwistState, pair: u8) -> TwistState {
        let (letter, rel) = self.next[state.letter][pair as usize];
        TwistState { letter, sign: state.sign * rel }
    }

    /// Every state visited, starting with the start state.
    pub fn walk(&self, seq: &ShuffleSeq) -> Vec<TwistState> {
        let mut states = vec![self.start()];
        let mut s = self.start();
        for &pair in seq.pairs() {
            s = self.step(s, pair);
            states.push(s);
        }
        states
    }

    pub fn run(&self, seq: &ShuffleSeq) -> TwistState {
        seq.pairs().iter().fold(self.start(), |s, &pair| self.step(s, pair))
    }

    pub fn sign_out(&self, state: TwistState) -> i8 {
        state.sign
    }

    pub fn letter_count(&self) -> usize {
        self.names.len()
    }

    pub fn letter_name(&self, letter: usize) -> &str {
        &self.names[letter]
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses `A`, `-C`, `+B'`.
    pub fn state(&self, text: &str) -> Option<TwistState> {
        let (sign, name) = match text.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, text.strip_prefix('+').unwrap_or(text)),
        };
        Some(TwistState { letter: self.letter(name)?, sign })
    }

    pub fn state_name(&self, state: TwistState) -> String {
        let name = &self.names[state.letter];
        if state.sign < 0 {
            format!("-{name}")
        } else {
            name.clone()
        }
    }

    /// `[[00, 01], [10, 11]]` relative output signs of a letter.
    pub fn pattern(&self, letter: usize) -> [[i8; 2]; 2] {
        let n = &self.next[letter];
        [[n[0].1, n[1].1], [n[2].1, n[3].1]]
    }

    /// Signed states reachable from the start state, in discovery order.
    pub fn reachable_states(&self) -> Vec<TwistState> {
        let mut seen = vec![self.start()];
        let mut i = 0;
        while i < seen.len() {
            for pair in PAIRS {
                let s = self.step(seen[i], pair);
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
            i += 1;
        }
        seen
    }

    /// Human-readable walk, e.g. `A0 -01-> A -11-> -C`.
    pub fn trace(&self, seq: &ShuffleSeq) -> String {
        let states = self.walk(seq);
        let mut out = self.state_name(states[0]);
        for (pair, s) in seq.pairs().iter().zip(&states[1..]) {
            out.push_str(&format!(" -{:02b}-> {}", pair, self.state_name(*s)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut transitions = Vec::new();
        for (letter, row) in self.next.iter().enumerate() {
            for pair in PAIRS {
                let (to, rel) = row[pair as usize];
                transitions.push(json!({
                    "from": self.names[letter],
                    "pair": format!("{pair:02b}"),
                    "to": self.state_name(TwistState { letter: to, sign: rel }),
                }));
            }
        }
        json!({
            "schema": crate::SCHEMA,
            "start": self.names[0],
            "letters": self.names,
            "transitions": transitions,
        })
    }
}

impl fmt::Display for TwistAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (letter, row) in self.next.iter().enumerate() {
            write!(f, "{:<3}", self.names[letter])?;
            for pair in PAIRS {
                let (to, rel) = row[pair as usize];
                let target = self.state_name(TwistState { letter: to, sign: rel });
                write!(f, "  {pair:02b}->{target:<4}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Widest exploration used for classing; verification still covers `t_max`.
const MAX_EXPLORE: usize = 8;

/// Reconstructs the twist automaton from the oracle and verifies it on every
/// pair `p, q < 2^t_max`.
pub fn derive_twist_automaton(t_max: usize) -> Result<TwistAutomaton, TwistError> {
    if t_max < 3 {
        return Err(TwistError::WidthTooSmall { t_max });
    }
    let width = t_max.clamp(6, MAX_EXPLORE);
    let depth = width / 2;
    let tail = width - depth;
    let signs = OracleSigns::new(width);

    // Continuations: every word of length 0..=tail.
    let suffixes: Vec<(usize, usize, usize)> = words_up_to(tail);
    let key = |p: usize, q: usize| -> Vec<i8> {
        let mut out: Vec<i8> = suffixes
            .iter()
            .map(|&(s, ps, qs)| signs.get(p << s | ps, q << s | qs))
            .collect();
        let own = out[0];
        for v in &mut out {
            *v *= own;
        }
        out
    };

    let mut class_of_key: HashMap<Vec<i8>, usize> = HashMap::new();
    let mut next: Vec<[Option<(usize, i8)>; 4]> = Vec::new();
    let mut intern = |k: Vec<i8>, next: &mut Vec<[Option<(usize, i8)>; 4]>| -> usize {
        let fresh = class_of_key.len();
        *class_of_key.entry(k).or_insert_with(|| {
            next.push([None; 4]);
            fresh
        })
    };
    intern(key(0, 0), &mut next);

    for (len, p, q) in words_up_to(depth - 1) {
        let from = intern(key(p, q), &mut next);
        let own = signs.get(p, q);
        for pair in PAIRS {
            let (pc, qc) = (p << 1 | (pair >> 1) as usize, q << 1 | (pair & 1) as usize);
            let to = intern(key(pc, qc), &mut next);
            let rel = own * signs.get(pc, qc);
            match next[from][pair as usize] {
                None => next[from][pair as usize] = Some((to, rel)),
                Some(existing) if existing == (to, rel) => {}
                Some(_) => {
                    return Err(TwistError::Unsatisfiable {
                        p: pc,
                        q: qc,
                        prefix: shuffle(pc, qc, len + 1).to_string(),
                    })
                }
            }
        }
    }

    let next: Vec<[(usize, i8); 4]> = next
        .into_iter()
        .enumerate()
        .map(|(letter, row)| {
            let mut out = [(0, 1); 4];
            for (slot, entry) in out.iter_mut().zip(row) {
                *slot = entry.ok_or(TwistError::Incomplete { letter })?;
            }
            Ok(out)
        })
        .collect::<Result<_, TwistError>>()?;

    let names = name_letters(&next);
    let aut = TwistAutomaton { names, next };
    verify_against_oracle(&aut, t_max)?;
    Ok(aut)
}

/// Checks the walk sign for every `p, q < 2^t` against the oracle.
pub fn verify_against_oracle(aut: &TwistAutomaton, t: usize) -> Result<(), TwistError> {
    let sig = AlgebraSignature::uniform(t, -1);
    let dim = sig.dim();
    for p in 0..dim {
        for q in 0..dim {
            let seq = shuffle(p, q, t);
            let walked = aut.sign_out(aut.run(&seq));
            let oracle = basis_product_oracle(p, q, &sig).expect("in range").sign();
            if walked != oracle {
                return Err(TwistError::Unsatisfiable { p, q, prefix: seq.to_string() });
            }
        }
    }
    Ok(())
}

fn name_letters(next: &[[(usize, i8); 4]]) -> Vec<String> {
    let base = |row: &[(usize, i8); 4]| -> &'static str {
        match [row[0].1, row[1].1, row[2].1, row[3].1] {
            [1, 1, 1, -1] => "A",
            [1, -1, 1, 1] => "B",
            [1, -1, -1, -1] => "C",
            _ => "X",
        }
    };
    let mut seen: HashMap<&str, usize> = HashMap::new();
    next.iter()
        .enumerate()
        .map(|(letter, row)| {
            if letter == 0 {
                return "A0".to_string();
            }
            let b = base(row);
            let n = seen.entry(b).or_insert(0);
            *n += 1;
            format!("{b}{}", "'".repeat(*n - 1))
        })
        .collect()
}

/// All shuffle words of length `0..=max_len` as `(len, p, q)`, shortest first
/// and in pair order within a length.
fn words_up_to(max_len: usize) -> Vec<(usize, usize, usize)> {
    let mut out = vec![(0, 0, 0)];
    let mut frontier = vec![(0usize, 0usize)];
    for len in 1..=max_len {
        let mut grown = Vec::with_capacity(frontier.len() * 4);
        for &(p, q) in &frontier {
            for pair in PAIRS {
                grown.push((p << 1 | (pair >> 1) as usize, q << 1 | (pair & 1) as usize));
            }
        }
        out.extend(grown.iter().map(|&(p, q)| (len, p, q)));
        frontier = grown;
    }
    out
}

/// Oracle signs of the all-(−1) tower at a fixed width.
struct OracleSigns {
    width: usize,
    signs: Vec<i8>,
}

impl OracleSigns {
    fn new(width: usize) -> Self {
        let sig = AlgebraSignature::uniform(width, -1);
        let dim = sig.dim();
        let mut signs = Vec::with_capacity(dim * dim);
        for p in 0..dim {
            for q in 0..dim {
                signs.push(basis_product_oracle(p, q, &sig).expect("in range").sign());
            }
        }
        Self { width, signs }
    }

    fn get(&self, p: usize, q: usize) -> i8 {
        self.signs[p << self.width | q]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut() -> TwistAutomaton {
        derive_twist_automaton(6).unwrap()
    }

    #[test]
    fn five_letters_with_distinct_root() {
        let a = aut();
        let names: Vec<_> = (0..a.letter_count()).map(|l| a.letter_name(l).to_string()).collect();
        assert_eq!(names, ["A0", "A", "B", "B'", "C"]);
        // A0 and A share the output pattern but not the successors.
        assert_eq!(a.pattern(0), a.pattern(1));
        assert_ne!(a.step(a.start(), 0b10), a.step(a.state("A").unwrap(), 0b10));
    }

    #[test]
    fn reference_transitions() {
        let a = aut();
        let cases = [
            ("A0", 0b01, "A"),
            ("A", 0b10, "C"),
            ("A", 0b11, "-C"),
            ("A", 0b00, "A"),
            ("-C", 0b10, "C"),
            ("C", 0b10, "-C"),
            ("C", 0b11, "-C"),
            ("-C", 0b11, "C"),
            ("C", 0b00, "C"),
            ("C", 0b01, "-C"),
        ];
        for (from, pair, to) in cases {
            let got = a.step(a.state(from).unwrap(), pair);
            assert_eq!(a.state_name(got), to, "{from} -{pair:02b}->");
        }
    }

    #[test]
    fn negation_equivariance() {
        let a = aut();
        for s in a.reachable_states() {
            for pair in PAIRS {
                assert_eq!(a.step(s.negate(), pair), a.step(s, pair).negate());
            }
        }
    }

    #[test]
    fn sedenion_walk() {
        let a = aut();
        let seq = shuffle(7, 13, 4);
        assert_eq!(a.trace(&seq), "A0 -01-> A -11-> -C -10-> C -11-> -C");
        assert_eq!(a.sign_out(a.run(&seq)), -1);
    }

    #[test]
    fn width_guard() {
        assert_eq!(derive_twist_automaton(2), Err(TwistError::WidthTooSmall { t_max: 2 }));
        assert!(derive_twist_automaton(3).is_ok());
    }

    #[test]
    fn verification_catches_a_corrupted_table() {
        let mut a = aut();
        let c = a.letter("C").unwrap();
        a.next[c][0b00].1 = -1;
        let err = verify_against_oracle(&a, 4).unwrap_err();
        assert!(matches!(err, TwistError::Unsatisfiable { .. }), "{err:?}");
    }

    #[test]
    fn json_lists_every_transition() {
        let a = aut();
        let j = a.to_json();
        assert_eq!(j["start"], "A0");
        assert_eq!(j["transitions"].as_array().unwrap().len(), 4 * a.letter_count());
    }
}
