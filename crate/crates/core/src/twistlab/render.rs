//! Text renderings of multiplication tables: aligned pretty tables, CSV and
//! JSON, numerically or with symbolic `γ` factors.
//!
//! CSV cell grammar: optional `-`, then either `g<i>` factors (symbolic) or a
//! positive rational magnitude (numeric, only when it is not 1), each followed
//! by `*`, then `e<k>`. Examples: `-e2`, `g1*g2*e0`, `-36*e0`, `1/2*e3`.

use num::{BigRational, One, Signed};
use serde_json::json;
use thiserror::Error;

use super::table::{build_sign_table, sign_kernel};
use super::TwistError;
use crate::cdnum::AlgebraSignature;
use crate::rational::{format_rational, parse_rational};

/// How γ's are shown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaMode {
    Numeric(AlgebraSignature),
    /// Symbolic `γ₁ … γ_t`.
    Symbolic(usize),
}

impl GammaMode {
    pub fn t(&self) -> usize {
        match self {
            GammaMode::Numeric(sig) => sig.t(),
            GammaMode::Symbolic(t) => *t,
        }
    }

    /// `g1,g2,…` selects symbolic mode, anything else is a rational list.
    pub fn parse(text: &str) -> Result<Self, CellParseError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.starts_with('g')) {
            for (j, p) in parts.iter().enumerate() {
                if *p != format!("g{}", j + 1) {
                    return Err(CellParseError::Malformed(text.to_string()));
                }
            }
            return Ok(GammaMode::Symbolic(parts.len()));
        }
        AlgebraSignature::parse(text)
            .map(GammaMode::Numeric)
            .map_err(|_| CellParseError::Malformed(text.to_string()))
    }
}

/// One table entry `±(factor) e_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub negative: bool,
    pub index: usize,
    pub factor: Factor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// Positive rational magnitude.
    Magnitude(BigRational),
    /// One-based γ indices, ascending.
    Gammas(Vec<usize>),
}

impl Cell {
    pub fn csv(&self) -> String {
        let mut out = String::new();
        if self.negative {
            out.push('-');
        }
        match &self.factor {
            Factor::Magnitude(m) if !m.is_one() => {
                out.push_str(&format_rational(m));
                out.push('*');
            }
            Factor::Magnitude(_) => {}
            Factor::Gammas(g) => {
                for j in g {
                    out.push_str(&format!("g{j}*"));
                }
            }
        }
        out.push_str(&format!("e{}", self.index));
        out
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if self.negative {
            out.push('-');
        }
        let scalar = self.index == 0;
        match &self.factor {
            Factor::Magnitude(m) => {
                if scalar {
                    out.push_str(&format_rational(m));
                } else if !m.is_one() {
                    if m.is_integer() {
                        out.push_str(&format_rational(m));
                    } else {
                        out.push_str(&format!("({})", format_rational(m)));
                    }
                }
            }
            Factor::Gammas(g) => {
                for j in g {
                    out.push('γ');
                    out.push_str(&subscript(*j));
                }
                if scalar && g.is_empty() {
                    out.push('1');
                }
            }
        }
        if !scalar {
            out.push_str(&basis_label(self.index));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellParseError {
    #[error("malformed table cell {0:?}")]
    Malformed(String),
}

/// Parses a CSV cell back into a [`Cell`].
pub fn parse_csv_cell(text: &str) -> Result<Cell, CellParseError> {
    let bad = || CellParseError::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let mut parts: Vec<&str> = body.split('*').collect();
    let last = parts.pop().ok_or_else(bad)?;
    let index = last
        .strip_prefix('e')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(bad)?;
    let gamma_index = |p: &str| {
        p.strip_prefix('g')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&j| j >= 1)
    };
    let factor = match parts.as_slice() {
        [] => Factor::Magnitude(BigRational::one()),
        [single] if gamma_index(single).is_none() => {
            let m = parse_rational(single).map_err(|_| bad())?;
            if !m.is_positive() || m.is_one() || single.starts_with(['+', '-', ' ']) {
                return Err(bad());
            }
            Factor::Magnitude(m)
        }
        gs => {
            let idx: Vec<usize> = gs.iter().map(|p| gamma_index(p)).collect::<Option<_>>().ok_or_else(bad)?;
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad());
            }
            Factor::Gammas(idx)
        }
    };
    Ok(Cell { negative, index, factor })
}

/// All `dim × dim` cells, rows `p`, columns `q`.
pub fn table_cells(mode: &GammaMode) -> Result<Vec<Vec<Cell>>, TwistError> {
    match mode {
        GammaMode::Numeric(sig) => {
            let table = build_sign_table(sig)?;
            let dim = sig.dim();
            Ok((0..dim)
                .map(|p| {
                    (0..dim)
                        .map(|q| {
                            let bp = table.get(p, q);
                            Cell {
                                negative: bp.coefficient.is_negative(),
                                index: bp.index,
                                factor: Factor::Magnitude(bp.coefficient.abs()),
                            }
                        })
                        .collect()
                })
                .collect())
        }
        GammaMode::Symbolic(t) => {
            let dim = 1usize << t;
            Ok((0..dim)
                .map(|p| {
                    (0..dim)
                        .map(|q| Cell {
                            negative: sign_kernel(p, q, *t) < 0,
                            index: p ^ q,
                            factor: Factor::Gammas((0..*t).filter(|j| (p & q) >> j & 1 == 1).map(|j| j + 1).collect()),
                        })
                        .collect()
                })
                .collect())
        }
    }
}

/// Decimal digits as Unicode subscripts.
pub fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

/// `1` for `e₀`, `e₅` otherwise.
pub fn basis_label(m: usize) -> String {
    if m == 0 {
        "1".to_string()
    } else {
        format!("e{}", subscript(m))
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    let mut out = s.to_string();
    out.extend(std::iter::repeat(' ').take(w.saturating_sub(width(s))));
    out
}

/// Aligned table with row and column labels, as displayed for quaternions.
pub fn render_pretty(mode: &GammaMode) -> Result<String, TwistError> {
    let cells = table_cells(mode)?;
    let dim = cells.len();
    let labels: Vec<String> = (0..dim).map(basis_label).collect();
    let body: Vec<Vec<String>> = cells.iter().map(|row| row.iter().map(Cell::pretty).collect()).collect();
    let label_w = labels.iter().map(|l| width(l)).max().unwrap_or(1).max(1);
    let cell_w = body
        .iter()
        .flatten()
        .chain(&labels)
        .map(|c| width(c))
        .max()
        .unwrap_or(1);
    let line = |label: &str, row: &[String]| -> String {
        let cols: Vec<String> = row.iter().map(|c| pad(c, cell_w)).collect();
        format!("{} | {}", pad(label, label_w), cols.join("  ")).trim_end().to_string()
    };
    let mut out = String::new();
    let header = line("·", &labels);
    out.push_str(&header);
    out.push('\n');
    out.push_str(&"-".repeat(label_w + 1));
    out.push('+');
    out.push_str(&"-".repeat(width(&header) - label_w - 2));
    out.push('\n');
    for (label, row) in labels.iter().zip(&body) {
        out.push_str(&line(label, row));
        out.push('\n');
    }
    Ok(out)
}

pub fn render_csv(mode: &GammaMode) -> Result<String, TwistError> {
    let cells = table_cells(mode)?;
    let dim = cells.len();
    let mut out = String::new();
    let header: Vec<String> = (0..dim).map(|q| format!("e{q}")).collect();
    out.push_str(&format!(",{}\n", header.join(",")));
    for (p, row) in cells.iter().enumerate() {
        let texts: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&format!("e{p},{}\n", texts.join(",")));
    }
    Ok(out)
}

pub fn render_json(mode: &GammaMode) -> Result<serde_json::Value, TwistError> {
    let cells = table_cells(mode)?;
    let rows: Vec<Vec<String>> = cells.iter().map(|row| row.iter().map(Cell::csv).collect()).collect();
    let gammas: Vec<String> = match mode {
        GammaMode::Numeric(sig) => sig.to_strings(),
        GammaMode::Symbolic(t) => (1..=*t).map(|j| format!("g{j}")).collect(),
    };
    Ok(json!({
        "schema": crate::SCHEMA,
        "t": mode.t(),
        "mode": if matches!(mode, GammaMode::Symbolic(_)) { "symbolic" } else { "numeric" },
        "gammas": gammas,
        "rows": rows,
    }))
}

/// `±1` grid of the all-(−1) tower, right aligned.
pub fn render_sign_grid(t: usize) -> Result<String, TwistError> {
    let sig = AlgebraSignature::uniform(t, -1);
    let table = build_sign_table(&sig)?;
    let dim = sig.dim();
    let mut out = String::new();
    for p in 0..dim {
        let row: Vec<String> = (0..dim).map(|q| format!("{:>2}", table.get(p, q).sign())).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}
