use std::fmt;

use num::Signed;

use super::{RatExpr, Var};

// Binding strength of the printed form: sums, products, prefix minus,
// powers, atoms. A negative constant prints with a leading '-' and so
// binds like a negation.
fn level(e: &RatExpr) -> u8 {
    match e {
        RatExpr::Add(..) | RatExpr::Sub(..) => 1,
        RatExpr::Mul(..) | RatExpr::Div(..) => 2,
        RatExpr::Neg(_) => 3,
        RatExpr::Const(c) if c.is_negative() => 3,
        RatExpr::Pow(..) => 4,
        RatExpr::Const(_) | RatExpr::Var(_) => 5,
    }
}

fn write_at(e: &RatExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_expr(e, f)?;
        f.write_str(")")
    } else {
        write_expr(e, f)
    }
}

fn write_expr(e: &RatExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        RatExpr::Const(c) => write!(f, "{c}"),
        RatExpr::Var(Var::X) => f.write_str("x"),
        RatExpr::Var(Var::Y) => f.write_str("y"),
        RatExpr::Neg(a) => {
            f.write_str("-")?;
            write_at(a, 4, f)
        }
        RatExpr::Add(a, b) | RatExpr::Sub(a, b) => {
            write_at(a, 1, f)?;
            f.write_str(if matches!(e, RatExpr::Add(..)) { " + " } else { " - " })?;
            write_at(b, 2, f)
        }
        RatExpr::Mul(a, b) => {
            write_at(a, 2, f)?;
            f.write_str("*")?;
            write_at(b, 3, f)
        }
        // spaced so that `1 / 2` never re-lexes as the literal 1/2
        RatExpr::Div(a, b) => {
            write_at(a, 2, f)?;
            f.write_str(" / ")?;
            write_at(b, 3, f)
        }
        RatExpr::Pow(a, n) => {
            write_at(a, 5, f)?;
            write!(f, "^{n}")
        }
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f)
    }
}
