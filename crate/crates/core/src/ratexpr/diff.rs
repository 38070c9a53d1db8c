use num::{One, Zero};

use super::{RatExpr, Var};

fn is_zero(e: &RatExpr) -> bool {
    matches!(e, RatExpr::Const(c) if c.is_zero())
}

fn is_one(e: &RatExpr) -> bool {
    matches!(e, RatExpr::Const(c) if c.is_one())
}

// Constructors that drop additive zeros and multiplicative ones. This only
// keeps derivative trees from ballooning; it is not a simplifier.
fn add(a: RatExpr, b: RatExpr) -> RatExpr {
    match (is_zero(&a), is_zero(&b)) {
        (true, _) => b,
        (_, true) => a,
        _ => RatExpr::add(a, b),
    }
}

fn sub(a: RatExpr, b: RatExpr) -> RatExpr {
    match (is_zero(&a), is_zero(&b)) {
        (_, true) => a,
        (true, _) => neg(b),
        _ => RatExpr::sub(a, b),
    }
}

fn neg(a: RatExpr) -> RatExpr {
    if is_zero(&a) {
        a
    } else {
        RatExpr::neg(a)
    }
}

fn mul(a: RatExpr, b: RatExpr) -> RatExpr {
    if is_zero(&a) || is_zero(&b) {
        RatExpr::int(0)
    } else if is_one(&a) {
        b
    } else if is_one(&b) {
        a
    } else {
        RatExpr::mul(a, b)
    }
}

/// Symbolic `∂e/∂var`.
pub fn partial(e: &RatExpr, var: Var) -> RatExpr {
    if !e.depends_on(var) {
        return RatExpr::int(0);
    }
    match e {
        RatExpr::Const(_) => RatExpr::int(0),
        RatExpr::Var(v) => RatExpr::int(if *v == var { 1 } else { 0 }),
        RatExpr::Neg(a) => neg(partial(a, var)),
        RatExpr::Add(a, b) => add(partial(a, var), partial(b, var)),
        RatExpr::Sub(a, b) => sub(partial(a, var), partial(b, var)),
        RatExpr::Mul(a, b) => add(mul(partial(a, var), (**b).clone()), mul((**a).clone(), partial(b, var))),
        RatExpr::Div(a, b) => {
            let da = partial(a, var);
            let db = partial(b, var);
            if is_zero(&db) {
                RatExpr::div(da, (**b).clone())
            } else {
                let top = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
                RatExpr::div(top, RatExpr::pow((**b).clone(), 2))
            }
        }
        RatExpr::Pow(a, n) => match n {
            0 => RatExpr::int(0),
            1 => partial(a, var),
            _ => {
                let outer = if *n == 2 { (**a).clone() } else { RatExpr::pow((**a).clone(), n - 1) };
                mul(mul(RatExpr::int(i64::from(*n)), outer), partial(a, var))
            }
        },
    }
}
