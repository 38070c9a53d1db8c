use std::fmt;

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

use super::{RatExpr, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Unexpected { found: String, expected: Vec<&'static str> },
    ZeroDenominator,
    DivisionByZero,
    ExponentTooLarge,
    TooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "unexpected {found}, expected one of: {}", expected.join(", "))
            }
            ParseErrorKind::ZeroDenominator => f.write_str("rational literal with zero denominator"),
            ParseErrorKind::DivisionByZero => f.write_str("division by a literal zero"),
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent does not fit in 32 bits"),
            ParseErrorKind::TooDeep => write!(f, "expression nested deeper than {MAX_DEPTH} levels"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Int(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("literal {q}"),
            Tok::Int(n) => format!("literal {n}"),
            Tok::X => "'x'".into(),
            Tok::Y => "'y'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const ATOM_START: &[&str] = &["number", "'x'", "'y'", "'('"];
const FACTOR_START: &[&str] = &["number", "'x'", "'y'", "'('", "'-'"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_end = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let end = digits_end(i);
                let n: BigInt = src[i..end].parse().expect("digits");
                // n/d with no whitespace is a single literal
                if end + 1 < bytes.len() && bytes[end] == b'/' && bytes[end + 1].is_ascii_digit() {
                    let dend = digits_end(end + 1);
                    let d: BigInt = src[end + 1..dend].parse().expect("digits");
                    if d.is_zero() {
                        return Err(ParseError { offset: start, kind: ParseErrorKind::ZeroDenominator });
                    }
                    i = dend;
                    Tok::Num(BigRational::new(n, d))
                } else {
                    i = end;
                    Tok::Int(n)
                }
            }
            _ => {
                i += 1;
                match c {
                    b'x' => Tok::X,
                    b'y' => Tok::Y,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = src[start..].chars().next().expect("non-empty");
                        return Err(ParseError {
                            offset: start,
                            kind: ParseErrorKind::Unexpected {
                                found: format!("character {ch:?}"),
                                expected: FACTOR_START.to_vec(),
                            },
                        });
                    }
                }
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

/// Deepest expression tree the parser accepts.
pub const MAX_DEPTH: usize = 200;

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    open: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Unexpected { found: self.peek().describe(), expected: expected.to_vec() },
        }
    }

    /// Rejects trees deeper than [`MAX_DEPTH`]; everything downstream
    /// (printing, evaluation, differentiation, drop) recurses on the tree.
    fn node(&self, e: RatExpr, depth: usize, at: usize) -> Result<(RatExpr, usize), ParseError> {
        if depth > MAX_DEPTH {
            return Err(ParseError { offset: at, kind: ParseErrorKind::TooDeep });
        }
        Ok((e, depth))
    }

    fn expr(&mut self) -> Result<(RatExpr, usize), ParseError> {
        let (mut lhs, mut d) = self.term()?;
        loop {
            let at = self.offset();
            let build: fn(RatExpr, RatExpr) -> RatExpr = match self.peek() {
                Tok::Plus => RatExpr::add,
                Tok::Minus => RatExpr::sub,
                _ => return Ok((lhs, d)),
            };
            self.bump();
            let (rhs, dr) = self.term()?;
            (lhs, d) = self.node(build(lhs, rhs), d.max(dr) + 1, at)?;
        }
    }

    fn term(&mut self) -> Result<(RatExpr, usize), ParseError> {
        let (mut lhs, mut d) = self.factor()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let (rhs, dr) = self.factor()?;
                    (lhs, d) = self.node(RatExpr::mul(lhs, rhs), d.max(dr) + 1, at)?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let (rhs, dr) = self.factor()?;
                    if is_literal_zero(&rhs) {
                        return Err(ParseError { offset: at, kind: ParseErrorKind::DivisionByZero });
                    }
                    (lhs, d) = self.node(RatExpr::div(lhs, rhs), d.max(dr) + 1, at)?;
                }
                _ => return Ok((lhs, d)),
            }
        }
    }

    fn factor(&mut self) -> Result<(RatExpr, usize), ParseError> {
        let start = self.offset();
        let negate = matches!(self.peek(), Tok::Minus);
        if negate {
            self.bump();
        }
        let (mut base, mut d) = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Tok::Int(n) => {
                    let n: u32 = n
                        .try_into()
                        .map_err(|_| ParseError { offset: at, kind: ParseErrorKind::ExponentTooLarge })?;
                    (base, d) = self.node(RatExpr::pow(base, n), d + 1, at)?;
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected(&["unsigned integer"]));
                }
            }
        }
        if negate {
            self.node(RatExpr::neg(base), d + 1, start)
        } else {
            Ok((base, d))
        }
    }

    fn atom(&mut self) -> Result<(RatExpr, usize), ParseError> {
        let leaf = match self.peek().clone() {
            Tok::Int(n) => RatExpr::Const(BigRational::from_integer(n)),
            Tok::Num(q) => RatExpr::Const(q),
            Tok::X => RatExpr::Var(Var::X),
            Tok::Y => RatExpr::Var(Var::Y),
            Tok::LParen => {
                let at = self.offset();
                self.bump();
                self.open += 1;
                // parentheses add no node, but each level costs parser stack
                if self.open > MAX_DEPTH {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::TooDeep });
                }
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.unexpected(&["'+'", "'-'", "'*'", "'/'", "')'"]));
                }
                self.bump();
                self.open -= 1;
                return Ok(inner);
            }
            _ => return Err(self.unexpected(ATOM_START)),
        };
        self.bump();
        Ok((leaf, 0))
    }
}

fn is_literal_zero(e: &RatExpr) -> bool {
    match e {
        RatExpr::Const(c) => c.is_zero(),
        RatExpr::Neg(a) => is_literal_zero(a),
        _ => false,
    }
}

pub fn parse(src: &str) -> Result<RatExpr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, open: 0 };
    let (e, _) = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return Err(p.unexpected(&["'+'", "'-'", "'*'", "'/'", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn structure() {
        assert_eq!(
            parse("x*y + 1").unwrap(),
            RatExpr::add(RatExpr::mul(RatExpr::x(), RatExpr::y()), RatExpr::int(1))
        );
        assert_eq!(
            parse("x/(x - y)").unwrap(),
            RatExpr::div(RatExpr::x(), RatExpr::sub(RatExpr::x(), RatExpr::y()))
        );
        assert_eq!(parse("-x^2").unwrap(), RatExpr::neg(RatExpr::pow(RatExpr::x(), 2)));
        assert_eq!(parse("1 - 2 - 3").unwrap(), RatExpr::sub(RatExpr::sub(RatExpr::int(1), RatExpr::int(2)), RatExpr::int(3)));
    }

    #[test]
    fn rational_literals_versus_division() {
        assert_eq!(parse("3/4").unwrap(), RatExpr::Const(ratio(3, 4)));
        assert_eq!(parse("3 / 4").unwrap(), RatExpr::div(RatExpr::int(3), RatExpr::int(4)));
        assert_eq!(parse("x*2/6").unwrap(), RatExpr::mul(RatExpr::x(), RatExpr::Const(ratio(1, 3))));
    }

    #[test]
    fn error_offsets() {
        let err = parse("x + * y").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(matches!(err.kind, ParseErrorKind::Unexpected { .. }));
        assert_eq!(parse("1/0").unwrap_err(), ParseError { offset: 0, kind: ParseErrorKind::ZeroDenominator });
        assert_eq!(parse("x / 0").unwrap_err(), ParseError { offset: 4, kind: ParseErrorKind::DivisionByZero });
        assert_eq!(parse("x/(-0)").unwrap_err().kind, ParseErrorKind::DivisionByZero);
        assert_eq!(parse("(x").unwrap_err().offset, 2);
        assert_eq!(parse("x y").unwrap_err().offset, 2);
        assert_eq!(parse("x^y").unwrap_err().offset, 2);
        assert_eq!(parse("x^99999999999").unwrap_err().kind, ParseErrorKind::ExponentTooLarge);
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("x é").unwrap_err().offset, 2);
        assert!(parse("--x").is_err());
    }

    #[test]
    fn depth_is_bounded() {
        let nested = format!("{}x{}", "(".repeat(100_000), ")".repeat(100_000));
        assert_eq!(parse(&nested).unwrap_err(), ParseError { offset: MAX_DEPTH, kind: ParseErrorKind::TooDeep });
        let chain = vec!["x"; MAX_DEPTH + 2].join(" + ");
        assert_eq!(parse(&chain).unwrap_err().kind, ParseErrorKind::TooDeep);
        let ok = vec!["x"; MAX_DEPTH + 1].join(" * ");
        assert!(parse(&ok).is_ok());
        assert!(parse(&format!("{}x{}", "(".repeat(MAX_DEPTH), ")".repeat(MAX_DEPTH))).is_ok());
    }

    #[test]
    fn error_messages_name_expected_tokens() {
        let msg = parse("x + * y").unwrap_err().to_string();
        assert!(msg.contains("byte 4") && msg.contains("'x'"), "{msg}");
    }
}
