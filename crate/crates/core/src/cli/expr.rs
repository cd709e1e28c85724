//! Expression grammar for ring elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] INT)?
//! atom  := INT | 'x' | 'y' | 'z' | 'u1' | 'u2' | 'u3' | '(' expr ')'
//! ```
//!
//! `x, y, z` evaluate in `ZΓ` (products left to right); `u1..u3` are commuting
//! variables. `-x^2` is `-(x^2)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly1, LaurentPoly2, PolyN};
use crate::ring::{Coeff, GroupRingElement, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
    /// Commuting variable `u_i`, `i ∈ 1..=3`.
    U(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
            Var::Z => write!(f, "z"),
            Var::U(i) => write!(f, "u{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Coeff),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Coeff),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'x' => Tok::Var(Var::X),
            b'y' => Tok::Var(Var::Y),
            b'z' => Tok::Var(Var::Z),
            b'u' => match bytes.get(i + 1) {
                Some(d @ b'1'..=b'3') => {
                    i += 1;
                    Tok::Var(Var::U(d - b'0'))
                }
                _ => return err(i, "expected u1, u2 or u3"),
            },
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                match text[start..=i].parse::<Coeff>() {
                    Ok(v) => Tok::Num(v),
                    Err(_) => return err(start, "integer literal out of range"),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return err(i, format!("unexpected character '{ch}'"));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => {
                let e = i64::try_from(n)
                    .ok()
                    .filter(|e| *e <= u32::MAX as i64)
                    .ok_or_else(|| Error::Parse {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => err(pos, "expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Var(v) => Ok(Expr::Var(v)),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(e),
                    _ => err(close, "expected ')'"),
                }
            }
            Tok::End => err(pos, "unexpected end of input"),
            t => err(pos, format!("unexpected token {t:?}")),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.pos(), "trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Binding level: 0 sum, 1 product, 2 unary/power, 3 atom.
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) => 1,
            Expr::Neg(_) | Expr::Pow(..) => 2,
            Expr::Num(_) | Expr::Var(_) => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 2)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 0)?;
                write!(
                    f,
                    "{}",
                    if matches!(self, Expr::Add(..)) {
                        "+"
                    } else {
                        "-"
                    }
                )?;
                b.write_at(f, 1)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "*")?;
                b.write_at(f, 2)
            }
            Expr::Pow(a, e) => {
                a.write_at(f, 3)?;
                write!(f, "^{e}")
            }
        }
    }

    fn vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut v = Vec::new();
        self.vars(&mut v);
        v
    }

    /// Evaluates in `ZΓ`; `u_i` are rejected.
    pub fn to_element(&self) -> Result<GroupRingElement> {
        match self {
            Expr::Num(n) => Ok(GroupRingElement::constant(*n)),
            Expr::Var(Var::X) => Ok(GroupRingElement::x()),
            Expr::Var(Var::Y) => Ok(GroupRingElement::y()),
            Expr::Var(Var::Z) => Ok(GroupRingElement::z()),
            Expr::Var(v @ Var::U(_)) => Err(Error::InvalidInput(format!(
                "commuting variable {v} in a group-ring expression"
            ))),
            Expr::Neg(a) => a.to_element()?.neg(),
            Expr::Add(a, b) => a.to_element()?.add(&b.to_element()?),
            Expr::Sub(a, b) => a.to_element()?.sub(&b.to_element()?),
            Expr::Mul(a, b) => a.to_element()?.mul(&b.to_element()?),
            Expr::Pow(a, e) => {
                let base = a.to_element()?;
                if *e >= 0 {
                    return base.pow(*e as u32);
                }
                let (m, c) = match base.terms().collect::<Vec<_>>().as_slice() {
                    [(m, c)] if c.abs() == 1 => (**m, **c),
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "negative power of non-unit {base}"
                        )))
                    }
                };
                let inv = GroupRingElement::monomial(m.inverse()?, c);
                inv.pow(e.unsigned_abs() as u32)
            }
        }
    }

    /// Evaluates in `Z[u1^±, u2^±, u3^±]`; `x, y, z` are rejected.
    pub fn to_poly(&self) -> Result<PolyN> {
        const N: usize = 3;
        match self {
            Expr::Num(n) => Ok(PolyN::constant(N, *n)),
            Expr::Var(Var::U(i)) => Ok(PolyN::var(N, (*i - 1) as usize)),
            Expr::Var(v) => Err(Error::InvalidInput(format!(
                "noncommuting variable {v} in a commutative expression"
            ))),
            Expr::Neg(a) => a.to_poly()?.neg(),
            Expr::Add(a, b) => a.to_poly()?.add(&b.to_poly()?),
            Expr::Sub(a, b) => a.to_poly()?.add(&b.to_poly()?.neg()?),
            Expr::Mul(a, b) => a.to_poly()?.mul(&b.to_poly()?),
            Expr::Pow(a, e) => {
                let base = a.to_poly()?;
                if *e >= 0 {
                    return base.pow(*e as u32);
                }
                let (exps, c) = match base.terms.iter().collect::<Vec<_>>().as_slice() {
                    [(exps, c)] if c.abs() == 1 => ((*exps).clone(), **c),
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "negative power of non-unit {base}"
                        )))
                    }
                };
                let inv = PolyN::from_terms(N, [(exps.iter().map(|k| -k).collect(), c)])?;
                inv.pow(e.unsigned_abs() as u32)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Parses a group-ring element written in `x, y, z`.
pub fn parse_element(text: &str) -> Result<GroupRingElement> {
    parse_expr(text)?.to_element()
}

/// Parses a commutative Laurent polynomial in `u1, u2, u3`.
pub fn parse_poly(text: &str) -> Result<PolyN> {
    parse_expr(text)?.to_poly()
}

/// A Laurent polynomial in one variable, written in `z` (or `u1`).
pub fn parse_poly1(text: &str) -> Result<LaurentPoly1> {
    let e = parse_expr(text)?;
    if e.variables().iter().any(|v| matches!(v, Var::U(_))) {
        return e.to_poly()?.to_poly1();
    }
    let f = e.to_element()?;
    if f.terms().any(|(m, _)| m.k != 0 || m.l != 0) {
        return Err(Error::InvalidInput(format!(
            "{text} is not a polynomial in z alone"
        )));
    }
    LaurentPoly1::from_terms(f.terms().map(|(m, c)| (m.m, *c)))
}

/// A commuting polynomial in two of `x, y, z` (or in `u1, u2`), returned with
/// `(u1, u2) = (first, second)`. Mixing `x` and `y` is rejected.
pub fn parse_poly2(text: &str, first: Var, second: Var) -> Result<LaurentPoly2> {
    let e = parse_expr(text)?;
    if e.variables().iter().any(|v| matches!(v, Var::U(_))) {
        return e.to_poly()?.to_poly2();
    }
    let f = e.to_element()?;
    let pick = |m: &Monomial, v: Var| match v {
        Var::X => m.k,
        Var::Y => m.l,
        _ => m.m,
    };
    let allowed = [first, second];
    for (m, _) in f.terms() {
        for (v, e) in [(Var::X, m.k), (Var::Y, m.l), (Var::Z, m.m)] {
            if e != 0 && !allowed.contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "{text} must be a polynomial in {first} and {second}"
                )));
            }
        }
    }
    LaurentPoly2::from_terms(
        f.terms()
            .map(|(m, c)| ((pick(m, first), pick(m, second)), *c)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    #[test]
    fn yx_normal_form() {
        assert_eq!(parse_element("y*x").unwrap(), el(&[((1, 1, 1), 1)]));
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_element("3+x+y+z").unwrap(),
            el(&[
                ((0, 0, 0), 3),
                ((1, 0, 0), 1),
                ((0, 1, 0), 1),
                ((0, 0, 1), 1)
            ])
        );
        assert_eq!(
            parse_element("y^2-x*y-1").unwrap(),
            el(&[((0, 2, 0), 1), ((1, 1, 0), -1), ((0, 0, 0), -1)])
        );
        assert_eq!(
            parse_element("5-x-x^-1-y-y^-1").unwrap(),
            el(&[
                ((0, 0, 0), 5),
                ((1, 0, 0), -1),
                ((-1, 0, 0), -1),
                ((0, 1, 0), -1),
                ((0, -1, 0), -1)
            ])
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_element("-x^2").unwrap(), el(&[((2, 0, 0), -1)]));
        assert_eq!(parse_element("(-x)^2").unwrap(), el(&[((2, 0, 0), 1)]));
        assert_eq!(parse_element("-2^2").unwrap(), el(&[((0, 0, 0), -4)]));
    }

    #[test]
    fn inverse_of_products() {
        // (xy)^-1 = y^-1 x^-1 = x^-1 y^-1 z
        assert_eq!(parse_element("(x*y)^-1").unwrap(), el(&[((-1, -1, 1), 1)]));
        assert_eq!(parse_element("(-x)^-1").unwrap(), el(&[((-1, 0, 0), -1)]));
        assert!(parse_element("(1+x)^-1").is_err());
    }

    #[test]
    fn commutative_mode() {
        let p = parse_poly("1+u1+u2+u3").unwrap();
        assert_eq!(p.terms.len(), 4);
        let q = parse_poly("u2*u1-u1*u2").unwrap();
        assert!(q.is_zero());
        assert!(parse_poly("x+u1").is_err());
        assert!(parse_element("x+u1").is_err());
    }

    #[test]
    fn error_positions() {
        match parse_expr("1+*x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        match parse_expr("(x+y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_expr("x+w") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("x^y").is_err());
        assert!(parse_expr("x y").is_err());
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn projections() {
        let g = parse_poly2("-x-z-2", Var::X, Var::Z).unwrap();
        assert_eq!(g.coeff(1, 0), -1);
        assert_eq!(g.coeff(0, 1), -1);
        assert_eq!(g.coeff(0, 0), -2);
        assert!(parse_poly2("x+y", Var::X, Var::Z).is_err());
        let c = parse_poly1("z^2-z-1").unwrap();
        assert_eq!(c.coeffs(), &[-1, -1, 1]);
        assert!(parse_poly1("x+1").is_err());
    }

    #[test]
    fn display_of_elements_parses_back() {
        for s in ["y*x", "2*x^-3*y^2*z^-1-7+z", "y^2-x*y-1", "0"] {
            let f = parse_element(s).unwrap();
            assert_eq!(parse_element(&f.to_string()).unwrap(), f);
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i128..50).prop_map(Expr::Num),
            prop_oneof![
                Just(Var::X),
                Just(Var::Y),
                Just(Var::Z),
                (1u8..=3).prop_map(Var::U)
            ]
            .prop_map(Expr::Var),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner, -3i64..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse_expr(&printed).unwrap();
            prop_assert_eq!(&back, &e, "{}", printed);
            prop_assert_eq!(back.to_string(), printed);
        }
    }
}
