use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{big_content, LaurentPoly1};
use crate::error::{invalid, Result};

/// Dense polynomial over `Q`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    pub coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(
            c.iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dn = d.coeffs.len();
        if r.len() < dn {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dn + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dn - 1] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dn - 1);
        (Self::new(q), Self::new(r))
    }

    /// Scales by a positive rational so the coefficients are coprime integers.
    /// Signs are preserved, which keeps Sturm sign counts valid.
    pub fn primitive_positive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = big_content(&ints);
        Self::from_ints(&ints.iter().map(|v| v / &g).collect::<Vec<_>>())
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let p = self.primitive_positive();
        let mut ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.to_integer()).collect();
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in &mut ints {
                *c = -c.clone();
            }
        }
        ints
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).primitive_positive();
            a = b;
            b = r;
        }
        a
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Sturm sequence `p, p', -rem(p, p'), …` with positive rescaling.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.primitive_positive()];
        let d = self.derivative().primitive_positive();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&-BigRational::one()).primitive_positive());
        }
        chain
    }
}

fn sign_changes(chain: &[RationalPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(p: &RationalPoly, a: &BigRational, b: &BigRational) -> usize {
    let chain = p.sturm_chain();
    sign_changes(&chain, a) - sign_changes(&chain, b)
}

/// Details of the exact unit-circle test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmReport {
    pub expansive: bool,
    /// Degree of `gcd(f, reciprocal of f)`, the factor holding any unimodular roots.
    pub reciprocal_gcd_degree: usize,
    pub root_at_one: bool,
    pub root_at_minus_one: bool,
    /// Distinct roots of the trace polynomial `h` in `(-2, 2)`.
    pub roots_in_interval: usize,
}

/// Converts palindromic `g` of even degree `e` to `h` with `g(u) = u^{e/2} h(u + 1/u)`.
fn trace_polynomial(g: &RationalPoly) -> RationalPoly {
    let e = g.degree() as usize;
    let half = e / 2;
    // D_j(w) = u^j + u^{-j} in terms of w = u + 1/u
    let two = BigRational::from_integer(BigInt::from(2));
    let w = RationalPoly::new(vec![BigRational::zero(), BigRational::one()]);
    let mut d_prev = RationalPoly::new(vec![two]);
    let mut d_cur = w.clone();
    let mut h = RationalPoly::new(vec![g.coeffs[half].clone()]);
    for j in 1..=half {
        if j > 1 {
            let next = w.mul(&d_cur).add(&d_prev.scale(&-BigRational::one()));
            d_prev = d_cur;
            d_cur = next;
        }
        h = h.add(&d_cur.scale(&g.coeffs[half + j]));
    }
    h
}

/// Exact test that `f` has no zero on the unit circle, using only operations in `Q[u]`.
pub fn sturm_expansive_z(f: &LaurentPoly1) -> Result<SturmReport> {
    if f.is_zero() {
        return invalid("zero polynomial");
    }
    let p = RationalPoly::from_ints(&f.to_big());
    if p.degree() == 0 {
        return Ok(SturmReport {
            expansive: true,
            reciprocal_gcd_degree: 0,
            root_at_one: false,
            root_at_minus_one: false,
            roots_in_interval: 0,
        });
    }
    let mut rev = p.coeffs.clone();
    rev.reverse();
    let g = p.gcd(&RationalPoly::new(rev));
    let gdeg = g.degree().max(0) as usize;
    let one = BigRational::one();
    let root_at_one = g.eval(&one).is_zero();
    let root_at_minus_one = g.eval(&-one.clone()).is_zero();
    let mut report = SturmReport {
        expansive: true,
        reciprocal_gcd_degree: gdeg,
        root_at_one,
        root_at_minus_one,
        roots_in_interval: 0,
    };
    if gdeg == 0 {
        return Ok(report);
    }
    if root_at_one || root_at_minus_one {
        report.expansive = false;
        return Ok(report);
    }
    // No roots at ±1 forces g to be palindromic of even degree.
    let h = trace_polynomial(&g);
    let two = BigRational::from_integer(BigInt::from(2));
    report.roots_in_interval = count_roots(&h, &-two.clone(), &two);
    report.expansive = report.roots_in_interval == 0;
    Ok(report)
}
