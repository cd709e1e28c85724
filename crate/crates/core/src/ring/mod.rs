//! The integral group ring `ZΓ` of the discrete Heisenberg group.
//!
//! Every group element has a unique normal form `x^k y^l z^m` and the product
//! follows from `yx = xyz` with `z` central:
//! `(x^a y^b z^c)(x^d y^e z^f) = x^{a+d} y^{b+e} z^{c+f+bd}`.

mod automorphism;
pub mod dense;
mod newton;
mod qbinom;

pub use automorphism::GroupAutomorphism;
pub use newton::NewtonPolygon;
pub use qbinom::{q_binomial, q_binomial_expand, q_binomial_upper_index_product};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly1, LaurentPoly2};

/// Integer coefficient type of `ZΓ`.
pub type Coeff = i128;

/// The group element `x^k y^l z^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

fn ck(v: Option<i64>) -> Result<i64> {
    v.ok_or(Error::Overflow("monomial exponent"))
}

impl Monomial {
    pub const IDENTITY: Monomial = Monomial { k: 0, l: 0, m: 0 };

    pub const fn new(k: i64, l: i64, m: i64) -> Self {
        Monomial { k, l, m }
    }

    pub const fn x() -> Self {
        Monomial::new(1, 0, 0)
    }

    pub const fn y() -> Self {
        Monomial::new(0, 1, 0)
    }

    pub const fn z() -> Self {
        Monomial::new(0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Normal form of the group product `self · other`.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let twist = ck(self.l.checked_mul(other.k))?;
        Ok(Monomial {
            k: ck(self.k.checked_add(other.k))?,
            l: ck(self.l.checked_add(other.l))?,
            m: ck(ck(self.m.checked_add(other.m))?.checked_add(twist))?,
        })
    }

    /// `(x^k y^l z^m)^{-1} = x^{-k} y^{-l} z^{lk-m}`.
    pub fn inverse(&self) -> Result<Monomial> {
        Ok(Monomial {
            k: ck(self.k.checked_neg())?,
            l: ck(self.l.checked_neg())?,
            m: ck(ck(self.l.checked_mul(self.k))?.checked_sub(self.m))?,
        })
    }

    /// Integer power, valid for negative `n` as well:
    /// `(x^a y^b z^r)^n = x^{na} y^{nb} z^{nr + ab·n(n-1)/2}`.
    pub fn pow(&self, n: i64) -> Result<Monomial> {
        let n128 = n as i128;
        let tri = n128 * (n128 - 1) / 2;
        let twist = (self.k as i128)
            .checked_mul(self.l as i128)
            .and_then(|ab| ab.checked_mul(tri))
            .ok_or(Error::Overflow("monomial power"))?;
        let m = (self.m as i128)
            .checked_mul(n128)
            .and_then(|v| v.checked_add(twist))
            .ok_or(Error::Overflow("monomial power"))?;
        Ok(Monomial {
            k: ck(self.k.checked_mul(n))?,
            l: ck(self.l.checked_mul(n))?,
            m: i64::try_from(m).map_err(|_| Error::Overflow("monomial power"))?,
        })
    }

    /// A subadditive size function, `max(|k|+|l|, sqrt(2|m|))`.
    ///
    /// Subadditivity `|ab| <= |a| + |b|` is what the exponential decay bound for
    /// ℓ¹ inverses needs; it is comparable to the word length in `{x, y, z}`.
    pub fn gauge(&self) -> f64 {
        let planar = (self.k.unsigned_abs() + self.l.unsigned_abs()) as f64;
        let central = (2.0 * self.m.unsigned_abs() as f64).sqrt();
        planar.max(central)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.k), ("y", self.l), ("z", self.m)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A finite integer combination of group elements, stored sparsely with no
/// zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupRingElement {
    terms: BTreeMap<Monomial, Coeff>,
}

const PAR_MUL_THRESHOLD: usize = 1 << 14;

fn cadd(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_add(b)
        .ok_or(Error::Overflow("group ring coefficient"))
}

fn cmul(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_mul(b)
        .ok_or(Error::Overflow("group ring coefficient"))
}

fn accumulate(map: &mut BTreeMap<Monomial, Coeff>, mono: Monomial, c: Coeff) -> Result<()> {
    if c == 0 {
        return Ok(());
    }
    match map.entry(mono) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = cadd(*o.get(), c)?;
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
    Ok(())
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(Monomial::IDENTITY, c)
    }

    pub fn monomial(mono: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(mono, c);
        }
        GroupRingElement { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::x(), 1)
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::y(), 1)
    }

    pub fn z() -> Self {
        Self::monomial(Monomial::z(), 1)
    }

    /// Builds an element from `(monomial, coefficient)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(iter: I) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in iter {
            accumulate(&mut terms, m, c)?;
        }
        Ok(GroupRingElement { terms })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn coeff(&self, mono: &Monomial) -> Coeff {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::IDENTITY)
    }

    /// `‖f‖₁ = Σ |f_δ|`.
    pub fn l1_norm(&self) -> Result<Coeff> {
        self.terms.values().try_fold(0i128, |acc, c| {
            acc.checked_add(c.checked_abs().ok_or(Error::Overflow("l1 norm"))?)
                .ok_or(Error::Overflow("l1 norm"))
        })
    }

    pub fn l1_norm_f64(&self) -> f64 {
        self.terms.values().map(|c| (*c as f64).abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, *m, *c)?;
        }
        Ok(GroupRingElement { terms })
    }

    pub fn neg(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.checked_neg().ok_or(Error::Overflow("negation"))?);
        }
        Ok(GroupRingElement { terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, s: Coeff) -> Result<Self> {
        if s == 0 {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, cmul(*c, s)?);
        }
        Ok(GroupRingElement { terms })
    }

    /// Left multiplication by a group element: `δ · self`.
    pub fn left_shift(&self, delta: &Monomial) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(delta.mul(m)?, *c);
        }
        Ok(GroupRingElement { terms })
    }

    /// Right multiplication by a group element: `self · δ`.
    pub fn right_shift(&self, delta: &Monomial) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.mul(delta)?, *c);
        }
        Ok(GroupRingElement { terms })
    }

    fn mul_block(
        left: &[(Monomial, Coeff)],
        right: &BTreeMap<Monomial, Coeff>,
    ) -> Result<BTreeMap<Monomial, Coeff>> {
        let mut out = BTreeMap::new();
        for (a, ca) in left {
            for (b, cb) in right {
                accumulate(&mut out, a.mul(b)?, cmul(*ca, *cb)?)?;
            }
        }
        Ok(out)
    }

    /// Convolution product in `ZΓ`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let left: Vec<(Monomial, Coeff)> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        if left.len() * other.terms.len() < PAR_MUL_THRESHOLD {
            return Ok(GroupRingElement {
                terms: Self::mul_block(&left, &other.terms)?,
            });
        }
        let chunk = left
            .len()
            .div_ceil(rayon::current_num_threads().max(1) * 4)
            .max(1);
        let partials: Vec<Result<BTreeMap<Monomial, Coeff>>> = left
            .par_chunks(chunk)
            .map(|block| Self::mul_block(block, &other.terms))
            .collect();
        let mut terms = BTreeMap::new();
        for p in partials {
            for (m, c) in p? {
                accumulate(&mut terms, m, c)?;
            }
        }
        Ok(GroupRingElement { terms })
    }

    /// `f^n` by repeated squaring; `f^0 = 1`.
    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// The involution `f* = Σ f_δ δ^{-1}`.
    pub fn star(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.inverse()?, *c);
        }
        Ok(GroupRingElement { terms })
    }

    /// Image under `x ↦ x̄, y ↦ ȳ, z ↦ 1`.
    pub fn abelianize(&self) -> Result<LaurentPoly2> {
        LaurentPoly2::from_terms(self.terms.iter().map(|(m, c)| ((m.k, m.l), *c)))
    }

    /// The coefficient polynomials `g_{kl}(z)` with `f = Σ g_{kl}(z) x^k y^l`.
    pub fn coefficient_polys(&self) -> Result<BTreeMap<(i64, i64), LaurentPoly1>> {
        let mut grouped: BTreeMap<(i64, i64), Vec<(i64, Coeff)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            grouped.entry((m.k, m.l)).or_default().push((m.m, *c));
        }
        grouped
            .into_iter()
            .map(|(key, v)| Ok((key, LaurentPoly1::from_terms(v)?)))
            .collect()
    }

    /// Builds `Σ g_{kl}(z) x^k y^l` from coefficient polynomials.
    pub fn from_coefficient_polys(polys: &BTreeMap<(i64, i64), LaurentPoly1>) -> Result<Self> {
        let mut terms = Vec::new();
        for ((k, l), p) in polys {
            for (e, c) in p.terms() {
                terms.push((Monomial::new(*k, *l, e), c));
            }
        }
        Self::from_terms(terms)
    }

    /// Decomposition `f = Σ_j x^j g_j(y, z)` with `g_j` a polynomial in `(y, z)`.
    pub fn x_decomposition(&self) -> Result<BTreeMap<i64, LaurentPoly2>> {
        let mut grouped: BTreeMap<i64, Vec<((i64, i64), Coeff)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            grouped.entry(m.k).or_default().push(((m.l, m.m), *c));
        }
        grouped
            .into_iter()
            .map(|(k, v)| Ok((k, LaurentPoly2::from_terms(v)?)))
            .collect()
    }

    /// Decomposition `f = Σ_j g_j(x, z) y^j` with `g_j` a polynomial in `(x, z)`.
    pub fn y_decomposition(&self) -> Result<BTreeMap<i64, LaurentPoly2>> {
        let mut grouped: BTreeMap<i64, Vec<((i64, i64), Coeff)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            grouped.entry(m.l).or_default().push(((m.k, m.m), *c));
        }
        grouped
            .into_iter()
            .map(|(l, v)| Ok((l, LaurentPoly2::from_terms(v)?)))
            .collect()
    }

    /// Content `c(f)`: the gcd in `Z[z^±]` of the coefficient polynomials,
    /// normalized to have nonzero constant term and positive leading
    /// coefficient. The integer content is kept, so `c(2x) = 2`.
    pub fn content(&self) -> Result<LaurentPoly1> {
        let polys = self.coefficient_polys()?;
        let mut acc = LaurentPoly1::zero();
        for p in polys.values() {
            acc = acc.gcd(p)?;
            if acc.is_one() {
                break;
            }
        }
        Ok(acc)
    }

    /// Newton polygon: convex hull of the `(k, l)` with `g_{kl} ≠ 0`.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::hull(self.terms.keys().map(|m| (m.k, m.l)))
    }

    /// Returns the element restricted to monomials whose `(k, l)` satisfy `keep`.
    pub fn restrict<F: Fn(i64, i64) -> bool>(&self, keep: F) -> Self {
        GroupRingElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.k, m.l))
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Bounding box `((kmin, kmax), (lmin, lmax), (mmin, mmax))` of the support.
    pub fn support_box(&self) -> Option<[(i64, i64); 3]> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut b = [(first.k, first.k), (first.l, first.l), (first.m, first.m)];
        for m in it {
            for (slot, v) in b.iter_mut().zip([m.k, m.l, m.m]) {
                slot.0 = slot.0.min(v);
                slot.1 = slot.1.max(v);
            }
        }
        Some(b)
    }

    pub fn max_gauge(&self) -> f64 {
        self.terms.keys().map(|m| m.gauge()).fold(0.0, f64::max)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mag = c.unsigned_abs();
            if *c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_identity() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    /// Rewrites a word of generators into normal form by moving x's left one at a time.
    fn rewrite(word: &[char]) -> Monomial {
        let mut w: Vec<char> = word.to_vec();
        let mut zs = 0i64;
        loop {
            let mut changed = false;
            for i in 0..w.len().saturating_sub(1) {
                if w[i] == 'y' && w[i + 1] == 'x' {
                    w.swap(i, i + 1);
                    zs += 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let k = w.iter().filter(|c| **c == 'x').count() as i64;
        let l = w.iter().filter(|c| **c == 'y').count() as i64;
        Monomial::new(k, l, zs)
    }

    #[test]
    fn yx_is_xyz() {
        assert_eq!(
            Monomial::y().mul(&Monomial::x()).unwrap(),
            Monomial::new(1, 1, 1)
        );
    }

    #[test]
    fn xy_squared_matches_rewriting() {
        let xy = Monomial::new(1, 1, 0);
        assert_eq!(xy.mul(&xy).unwrap(), Monomial::new(2, 2, 1));
        assert_eq!(rewrite(&['x', 'y', 'x', 'y']), Monomial::new(2, 2, 1));
    }

    #[test]
    fn rewriting_oracle_agrees_on_positive_words() {
        let words = ["yyxx", "yxyxyx", "xyyxyx", "yyyxxx"];
        for w in words {
            let chars: Vec<char> = w.chars().collect();
            let mut acc = Monomial::IDENTITY;
            for c in &chars {
                let g = if *c == 'x' {
                    Monomial::x()
                } else {
                    Monomial::y()
                };
                acc = acc.mul(&g).unwrap();
            }
            assert_eq!(acc, rewrite(&chars), "{w}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Monomial::x().inverse().unwrap(), Monomial::new(-1, 0, 0));
        assert_eq!(
            Monomial::new(1, 1, 0).inverse().unwrap(),
            Monomial::new(-1, -1, 1)
        );
        assert_eq!(
            Monomial::new(0, 0, 5).inverse().unwrap(),
            Monomial::new(0, 0, -5)
        );
    }

    #[test]
    fn monomial_pow_matches_repeated_product() {
        let g = Monomial::new(2, -3, 1);
        for n in -5i64..=5 {
            let mut acc = Monomial::IDENTITY;
            let step = if n >= 0 { g } else { g.inverse().unwrap() };
            for _ in 0..n.abs() {
                acc = acc.mul(&step).unwrap();
            }
            assert_eq!(g.pow(n).unwrap(), acc, "n={n}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let big = Monomial::new(0, i64::MAX, 0);
        assert!(matches!(
            big.mul(&Monomial::new(2, 0, 0)),
            Err(Error::Overflow(_))
        ));
        let c = GroupRingElement::constant(i128::MAX);
        assert!(c.add(&GroupRingElement::one()).is_err());
    }

    #[test]
    fn nonunique_factorization_identity() {
        let y1 = el(&[((0, 1, 0), 1), ((0, 0, 0), -1)]);
        let yz = el(&[((0, 1, 0), 1), ((0, 0, 1), -1)]);
        let x1 = el(&[((1, 0, 0), 1), ((0, 0, 0), 1)]);
        let lhs = y1.mul(&yz).unwrap().mul(&x1).unwrap();
        let f = el(&[
            ((1, 1, 2), 1),
            ((1, 0, 1), -1),
            ((0, 1, 0), 1),
            ((0, 0, 1), -1),
        ]);
        let rhs = f.mul(&y1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn commuting_subring_product() {
        let a = el(&[((0, 0, 0), 3), ((1, 0, 0), 1)]);
        let b = el(&[((0, 0, 0), 3), ((1, 0, 0), -1)]);
        assert_eq!(a.mul(&b).unwrap(), el(&[((0, 0, 0), 9), ((2, 0, 0), -1)]));
    }

    #[test]
    fn star_examples() {
        let f = el(&[
            ((1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, 0, 1), 1),
            ((0, 0, 0), 2),
        ]);
        let s = el(&[
            ((-1, 0, 0), 1),
            ((0, -1, 0), 1),
            ((0, 0, -1), 1),
            ((0, 0, 0), 2),
        ]);
        assert_eq!(f.star().unwrap(), s);
        assert_eq!(
            el(&[((1, 1, 0), 1)]).star().unwrap(),
            el(&[((-1, -1, 1), 1)])
        );
    }

    #[test]
    fn pow_examples() {
        let xy = el(&[((1, 0, 0), 1), ((0, 1, 0), 1)]);
        assert_eq!(xy.pow(0).unwrap(), GroupRingElement::one());
        assert_eq!(
            xy.pow(2).unwrap(),
            el(&[
                ((2, 0, 0), 1),
                ((1, 1, 0), 1),
                ((1, 1, 1), 1),
                ((0, 2, 0), 1)
            ])
        );
    }

    #[test]
    fn abelianize_example() {
        let f = el(&[
            ((1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, 0, 1), 1),
            ((0, 0, 0), 2),
        ]);
        let a = f.abelianize().unwrap();
        assert_eq!(a.coeff(0, 0), 3);
        assert_eq!(a.coeff(1, 0), 1);
        assert_eq!(a.coeff(0, 1), 1);
        assert!(el(&[((0, 0, 1), 1), ((0, 0, 0), -1)])
            .abelianize()
            .unwrap()
            .is_zero());
    }

    #[test]
    fn content_examples() {
        // (z²−1)x + (z−1)y
        let f = el(&[
            ((1, 0, 2), 1),
            ((1, 0, 0), -1),
            ((0, 1, 1), 1),
            ((0, 1, 0), -1),
        ]);
        assert_eq!(f.content().unwrap(), LaurentPoly1::new(0, vec![-1, 1]));
        let g = el(&[((1, 0, 0), 1), ((0, 1, 3), 7)]);
        assert!(g.content().unwrap().is_one());
        let zm1 = el(&[((0, 0, 1), 1), ((0, 0, 0), -1)]);
        let xy = el(&[((1, 0, 0), 1), ((0, 1, 0), 1)]);
        let prod = zm1.mul(&xy).unwrap();
        assert_eq!(prod.content().unwrap(), LaurentPoly1::new(0, vec![-1, 1]));
        assert_eq!(
            prod.content().unwrap(),
            zm1.content().unwrap().mul(&xy.content().unwrap()).unwrap()
        );
        assert!(GroupRingElement::zero().content().unwrap().is_zero());
    }

    #[test]
    fn display_is_normal_form() {
        let f = el(&[
            ((0, 1, 0), 1),
            ((1, 0, 0), 1),
            ((0, 0, 0), -3),
            ((-1, 0, 2), 2),
        ]);
        assert_eq!(f.to_string(), "2*x^-1*z^2-3+y+x");
        assert_eq!(GroupRingElement::zero().to_string(), "0");
    }

    #[test]
    fn gauge_is_subadditive_on_samples() {
        let samples = [
            Monomial::new(3, -2, 7),
            Monomial::new(0, 5, -1),
            Monomial::new(-4, 4, 0),
            Monomial::new(1, 1, 30),
        ];
        for a in &samples {
            for b in &samples {
                let ab = a.mul(b).unwrap();
                assert!(ab.gauge() <= a.gauge() + b.gauge() + 1e-12);
            }
        }
    }
}
