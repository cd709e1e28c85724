//! Integer Laurent polynomials in one, two and up to three commuting variables.

mod cyclotomic;
mod sturm;

pub use cyclotomic::{
    cyclotomic, divide_generalized, divisible_by_generalized, euler_phi,
    generalized_cyclotomic_divisor_search, has_root_of_unity_root, GeneralizedCyclotomic,
};
pub use sturm::{sturm_expansive_z, RationalPoly, SturmReport};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CPoly;
use crate::ring::Coeff;

fn cadd(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_add(b)
        .ok_or(Error::Overflow("laurent coefficient"))
}

fn cmul(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_mul(b)
        .ok_or(Error::Overflow("laurent coefficient"))
}

/// `Σ_{j} coeffs[j] z^{low + j}`, trimmed so that the first and last stored
/// coefficients are nonzero. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly1 {
    low: i64,
    coeffs: Vec<Coeff>,
}

impl LaurentPoly1 {
    pub fn new(low: i64, coeffs: Vec<Coeff>) -> Self {
        let mut p = LaurentPoly1 { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn zero() -> Self {
        LaurentPoly1 {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly1 {
            low: 0,
            coeffs: vec![1],
        }
    }

    pub fn monomial(e: i64, c: Coeff) -> Self {
        Self::new(e, vec![c])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Coeff)>>(iter: I) -> Result<Self> {
        let mut map: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (e, c) in iter {
            let slot = map.entry(e).or_insert(0);
            *slot = cadd(*slot, c)?;
        }
        map.retain(|_, c| *c != 0);
        let Some((&lo, _)) = map.iter().next() else {
            return Ok(Self::zero());
        };
        let hi = *map.keys().next_back().expect("nonempty");
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Ok(Self::new(lo, coeffs))
    }

    /// Polynomial with ascending coefficients starting at `z^0`.
    pub fn from_coeffs(coeffs: &[Coeff]) -> Self {
        Self::new(0, coeffs.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Width of the exponent range, the degree after shifting to `z^0`.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn leading(&self) -> Coeff {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, e: i64) -> Coeff {
        if e < self.low || e > self.high() {
            0
        } else {
            self.coeffs[(e - self.low) as usize]
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Coeff)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(move |(j, c)| (self.low + j as i64, *c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(self.terms().chain(other.terms()))
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow("laurent negation")))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentPoly1 {
            low: self.low,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, s: Coeff) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| cmul(*c, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(self.low, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0 as Coeff; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = cadd(out[i + j], cmul(*a, *b)?)?;
            }
        }
        Ok(Self::new(self.low + other.low, out))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplication by `z^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly1 {
            low: self.low + e,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `p(z^{-1})`.
    pub fn reciprocal(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly1 {
            low: -self.high(),
            coeffs,
        }
    }

    /// `p(z^k)` for `k != 0`.
    pub fn substitute_power(&self, k: i64) -> Result<Self> {
        if k == 0 {
            let s = self
                .coeffs
                .iter()
                .try_fold(0 as Coeff, |a, c| cadd(a, *c))?;
            return Ok(Self::monomial(0, s));
        }
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(*c as f64, 0.0);
        }
        acc * z.powi(self.low as i32)
    }

    pub fn eval_int(&self, z: i128) -> Result<Coeff> {
        if self.low < 0 && z != 1 && z != -1 {
            return Err(Error::InvalidInput(
                "negative power at a non-unit integer".into(),
            ));
        }
        let mut acc: Coeff = 0;
        for c in self.coeffs.iter().rev() {
            acc = cadd(cmul(acc, z)?, *c)?;
        }
        let mut base: Coeff = 1;
        for _ in 0..self.low.unsigned_abs() {
            base = cmul(base, z)?;
        }
        if self.low >= 0 {
            cmul(acc, base)
        } else {
            // z is ±1 here, so z^{-e} = z^{e}
            cmul(acc, base)
        }
    }

    pub fn to_cpoly(&self) -> CPoly {
        CPoly::new(
            self.low,
            self.coeffs
                .iter()
                .map(|c| Complex64::new(*c as f64, 0.0))
                .collect(),
        )
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| BigInt::from(*c)).collect()
    }

    fn from_big(low: i64, coeffs: &[BigInt]) -> Result<Self> {
        let small = coeffs
            .iter()
            .map(|c| c.to_i128().ok_or(Error::Overflow("laurent coefficient")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(low, small))
    }

    /// Exact quotient `self / d` in `Z[z^±]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>> {
        if d.is_zero() {
            return Err(Error::InvalidInput("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Some(Self::zero()));
        }
        match big_poly_div_exact(&self.to_big(), &d.to_big()) {
            Some(q) => Ok(Some(Self::from_big(self.low - d.low, &q)?)),
            None => Ok(None),
        }
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.div_exact(self)?.is_some())
    }

    /// Integer content (gcd of coefficients), nonnegative.
    pub fn int_content(&self) -> Coeff {
        self.coeffs.iter().fold(0 as Coeff, |g, c| g.gcd(c))
    }

    /// Normal form up to units `±z^k`: nonzero constant term, positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p = LaurentPoly1 {
            low: 0,
            coeffs: self.coeffs.clone(),
        };
        if p.leading() < 0 {
            for c in &mut p.coeffs {
                *c = -*c;
            }
        }
        p
    }

    /// Greatest common divisor in `Z[z^±]`, in [`normalized`](Self::normalized) form.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.normalized());
        }
        if other.is_zero() {
            return Ok(self.normalized());
        }
        let a = self.to_big();
        let b = other.to_big();
        let ca = big_content(&a);
        let cb = big_content(&b);
        let c = ca.gcd(&cb);
        let g = big_primitive_gcd(&a, &b);
        let scaled: Vec<BigInt> = g.iter().map(|v| v * &c).collect();
        Ok(Self::from_big(0, &scaled)?.normalized())
    }

    /// `z^{2k}` shifted reciprocal: `z^{low+high} p(1/z)`; equals `p` iff palindromic.
    pub fn reflect(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly1::new(self.low, coeffs)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, c) in self.terms() {
            let mag = c.unsigned_abs();
            if c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag == 1 {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

pub(crate) fn big_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Exact division of dense integer polynomials, `None` when not exact over `Z`.
pub(crate) fn big_poly_div_exact(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = a.to_vec();
    while rem.last().is_some_and(|c| c.is_zero()) {
        rem.pop();
    }
    let mut d = d.to_vec();
    while d.last().is_some_and(|c| c.is_zero()) {
        d.pop();
    }
    if rem.is_empty() {
        return Some(Vec::new());
    }
    if rem.len() < d.len() {
        return None;
    }
    let dl = d.last()?.clone();
    let mut q = vec![BigInt::zero(); rem.len() - d.len() + 1];
    for i in (0..q.len()).rev() {
        let top = rem[i + d.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let (qi, r) = top.div_rem(&dl);
        if !r.is_zero() {
            return None;
        }
        for (j, dj) in d.iter().enumerate() {
            rem[i + j] -= &qi * dj;
        }
        q[i] = qi;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Primitive gcd of two integer polynomials via the Euclidean algorithm over Q.
pub(crate) fn big_primitive_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let ra = RationalPoly::from_ints(a);
    let rb = RationalPoly::from_ints(b);
    let g = ra.gcd(&rb);
    g.primitive_integer()
}

/// Sparse integer Laurent polynomial in two commuting variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), Coeff>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: i64, j: i64, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((i, j), c);
        }
        LaurentPoly2 { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), Coeff)>>(iter: I) -> Result<Self> {
        let mut terms: BTreeMap<(i64, i64), Coeff> = BTreeMap::new();
        for (e, c) in iter {
            let slot = terms.entry(e).or_insert(0);
            *slot = cadd(*slot, c)?;
        }
        terms.retain(|_, c| *c != 0);
        Ok(LaurentPoly2 { terms })
    }

    /// `a(u1) · c(u2)`.
    pub fn from_product(a: &LaurentPoly1, c: &LaurentPoly1) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, ai) in a.terms() {
            for (j, cj) in c.terms() {
                terms.push(((i, j), cmul(ai, cj)?));
            }
        }
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Coeff {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, *c)),
        )
    }

    pub fn neg(&self) -> Result<Self> {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| Ok((*e, c.checked_neg().ok_or(Error::Overflow("negation"))?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                out.push(((i1 + i2, j1 + j2), cmul(*c1, *c2)?));
            }
        }
        Self::from_terms(out)
    }

    pub fn eval(&self, u1: Complex64, u2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|((i, j), c)| u1.powi(*i as i32) * u2.powi(*j as i32) * (*c as f64))
            .sum()
    }

    /// Polynomial in the first variable with the second fixed at `zeta`:
    /// coefficients `Σ_j p_{ij} ζ^j`.
    pub fn slice(&self, zeta: Complex64) -> CPoly {
        let Some(&(lo, _)) = self.terms.keys().next() else {
            return CPoly::new(0, Vec::new());
        };
        let hi = self.terms.keys().map(|(i, _)| *i).max().expect("nonempty");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for ((i, j), c) in &self.terms {
            coeffs[(i - lo) as usize] += zeta.powi(*j as i32) * (*c as f64);
        }
        CPoly::new(lo, coeffs)
    }

    /// Polynomial in the second variable with the first fixed at `xi`.
    pub fn slice_second(&self, xi: Complex64) -> CPoly {
        self.swap().slice(xi)
    }

    /// Exchanges the two variables.
    pub fn swap(&self) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((*j, *i), *c))
                .collect(),
        }
    }

    /// Groups by the first exponent: `p = Σ_i u1^i q_i(u2)`.
    pub fn by_first(&self) -> Result<BTreeMap<i64, LaurentPoly1>> {
        let mut grouped: BTreeMap<i64, Vec<(i64, Coeff)>> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            grouped.entry(*i).or_default().push((*j, *c));
        }
        grouped
            .into_iter()
            .map(|(i, v)| Ok((i, LaurentPoly1::from_terms(v)?)))
            .collect()
    }

    /// `p(u1^a u2^b, u1^c u2^d)` as a Laurent polynomial.
    pub fn monomial_substitute(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::from_terms(
            self.terms
                .iter()
                .map(|((i, j), v)| ((i * a + j * c, i * b + j * d), *v)),
        )
    }

    pub fn to_polyn(&self) -> PolyN {
        PolyN {
            nvars: 2,
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| (vec![*i, *j], *c))
                .collect(),
        }
    }

    pub fn fmt_vars(&self, v1: &str, v2: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for ((i, j), c) in &self.terms {
            let mag = c.unsigned_abs();
            if *c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let mut parts = Vec::new();
            for (v, e) in [(v1, *i), (v2, *j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            if parts.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag == 1 {
                s.push_str(&parts.join("*"));
            } else {
                s.push_str(&format!("{mag}*{}", parts.join("*")));
            }
        }
        s
    }
}

/// Sparse integer Laurent polynomial in `nvars ≤ 3` commuting variables `u1, u2, u3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyN {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Coeff>,
}

impl PolyN {
    pub fn new(nvars: usize) -> Self {
        PolyN {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        let mut p = Self::new(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        let mut p = Self::new(nvars);
        p.terms.insert(e, 1);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, Coeff)>>(
        nvars: usize,
        iter: I,
    ) -> Result<Self> {
        let mut terms: BTreeMap<Vec<i64>, Coeff> = BTreeMap::new();
        for (e, c) in iter {
            if e.len() != nvars {
                return Err(Error::InvalidInput(
                    "exponent vector length mismatch".into(),
                ));
            }
            let slot = terms.entry(e).or_insert(0);
            *slot = cadd(*slot, c)?;
        }
        terms.retain(|_, c| *c != 0);
        Ok(PolyN { nvars, terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(
            self.nvars.max(other.nvars),
            self.padded(other.nvars).chain(other.padded(self.nvars)),
        )
    }

    fn padded(&self, n: usize) -> impl Iterator<Item = (Vec<i64>, Coeff)> + '_ {
        let target = self.nvars.max(n);
        self.terms.iter().map(move |(e, c)| {
            let mut e = e.clone();
            e.resize(target, 0);
            (e, *c)
        })
    }

    pub fn neg(&self) -> Result<Self> {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| {
                    Ok((
                        e.clone(),
                        c.checked_neg().ok_or(Error::Overflow("negation"))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.nvars.max(other.nvars);
        let a: Vec<_> = self.padded(n).collect();
        let b: Vec<_> = other.padded(n).collect();
        let mut out = Vec::with_capacity(a.len() * b.len());
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.push((e, cmul(*ca, *cb)?));
            }
        }
        Self::from_terms(n, out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Raises the variable count, keeping the polynomial.
    pub fn with_nvars(&self, n: usize) -> Self {
        PolyN {
            nvars: self.nvars.max(n),
            terms: self.padded(n).collect(),
        }
    }

    /// Number of variables that actually occur, counting from the last used one.
    pub fn effective_nvars(&self) -> usize {
        let mut used = 0;
        for e in self.terms.keys() {
            for (i, v) in e.iter().enumerate() {
                if *v != 0 {
                    used = used.max(i + 1);
                }
            }
        }
        used
    }

    pub fn eval(&self, u: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(u)
                    .fold(Complex64::new(*c as f64, 0.0), |acc, (k, v)| {
                        acc * v.powi(*k as i32)
                    })
            })
            .sum()
    }

    /// Polynomial in the last variable with the others fixed.
    pub fn slice_last(&self, outer: &[Complex64]) -> CPoly {
        let last = self.nvars - 1;
        let Some(lo) = self.terms.keys().map(|e| e[last]).min() else {
            return CPoly::new(0, Vec::new());
        };
        let hi = self.terms.keys().map(|e| e[last]).max().expect("nonempty");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            let w = e[..last]
                .iter()
                .zip(outer)
                .fold(Complex64::new(*c as f64, 0.0), |acc, (k, v)| {
                    acc * v.powi(*k as i32)
                });
            coeffs[(e[last] - lo) as usize] += w;
        }
        CPoly::new(lo, coeffs)
    }

    pub fn to_poly2(&self) -> Result<LaurentPoly2> {
        if self.effective_nvars() > 2 {
            return Err(Error::InvalidInput(
                "polynomial uses more than two variables".into(),
            ));
        }
        LaurentPoly2::from_terms(self.terms.iter().map(|(e, c)| {
            (
                (
                    e.first().copied().unwrap_or(0),
                    e.get(1).copied().unwrap_or(0),
                ),
                *c,
            )
        }))
    }

    pub fn to_poly1(&self) -> Result<LaurentPoly1> {
        if self.effective_nvars() > 1 {
            return Err(Error::InvalidInput(
                "polynomial uses more than one variable".into(),
            ));
        }
        LaurentPoly1::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (e.first().copied().unwrap_or(0), *c)),
        )
    }
}

impl fmt::Display for PolyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mag = c.unsigned_abs();
            if *c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, k)| {
                    if *k == 1 {
                        format!("u{}", i + 1)
                    } else {
                        format!("u{}^{k}", i + 1)
                    }
                })
                .collect();
            if parts.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{mag}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimming_and_terms() {
        let p = LaurentPoly1::new(-2, vec![0, 0, 3, 0, -1, 0]);
        assert_eq!(p.low(), 0);
        assert_eq!(p.high(), 2);
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(0, 3), (2, -1)]);
        assert!(LaurentPoly1::new(5, vec![0, 0]).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly1::from_coeffs(&[-1, 0, 1]);
        let b = LaurentPoly1::from_coeffs(&[-1, 1]);
        assert_eq!(
            a.div_exact(&b).unwrap(),
            Some(LaurentPoly1::from_coeffs(&[1, 1]))
        );
        assert_eq!(b.div_exact(&a).unwrap(), None);
        let c = LaurentPoly1::from_coeffs(&[1, 2]);
        assert_eq!(
            LaurentPoly1::from_coeffs(&[1, 1]).div_exact(&c).unwrap(),
            None
        );
        assert_eq!(
            a.shift(-3).div_exact(&b).unwrap(),
            Some(LaurentPoly1::new(-3, vec![1, 1]))
        );
    }

    #[test]
    fn gcd_examples() {
        let a = LaurentPoly1::from_coeffs(&[-1, 0, 1]);
        let b = LaurentPoly1::from_coeffs(&[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), LaurentPoly1::from_coeffs(&[-1, 1]));
        let c = LaurentPoly1::new(3, vec![-2, 0, 2]);
        let d = LaurentPoly1::new(-1, vec![4, -4]);
        assert_eq!(c.gcd(&d).unwrap(), LaurentPoly1::from_coeffs(&[-2, 2]));
        assert!(LaurentPoly1::from_coeffs(&[1, 1]).gcd(&b).unwrap().is_one());
    }

    #[test]
    fn eval_and_reciprocal() {
        let p = LaurentPoly1::new(-1, vec![1, 0, 2]);
        let z = Complex64::new(0.3, -0.7);
        let lhs = p.reciprocal().eval(z);
        let rhs = p.eval(z.inv());
        assert!((lhs - rhs).norm() < 1e-12);
        assert_eq!(p.eval_int(1).unwrap(), 3);
        assert_eq!(p.eval_int(-1).unwrap(), -3);
    }

    #[test]
    fn slice_examples() {
        let p = LaurentPoly2::from_terms([((1, 0), 1), ((0, 1), 1), ((0, 0), 2)]).unwrap();
        let s = p.slice(Complex64::new(-1.0, 0.0));
        assert_eq!(s.low, 0);
        assert!((s.coeffs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((s.coeffs[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let a = LaurentPoly1::from_coeffs(&[-1, -1, 1]);
        let c = LaurentPoly1::from_coeffs(&[1, 0, 1]);
        let prod = LaurentPoly2::from_product(&a, &c).unwrap();
        let zeta = Complex64::from_polar(1.0, 0.7);
        let sl = prod.slice(zeta);
        let cz = c.eval(zeta);
        for (j, v) in sl.coeffs.iter().enumerate() {
            assert!((v - cz * a.coeff(j as i64) as f64).norm() < 1e-12);
        }
    }

    #[test]
    fn polyn_slice_last() {
        let p = PolyN::from_terms(
            3,
            [
                (vec![0, 0, 0], 1),
                (vec![1, 0, 0], 1),
                (vec![0, 1, 0], 1),
                (vec![0, 0, 1], 1),
            ],
        )
        .unwrap();
        let outer = [Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)];
        let s = p.slice_last(&outer);
        assert!((s.coeffs[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((s.coeffs[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(p.to_string(), "1+u3+u2+u1");
    }
}
