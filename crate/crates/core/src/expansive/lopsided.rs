use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ring::{Coeff, GroupRingElement, Monomial};

/// The dominant monomial `δ₀` with `|f_{δ₀}| > Σ_{δ≠δ₀} |f_δ|`, if any.
pub fn is_lopsided(f: &GroupRingElement) -> Option<Monomial> {
    let mut total: u128 = 0;
    let mut best: Option<(Monomial, u128)> = None;
    for (m, c) in f.terms() {
        let a = c.unsigned_abs();
        total = total.checked_add(a)?;
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((*m, a));
        }
    }
    let (m, a) = best?;
    if a > total - a {
        Some(m)
    } else {
        None
    }
}

/// Exponential decay bound `|(f⁻¹)_δ| ≤ C r^{|δ|}` where `|δ|` is
/// [`Monomial::gauge`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCertificate {
    /// `s = ‖f − f_{δ₀}δ₀‖₁ / |f_{δ₀}|`.
    pub s: f64,
    /// Largest gauge over the support of `δ₀⁻¹(f − f_{δ₀}δ₀)`.
    pub tau: f64,
    pub r: f64,
    pub c: f64,
}

impl DecayCertificate {
    pub fn bound(&self, m: &Monomial) -> f64 {
        self.c * self.r.powf(m.gauge())
    }
}

/// Truncated geometric-series inverse `Σ_{n≤N} (−E/c₀)^n c₀⁻¹ δ₀⁻¹`, stored as
/// integer numerators over the common denominator `c₀^{N+1}`.
#[derive(Clone, Debug)]
pub struct L1Approx {
    pub dominant: Monomial,
    pub terms: usize,
    pub numerators: BTreeMap<Monomial, BigInt>,
    pub denominator: BigInt,
    /// `ℓ¹` mass of the discarded tail, at most `s^{N+1} / ((1−s)|c₀|)`.
    pub tail_bound: f64,
    /// `‖f·approx − 1‖₁`, computed exactly.
    pub residual: BigRational,
    pub decay: DecayCertificate,
}

impl L1Approx {
    pub fn coeff(&self, m: &Monomial) -> BigRational {
        match self.numerators.get(m) {
            Some(n) => BigRational::new(n.clone(), self.denominator.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn coeff_f64(&self, m: &Monomial) -> f64 {
        self.coeff(m).to_f64().unwrap_or(f64::NAN)
    }

    pub fn coefficients_f64(&self) -> BTreeMap<Monomial, f64> {
        self.numerators
            .keys()
            .map(|m| (*m, self.coeff_f64(m)))
            .collect()
    }

    pub fn residual_f64(&self) -> f64 {
        self.residual.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn support_len(&self) -> usize {
        self.numerators.len()
    }
}

type BigMap = BTreeMap<Monomial, BigInt>;

fn big_add(map: &mut BigMap, m: Monomial, v: BigInt) {
    if v.is_zero() {
        return;
    }
    let slot = map.entry(m).or_insert_with(BigInt::zero);
    *slot += v;
    if slot.is_zero() {
        map.remove(&m);
    }
}

/// `a · b` with `a` integral and `b` big-integer valued.
fn mul_left(a: &GroupRingElement, b: &BigMap) -> Result<BigMap> {
    let mut out = BigMap::new();
    for (ma, ca) in a.terms() {
        let ca = BigInt::from(*ca);
        for (mb, cb) in b {
            big_add(&mut out, ma.mul(mb)?, &ca * cb);
        }
    }
    Ok(out)
}

const MAX_TERMS: usize = 4096;

/// Inverts a lopsided `f` in `ℓ¹` by the geometric series, with `N` chosen so
/// that `‖f·approx − 1‖₁ ≤ s^{N+1} ≤ ε`.
pub fn invert_l1(f: &GroupRingElement, eps: f64) -> Result<L1Approx> {
    if eps.is_nan() || eps <= 0.0 {
        return invalid("epsilon must be positive");
    }
    let d0 = is_lopsided(f).ok_or(Error::NotLopsided)?;
    let c0 = f.coeff(&d0);
    let d0_inv = d0.inverse()?;
    let rest = f.sub(&GroupRingElement::monomial(d0, c0))?;
    let e = rest.left_shift(&d0_inv)?;
    let s = e.l1_norm_f64() / c0.unsigned_abs() as f64;
    let n_terms = if s == 0.0 {
        0
    } else {
        let n = (eps.ln() / s.ln()).ceil() as i64 - 1;
        let mut n = n.max(0) as usize;
        while s.powi(n as i32 + 1) > eps {
            n += 1;
        }
        n
    };
    if n_terms > MAX_TERMS {
        return invalid(format!("geometric series needs {n_terms} terms"));
    }

    // P_k = c0^k + (−E) P_{k−1}, so that P_N = Σ_n (−E)^n c0^{N−n}.
    let neg_e = e.neg()?;
    let big_c0 = BigInt::from(c0);
    let mut p: BigMap = BigMap::new();
    p.insert(Monomial::IDENTITY, BigInt::one());
    let mut c0_pow = BigInt::one();
    for _ in 0..n_terms {
        c0_pow *= &big_c0;
        let mut next = mul_left(&neg_e, &p)?;
        big_add(&mut next, Monomial::IDENTITY, c0_pow.clone());
        p = next;
    }
    let denominator = &c0_pow * &big_c0;
    let mut numerators = BigMap::new();
    for (m, v) in p {
        numerators.insert(m.mul(&d0_inv)?, v);
    }

    let prod = mul_left(f, &numerators)?;
    let mut l1 = BigInt::zero();
    for (m, v) in &prod {
        if m.is_identity() {
            l1 += (v - &denominator).abs();
        } else {
            l1 += v.abs();
        }
    }
    if !prod.contains_key(&Monomial::IDENTITY) {
        l1 += denominator.abs();
    }
    let residual = BigRational::new(l1, denominator.abs());

    let abs_c0 = c0.unsigned_abs() as f64;
    let tail_bound = if s == 0.0 {
        0.0
    } else {
        s.powi(n_terms as i32 + 1) / ((1.0 - s) * abs_c0)
    };
    let tau = e.max_gauge();
    let decay = if s == 0.0 || tau == 0.0 {
        DecayCertificate {
            s,
            tau,
            r: 0.0,
            c: 1.0 / abs_c0,
        }
    } else {
        let g0 = d0_inv.gauge();
        DecayCertificate {
            s,
            tau,
            r: s.powf(1.0 / tau),
            c: s.powf(-g0 / tau) / ((1.0 - s) * abs_c0),
        }
    };
    Ok(L1Approx {
        dominant: d0,
        terms: n_terms,
        numerators,
        denominator,
        tail_bound,
        residual,
        decay,
    })
}

/// Exact check that `‖f·approx − 1‖₁ ≤ ε`.
pub fn residual_within(approx: &L1Approx, eps: f64) -> bool {
    match BigRational::from_f64(eps) {
        Some(e) => approx.residual <= e,
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LopsidizeBudget {
    pub max_iterations: usize,
    /// Coefficients of the approximate inverse beyond this gauge are dropped.
    pub max_radius: f64,
    /// Integer scalings `2^0 … 2^max_scale_log2` are tried when rounding.
    pub max_scale_log2: u32,
}

impl Default for LopsidizeBudget {
    fn default() -> Self {
        LopsidizeBudget {
            max_iterations: 40,
            max_radius: 10.0,
            max_scale_log2: 24,
        }
    }
}

type FMap = BTreeMap<Monomial, f64>;

fn fmul(a: &FMap, b: &FMap) -> Result<FMap> {
    let mut out = FMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)?).or_insert(0.0) += ca * cb;
        }
    }
    Ok(out)
}

fn truncate(w: &mut FMap, radius: f64) {
    let big = w.values().fold(0.0f64, |m, v| m.max(v.abs()));
    w.retain(|m, v| m.gauge() <= radius && v.abs() > 1e-14 * big);
}

fn round_scaled(w: &FMap, scale: f64) -> Result<GroupRingElement> {
    GroupRingElement::from_terms(w.iter().filter_map(|(m, v)| {
        let r = (v * scale).round();
        if r == 0.0 || !r.is_finite() || r.abs() > 1e30 {
            None
        } else {
            Some((*m, r as Coeff))
        }
    }))
}

/// Searches for `g` with `fg` lopsided: Newton–Schulz refinement
/// `w ← w(2 − fw)` of a truncated approximate inverse starting at `f*/‖f‖₁²`,
/// then integer rounding of `2^j w`. Returns `None` when the budget runs out.
pub fn lopsidize(
    f: &GroupRingElement,
    budget: &LopsidizeBudget,
) -> Result<Option<GroupRingElement>> {
    if f.is_zero() {
        return Ok(None);
    }
    if is_lopsided(f).is_some() {
        return Ok(Some(GroupRingElement::one()));
    }
    let ff: FMap = f.terms().map(|(m, c)| (*m, *c as f64)).collect();
    let norm = f.l1_norm_f64();
    let mut w: FMap = f
        .star()?
        .terms()
        .map(|(m, c)| (*m, *c as f64 / (norm * norm)))
        .collect();
    for _ in 0..budget.max_iterations {
        let fw = fmul(&ff, &w)?;
        let mut r: FMap = fw.into_iter().map(|(m, v)| (m, -v)).collect();
        *r.entry(Monomial::IDENTITY).or_insert(0.0) += 1.0;
        let rnorm: f64 = r.values().map(|v| v.abs()).sum();
        if !rnorm.is_finite() || rnorm > 1e6 {
            return Ok(None);
        }
        if rnorm < 0.5 {
            for j in 0..=budget.max_scale_log2 {
                let g = round_scaled(&w, (1u64 << j) as f64)?;
                if g.is_zero() {
                    continue;
                }
                if let Ok(fg) = f.mul(&g) {
                    if is_lopsided(&fg).is_some() {
                        return Ok(Some(g));
                    }
                }
            }
        }
        let wr = fmul(&w, &r)?;
        for (m, v) in wr {
            *w.entry(m).or_insert(0.0) += v;
        }
        truncate(&mut w, budget.max_radius);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    #[test]
    fn lopsided_examples() {
        let f = elem(&[
            ((0, 0, 0), 5),
            ((1, 0, 0), -1),
            ((-1, 0, 0), -1),
            ((0, 1, 0), -1),
            ((0, -1, 0), -1),
        ]);
        assert_eq!(is_lopsided(&f), Some(Monomial::IDENTITY));
        let f = elem(&[
            ((0, 0, 0), 3),
            ((1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, 0, 1), 1),
        ]);
        assert_eq!(is_lopsided(&f), None);
        let f = elem(&[((2, -1, 7), -4)]);
        assert_eq!(is_lopsided(&f), Some(Monomial::new(2, -1, 7)));
        assert_eq!(is_lopsided(&GroupRingElement::zero()), None);
    }

    #[test]
    fn scalar_inverse() {
        let a = invert_l1(&GroupRingElement::constant(2), 1e-9).unwrap();
        assert_eq!(a.terms, 0);
        assert_eq!(
            a.coeff(&Monomial::IDENTITY),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(a.tail_bound, 0.0);
        assert!(a.residual.is_zero());
    }

    #[test]
    fn three_plus_x() {
        let f = elem(&[((0, 0, 0), 3), ((1, 0, 0), 1)]);
        let a = invert_l1(&f, 1e-8).unwrap();
        for k in 0..=a.terms as i64 {
            let want = BigRational::new(
                if k % 2 == 0 { 1.into() } else { (-1).into() },
                BigInt::from(3).pow(k as u32 + 1),
            );
            assert_eq!(a.coeff(&Monomial::new(k, 0, 0)), want);
        }
        assert!(residual_within(&a, 1e-8));
        assert!((a.decay.r - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn off_identity_dominant() {
        // x y (7 + x − y^{-1})
        let f = elem(&[((1, 1, 0), 7), ((2, 1, 0), 1), ((1, 0, 0), -1)]);
        let a = invert_l1(&f, 1e-6).unwrap();
        assert_eq!(a.dominant, Monomial::new(1, 1, 0));
        assert!(residual_within(&a, 1e-6));
        for (m, v) in a.coefficients_f64() {
            assert!(v.abs() <= a.decay.bound(&m) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_non_lopsided() {
        let f = elem(&[((0, 0, 0), 1), ((1, 0, 0), -1)]);
        assert!(matches!(invert_l1(&f, 1e-3), Err(Error::NotLopsided)));
    }

    #[test]
    fn lopsidize_examples() {
        let f = elem(&[((0, 0, 0), 4), ((1, 0, 0), 1)]);
        assert_eq!(
            lopsidize(&f, &LopsidizeBudget::default()).unwrap(),
            Some(GroupRingElement::one())
        );
        // (3 + z + z^{-1})^2 is expansive but not lopsided
        let u = elem(&[((0, 0, 0), 3), ((0, 0, 1), 1), ((0, 0, -1), 1)]);
        let f = u.mul(&u).unwrap();
        assert!(is_lopsided(&f).is_none());
        let g = lopsidize(&f, &LopsidizeBudget::default())
            .unwrap()
            .expect("found");
        assert!(is_lopsided(&f.mul(&g).unwrap()).is_some());
        let f = elem(&[((1, 0, 0), 1), ((0, 0, 0), -1)]);
        assert_eq!(
            lopsidize(
                &f,
                &LopsidizeBudget {
                    max_iterations: 12,
                    ..Default::default()
                }
            )
            .unwrap(),
            None
        );
    }
}
