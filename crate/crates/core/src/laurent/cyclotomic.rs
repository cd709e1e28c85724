use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{big_poly_div_exact, LaurentPoly1, LaurentPoly2};
use crate::error::{invalid, Error, Result};

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|(_, e)| *e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn u_power_minus_one(d: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = -BigInt::one();
    v[d as usize] = BigInt::one();
    v
}

fn big_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The `n`-th cyclotomic polynomial `Φ_n(u) = ∏_{d|n} (u^d - 1)^{μ(n/d)}`.
pub fn cyclotomic(n: u64) -> Result<LaurentPoly1> {
    if n == 0 {
        return invalid("cyclotomic index must be positive");
    }
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        match mobius(n / d) {
            1 => num = big_mul(&num, &u_power_minus_one(d)),
            -1 => den = big_mul(&den, &u_power_minus_one(d)),
            _ => {}
        }
    }
    let q = big_poly_div_exact(&num, &den)
        .ok_or(Error::InvalidInput("cyclotomic division failed".into()))?;
    LaurentPoly1::from_big(0, &q)
}

/// Smallest `d` such that `Φ_d` divides `g`, i.e. `g` vanishes at a primitive
/// `d`-th root of unity. Uses `φ(d) ≤ deg g ⇒ d ≤ 2 (deg g)^2`.
pub fn has_root_of_unity_root(g: &LaurentPoly1) -> Result<Option<u64>> {
    if g.is_zero() {
        return invalid("zero polynomial vanishes everywhere");
    }
    let deg = g.span() as u64;
    if deg == 0 {
        return Ok(None);
    }
    for d in 1..=2 * deg * deg {
        if euler_phi(d) > deg {
            continue;
        }
        if g.div_exact(&cyclotomic(d)?)?.is_some() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// A divisor `Φ_k(u1^{n1} u2^{n2})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedCyclotomic {
    pub k: u64,
    pub n1: i64,
    pub n2: i64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Exact quotient `f / Φ_k(u1^{n1} u2^{n2})`, or `None` if it does not divide.
///
/// With `(p, q) = (n1, n2)/g` primitive and `ps - qr = 1`, the substitution
/// `v1 = u1^p u2^q`, `v2 = u1^r u2^s` is invertible, and the divisor is a
/// polynomial in `v1` alone, so division happens coefficientwise in `v2`.
pub fn divide_generalized(
    f: &LaurentPoly2,
    k: u64,
    n1: i64,
    n2: i64,
) -> Result<Option<LaurentPoly2>> {
    if n1 == 0 && n2 == 0 {
        return invalid("direction (0, 0) is not allowed");
    }
    let g = n1.gcd(&n2);
    let (p, q) = (n1 / g, n2 / g);
    let (one, a, b) = ext_gcd(p, q);
    debug_assert_eq!(one, 1);
    let (s, r) = (a, -b);
    debug_assert_eq!(p * s - q * r, 1);
    let mut grouped: BTreeMap<i64, Vec<(i64, i128)>> = BTreeMap::new();
    for ((i, j), c) in f.terms() {
        let e1 = i * s - j * r;
        let e2 = -i * q + j * p;
        grouped.entry(e2).or_default().push((e1, *c));
    }
    let divisor = cyclotomic(k)?.substitute_power(g)?;
    let mut out = Vec::new();
    for (e2, terms) in grouped {
        let h = LaurentPoly1::from_terms(terms)?;
        let Some(quot) = h.div_exact(&divisor)? else {
            return Ok(None);
        };
        for (e1, c) in quot.terms() {
            out.push(((e1 * p + e2 * r, e1 * q + e2 * s), c));
        }
    }
    Ok(Some(LaurentPoly2::from_terms(out)?))
}

/// Tests whether `Φ_k(u1^{n1} u2^{n2})` divides `f`.
pub fn divisible_by_generalized(f: &LaurentPoly2, k: u64, n1: i64, n2: i64) -> Result<bool> {
    Ok(divide_generalized(f, k, n1, n2)?.is_some())
}

/// Bounded search for a generalized cyclotomic divisor `Φ_k(u1^{n1} u2^{n2})`
/// with `k ≤ k_max` and `max(|n1|, |n2|) ≤ n_max`, directions normalized so the
/// first nonzero entry is positive. `None` means none within the bounds.
pub fn generalized_cyclotomic_divisor_search(
    f: &LaurentPoly2,
    k_max: u64,
    n_max: i64,
) -> Result<Option<GeneralizedCyclotomic>> {
    if f.is_zero() {
        return invalid("zero polynomial");
    }
    for k in 1..=k_max {
        for radius in 1..=n_max {
            for n1 in 0..=radius {
                for n2 in -radius..=radius {
                    if n1.abs().max(n2.abs()) != radius || (n1 == 0 && n2 <= 0) {
                        continue;
                    }
                    if divisible_by_generalized(f, k, n1, n2)? {
                        return Ok(Some(GeneralizedCyclotomic { k, n1, n2 }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), LaurentPoly1::from_coeffs(&[-1, 1]));
        assert_eq!(
            cyclotomic(3).unwrap(),
            LaurentPoly1::from_coeffs(&[1, 1, 1])
        );
        assert_eq!(
            cyclotomic(12).unwrap(),
            LaurentPoly1::from_coeffs(&[1, 0, -1, 0, 1])
        );
        assert_eq!(cyclotomic(105).unwrap().coeff(7), -2);
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=200u64 {
            let mut acc = LaurentPoly1::one();
            for d in (1..=n).filter(|d| n % d == 0) {
                let c = cyclotomic(d).unwrap();
                assert_eq!(c.span() as u64, euler_phi(d));
                assert_eq!(c.leading(), 1);
                acc = acc.mul(&c).unwrap();
            }
            let target = LaurentPoly1::monomial(n as i64, 1)
                .sub(&LaurentPoly1::one())
                .unwrap();
            assert_eq!(acc, target, "n={n}");
        }
    }

    #[test]
    fn root_of_unity_detection() {
        assert_eq!(
            has_root_of_unity_root(&LaurentPoly1::from_coeffs(&[-1, 1])).unwrap(),
            Some(1)
        );
        let c = LaurentPoly1::from_terms([(12, 1), (2, 1), (0, 1)]).unwrap();
        assert_eq!(has_root_of_unity_root(&c).unwrap(), None);
        assert_eq!(
            has_root_of_unity_root(&LaurentPoly1::from_coeffs(&[-1, -1, 1])).unwrap(),
            None
        );
        let p = LaurentPoly1::from_coeffs(&[2, 1, 3])
            .mul(&cyclotomic(7).unwrap())
            .unwrap();
        assert_eq!(has_root_of_unity_root(&p).unwrap(), Some(7));
    }

    #[test]
    fn generalized_examples() {
        let f = LaurentPoly2::from_terms([((1, 1), 1), ((0, 0), -1)]).unwrap();
        assert_eq!(
            generalized_cyclotomic_divisor_search(&f, 4, 3).unwrap(),
            Some(GeneralizedCyclotomic { k: 1, n1: 1, n2: 1 })
        );
        let g = LaurentPoly2::from_terms([((1, 0), 1), ((0, 0), -1)]).unwrap();
        assert_eq!(
            generalized_cyclotomic_divisor_search(&g, 4, 3).unwrap(),
            Some(GeneralizedCyclotomic { k: 1, n1: 1, n2: 0 })
        );
        let h = LaurentPoly2::from_terms([((1, 0), 4), ((0, 1), 3), ((1, 1), 8)]).unwrap();
        assert_eq!(
            generalized_cyclotomic_divisor_search(&h, 24, 6).unwrap(),
            None
        );
    }

    #[test]
    fn finds_nonprimitive_direction() {
        // Φ_3(u1^2 u2^-2) = u1^4 u2^-4 + u1^2 u2^-2 + 1
        let d = LaurentPoly2::from_terms([((4, -4), 1), ((2, -2), 1), ((0, 0), 1)]).unwrap();
        let f = d
            .mul(&LaurentPoly2::from_terms([((0, 0), 3), ((1, 0), 1)]).unwrap())
            .unwrap();
        assert!(divisible_by_generalized(&f, 3, 2, -2).unwrap());
        assert!(divisible_by_generalized(&f, 3, -2, 2).unwrap());
        assert!(!divisible_by_generalized(&f, 2, 1, -1).unwrap());
    }

    #[test]
    fn quotient_recovers_cofactor() {
        let d = LaurentPoly2::from_terms([((2, -1), 1), ((1, 0), -1), ((0, 1), 1)]).unwrap();
        let cof = LaurentPoly2::from_terms([((0, 0), 5), ((1, 2), -1), ((-1, 0), 2)]).unwrap();
        // Φ_6(u1 u2^-1) up to the monomial u2
        let f = d.mul(&cof).unwrap();
        let q = divide_generalized(&f, 6, 1, -1).unwrap().unwrap();
        assert_eq!(q, cof.mul(&LaurentPoly2::monomial(0, 1, 1)).unwrap());
        assert!(divide_generalized(&cof, 1, 1, 0).unwrap().is_none());
    }
}
