use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly1;

fn z_power_minus_one(e: i64) -> LaurentPoly1 {
    if e == 0 {
        return LaurentPoly1::zero();
    }
    LaurentPoly1::monomial(e, 1)
        .sub(&LaurentPoly1::one())
        .expect("small coefficients")
}

fn ratio_of_products(num: &[i64], den: &[i64]) -> Result<Option<LaurentPoly1>> {
    let mut top = LaurentPoly1::one();
    for e in num {
        top = top.mul(&z_power_minus_one(*e))?;
    }
    let mut bottom = LaurentPoly1::one();
    for e in den {
        bottom = bottom.mul(&z_power_minus_one(*e))?;
    }
    if bottom.is_zero() {
        return Ok(None);
    }
    top.div_exact(&bottom)
}

/// Gaussian binomial `[n; k]_z = ∏_{j=0}^{k-1} (z^{n-j} - 1)/(z^{j+1} - 1)`,
/// the coefficient of `x^k y^{n-k}` in `(x + y)^n`.
pub fn q_binomial(n: u32, k: u32) -> Result<LaurentPoly1> {
    if k > n {
        return Ok(LaurentPoly1::zero());
    }
    let num: Vec<i64> = (0..k as i64).map(|j| n as i64 - j).collect();
    let den: Vec<i64> = (0..k as i64).map(|j| j + 1).collect();
    match ratio_of_products(&num, &den)? {
        Some(p) => Ok(p),
        None => invalid("q-binomial division is not exact"),
    }
}

/// The product with the upper index running to `k` inclusive,
/// `∏_{j=0}^{k} (z^{n-j} - 1)/(z^{j+1} - 1)`. Returns `None` when it is not a
/// Laurent polynomial. Kept for comparison with [`q_binomial`].
pub fn q_binomial_upper_index_product(n: u32, k: u32) -> Result<Option<LaurentPoly1>> {
    let num: Vec<i64> = (0..=k as i64).map(|j| n as i64 - j).collect();
    let den: Vec<i64> = (0..=k as i64).map(|j| j + 1).collect();
    ratio_of_products(&num, &den)
}

/// `[[n;0]_z, …, [n;n]_z]` so that `(x+y)^n = Σ_k [n;k]_z x^k y^{n-k}`.
pub fn q_binomial_expand(n: u32) -> Result<Vec<LaurentPoly1>> {
    if n == 0 {
        return invalid("q-binomial expansion needs n >= 1");
    }
    (0..=n).map(|k| q_binomial(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GroupRingElement, Monomial};

    #[test]
    fn small_cases() {
        let e1 = q_binomial_expand(1).unwrap();
        assert!(e1.iter().all(|p| p.is_one()));
        let e2 = q_binomial_expand(2).unwrap();
        assert_eq!(e2[1], LaurentPoly1::new(0, vec![1, 1]));
        assert_eq!(
            q_binomial(3, 1).unwrap(),
            LaurentPoly1::new(0, vec![1, 1, 1])
        );
    }

    #[test]
    fn matches_group_ring_power() {
        let xy = GroupRingElement::x().add(&GroupRingElement::y()).unwrap();
        for n in 1..=8u32 {
            let p = xy.pow(n).unwrap();
            let coeffs = q_binomial_expand(n).unwrap();
            for (k, poly) in coeffs.iter().enumerate() {
                for (e, c) in poly.terms() {
                    assert_eq!(p.coeff(&Monomial::new(k as i64, n as i64 - k as i64, e)), c);
                }
            }
        }
    }

    #[test]
    fn upper_index_variant_differs() {
        // n=2, k=1: the extra j=1 factor (z-1)/(z^2-1) turns 1+z into 1.
        let v = q_binomial_upper_index_product(2, 1).unwrap();
        assert_eq!(v, Some(LaurentPoly1::one()));
        assert_ne!(v.unwrap(), q_binomial(2, 1).unwrap());
    }
}
