use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::twisted::TwistedBuilder;
use super::{EntropyEstimate, EntropyMethod};
use crate::error::{invalid, Result};
use crate::numeric::{circle, torus_quad_log_modulus, QuadratureGrid};
use crate::ring::GroupRingElement;

/// Cells with `|det|` below this are subdivided and counted.
const NEAR_SINGULAR: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicTerm {
    pub q: usize,
    pub value: f64,
    pub quad_error: f64,
    pub flagged_cells: usize,
    pub min_abs_det: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicReport {
    pub terms: Vec<PeriodicTerm>,
    /// Fit of `L + a/q + b/q²` through the last three terms, or the last term alone.
    pub extrapolated: f64,
    pub estimate: EntropyEstimate,
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// `(1/q²) [∬ log|f(ξ,η,1)| + Σ_{p=1}^{q−1} ∬ log|det A_{ζ_p,f}(ξ,η)|]` with `ζ_p = e^{2πip/q}`.
pub fn periodic_term(f: &GroupRingElement, q: usize, grid: usize) -> Result<PeriodicTerm> {
    if !is_prime(q) {
        return invalid(format!("q = {q} is not prime"));
    }
    let qg = QuadratureGrid::new(grid, 2);
    let mut total = 0.0;
    let mut err = 0.0;
    let mut flagged = 0;
    let mut min_abs = f64::INFINITY;
    let mut run = |b: TwistedBuilder| -> Result<()> {
        let modulus = |s: &[f64]| b.log_abs_det(circle(s[0]), circle(s[1])).exp();
        let r = torus_quad_log_modulus(&modulus, &qg, NEAR_SINGULAR)?;
        total += r.value;
        err += r.error_estimate;
        flagged += r.diagnostics.flagged_cells;
        min_abs = min_abs.min(r.diagnostics.min_modulus);
        Ok(())
    };
    run(TwistedBuilder::rational(f, 0, 1)?)?;
    for p in 1..q {
        run(TwistedBuilder::rational(f, p as i64, q)?)?;
    }
    let q2 = (q * q) as f64;
    Ok(PeriodicTerm {
        q,
        value: total / q2,
        quad_error: err / q2,
        flagged_cells: flagged,
        min_abs_det: min_abs,
    })
}

/// `L` in the fit `v = L + a/q + b/q²` through the last three terms.
fn richardson(t: &[PeriodicTerm]) -> f64 {
    let n = t.len();
    if n < 3 {
        return t[n - 1].value;
    }
    let pts: Vec<(f64, f64)> = t[n - 3..]
        .iter()
        .map(|p| (1.0 / p.q as f64, p.value))
        .collect();
    // Lagrange interpolation in h = 1/q evaluated at h = 0
    let mut l = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= pts[j].0 / (pts[j].0 - pts[i].0);
            }
        }
        l += w * pts[i].1;
    }
    l
}

/// The per-`q` sequence for the given primes and its extrapolation.
pub fn entropy_periodic(
    f: &GroupRingElement,
    primes: &[usize],
    grid: usize,
) -> Result<PeriodicReport> {
    if primes.is_empty() {
        return invalid("at least one prime q is required");
    }
    let mut qs = primes.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let terms = qs
        .iter()
        .map(|&q| periodic_term(f, q, grid))
        .collect::<Result<Vec<_>>>()?;
    let extrapolated = richardson(&terms);
    let last = terms.last().expect("nonempty");
    let spread = if terms.len() >= 2 {
        (extrapolated - last.value).abs()
    } else {
        f64::NAN
    };
    let flagged: usize = terms.iter().map(|t| t.flagged_cells).sum();
    let estimate = EntropyEstimate {
        value: extrapolated,
        method: EntropyMethod::PeriodicDeterminant,
        error_bound: if spread.is_nan() {
            last.quad_error
        } else {
            spread + last.quad_error
        },
        heuristic: true,
        diagnostics: json!({
            "grid": grid,
            "primes": qs,
            "flagged_cells": flagged,
            "near_singular_threshold": NEAR_SINGULAR,
        }),
    };
    Ok(PeriodicReport {
        terms,
        extrapolated,
        estimate,
    })
}

/// Exact determinant by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

/// `det C_n(f)` where row `i` holds `f_j` at column `(i + j) mod n`;
/// `coeffs[j]` is the coefficient of `u^j`.
pub fn circulant_det(coeffs: &[i128], n: usize) -> Result<BigInt> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, c) in coeffs.iter().enumerate() {
            row[(i + j) % n] += BigInt::from(*c);
        }
    }
    Ok(bareiss_det(m))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenMeanCount {
    pub n: usize,
    /// `|det C_n(u² − u − 1)|` as a decimal string.
    pub count: String,
    /// `|τⁿ − 1|·|σⁿ − 1|` in floating point.
    pub formula: f64,
    pub relative_error: f64,
}

/// Periodic point counts of the golden-mean automorphism from circulant determinants.
pub fn golden_mean_counts(n_max: usize) -> Result<Vec<GoldenMeanCount>> {
    let tau = crate::numeric::golden();
    let sigma = -1.0 / tau;
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let det = circulant_det(&[-1, -1, 1], n)?.abs();
            let formula = (tau.powi(n as i32) - 1.0).abs() * (sigma.powi(n as i32) - 1.0).abs();
            let exact = det.to_f64().unwrap_or(f64::INFINITY);
            Ok(GoldenMeanCount {
                n,
                count: det.to_string(),
                formula,
                relative_error: (exact - formula).abs() / formula,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn elem(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    #[test]
    fn three_plus_x_plus_y_extrapolates() {
        let f = elem(&[((0, 0, 0), 3), ((1, 0, 0), 1), ((0, 1, 0), 1)]);
        let r = entropy_periodic(&f, &[7, 11, 13], 64).unwrap();
        // each term is (1 − 1/q + 1/q²) log 3
        for t in &r.terms {
            let q = t.q as f64;
            assert!(
                (t.value - (1.0 - 1.0 / q + 1.0 / (q * q)) * 3f64.ln()).abs() < 1e-9,
                "{t:?}"
            );
        }
        assert!((r.extrapolated - 3f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn rejects_composite() {
        assert!(periodic_term(&GroupRingElement::constant(2), 9, 8).is_err());
    }

    #[test]
    fn bareiss_small() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)],
        ];
        assert_eq!(bareiss_det(m), BigInt::from(6));
        let z = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(bareiss_det(z), BigInt::from(-1));
    }

    #[test]
    fn golden_counts() {
        for c in golden_mean_counts(20).unwrap() {
            assert!(c.relative_error < 1e-9, "{c:?}");
        }
    }
}
