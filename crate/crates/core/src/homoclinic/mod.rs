//! Fundamental homoclinic points `t△ = β((f*)⁻¹)`, decay certificates and the
//! symbolic cover `π(u) = β(u·w△)` for lopsided (or lopsidizable) `f`.

mod multiplier;

pub use multiplier::{multiplier_experiment, MultiplierRow};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expansive::{invert_l1, is_lopsided, lopsidize, DecayCertificate, LopsidizeBudget};
use crate::ring::{GroupRingElement, Monomial};

/// A truncation of `w△ = (f*)⁻¹` and its reduction `t△` mod 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomoclinicWindow {
    /// Truncated coefficients of `w△`.
    pub coefficients: BTreeMap<Monomial, f64>,
    /// `t△`: the coefficients reduced into `[0, 1)`, computed exactly.
    pub values: BTreeMap<Monomial, f64>,
    /// Bound on the `ℓ¹` mass of `w△` outside the truncation.
    pub tail_bound: f64,
    /// Decay certificate of the geometric series, when `f*` itself is lopsided.
    pub decay: Option<DecayCertificate>,
    /// `g` with `f*·g` lopsided, when that route was needed.
    pub lopsidizer: Option<String>,
    /// Number of geometric-series terms used.
    pub terms: usize,
}

impl HomoclinicWindow {
    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.coefficients.get(m).copied().unwrap_or(0.0)
    }
}

fn frac_exact(num: &BigInt, den: &BigInt) -> f64 {
    let (den, num) = if den.is_negative() {
        (-den, -num)
    } else {
        (den.clone(), num.clone())
    };
    let r = num.mod_floor(&den);
    let g = r.gcd(&den);
    let (r, d) = (&r / &g, &den / &g);
    match (r.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => (a / b).rem_euclid(1.0),
        _ => 0.0,
    }
}

/// Truncated `w△ = (f*)⁻¹` with `ℓ¹` residual at most `eps`.
///
/// If `f*` is not lopsided, `lopsidize` is tried for `g` with `h = f*g`
/// lopsided, and `w△ = g·h⁻¹` with tail bound `‖g‖₁ · tail(h⁻¹)`.
pub fn fundamental_homoclinic(f: &GroupRingElement, eps: f64) -> Result<HomoclinicWindow> {
    let fs = f.star()?;
    if is_lopsided(&fs).is_some() {
        let a = invert_l1(&fs, eps)?;
        let mut coefficients = BTreeMap::new();
        let mut values = BTreeMap::new();
        for (m, num) in &a.numerators {
            coefficients.insert(
                *m,
                num.to_f64().unwrap_or(f64::NAN) / a.denominator.to_f64().unwrap_or(f64::NAN),
            );
            values.insert(*m, frac_exact(num, &a.denominator));
        }
        return Ok(HomoclinicWindow {
            coefficients,
            values,
            tail_bound: a.tail_bound,
            decay: Some(a.decay),
            lopsidizer: None,
            terms: a.terms,
        });
    }
    let g = lopsidize(&fs, &LopsidizeBudget::default())?.ok_or(Error::NotLopsided)?;
    let h = fs.mul(&g)?;
    let a = invert_l1(&h, eps / g.l1_norm_f64())?;
    let mut num: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for (mg, cg) in g.terms() {
        for (mh, ch) in &a.numerators {
            *num.entry(mg.mul(mh)?).or_default() += BigInt::from(*cg) * ch;
        }
    }
    let den = a.denominator.to_f64().unwrap_or(f64::NAN);
    let mut coefficients = BTreeMap::new();
    let mut values = BTreeMap::new();
    for (m, v) in num {
        if v.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        coefficients.insert(m, v.to_f64().unwrap_or(f64::NAN) / den);
        values.insert(m, frac_exact(&v, &a.denominator));
    }
    Ok(HomoclinicWindow {
        coefficients,
        values,
        tail_bound: g.l1_norm_f64() * a.tail_bound,
        decay: None,
        lopsidizer: Some(g.to_string()),
        terms: a.terms,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub c: f64,
    pub r: f64,
    /// `max_δ (|w_δ| − C r^{|δ|})⁺` over the window.
    pub max_violation: f64,
    /// Slope of the upper envelope of `log|w_δ|` against `|δ|`.
    pub fitted_slope: f64,
}

/// Checks `|w_δ| ≤ C r^{|δ|}` on the window, with `|δ|` the gauge.
pub fn decay_certificate(w: &HomoclinicWindow) -> Result<DecayReport> {
    let Some(d) = w.decay else {
        return invalid("no geometric-series certificate for this window");
    };
    let mut max_violation: f64 = 0.0;
    let mut envelope: BTreeMap<i64, f64> = BTreeMap::new();
    for (m, v) in &w.coefficients {
        if d.r > 0.0 {
            max_violation = max_violation.max(v.abs() - d.bound(m));
        } else if !m.is_identity() {
            max_violation = max_violation.max(v.abs());
        }
        if *v != 0.0 {
            let e = envelope
                .entry(m.gauge().ceil() as i64)
                .or_insert(f64::NEG_INFINITY);
            *e = e.max(v.abs().ln());
        }
    }
    Ok(DecayReport {
        c: d.c,
        r: d.r,
        max_violation: max_violation.max(0.0),
        fitted_slope: slope(&envelope),
    })
}

fn slope(points: &BTreeMap<i64, f64>) -> f64 {
    if points.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let n = points.len() as f64;
    let mx = points.keys().map(|k| *k as f64).sum::<f64>() / n;
    let my = points.values().sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|(k, v)| (*k as f64 - mx) * (v - my))
        .sum();
    let sxx: f64 = points.keys().map(|k| (*k as f64 - mx).powi(2)).sum();
    sxy / sxx
}

/// `π(u) = β(u·w△)` evaluated at `points`; the error at each point is at most
/// `tail_bound · ‖u‖₁` before reduction mod 1.
pub fn symbolic_cover_sample(
    w: &HomoclinicWindow,
    u: &GroupRingElement,
    points: &[Monomial],
) -> Result<BTreeMap<Monomial, f64>> {
    let mut out = BTreeMap::new();
    for g in points {
        let mut acc = 0.0;
        for (d, c) in u.terms() {
            // (u·w)_γ = Σ_δ u_δ w_{δ⁻¹γ}
            let key = d.inverse()?.mul(g)?;
            acc += *c as f64 * w.coefficient(&key);
        }
        out.insert(*g, acc.rem_euclid(1.0));
    }
    Ok(out)
}

/// Distance of `x` to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `max_γ dist((f*·t△)_γ, Z)` over window points `γ` whose `f*`-neighbourhood lies in the window.
pub fn annihilation_residual(w: &HomoclinicWindow, f: &GroupRingElement) -> Result<f64> {
    let fs = f.star()?;
    let mut worst: f64 = 0.0;
    for g in w.values.keys() {
        let mut acc = 0.0;
        let mut interior = true;
        for (d, c) in fs.terms() {
            let key = d.inverse()?.mul(g)?;
            match w.values.get(&key) {
                Some(v) => acc += *c as f64 * v,
                None => {
                    interior = false;
                    break;
                }
            }
        }
        if interior {
            worst = worst.max(dist_to_integer(acc));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::words::word_count_heisenberg;

    fn elem(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    fn laplacian() -> GroupRingElement {
        elem(&[
            ((0, 0, 0), 5),
            ((1, 0, 0), -1),
            ((-1, 0, 0), -1),
            ((0, 1, 0), -1),
            ((0, -1, 0), -1),
        ])
    }

    #[test]
    fn constant_two() {
        let w = fundamental_homoclinic(&GroupRingElement::constant(2), 1e-9).unwrap();
        assert_eq!(w.values.len(), 1);
        assert_eq!(w.values[&Monomial::IDENTITY], 0.5);
        let d = decay_certificate(&w).unwrap();
        assert_eq!(d.max_violation, 0.0);
    }

    #[test]
    fn three_plus_x() {
        let w = fundamental_homoclinic(&elem(&[((0, 0, 0), 3), ((1, 0, 0), 1)]), 1e-9).unwrap();
        // (3 + x⁻¹)⁻¹ = Σ_k (−1)^k 3^{−k−1} x^{−k}
        for k in 0..15i64 {
            let want = (-1f64).powi(k as i32) * 3f64.powi(-(k as i32) - 1);
            let m = Monomial::new(-k, 0, 0);
            assert!((w.coefficient(&m) - want).abs() < 1e-15);
            assert!((w.values[&m] - want.rem_euclid(1.0)).abs() < 1e-12);
        }
        let d = decay_certificate(&w).unwrap();
        assert!((d.r - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.max_violation, 0.0);
        assert!(d.fitted_slope <= (1.0f64 / 3.0).ln() + 1e-2);
    }

    #[test]
    fn laplacian_identity_coefficient() {
        let f = laplacian();
        let w = fundamental_homoclinic(&f, 0.05).unwrap();
        let d = decay_certificate(&w).unwrap();
        assert!((d.r - 0.8).abs() < 1e-12);
        assert_eq!(d.max_violation, 0.0);
        // (f⁻¹)_e = (1/5) Σ_n r(n)/5ⁿ with r(n) the closed walks of length n
        let counts = word_count_heisenberg(40).unwrap();
        let partial = |n: usize| -> f64 {
            counts.counts[..=n]
                .iter()
                .enumerate()
                .map(|(j, c)| c.to_f64().unwrap() / 5f64.powi(j as i32 + 1))
                .sum()
        };
        let id = w.coefficient(&Monomial::IDENTITY);
        assert!((id - partial(w.terms)).abs() < 1e-12);
        // the rest of the series up to 40 terms, plus 0.8^41 for the remainder
        assert!((id - partial(40)).abs() <= w.tail_bound + 2e-4);
        assert!((w.values[&Monomial::IDENTITY] - id.rem_euclid(1.0)).abs() < 1e-12);
        let r = annihilation_residual(&w, &f).unwrap();
        assert!(r <= w.tail_bound * f.l1_norm_f64() + 1e-12, "{r}");
    }

    #[test]
    fn cover_properties() {
        let f = elem(&[
            ((0, 0, 0), 4),
            ((1, 0, 0), 1),
            ((0, 1, 0), -1),
            ((0, 0, 1), 1),
        ]);
        let w = fundamental_homoclinic(&f, 1e-6).unwrap();
        let pts: Vec<Monomial> = [(0, 0, 0), (1, 0, 0), (-1, 1, 0), (0, -1, 2), (2, 1, -1)]
            .iter()
            .map(|&(k, l, m)| Monomial::new(k, l, m))
            .collect();
        let zero = symbolic_cover_sample(&w, &GroupRingElement::zero(), &pts).unwrap();
        assert!(zero.values().all(|v| *v == 0.0));
        let point = symbolic_cover_sample(&w, &GroupRingElement::one(), &pts).unwrap();
        for p in &pts {
            assert!((point[p] - w.coefficient(p).rem_euclid(1.0)).abs() < 1e-12);
        }
        // kernel: u = δ_γ · f*
        let gamma = Monomial::new(1, -1, 0);
        let u = GroupRingElement::monomial(gamma, 1)
            .mul(&f.star().unwrap())
            .unwrap();
        let tol = w.tail_bound * u.l1_norm_f64() + 1e-12;
        for v in symbolic_cover_sample(&w, &u, &pts).unwrap().values() {
            assert!(dist_to_integer(*v) <= tol);
        }
        // linearity
        let u1 = elem(&[((0, 0, 0), 2), ((1, 1, 0), -1)]);
        let u2 = elem(&[((0, 1, 0), 3), ((1, 1, 0), 5)]);
        let a = symbolic_cover_sample(&w, &u1, &pts).unwrap();
        let b = symbolic_cover_sample(&w, &u2, &pts).unwrap();
        let s = symbolic_cover_sample(&w, &u1.add(&u2).unwrap(), &pts).unwrap();
        for p in &pts {
            assert!(dist_to_integer(a[p] + b[p] - s[p]) < 1e-9);
        }
        // equivariance: (γu)·w = γ(u·w)
        let shifted = GroupRingElement::monomial(gamma, 1).mul(&u1).unwrap();
        let moved: Vec<Monomial> = pts.iter().map(|p| gamma.mul(p).unwrap()).collect();
        let c = symbolic_cover_sample(&w, &shifted, &moved).unwrap();
        for (p, q) in pts.iter().zip(&moved) {
            assert!((a[p] - c[q]).abs() < 1e-12);
        }
    }
}
