//! The degree-48 example: `f = y − a(x)c(z)` with `a = x² − x − 1` and
//! `c = z¹² + z² + 1`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{circle, golden, poly_roots, Sqrt5Number, Sqrt5Poly};

/// Nonzero coefficients `(exponent, value)` of the published `G(z)`.
pub const PUBLISHED_G: [(u32, i64); 19] = [
    (48, 1),
    (46, 2),
    (44, 1),
    (38, 2),
    (36, 5),
    (34, 5),
    (32, 2),
    (28, 1),
    (26, 5),
    (24, 7),
    (22, 5),
    (20, 1),
    (16, 2),
    (14, 5),
    (12, 5),
    (10, 2),
    (4, 1),
    (2, 2),
    (0, 1),
];

/// Threshold used when locating the unimodular roots.
const UNIT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiophantineCheck {
    /// `C = 2^{-18}/√40`.
    pub c: f64,
    pub n_max: u64,
    /// `min_{k,n} (log|ζ_k^n − 1| − log C + (n/2) log M(G))`.
    pub min_log_margin: f64,
    pub holds: bool,
    /// `max_n Π_j |1 − λ_j^{-n}|` over the roots outside the circle.
    pub max_lambda_product: f64,
    pub max_lambda_product_n: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdCheck {
    /// Least `N₀` with `(1/n)·C·M^{-n/2}/(2π) > 5τ^{-n}` for all `n ≥ N₀`.
    pub n0: u64,
    /// Same without the `1/(2π)` from converting the `s`-derivative to arc length.
    pub n0_without_two_pi: u64,
    /// `(n, k)` with `ω = e^{2πik/n}` primitive and `|n log|c(ω)τ|| ≤ 5τ^{-n}`, for `n < N₀`.
    pub direct_failures: Vec<(u64, u64)>,
    /// For `ω = 1`: `min_ξ |3a(ξ)|`, which is ≥ 3 since `|a(ξ)| = |2i sin θ − 1|`.
    pub n1_min_abs: f64,
    pub all_rational_excluded: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridCheck {
    pub eps0: f64,
    pub points: usize,
    /// `min |log|c(ω)τ||` over grid points farther than `ε₀` from every `ζ_k`.
    pub min_log_away: f64,
    /// `min |d/ds log|c(e^{2πis})τ||` over grid points within `ε₀` of some `ζ_k`.
    pub min_derivative_near: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Example48Report {
    /// Ascending coefficients of `G`, index = exponent.
    pub g_coeffs: Vec<i64>,
    pub matches_published: bool,
    pub mahler_g: f64,
    pub sqrt_mahler_g: f64,
    pub tau: f64,
    pub sqrt_mahler_below_tau: bool,
    pub roots_outside: usize,
    /// The unimodular roots with `|c(ζ)|τ = 1`, as `(re, im)`.
    pub zeta_k: Vec<(f64, f64)>,
    /// Their angles `s ∈ [0,1)`.
    pub zeta_k_angles: Vec<f64>,
    pub diophantine: DiophantineCheck,
    pub threshold: ThresholdCheck,
    pub grid: GridCheck,
}

fn c_poly(w: Complex64) -> Complex64 {
    w.powi(12) + w * w + 1.0
}

fn c_prime(w: Complex64) -> Complex64 {
    12.0 * w.powi(11) + 2.0 * w
}

/// `G = F·F̄` with `F = z¹²(c(z)c(1/z) − τ^{-2})`, computed over `Q(√5)`.
pub fn g_polynomial() -> Result<Vec<i64>> {
    let c = Sqrt5Poly::from_ints(&[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
    // z¹² c(1/z)
    let c_rev = Sqrt5Poly::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1]);
    let tau_inv2 = Sqrt5Number::tau().pow(2).inv()?;
    let mut shift = vec![Sqrt5Number::zero(); 13];
    shift[12] = -&tau_inv2;
    let f = c.mul(&c_rev).add(&Sqrt5Poly::new(shift));
    let g = f.mul(&f.conj());
    let ints = g
        .integer_coeffs()
        .ok_or_else(|| Error::InvalidInput("G has non-integer coefficients".into()))?;
    ints.into_iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("G coefficients")))
        .collect()
}

fn published_dense() -> Vec<i64> {
    let mut v = vec![0i64; 49];
    for (e, c) in PUBLISHED_G {
        v[e as usize] = c;
    }
    v
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least `N` such that `pred(n)` holds for every `n ∈ [N, horizon]`.
fn threshold(horizon: u64, pred: impl Fn(u64) -> bool) -> u64 {
    (1..=horizon).rev().find(|&n| !pred(n)).map_or(1, |n| n + 1)
}

pub fn example48_suite() -> Result<Example48Report> {
    let g_coeffs = g_polynomial()?;
    let matches_published = g_coeffs == published_dense();
    let tau = golden();

    let cg: Vec<Complex64> = g_coeffs
        .iter()
        .map(|c| Complex64::new(*c as f64, 0.0))
        .collect();
    let roots = poly_roots(&cg)?.complex_roots();
    let outside: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|r| r.norm() > 1.0 + UNIT_TOL)
        .collect();
    let mahler_g: f64 = outside.iter().map(|r| r.norm()).product();
    let sqrt_mahler_g = mahler_g.sqrt();

    let mut zeta_k: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|r| {
            (r.norm() - 1.0).abs() < UNIT_TOL && (c_poly(*r).norm() * tau - 1.0).abs() < UNIT_TOL
        })
        .map(|r| r / r.norm())
        .collect();
    let angle = |w: &Complex64| (w.im.atan2(w.re) / std::f64::consts::TAU).rem_euclid(1.0);
    zeta_k.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    let zeta_k_angles: Vec<f64> = zeta_k.iter().map(angle).collect();

    // Diophantine bound for the ζ_k
    let log_c = -18.0 * 2f64.ln() - 0.5 * 40f64.ln();
    let log_m = mahler_g.ln();
    let n_max = 500u64;
    let mut min_log_margin = f64::INFINITY;
    for &s in &zeta_k_angles {
        for n in 1..=n_max {
            let d = 2.0 * (std::f64::consts::PI * n as f64 * s).sin().abs();
            let margin = d.ln() - log_c + 0.5 * n as f64 * log_m;
            min_log_margin = min_log_margin.min(margin);
        }
    }
    let (max_lambda_product, max_lambda_product_n) = (1..=n_max)
        .map(|n| {
            (
                outside
                    .iter()
                    .map(|l| (1.0 - l.powi(-(n as i32))).norm())
                    .product::<f64>(),
                n,
            )
        })
        .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
    let diophantine = DiophantineCheck {
        c: log_c.exp(),
        n_max,
        min_log_margin,
        holds: min_log_margin >= 0.0,
        max_lambda_product,
        max_lambda_product_n,
    };

    // Rational exclusion: logs throughout since M^{-n/2} underflows.
    let log_tau = tau.ln();
    let lhs = |n: u64| log_c - n as f64 * log_m / 2.0;
    let rhs = |n: u64| 5f64.ln() - n as f64 * log_tau;
    let horizon = 10_000;
    let two_pi = std::f64::consts::TAU;
    let n0 = threshold(horizon, |n| lhs(n) - (two_pi * n as f64).ln() > rhs(n));
    let n0_without_two_pi = threshold(horizon, |n| lhs(n) - (n as f64).ln() > rhs(n));
    let direct_failures: Vec<(u64, u64)> = (1..n0)
        .into_par_iter()
        .flat_map_iter(|n| {
            (0..n)
                .filter(move |&k| gcd(k, n) == 1)
                .filter_map(move |k| {
                    let w = circle(k as f64 / n as f64);
                    let v = (n as f64 * (c_poly(w).norm() * tau).ln()).abs();
                    (v <= 5.0 * tau.powi(-(n as i32))).then_some((n, k))
                })
        })
        .collect();
    let n1_min_abs = (0..4096)
        .map(|i| {
            let xi = circle(i as f64 / 4096.0);
            (3.0 * (xi * xi - xi - 1.0)).norm()
        })
        .fold(f64::INFINITY, f64::min);
    let all_rational_excluded = direct_failures.iter().all(|&(n, _)| n == 1) && n1_min_abs > 1.0;
    let threshold = ThresholdCheck {
        n0,
        n0_without_two_pi,
        direct_failures,
        n1_min_abs,
        all_rational_excluded,
    };

    // Grid check of the two calculus facts
    let eps0 = 0.01;
    let points = 1 << 20;
    let (min_log_away, min_derivative_near) = (0..points)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) / points as f64;
            let w = circle(s);
            let near = zeta_k.iter().any(|z| (w - z).norm() < eps0);
            if near {
                let d = (c_prime(w) / c_poly(w) * Complex64::new(0.0, two_pi) * w).re;
                (f64::INFINITY, d.abs())
            } else {
                ((c_poly(w).norm() * tau).ln().abs(), f64::INFINITY)
            }
        })
        .reduce(
            || (f64::INFINITY, f64::INFINITY),
            |a, b| (a.0.min(b.0), a.1.min(b.1)),
        );
    let grid = GridCheck {
        eps0,
        points,
        min_log_away,
        min_derivative_near,
        holds: min_log_away >= eps0 && min_derivative_near >= 1.0,
    };

    Ok(Example48Report {
        g_coeffs,
        matches_published,
        mahler_g,
        sqrt_mahler_g,
        tau,
        sqrt_mahler_below_tau: sqrt_mahler_g < tau,
        roots_outside: outside.len(),
        zeta_k: zeta_k.iter().map(|z| (z.re, z.im)).collect(),
        zeta_k_angles,
        diophantine,
        threshold,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_matches_published() {
        assert_eq!(g_polynomial().unwrap(), published_dense());
    }

    #[test]
    fn suite_values() {
        let r = example48_suite().unwrap();
        assert!(r.matches_published);
        assert_eq!(r.roots_outside, 10);
        assert!((1.9029..=1.9030).contains(&r.mahler_g));
        assert!((r.sqrt_mahler_g - 1.37948).abs() < 1e-5);
        assert_eq!(r.zeta_k.len(), 8);
        assert!(r.diophantine.holds);
        assert!((r.diophantine.max_lambda_product - 37.94).abs() < 0.01);
        assert_eq!(r.diophantine.max_lambda_product_n, 6);
        assert_eq!(r.threshold.n0, 143);
        assert_eq!(r.threshold.n0_without_two_pi, 131);
        assert_eq!(r.threshold.direct_failures, vec![(1, 0)]);
        assert!((r.threshold.n1_min_abs - 3.0).abs() < 1e-9);
        assert!(r.threshold.all_rational_excluded);
        assert!(r.grid.holds);
    }
}
