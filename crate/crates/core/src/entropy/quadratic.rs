//! Conjectural entropy formula for `f = g₀ + x g₁ + x² g₂`, compared against
//! the periodic-determinant method. Nothing here is a theorem.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detlemmas::{quadratic_parts, simple_det_condition};
use super::linear::slice_mahler;
use super::periodic::{entropy_periodic, PeriodicReport};
use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::{circle, golden};
use crate::ring::GroupRingElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticConfig {
    pub zeta_grid: usize,
    /// Cocycle steps per `η` sample when `b_f` has no closed form.
    pub steps: usize,
    pub eta_samples: usize,
    /// Primes for the periodic comparison; empty skips it.
    pub primes: Vec<usize>,
    pub periodic_grid: usize,
}

impl Default for QuadraticConfig {
    fn default() -> Self {
        QuadraticConfig {
            zeta_grid: 256,
            steps: 4000,
            eta_samples: 4,
            primes: vec![5, 7, 11],
            periodic_grid: 32,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticCurvePoint {
    pub s: f64,
    pub m_g0: f64,
    pub b: f64,
    pub m_g2: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticExperiment {
    pub conjectural: bool,
    pub simple_condition: bool,
    /// `∫ max{m(g₀(·,ζ)), b_f(ζ), m(g₂(·,ζ))} dζ`.
    pub rhs: f64,
    pub curve: Vec<QuadraticCurvePoint>,
    pub periodic: Option<PeriodicReport>,
    pub difference: Option<f64>,
}

/// Top Lyapunov exponent of `η ↦ [[−g₁, g₂], [−g₀, 0]](η, ζ)` over `η ↦ ηζ`.
pub fn middle_growth_rate(g: &[LaurentPoly2; 3], s: f64, steps: usize, eta_samples: usize) -> f64 {
    let zeta = circle(s);
    let mut total = 0.0;
    for k in 0..eta_samples.max(1) {
        let mut eta = circle((k as f64 + 0.5) * golden().fract() + 0.123);
        let mut v = [Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.7)];
        let mut acc = 0.0;
        for _ in 0..steps {
            let (a, b, c) = (
                g[0].eval(eta, zeta),
                g[1].eval(eta, zeta),
                g[2].eval(eta, zeta),
            );
            // row vector times M: v M
            v = [-v[0] * b - v[1] * a, v[0] * c];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if n == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += n.ln();
            v = [v[0] / n, v[1] / n];
            eta *= zeta;
        }
        total += acc / steps as f64;
    }
    total / eta_samples.max(1) as f64
}

pub fn quadratic_experiment(
    f: &GroupRingElement,
    cfg: &QuadraticConfig,
) -> Result<QuadraticExperiment> {
    if cfg.zeta_grid < 4 {
        return invalid("zeta_grid must be at least 4");
    }
    let g = quadratic_parts(f)?;
    let simple = simple_det_condition(&g)?;
    let log_tau = golden().ln();
    let curve: Vec<QuadraticCurvePoint> = (0..cfg.zeta_grid)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) / cfg.zeta_grid as f64;
            let b = if simple {
                log_tau + slice_mahler(&g[1], s)
            } else {
                middle_growth_rate(&g, s, cfg.steps, cfg.eta_samples)
            };
            QuadraticCurvePoint {
                s,
                m_g0: slice_mahler(&g[0], s),
                b,
                m_g2: slice_mahler(&g[2], s),
            }
        })
        .collect();
    let rhs = curve
        .iter()
        .map(|p| p.m_g0.max(p.b).max(p.m_g2))
        .sum::<f64>()
        / curve.len() as f64;
    let periodic = if cfg.primes.is_empty() {
        None
    } else {
        Some(entropy_periodic(f, &cfg.primes, cfg.periodic_grid)?)
    };
    let difference = periodic.as_ref().map(|p| rhs - p.extrapolated);
    Ok(QuadraticExperiment {
        conjectural: true,
        simple_condition: simple,
        rhs,
        curve,
        periodic,
        difference,
    })
}

/// `f = −g(yz⁻¹,z)g(y,z) + x g(y,z) + x²`.
pub fn simple_family(g: &LaurentPoly2) -> Result<GroupRingElement> {
    let g0 = g.monomial_substitute(1, -1, 0, 1)?.mul(g)?.neg()?;
    let mut terms = Vec::new();
    for (j, part) in [g0, g.clone(), LaurentPoly2::constant(1)]
        .iter()
        .enumerate()
    {
        terms.extend(
            part.terms()
                .map(|((l, m), c)| (crate::ring::Monomial::new(j as i64, *l, *m), *c)),
        );
    }
    GroupRingElement::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(terms: &[((i64, i64), i128)]) -> LaurentPoly2 {
        LaurentPoly2::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn each_branch_is_attained() {
        // g = (z − 1)y + z² − 1
        let g = p2(&[((1, 1), 1), ((1, 0), -1), ((0, 2), 1), ((0, 0), -1)]);
        let f = simple_family(&g).unwrap();
        let cfg = QuadraticConfig {
            primes: vec![],
            ..Default::default()
        };
        let e = quadratic_experiment(&f, &cfg).unwrap();
        assert!(e.simple_condition && e.conjectural);
        let wins = |sel: fn(&QuadraticCurvePoint) -> f64| {
            e.curve.iter().any(|p| {
                let v = sel(p);
                v > p.m_g0.max(p.b).max(p.m_g2) - 1e-12
                    && [p.m_g0, p.b, p.m_g2].iter().filter(|w| **w == v).count() == 1
            })
        };
        assert!(wins(|p| p.m_g0));
        assert!(wins(|p| p.b));
        assert!(wins(|p| p.m_g2));
    }

    #[test]
    fn cocycle_rate_matches_closed_form() {
        let g = p2(&[((0, 0), 3), ((1, 0), 1)]);
        let parts = quadratic_parts(&simple_family(&g).unwrap()).unwrap();
        for s in [0.1234, 0.377] {
            let b = middle_growth_rate(&parts, s, 20000, 4);
            assert!((b - golden().ln() - 3f64.ln()).abs() < 1e-2, "{b}");
        }
    }
}
