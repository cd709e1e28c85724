use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{circle, mahler1, CPoly};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RiemannSumReport {
    pub n: usize,
    pub degree: usize,
    /// `(1/n) Σ_k log|φ(ζ e^{2πik/n})|`; `−∞` if a sample hits a root.
    pub riemann_sum: f64,
    pub mahler: f64,
    /// `m(φ) + D log 2 / n`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `R_n(log|φ|)(ζ) ≤ m(φ) + D log 2 / n`.
pub fn riemann_sum_check(phi: &CPoly, n: usize, zeta: Complex64) -> Result<RiemannSumReport> {
    let p = phi.trimmed();
    if p.is_zero() {
        return invalid("φ must be nonzero");
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    if (zeta.norm() - 1.0).abs() > 1e-9 {
        return invalid("ζ must lie on the unit circle");
    }
    let degree = p.coeffs.len() - 1;
    let riemann_sum = (0..n)
        .map(|k| p.eval(zeta * circle(k as f64 / n as f64)).norm().ln())
        .sum::<f64>()
        / n as f64;
    let m = mahler1(&p)?;
    let bound = m.log_value + degree as f64 * std::f64::consts::LN_2 / n as f64;
    let slack = m.error_bound + 1e-12 * (1.0 + bound.abs());
    Ok(RiemannSumReport {
        n,
        degree,
        riemann_sum,
        mahler: m.log_value,
        bound,
        holds: riemann_sum <= bound + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_factor() {
        let phi = CPoly::from_real(0, &[-2.0, 1.0]);
        for s in [0.0, 0.13, 0.5] {
            let r = riemann_sum_check(&phi, 10, circle(s)).unwrap();
            assert!(r.holds);
            // ∏(ζω^k − 2) = ±(ζ^n − 2^n)
            let exact = (circle(10.0 * s) - 1024.0).norm().ln() / 10.0;
            assert!((r.riemann_sum - exact).abs() < 1e-12);
            assert!(r.bound <= 2f64.ln() * 1.1 + 1e-12);
        }
    }

    #[test]
    fn constant_is_exact() {
        let r = riemann_sum_check(&CPoly::from_real(0, &[3.0]), 7, circle(0.3)).unwrap();
        assert!((r.riemann_sum - r.mahler).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn inequality_holds(
            coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..8),
            n in 1usize..40,
            s in 0.0f64..1.0,
        ) {
            let c: Vec<Complex64> = coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            prop_assume!(c.last().unwrap().norm() > 1e-3);
            let r = riemann_sum_check(&CPoly::new(0, c), n, circle(s)).unwrap();
            prop_assert!(r.holds, "{:?}", r);
        }
    }
}
