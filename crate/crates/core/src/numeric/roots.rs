use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Complex Laurent polynomial `Σ_j coeffs[j] u^{low+j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    pub low: i64,
    pub coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(low: i64, coeffs: Vec<Complex64>) -> Self {
        CPoly { low, coeffs }
    }

    pub fn from_real(low: i64, coeffs: &[f64]) -> Self {
        CPoly::new(
            low,
            coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect(),
        )
    }

    /// Drops exactly-zero coefficients at both ends.
    pub fn trimmed(&self) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.coeffs.iter().position(|c| *c != zero);
        let Some(first) = first else {
            return CPoly::new(0, Vec::new());
        };
        let last = self
            .coeffs
            .iter()
            .rposition(|c| *c != zero)
            .expect("nonzero exists");
        CPoly::new(self.low + first as i64, self.coeffs[first..=last].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc * u.powi(self.low as i32)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

/// Roots together with their backward errors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<(f64, f64)>,
    /// `max_j |p(λ_j)| / Σ_i |c_i||λ_j|^i`.
    pub max_backward_error: f64,
    /// Per-root Newton correction `|p(λ)/p'(λ)|`, a forward error estimate.
    pub forward_estimates: Vec<f64>,
    pub iterations: usize,
}

impl RootReport {
    pub fn complex_roots(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|(r, i)| Complex64::new(*r, *i))
            .collect()
    }
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let (p, _) = horner_with_derivative(c, z);
    let mut scale = 0.0;
    let mut pw = 1.0;
    for a in c {
        scale += a.norm() * pw;
        pw *= r;
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

const MAX_ITER: usize = 500;

/// All roots of `Σ_i c_i u^i` (ascending coefficients) by Aberth–Ehrlich iteration.
/// Zero roots are split off exactly first.
pub fn poly_roots(c: &[Complex64]) -> Result<RootReport> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    if c.is_empty() {
        return invalid("zero polynomial has no finite root set");
    }
    let zeros = c.iter().take_while(|v| v.norm() == 0.0).count();
    let core: Vec<Complex64> = c[zeros..].to_vec();
    let n = core.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return Ok(RootReport {
            roots: roots.iter().map(|z| (z.re, z.im)).collect(),
            max_backward_error: 0.0,
            forward_estimates: vec![0.0; zeros],
            iterations: 0,
        });
    }
    if n == 1 {
        let z = -core[0] / core[1];
        roots.push(z);
        return Ok(RootReport {
            roots: roots.iter().map(|z| (z.re, z.im)).collect(),
            max_backward_error: backward_error(&core, z),
            forward_estimates: vec![0.0; zeros + 1],
            iterations: 0,
        });
    }
    // Initial guesses on circles sized from the coefficient moduli.
    let lead = core[n].norm();
    let radius = (0..n)
        .map(|i| (core[i].norm() / lead).powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            Complex64::from_polar(
                radius,
                std::f64::consts::TAU * (j as f64 + 0.25) / n as f64 + 0.4,
            )
        })
        .collect();
    let mut converged = vec![false; n];
    let mut iterations = 0;
    for it in 0..MAX_ITER {
        iterations = it + 1;
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&core, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                all = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 1e-15 * z[i].norm().max(1e-300) || backward_error(&core, z[i]) < 1e-16 {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // One Newton polish per root.
    for zi in z.iter_mut() {
        let (p, dp) = horner_with_derivative(&core, *zi);
        if dp.norm() > 0.0 {
            let cand = *zi - p / dp;
            if backward_error(&core, cand) <= backward_error(&core, *zi) {
                *zi = cand;
            }
        }
    }
    let errs: Vec<f64> = z.iter().map(|zi| backward_error(&core, *zi)).collect();
    let max_be = errs.iter().cloned().fold(0.0, f64::max);
    if max_be > 1e-10 {
        return Err(Error::NonConvergence {
            iterations,
            residual: max_be,
        });
    }
    let mut forward = vec![0.0; zeros];
    for zi in &z {
        let (p, dp) = horner_with_derivative(&core, *zi);
        forward.push(if dp.norm() > 0.0 {
            (p / dp).norm() * n as f64
        } else {
            f64::INFINITY
        });
    }
    roots.extend(z);
    Ok(RootReport {
        roots: roots.iter().map(|z| (z.re, z.im)).collect(),
        max_backward_error: max_be,
        forward_estimates: forward,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(c: &[f64]) -> Vec<Complex64> {
        c.iter().map(|v| Complex64::new(*v, 0.0)).collect()
    }

    #[test]
    fn golden_roots() {
        let r = poly_roots(&real(&[-1.0, -1.0, 1.0])).unwrap();
        let mut re: Vec<f64> = r.roots.iter().map(|p| p.0).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 0.6180339887498949).abs() < 1e-14);
        assert!((re[1] - 1.618033988749895).abs() < 1e-14);
        assert!(r.max_backward_error <= 1e-12 * 3.0);
    }

    #[test]
    fn pure_power_and_imaginary_pair() {
        let r = poly_roots(&real(&[0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.roots.len(), 4);
        assert!(r.roots.iter().all(|(a, b)| *a == 0.0 && *b == 0.0));
        let r = poly_roots(&real(&[1.0, 0.0, 1.0])).unwrap();
        let mut ims: Vec<f64> = r.roots.iter().map(|p| p.1).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn high_degree_cyclotomic_like() {
        // u^40 - 1
        let mut c = vec![0.0; 41];
        c[0] = -1.0;
        c[40] = 1.0;
        let r = poly_roots(&real(&c)).unwrap();
        assert_eq!(r.roots.len(), 40);
        for (a, b) in &r.roots {
            assert!(((a * a + b * b).sqrt() - 1.0).abs() < 1e-12);
        }
    }
}
