use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quad::{torus_quad, QuadratureGrid};
use super::roots::{poly_roots, CPoly};
use crate::error::{invalid, Result};
use crate::laurent::PolyN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MahlerMethod {
    ExactRoots,
    Quadrature,
}

/// Logarithmic Mahler measure with an error estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MahlerValue {
    pub log_value: f64,
    pub error_bound: f64,
    pub method: MahlerMethod,
}

impl MahlerValue {
    pub fn measure(&self) -> f64 {
        self.log_value.exp()
    }
}

/// `m(f) = log|c_n| + Σ log⁺|λ_j|` for a one-variable polynomial (Jensen's formula).
/// Monomial factors `u^k` do not change the value.
pub fn mahler1(p: &CPoly) -> Result<MahlerValue> {
    let p = p.trimmed();
    if p.coeffs.is_empty() {
        return invalid("Mahler measure of the zero polynomial is -infinity");
    }
    let n = p.coeffs.len() - 1;
    let lead = p.coeffs[n].norm();
    match n {
        0 => Ok(MahlerValue {
            log_value: lead.ln(),
            error_bound: 0.0,
            method: MahlerMethod::ExactRoots,
        }),
        1 => {
            let root = (p.coeffs[0] / p.coeffs[1]).norm();
            Ok(MahlerValue {
                log_value: lead.ln() + root.ln().max(0.0),
                error_bound: 1e-15,
                method: MahlerMethod::ExactRoots,
            })
        }
        _ => {
            let report = poly_roots(&p.coeffs)?;
            let mut value = lead.ln();
            let mut err = 0.0;
            for ((re, im), fwd) in report.roots.iter().zip(&report.forward_estimates) {
                let r = Complex64::new(*re, *im).norm();
                if r > 1.0 {
                    value += r.ln();
                }
                // log⁺ is 1-Lipschitz in log r
                if r > 0.0 && (r - 1.0).abs() <= *fwd {
                    err += fwd / r.min(1.0);
                } else if r > 1.0 {
                    err += fwd / r;
                }
            }
            err += 1e-15 * n as f64;
            Ok(MahlerValue {
                log_value: value,
                error_bound: err,
                method: MahlerMethod::ExactRoots,
            })
        }
    }
}

/// Mahler measure in up to three variables: the last variable is integrated
/// exactly by Jensen's formula on each slice, the others by the midpoint rule.
pub fn mahler_n(f: &PolyN, grid: &QuadratureGrid) -> Result<MahlerValue> {
    if f.is_zero() {
        return invalid("Mahler measure of the zero polynomial is -infinity");
    }
    let d = f.effective_nvars();
    if d > 3 {
        return invalid("at most three variables are supported");
    }
    let keep = d.max(1);
    let f = PolyN {
        nvars: keep,
        terms: f
            .with_nvars(1)
            .terms
            .iter()
            .map(|(e, c)| (e[..keep].to_vec(), *c))
            .collect(),
    };
    if d <= 1 {
        return mahler1(&f.slice_last(&[]));
    }
    let outer = d - 1;
    let integrand = |s: &[f64]| -> f64 {
        let pts: Vec<Complex64> = s.iter().map(|v| super::circle(*v)).collect();
        let slice = f.slice_last(&pts);
        match mahler1(&slice) {
            Ok(v) => v.log_value,
            // a slice that vanishes identically is a measure-zero event
            Err(_) => 0.0,
        }
    };
    let g = QuadratureGrid {
        dims: outer,
        ..*grid
    };
    let res = torus_quad(&integrand, &g)?;
    Ok(MahlerValue {
        log_value: res.value,
        error_bound: res.error_estimate,
        method: MahlerMethod::Quadrature,
    })
}
