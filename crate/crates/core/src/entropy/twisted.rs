use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::linalg::CMatrix;
use crate::ring::GroupRingElement;

/// The `q × q` matrix of `ρ_f` on the invariant subspace `W_ζ(ξ, η)`.
#[derive(Clone, Debug)]
pub struct TwistedMatrix {
    pub q: usize,
    pub matrix: CMatrix,
}

impl TwistedMatrix {
    pub fn det(&self) -> Complex64 {
        self.matrix.det()
    }

    pub fn log_abs_det(&self) -> f64 {
        self.matrix.log_det().log_abs
    }
}

/// `f = x^shift Σ_{j=0}^{D} x^j g_j(y, z)` with `g_0, g_D ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XParts {
    pub shift: i64,
    pub parts: Vec<LaurentPoly2>,
}

impl XParts {
    pub fn new(f: &GroupRingElement) -> Result<Self> {
        if f.is_zero() {
            return invalid("the zero element has no x-decomposition");
        }
        let dec = f.x_decomposition()?;
        let shift = *dec.keys().next().expect("nonzero");
        let top = *dec.keys().last().expect("nonzero");
        let mut parts = vec![LaurentPoly2::zero(); (top - shift + 1) as usize];
        for (k, p) in dec {
            parts[(k - shift) as usize] = p;
        }
        Ok(XParts { shift, parts })
    }

    pub fn degree(&self) -> usize {
        self.parts.len() - 1
    }
}

/// Builds `A_{ζ,f}(ξ, η)` for a fixed `ζ` of order `q`. The matrix is that of
/// `x^{-shift} f`, which changes the determinant by a unimodular factor only.
#[derive(Clone, Debug)]
pub struct TwistedBuilder {
    pub q: usize,
    pub zeta: Complex64,
    parts: XParts,
    zeta_pows: Vec<Complex64>,
}

impl TwistedBuilder {
    pub fn new(f: &GroupRingElement, zeta: Complex64, q: usize) -> Result<Self> {
        if q == 0 {
            return invalid("q must be positive");
        }
        if ((zeta.norm() - 1.0).abs()) > 1e-9 {
            return invalid("zeta must lie on the unit circle");
        }
        let zq = zeta.powi(q as i32);
        if (zq - 1.0).norm() > 1e-8 {
            return invalid(format!("zeta is not a {q}-th root of unity"));
        }
        let parts = XParts::new(f)?;
        let zeta_pows = (0..q).map(|i| zeta.powi(i as i32)).collect();
        Ok(TwistedBuilder {
            q,
            zeta,
            parts,
            zeta_pows,
        })
    }

    /// `ζ = e^{2πi p/q}`.
    pub fn rational(f: &GroupRingElement, p: i64, q: usize) -> Result<Self> {
        let s = p.rem_euclid(q as i64) as f64 / q as f64;
        Self::new(f, crate::numeric::circle(s), q)
    }

    pub fn parts(&self) -> &XParts {
        &self.parts
    }

    pub fn matrix(&self, xi: Complex64, eta: Complex64) -> TwistedMatrix {
        let q = self.q;
        let mut m = CMatrix::zeros(q);
        let mut xi_pow = Complex64::new(1.0, 0.0);
        for (j, g) in self.parts.parts.iter().enumerate() {
            if !g.is_zero() {
                for i in 0..q {
                    let v = g.eval(eta * self.zeta_pows[i], self.zeta) * xi_pow;
                    m.add_to(i, (i + j) % q, v);
                }
            }
            xi_pow *= xi;
        }
        TwistedMatrix { q, matrix: m }
    }

    pub fn log_abs_det(&self, xi: Complex64, eta: Complex64) -> f64 {
        if self.q == 1 {
            return self.matrix(xi, eta).matrix.get(0, 0).norm().ln();
        }
        self.matrix(xi, eta).log_abs_det()
    }
}

/// Convenience wrapper: `A_{ζ,f}(ξ, η)` with `ζ` of order `q`.
pub fn build_a_matrix(
    f: &GroupRingElement,
    zeta: Complex64,
    q: usize,
    xi: Complex64,
    eta: Complex64,
) -> Result<TwistedMatrix> {
    Ok(TwistedBuilder::new(f, zeta, q)?.matrix(xi, eta))
}
