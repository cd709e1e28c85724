use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::linalg::CMatrix;
use crate::ring::{GroupAutomorphism, GroupRingElement, Monomial};

/// The companion cocycle of `f = y^D − g_{D−1}(x,z) y^{D−1} − … − g₀(x,z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionCocycle {
    pub d: usize,
    /// `g₀, …, g_{D−1}` as polynomials in `(x, z)`.
    pub rows: Vec<LaurentPoly2>,
}

impl CompanionCocycle {
    /// Requires `f` to be `y^s` times a polynomial in `y` whose top coefficient is `±1`.
    pub fn from_element(f: &GroupRingElement) -> Result<Self> {
        if f.is_zero() {
            return invalid("the zero element is not monic");
        }
        let dec = f.y_decomposition()?;
        let lo = *dec.keys().next().expect("nonzero");
        let hi = *dec.keys().last().expect("nonzero");
        if hi == lo {
            return invalid("f has degree 0 in y");
        }
        let lead = &dec[&hi];
        let sign = if *lead == LaurentPoly2::constant(1) {
            1
        } else if *lead == LaurentPoly2::constant(-1) {
            -1
        } else {
            return invalid("f is not monic in y");
        };
        let d = (hi - lo) as usize;
        let mut rows = vec![LaurentPoly2::zero(); d];
        for (l, p) in dec {
            if l < hi {
                rows[(l - lo) as usize] = if sign == 1 { p.neg()? } else { p };
            }
        }
        Ok(CompanionCocycle { d, rows })
    }

    /// `A(ξ, ζ)`: identity on the superdiagonal, last row `g₀(ξ,ζ), …, g_{D−1}(ξ,ζ)`.
    pub fn matrix(&self, xi: Complex64, zeta: Complex64) -> CMatrix {
        let d = self.d;
        let mut m = CMatrix::zeros(d);
        for i in 0..d - 1 {
            m.set(i, i + 1, Complex64::new(1.0, 0.0));
        }
        for (j, g) in self.rows.iter().enumerate() {
            m.set(d - 1, j, g.eval(xi, zeta));
        }
        m
    }

    /// `A_n(ξ,ζ) = A(ξζ^{n−1},ζ) ⋯ A(ξ,ζ)`.
    pub fn product(&self, xi: Complex64, zeta: Complex64, n: usize) -> Result<CMatrix> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        let mut acc = self.matrix(xi, zeta);
        let mut point = xi;
        for _ in 1..n {
            point *= zeta;
            acc = self.matrix(point, zeta).mul(&acc);
        }
        Ok(acc)
    }

    /// Whether every `g_j` uses only nonnegative powers of `x`.
    pub fn x_polynomial(&self) -> bool {
        self.rows
            .iter()
            .all(|g| g.terms().all(|((k, _), _)| *k >= 0))
    }
}

/// A change of variables making `f` monic in `y`, if one of a few standard
/// choices works. Returns the transformed element and the automorphism used.
pub fn monicize(f: &GroupRingElement) -> Result<(GroupRingElement, GroupAutomorphism)> {
    let inv_y = GroupAutomorphism::new(1, 0, 0, -1, 0, 0)?;
    let swap = GroupAutomorphism::swap_xy();
    let swap_inv = GroupAutomorphism::new(0, 1, -1, 0, 0, 0)?;
    for phi in [GroupAutomorphism::identity(), inv_y, swap, swap_inv] {
        let g = phi.apply(f)?;
        if let Some(h) = strip_unit_leading(&g)? {
            if CompanionCocycle::from_element(&h).is_ok() {
                return Ok((h, phi));
            }
        }
    }
    invalid("no standard change of variables makes f monic in y")
}

/// If the top `y`-coefficient is a unit `±x^k z^m`, left-multiplies by its inverse.
fn strip_unit_leading(f: &GroupRingElement) -> Result<Option<GroupRingElement>> {
    let dec = f.y_decomposition()?;
    let Some((_, lead)) = dec.iter().next_back() else {
        return Ok(None);
    };
    if lead.len() != 1 {
        return Ok(None);
    }
    let (&(k, m), &c) = lead.terms().next().expect("one term");
    if c.abs() != 1 {
        return Ok(None);
    }
    let unit = GroupRingElement::monomial(Monomial::new(-k, 0, -m), c);
    Ok(Some(unit.mul(f)?))
}
