use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cocycle::CompanionCocycle;
use crate::error::{invalid, Result};
use crate::numeric::{circle, poly_roots};
use crate::ring::GroupRingElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HermanBound {
    /// `∫ log⁺ spr A(0,ζ) dζ`.
    pub value: f64,
    pub grid: usize,
    /// `(s, log spr A(0, e^{2πis}))` at the grid midpoints.
    pub curve: Vec<(f64, f64)>,
}

/// `spr A(0,ζ)`: the largest root of `u^D − Σ_j g_j(0,ζ) u^j`.
pub fn spectral_radius_at_zero(c: &CompanionCocycle, zeta: Complex64) -> Result<f64> {
    let mut coeffs: Vec<Complex64> = c
        .rows
        .iter()
        .map(|g| {
            -g.terms()
                .filter(|((k, _), _)| *k == 0)
                .map(|((_, m), v)| zeta.powi(*m as i32) * *v as f64)
                .sum::<Complex64>()
        })
        .collect();
    coeffs.push(Complex64::new(1.0, 0.0));
    if c.d == 1 {
        return Ok(coeffs[0].norm());
    }
    let r = poly_roots(&coeffs)?;
    Ok(r.complex_roots()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Herman's lower bound `h(α_f) ≥ ∫ log⁺ spr A(0,ζ) dζ` for `f` monic in `y`
/// with only nonnegative powers of `x` in the `g_j`.
pub fn herman_lower_bound(f: &GroupRingElement, grid: usize) -> Result<HermanBound> {
    if grid == 0 {
        return invalid("grid must be positive");
    }
    let c = CompanionCocycle::from_element(f)?;
    if !c.x_polynomial() {
        return invalid("the g_j must use only nonnegative powers of x");
    }
    let curve = (0..grid)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) / grid as f64;
            Ok((s, spectral_radius_at_zero(&c, circle(s))?.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = curve.iter().map(|(_, v)| v.max(0.0)).sum::<f64>() / grid as f64;
    Ok(HermanBound { value, grid, curve })
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
    fn examples() {
        let a = herman_lower_bound(
            &elem(&[((0, 1, 0), 1), ((1, 0, 0), -1), ((0, 0, 0), -3)]),
            32,
        )
        .unwrap();
        assert!((a.value - 3f64.ln()).abs() < 1e-12);
        let b = herman_lower_bound(
            &elem(&[((0, 2, 0), 1), ((1, 1, 0), -1), ((0, 0, 0), -1)]),
            32,
        )
        .unwrap();
        assert!(b.value.abs() < 1e-9);
        let c = herman_lower_bound(
            &elem(&[
                ((0, 2, 0), 1),
                ((1, 1, 0), -2),
                ((0, 1, 0), 1),
                ((0, 0, 0), 1),
            ]),
            32,
        )
        .unwrap();
        assert!(c.value.abs() < 1e-9);
    }

    #[test]
    fn z_dependent() {
        // y − 2z − x: spr A(0,ζ) = 2
        let f = elem(&[((0, 1, 0), 1), ((0, 0, 1), -2), ((1, 0, 0), -1)]);
        assert!((herman_lower_bound(&f, 16).unwrap().value - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_x_powers() {
        assert!(herman_lower_bound(&elem(&[((0, 1, 0), 1), ((-1, 0, 0), -1)]), 8).is_err());
    }
}
