use rayon::prelude::*;
use serde_json::json;

use super::twisted::XParts;
use super::{EntropyEstimate, EntropyMethod};
use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::{circle, mahler1};
use crate::ring::{GroupAutomorphism, GroupRingElement};

/// `m(p(·, ζ))`, or `−∞` when the slice vanishes identically.
pub fn slice_mahler(p: &LaurentPoly2, s: f64) -> f64 {
    mahler1(&p.slice(circle(s))).map_or(f64::NEG_INFINITY, |v| v.log_value)
}

/// `(s, m(g(·,ζ)), m(h(·,ζ)))` at the midpoints `s = (i + ½)/n`.
pub fn slice_curves(g: &LaurentPoly2, h: &LaurentPoly2, n: usize) -> Vec<(f64, f64, f64)> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) / n as f64;
            (s, slice_mahler(g, s), slice_mahler(h, s))
        })
        .collect()
}

fn mean_max(curve: &[(f64, f64, f64)]) -> f64 {
    curve.iter().map(|(_, a, b)| a.max(*b)).sum::<f64>() / curve.len() as f64
}

/// `h(α_f) = ∫ max{m(g(·,ζ)), m(h(·,ζ))} dζ` for `f = g(y,z) + x·h(y,z)`.
pub fn entropy_linear_formula(
    g: &LaurentPoly2,
    h: &LaurentPoly2,
    grid: usize,
) -> Result<EntropyEstimate> {
    if g.is_zero() || h.is_zero() {
        return invalid("g and h must be nonzero");
    }
    if grid < 4 {
        return invalid("grid must have at least 4 points");
    }
    let fine = slice_curves(g, h, grid);
    let coarse: Vec<_> = slice_curves(g, h, grid / 2);
    let value = mean_max(&fine);
    if !value.is_finite() {
        return invalid("both slices vanish on a set of positive measure");
    }
    let crossings = fine
        .windows(2)
        .filter(|w| (w[0].1 - w[0].2).signum() != (w[1].1 - w[1].2).signum())
        .count();
    Ok(EntropyEstimate {
        value,
        method: EntropyMethod::LinearFormula,
        error_bound: (value - mean_max(&coarse)).abs(),
        heuristic: true,
        diagnostics: json!({
            "grid": grid,
            "g": g.fmt_vars("y", "z"),
            "h": h.fmt_vars("y", "z"),
            "crossings": crossings,
        }),
    })
}

/// Splits `f` as `x^k (g + x·h)` directly, or after `x ↔ y` when `f` is linear in `y`.
pub fn linear_parts(f: &GroupRingElement) -> Result<(LaurentPoly2, LaurentPoly2, bool)> {
    let parts = XParts::new(f)?;
    if parts.degree() == 1 {
        return Ok((parts.parts[0].clone(), parts.parts[1].clone(), false));
    }
    let swapped = GroupAutomorphism::swap_xy().apply(f)?;
    let parts = XParts::new(&swapped)?;
    if parts.degree() == 1 {
        return Ok((parts.parts[0].clone(), parts.parts[1].clone(), true));
    }
    invalid("f is not linear in x or y")
}

/// The linear formula applied to a group-ring element linear in `x` or `y`.
pub fn entropy_linear(f: &GroupRingElement, grid: usize) -> Result<EntropyEstimate> {
    let (g, h, swapped) = linear_parts(f)?;
    let mut e = entropy_linear_formula(&g, &h, grid)?;
    e.diagnostics["swapped_xy"] = json!(swapped);
    Ok(e)
}
