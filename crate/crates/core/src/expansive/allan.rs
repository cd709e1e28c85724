use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::TwistedBuilder;
use crate::error::{invalid, Result};
use crate::numeric::circle;
use crate::ring::GroupRingElement;

/// Minimum of `|det A_{ζ,f}(ξ,η)|` over the torus for `ζ = e^{2πi p/q}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AllanReport {
    pub p: i64,
    pub q: usize,
    pub grid: usize,
    /// Smallest value on the grid before refinement.
    pub grid_min: f64,
    pub min_abs_det: f64,
    /// `(s, t)` with `ξ = e^{2πis}`, `η = e^{2πit}`.
    pub argmin: (f64, f64),
    pub argmin_xi: (f64, f64),
    pub argmin_eta: (f64, f64),
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Nelder–Mead on the 2-torus, started from a simplex of side `h` at `x0`.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: &F,
    x0: [f64; 2],
    h: f64,
    iters: usize,
) -> ([f64; 2], f64) {
    let mut simplex = [x0, [x0[0] + h, x0[1]], [x0[0], x0[1] + h]];
    let mut vals = simplex.map(f);
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..iters {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        simplex = idx.map(|i| simplex[i]);
        vals = idx.map(|i| vals[i]);
        let spread = (simplex[2][0] - simplex[0][0]).abs() + (simplex[2][1] - simplex[0][1]).abs();
        if spread < 1e-15 || vals[0] == 0.0 {
            break;
        }
        let c = lerp(simplex[0], simplex[1], 0.5);
        let r = lerp(simplex[2], c, 2.0);
        let fr = f(r);
        if fr < vals[0] {
            let e = lerp(simplex[2], c, 3.0);
            let fe = f(e);
            if fe < fr {
                simplex[2] = e;
                vals[2] = fe;
            } else {
                simplex[2] = r;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = r;
            vals[2] = fr;
        } else {
            let k = lerp(simplex[2], c, 0.5);
            let fk = f(k);
            if fk < vals[2] {
                simplex[2] = k;
                vals[2] = fk;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    vals[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .expect("three vertices");
    (simplex[best], vals[best])
}

/// Scans `|det A_{ζ,f}|` on an `n × n` grid and refines the best few cells.
pub fn allan_rational_check(
    f: &GroupRingElement,
    p: i64,
    q: usize,
    grid: usize,
) -> Result<AllanReport> {
    if q == 0 {
        return invalid("q must be positive");
    }
    if gcd(p.unsigned_abs(), q as u64) != 1 {
        return invalid(format!("p={p} and q={q} are not coprime"));
    }
    if grid < 4 {
        return invalid("grid must have at least 4 points per circle");
    }
    let b = TwistedBuilder::rational(f, p, q)?;
    let eval = |x: [f64; 2]| -> f64 { b.log_abs_det(circle(x[0]), circle(x[1])).exp() };
    let mut cells: Vec<(f64, [f64; 2])> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let x = [
                (idx / grid) as f64 / grid as f64,
                (idx % grid) as f64 / grid as f64,
            ];
            (eval(x), x)
        })
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let grid_min = cells[0].0;
    let h = 1.0 / grid as f64;
    let mut best = (grid_min, cells[0].1);
    for (_, x0) in cells.iter().take(8) {
        let (x, v) = nelder_mead(&eval, *x0, h, 400);
        if v < best.0 {
            best = (v, x);
        }
    }
    let (s, t) = (best.1[0].rem_euclid(1.0), best.1[1].rem_euclid(1.0));
    let (xi, eta) = (circle(s), circle(t));
    Ok(AllanReport {
        p,
        q,
        grid,
        grid_min,
        min_abs_det: best.0,
        argmin: (s, t),
        argmin_xi: (xi.re, xi.im),
        argmin_eta: (eta.re, eta.im),
    })
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
    fn constant_gives_power() {
        let f = GroupRingElement::constant(3);
        for q in [1usize, 2, 5] {
            let r = allan_rational_check(&f, 1, q, 8).unwrap();
            assert!((r.min_abs_det - 3f64.powi(q as i32)).abs() < 1e-9 * 3f64.powi(q as i32));
        }
    }

    #[test]
    fn x_plus_y_plus_z_plus_two_at_minus_one() {
        let f = elem(&[
            ((1, 0, 0), 1),
            ((0, 1, 0), 1),
            ((0, 0, 1), 1),
            ((0, 0, 0), 2),
        ]);
        let r = allan_rational_check(&f, 1, 2, 32).unwrap();
        assert!(r.min_abs_det < 1e-6, "{r:?}");
        // at ζ = −1 the determinant is 1 − η² − ξ²
        let (xi, eta) = (circle(r.argmin.0), circle(r.argmin.1));
        let det = 1.0 - eta * eta - xi * xi;
        assert!(det.norm() < 1e-6);
    }

    #[test]
    fn lopsided_stays_invertible() {
        let f = elem(&[
            ((0, 0, 0), 5),
            ((1, 0, 0), -1),
            ((-1, 0, 0), -1),
            ((0, 1, 0), -1),
            ((0, -1, 0), -1),
        ]);
        let r = allan_rational_check(&f, 1, 2, 24).unwrap();
        assert!(r.min_abs_det >= 1.0 - 1e-9);
    }

    #[test]
    fn one_by_one_is_evaluation() {
        let f = elem(&[((0, 0, 0), 1), ((1, 0, 0), 1), ((0, 1, 0), 1)]);
        let r = allan_rational_check(&f, 0, 1, 24).unwrap();
        let direct = (1.0 + circle(r.argmin.0) + circle(r.argmin.1)).norm();
        assert!((r.min_abs_det - direct).abs() < 1e-12);
        assert!(r.min_abs_det < 1e-6);
    }
}
