use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ExpansivenessVerdict, VerdictStatus, Witness, WitnessKind};
use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::{circle, mahler1};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCheckConfig {
    /// Points on the `ζ`-circle for `D(ζ) = m(g(·,ζ)) − m(h(·,ζ))`.
    pub zeta_grid: usize,
    /// Points per circle for the `S²` nonvanishing scan.
    pub torus_grid: usize,
    /// Points on the `ξ`-circle for each rational `ζ`.
    pub xi_grid: usize,
    /// Rational `ζ` of order up to this bound are examined.
    pub rational_max: u64,
    /// Minimum of `|g|, |h|` on `S²` below which they count as vanishing.
    pub margin: f64,
    /// `|D(ζ)|` must stay above this for an expansive verdict.
    pub d_margin: f64,
}

impl Default for LinearCheckConfig {
    fn default() -> Self {
        LinearCheckConfig {
            zeta_grid: 2048,
            torus_grid: 256,
            xi_grid: 720,
            rational_max: 12,
            margin: 1e-6,
            d_margin: 1e-6,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `φ_ζ(ξ) = log|g(ξ,ζ)| − log|h(ξ,ζ)|`.
fn phi(g: &LaurentPoly2, h: &LaurentPoly2, xi: Complex64, zeta: Complex64) -> f64 {
    g.eval(xi, zeta).norm().ln() - h.eval(xi, zeta).norm().ln()
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa > 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Sign changes of `F` on the periodic grid `t_i = i/n · period`, refined by bisection.
fn sign_change_roots<F: Fn(f64) -> f64 + Sync>(f: &F, n: usize, period: f64) -> Vec<f64> {
    let vals: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|i| f(period * i as f64 / n as f64))
        .collect();
    let mut roots = Vec::new();
    for i in 0..n {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            roots.push(period * i as f64 / n as f64);
        } else if a.is_nan() || b.is_nan() || b == 0.0 {
            continue;
        } else if (a > 0.0) != (b > 0.0) {
            let t0 = period * i as f64 / n as f64;
            let t1 = period * (i + 1) as f64 / n as f64;
            roots.push(bisect(f, t0, t1, a));
        }
    }
    roots
}

fn c2(v: Complex64) -> (f64, f64) {
    (v.re, v.im)
}

/// Searches rational `ζ = e^{2πi p/n}` with `n ≤ max` for `ξ` with
/// `Σ_{j<n} φ_ζ(ξζ^j) = 0`.
fn rational_scan(g: &LaurentPoly2, h: &LaurentPoly2, cfg: &LinearCheckConfig) -> Option<Witness> {
    for n in 1..=cfg.rational_max {
        for p in 0..n {
            if gcd(p, n) != 1 {
                continue;
            }
            let sz = p as f64 / n as f64;
            let zeta = circle(sz);
            let psi = |t: f64| -> f64 {
                (0..n)
                    .map(|j| phi(g, h, circle(t + j as f64 * sz), zeta))
                    .sum()
            };
            // Ψ is invariant under ξ ↦ ξζ, so one period of length 1/n suffices.
            for t in sign_change_roots(&psi, cfg.xi_grid, 1.0 / n as f64) {
                let v = psi(t);
                if v.is_finite() && v.abs() < 1e-8 {
                    return Some(Witness {
                        kind: WitnessKind::RationalZeta,
                        xi: c2(circle(t)),
                        zeta: c2(zeta),
                        p: Some(p),
                        q: Some(n),
                    });
                }
            }
        }
    }
    None
}

/// Grid minimum of `|p|` on `S²` with a local compass refinement.
pub(crate) fn torus_min(p: &LaurentPoly2, n: usize) -> (f64, (f64, f64)) {
    let eval = |s: f64, t: f64| p.eval(circle(s), circle(t)).norm();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = (i as f64 + 0.5) / n as f64;
            (0..n)
                .map(|j| {
                    let t = (j as f64 + 0.5) / n as f64;
                    (eval(s, t), (s, t))
                })
                .fold(
                    (f64::INFINITY, (0.0, 0.0)),
                    |a, b| if b.0 < a.0 { b } else { a },
                )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (f64::INFINITY, (0.0, 0.0)),
            |a, b| if b.0 < a.0 { b } else { a },
        );
    let (mut v, (mut s, mut t)) = best;
    let mut step = 1.0 / n as f64;
    while step > 1e-12 {
        let mut moved = false;
        for (ds, dt) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let w = eval(s + ds, t + dt);
            if w < v {
                v = w;
                s += ds;
                t += dt;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (v, (s.rem_euclid(1.0), t.rem_euclid(1.0)))
}

fn slice_measure(p: &LaurentPoly2, zeta: Complex64) -> f64 {
    match mahler1(&p.slice(zeta)) {
        Ok(v) => v.log_value,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Expansiveness of `f = h·y − g` with `g, h ∈ Z[x^±, z^±]`.
pub fn check_linear_y_expansive(
    h: &LaurentPoly2,
    g: &LaurentPoly2,
    cfg: &LinearCheckConfig,
) -> Result<ExpansivenessVerdict> {
    if g.is_zero() || h.is_zero() {
        return invalid("g and h must be nonzero");
    }
    if let Some(w) = rational_scan(g, h, cfg) {
        let diag = json!({
            "stage": "rational-scan",
            "rational_max": cfg.rational_max,
            "step_ratios": step_ratios(g, h, &w, 4),
        });
        return Ok(ExpansivenessVerdict {
            status: VerdictStatus::Nonexpansive,
            witness: Some(w),
            diagnostics: diag,
        });
    }

    let (g_min, g_at) = torus_min(g, cfg.torus_grid);
    let (h_min, h_at) = torus_min(h, cfg.torus_grid);
    let vanishing = g_min < cfg.margin || h_min < cfg.margin;

    let n = cfg.zeta_grid;
    let d_of = |s: f64| -> f64 {
        let z = circle(s);
        slice_measure(g, z) - slice_measure(h, z)
    };
    let d: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| d_of(i as f64 / n as f64))
        .collect();
    let d_min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let d_max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut crossings = Vec::new();
    for i in 0..n {
        let (a, b) = (d[i], d[(i + 1) % n]);
        if a.is_finite() && b.is_finite() && a != 0.0 && (a > 0.0) != (b > 0.0) {
            let t1 = (i + 1) as f64 / n as f64;
            crossings.push(bisect(&d_of, i as f64 / n as f64, t1, a).rem_euclid(1.0));
        }
    }
    let mut diag = json!({
        "stage": "mahler-difference",
        "rational_max": cfg.rational_max,
        "g_min": g_min, "g_argmin": [g_at.0, g_at.1],
        "h_min": h_min, "h_argmin": [h_at.0, h_at.1],
        "vanishing": vanishing,
        "d_min": d_min, "d_max": d_max,
        "zeta_grid": n,
        "crossings": crossings,
    });

    if d_min > cfg.d_margin || d_max < -cfg.d_margin {
        let status = if vanishing {
            VerdictStatus::Undetermined
        } else {
            VerdictStatus::Expansive
        };
        return Ok(ExpansivenessVerdict {
            status,
            witness: None,
            diagnostics: diag,
        });
    }
    if let Some(&s) = crossings.first() {
        let zeta = circle(s);
        let w = Witness {
            kind: WitnessKind::IrrationalCrossing,
            xi: (1.0, 0.0),
            zeta: c2(zeta),
            p: None,
            q: None,
        };
        if let Ok(scan) = bounded_cocycle_scan(g, h, zeta, Complex64::new(1.0, 0.0), 2000) {
            diag["cocycle_sup"] = json!(scan.sup_abs);
        }
        let status = if vanishing {
            VerdictStatus::Undetermined
        } else {
            VerdictStatus::Nonexpansive
        };
        return Ok(ExpansivenessVerdict {
            status,
            witness: Some(w),
            diagnostics: diag,
        });
    }
    Ok(ExpansivenessVerdict {
        status: VerdictStatus::Undetermined,
        witness: None,
        diagnostics: diag,
    })
}

fn step_ratios(g: &LaurentPoly2, h: &LaurentPoly2, w: &Witness, n: usize) -> Vec<f64> {
    let zeta = w.zeta_complex();
    let s = zeta.im.atan2(zeta.re) / std::f64::consts::TAU;
    let t = w.xi.1.atan2(w.xi.0) / std::f64::consts::TAU;
    (0..n)
        .map(|j| phi(g, h, circle(t + j as f64 * s), zeta).exp())
        .collect()
}

/// `ψ_ζ(n, ξ)` on the window `|n| ≤ N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleTrace {
    pub zeta: (f64, f64),
    pub xi: (f64, f64),
    /// `values[i] = ψ_ζ(i − N, ξ)`.
    pub window: usize,
    pub values: Vec<f64>,
    pub sup_abs: f64,
    /// `|g/h|(ξζ^j)` for the first few `j ≥ 0`, i.e. `|c_{j+1}/c_j|`.
    pub step_ratios: Vec<f64>,
}

impl CocycleTrace {
    pub fn psi(&self, n: i64) -> Option<f64> {
        let i = n + self.window as i64;
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).copied()
    }
}

/// Runs `c_{n+1} h(ξζ^n, ζ) = c_n g(ξζ^n, ζ)` in log form: `log|c_n/c_0| = ψ_ζ(n, ξ)`.
pub fn bounded_cocycle_scan(
    g: &LaurentPoly2,
    h: &LaurentPoly2,
    zeta: Complex64,
    xi: Complex64,
    window: usize,
) -> Result<CocycleTrace> {
    if (zeta.norm() - 1.0).abs() > 1e-9 || (xi.norm() - 1.0).abs() > 1e-9 {
        return invalid("zeta and xi must be unimodular");
    }
    let s = zeta.im.atan2(zeta.re) / std::f64::consts::TAU;
    let t = xi.im.atan2(xi.re) / std::f64::consts::TAU;
    let n = window as i64;
    let step = |j: i64| -> Result<f64> {
        let p = circle(t + j as f64 * s);
        let hv = h.eval(p, zeta).norm();
        if hv == 0.0 {
            return invalid(format!("h vanishes at step {j}"));
        }
        Ok(g.eval(p, zeta).norm().ln() - hv.ln())
    };
    let mut values = vec![0.0; 2 * window + 1];
    let mut acc = 0.0;
    for j in 0..n {
        acc += step(j)?;
        values[(n + j + 1) as usize] = acc;
    }
    acc = 0.0;
    for j in 1..=n {
        acc -= step(-j)?;
        values[(n - j) as usize] = acc;
    }
    let sup_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let step_ratios = (0..n.min(16))
        .map(|j| step(j).map(f64::exp))
        .collect::<Result<Vec<_>>>()?;
    Ok(CocycleTrace {
        zeta: c2(zeta),
        xi: c2(xi),
        window,
        values,
        sup_abs,
        step_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(terms: &[((i64, i64), i128)]) -> LaurentPoly2 {
        LaurentPoly2::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn constant_shift_is_expansive() {
        // f = y − 3 − x
        let h = LaurentPoly2::constant(1);
        let g = p2(&[((0, 0), 3), ((1, 0), 1)]);
        let cfg = LinearCheckConfig {
            zeta_grid: 256,
            torus_grid: 64,
            ..Default::default()
        };
        let v = check_linear_y_expansive(&h, &g, &cfg).unwrap();
        assert_eq!(v.status, VerdictStatus::Expansive);
        let dmin = v.diagnostics["d_min"].as_f64().unwrap();
        assert!((dmin - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn x_plus_y_plus_z_plus_two() {
        let h = LaurentPoly2::constant(1);
        let g = p2(&[((1, 0), -1), ((0, 1), -1), ((0, 0), -2)]);
        let cfg = LinearCheckConfig {
            zeta_grid: 256,
            torus_grid: 64,
            ..Default::default()
        };
        let v = check_linear_y_expansive(&h, &g, &cfg).unwrap();
        assert_eq!(v.status, VerdictStatus::Nonexpansive);
        let w = v.witness.unwrap();
        assert_eq!(w.q, Some(2));
        let want = circle(1.0 / 12.0);
        assert!((w.xi_complex() - want).norm() < 1e-9);
        assert!((w.zeta_complex() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn cocycle_alternates() {
        let h = LaurentPoly2::constant(1);
        let g = p2(&[((1, 0), -1), ((0, 1), -1), ((0, 0), -2)]);
        let tr = bounded_cocycle_scan(&g, &h, Complex64::new(-1.0, 0.0), circle(1.0 / 12.0), 50)
            .unwrap();
        let r0 = 2.0 * (std::f64::consts::PI / 12.0).cos();
        let r1 = 2.0 * (std::f64::consts::PI / 12.0).sin();
        assert!((tr.step_ratios[0] - r0).abs() < 1e-12);
        assert!((tr.step_ratios[1] - r1).abs() < 1e-12);
        assert!(tr.sup_abs < r0.ln() + 1e-9);
        let trivial = bounded_cocycle_scan(&g, &g, circle(0.3), circle(0.1), 20).unwrap();
        assert!(trivial.sup_abs == 0.0);
    }

    #[test]
    fn cocycle_identity() {
        let h = p2(&[((0, 0), 2), ((1, 1), 1)]);
        let g = p2(&[((0, 0), 1), ((-1, 0), 3), ((2, 1), -1)]);
        let zeta = circle(0.3819660112501051);
        let xi = circle(0.2);
        let a = bounded_cocycle_scan(&g, &h, zeta, xi, 40).unwrap();
        for m in 0..15i64 {
            let shifted = circle(0.2 + m as f64 * 0.3819660112501051);
            let b = bounded_cocycle_scan(&g, &h, zeta, shifted, 40).unwrap();
            for n in -10..10i64 {
                let lhs = a.psi(m + n).unwrap();
                let rhs = a.psi(m).unwrap() + b.psi(n).unwrap();
                assert!((lhs - rhs).abs() < 1e-8);
            }
        }
    }
}
