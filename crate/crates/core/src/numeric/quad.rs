use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Uniform midpoint grid on the `dims`-torus with `n` points per circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub n: usize,
    pub dims: usize,
    /// Points per parallel work unit. Partial sums are reduced in chunk order,
    /// so the result does not depend on the thread count.
    pub parallel_chunk: usize,
}

impl QuadratureGrid {
    pub fn new(n: usize, dims: usize) -> Self {
        QuadratureGrid {
            n,
            dims,
            parallel_chunk: 4096,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct QuadDiagnostics {
    /// Grid cells whose integrand modulus fell below the threshold and were subdivided.
    pub flagged_cells: usize,
    /// Subdivision points where the modulus was exactly zero (skipped).
    pub exact_zeros: usize,
    pub min_modulus: f64,
    pub argmin: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// `|Q(n) - Q(n/2)|`, a heuristic error indicator.
    pub error_estimate: f64,
    pub points: usize,
    pub diagnostics: QuadDiagnostics,
}

fn coords(mut idx: usize, n: usize, dims: usize, out: &mut [f64]) {
    for slot in out.iter_mut().take(dims) {
        let j = idx % n;
        idx /= n;
        *slot = (j as f64 + 0.5) / n as f64;
    }
}

fn check(grid: &QuadratureGrid) -> Result<()> {
    if grid.n < 4 {
        return invalid("quadrature grid needs n >= 4");
    }
    if grid.dims == 0 || grid.dims > 3 {
        return invalid("quadrature dimension must be 1, 2 or 3");
    }
    Ok(())
}

fn mean_on_grid<F>(f: &F, n: usize, dims: usize, chunk: usize) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total = n.pow(dims as u32);
    let chunk = chunk.max(1);
    let nchunks = total.div_ceil(chunk);
    let partials: Vec<f64> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut s = [0.0; 3];
            let mut acc = 0.0;
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                coords(idx, n, dims, &mut s);
                acc += f(&s[..dims]);
            }
            acc
        })
        .collect();
    partials.iter().sum::<f64>() / total as f64
}

/// Mean of `f` over the torus by the midpoint rule (the trapezoid rule for
/// periodic integrands), with an error heuristic from halving the grid.
pub fn torus_quad<F>(f: &F, grid: &QuadratureGrid) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check(grid)?;
    let value = mean_on_grid(f, grid.n, grid.dims, grid.parallel_chunk);
    let coarse = mean_on_grid(f, (grid.n / 2).max(2), grid.dims, grid.parallel_chunk);
    Ok(QuadResult {
        value,
        error_estimate: (value - coarse).abs(),
        points: grid.n.pow(grid.dims as u32),
        diagnostics: QuadDiagnostics {
            min_modulus: f64::NAN,
            ..Default::default()
        },
    })
}

const SUBDIVISION: usize = 8;

struct LogPass {
    sum: f64,
    flagged: usize,
    zeros: usize,
    min: f64,
    argmin: [f64; 3],
}

fn log_pass<F>(modulus: &F, n: usize, dims: usize, chunk: usize, threshold: f64) -> LogPass
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total = n.pow(dims as u32);
    let chunk = chunk.max(1);
    let nchunks = total.div_ceil(chunk);
    let h = 1.0 / n as f64;
    let partials: Vec<LogPass> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut p = LogPass {
                sum: 0.0,
                flagged: 0,
                zeros: 0,
                min: f64::INFINITY,
                argmin: [0.0; 3],
            };
            let mut s = [0.0; 3];
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                coords(idx, n, dims, &mut s);
                let v = modulus(&s[..dims]);
                if v < p.min {
                    p.min = v;
                    p.argmin = s;
                }
                if v >= threshold {
                    p.sum += v.ln();
                    continue;
                }
                // Near-zero cell: average over a finer sub-grid instead.
                p.flagged += 1;
                let sub_total = SUBDIVISION.pow(dims as u32);
                let mut acc = 0.0;
                let mut used = 0usize;
                let mut t = [0.0; 3];
                for j in 0..sub_total {
                    coords(j, SUBDIVISION, dims, &mut t);
                    for d in 0..dims {
                        t[d] = s[d] - 0.5 * h + t[d] * h;
                    }
                    let w = modulus(&t[..dims]);
                    if w < p.min {
                        p.min = w;
                        p.argmin = t;
                    }
                    if w > 0.0 {
                        acc += w.ln();
                        used += 1;
                    } else {
                        p.zeros += 1;
                    }
                }
                if used > 0 {
                    p.sum += acc / used as f64;
                }
            }
            p
        })
        .collect();
    let mut out = LogPass {
        sum: 0.0,
        flagged: 0,
        zeros: 0,
        min: f64::INFINITY,
        argmin: [0.0; 3],
    };
    for p in partials {
        out.sum += p.sum;
        out.flagged += p.flagged;
        out.zeros += p.zeros;
        if p.min < out.min {
            out.min = p.min;
            out.argmin = p.argmin;
        }
    }
    out.sum /= total as f64;
    out
}

/// Mean of `log(modulus)` over the torus. Cells where the modulus drops below
/// `threshold` are subdivided and reported in the diagnostics.
pub fn torus_quad_log_modulus<F>(
    modulus: &F,
    grid: &QuadratureGrid,
    threshold: f64,
) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check(grid)?;
    let fine = log_pass(modulus, grid.n, grid.dims, grid.parallel_chunk, threshold);
    let coarse = log_pass(
        modulus,
        (grid.n / 2).max(2),
        grid.dims,
        grid.parallel_chunk,
        threshold,
    );
    Ok(QuadResult {
        value: fine.sum,
        error_estimate: (fine.sum - coarse.sum).abs(),
        points: grid.n.pow(grid.dims as u32),
        diagnostics: QuadDiagnostics {
            flagged_cells: fine.flagged,
            exact_zeros: fine.zeros,
            min_modulus: fine.min,
            argmin: fine.argmin[..grid.dims].to_vec(),
        },
    })
}
