use serde_json::json;

use super::{EntropyEstimate, EntropyMethod};
use crate::error::{invalid, Error, Result};
use crate::expansive::is_lopsided;
use crate::ring::dense::power_traces;
use crate::ring::GroupRingElement;

/// Hard cap on the number of series terms.
pub const MAX_TRACE_TERMS: usize = 400;

/// `f = c₀δ₀(1 − G/c₀)` with `G` integral.
struct Split {
    c0: i128,
    g: GroupRingElement,
    s: f64,
    /// `tr(Gⁿ) = 0` for odd `n`.
    odd_vanish: bool,
}

fn split(f: &GroupRingElement) -> Result<Split> {
    let d0 = is_lopsided(f).ok_or(Error::NotLopsided)?;
    let c0 = f.coeff(&d0);
    let rest = f.sub(&GroupRingElement::monomial(d0, c0))?;
    let g = rest.left_shift(&d0.inverse()?)?.neg()?;
    let s = g.l1_norm_f64() / c0.unsigned_abs() as f64;
    // a character Γ → Z/2 through (k, l) that is odd on every term of G
    let odd_vanish = !g.is_zero()
        && [(1, 0), (0, 1), (1, 1)].iter().any(|(a, b)| {
            g.terms()
                .all(|(m, _)| (a * m.k + b * m.l).rem_euclid(2) == 1)
        });
    Ok(Split {
        c0,
        g,
        s,
        odd_vanish,
    })
}

/// Bound on `Σ_{n>N} tr(gⁿ)/n` given `|tr(gⁿ)| ≤ sⁿ`.
pub fn trace_tail(s: f64, n: usize, odd_vanish: bool) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    if odd_vanish {
        // only even n > N contribute
        let first = if (n + 1).is_multiple_of(2) {
            n + 1
        } else {
            n + 2
        };
        s.powi(first as i32) / (first as f64 * (1.0 - s * s))
    } else {
        s.powi(n as i32 + 1) / ((n + 1) as f64 * (1.0 - s))
    }
}

/// `h(α_f) = log|c₀| − Σ_{n≥1} tr(gⁿ)/n` for lopsided `f`, with the smallest
/// number of terms whose tail bound is below `tol`.
pub fn entropy_trace_series(f: &GroupRingElement, tol: f64) -> Result<EntropyEstimate> {
    if tol.is_nan() || tol <= 0.0 {
        return invalid("tolerance must be positive");
    }
    let sp = split(f)?;
    let mut n = 0;
    while trace_tail(sp.s, n, sp.odd_vanish) > tol {
        n += 1;
        if n > MAX_TRACE_TERMS {
            return invalid(format!(
                "tolerance {tol:e} needs more than {MAX_TRACE_TERMS} terms"
            ));
        }
    }
    run(&sp, n)
}

/// The trace series truncated after exactly `n` terms.
pub fn entropy_trace_series_terms(f: &GroupRingElement, n: usize) -> Result<EntropyEstimate> {
    run(&split(f)?, n)
}

fn run(sp: &Split, n: usize) -> Result<EntropyEstimate> {
    let traces = if sp.g.is_zero() {
        vec![1]
    } else {
        power_traces(&sp.g, n)?
    };
    let c0 = sp.c0.unsigned_abs() as f64;
    let log_c0 = c0.ln();
    let mut sum = 0.0;
    for (k, t) in traces.iter().enumerate().skip(1) {
        if *t != 0 {
            // tr(Gᵏ)/c₀ᵏ in logs to stay finite for large k
            let mag = (t.unsigned_abs() as f64).ln() - k as f64 * log_c0;
            sum += t.signum() as f64 * mag.exp() / k as f64;
        }
    }
    let tail = trace_tail(sp.s, n, sp.odd_vanish);
    Ok(EntropyEstimate {
        value: log_c0 - sum,
        method: EntropyMethod::TraceSeries,
        error_bound: tail,
        heuristic: false,
        diagnostics: json!({
            "terms": n,
            "s": sp.s,
            "dominant": sp.c0,
            "odd_traces_vanish": sp.odd_vanish,
            "traces": traces.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }),
    })
}
