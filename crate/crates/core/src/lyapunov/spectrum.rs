use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::cocycle::{monicize, CompanionCocycle};
use crate::entropy::{EntropyEstimate, EntropyMethod};
use crate::error::{invalid, Result};
use crate::numeric::linalg::CMatrix;
use crate::numeric::{circle, golden};
use crate::ring::GroupRingElement;

/// Largest denominator for which `θ` is treated as rational.
pub const RATIONAL_DENOMINATOR_LIMIT: u64 = 1_000_000;

/// Exponents closer than this are never split, even with tiny standard errors.
const CLUSTER_FLOOR: f64 = 1e-3;

/// The generator for stream `stream` under master seed `seed`:
/// `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `p/q` with `q ≤ limit` equal to `θ` up to rounding, found by continued fractions.
pub fn near_rational(theta: f64, limit: u64) -> Option<(i64, u64)> {
    let t = theta.rem_euclid(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = t;
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 as u64 > limit {
            return None;
        }
        if (t - h2 as f64 / k2 as f64).abs() <= 1e-15 {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac == 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LyapunovConfig {
    pub n_steps: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Skip the rational-rotation check.
    pub allow_rational: bool,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            n_steps: 20_000,
            n_samples: 8,
            seed: 0,
            allow_rational: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LyapunovSpectrum {
    /// `ζ = e^{2πiθ}`.
    pub theta: f64,
    /// Distinct exponents, ascending.
    pub exponents: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// All `D` exponents, ascending, before clustering.
    pub raw: Vec<f64>,
    /// Standard error of each raw exponent across samples.
    pub stderr: Vec<f64>,
    pub n_steps: usize,
    pub n_samples: usize,
}

impl LyapunovSpectrum {
    /// `Σ_j r_j χ_j`.
    pub fn sum(&self) -> f64 {
        self.raw.iter().sum()
    }

    /// `Σ_j r_j χ_j⁺`.
    pub fn positive_sum(&self) -> f64 {
        self.raw.iter().map(|c| c.max(0.0)).sum()
    }
}

/// One QR run from `ξ = e^{2πiφ}`; returns the `D` exponents in MGS column order.
fn qr_run(c: &CompanionCocycle, phi: f64, theta: f64, n: usize) -> Vec<f64> {
    let zeta = circle(theta);
    let mut q = CMatrix::identity(c.d);
    let mut acc = vec![0.0; c.d];
    for t in 0..n {
        let xi = circle((phi + t as f64 * theta).rem_euclid(1.0));
        let (nq, r) = c.matrix(xi, zeta).mul(&q).mgs();
        for (a, v) in acc.iter_mut().zip(&r) {
            *a += v.ln();
        }
        q = nq;
    }
    acc.iter().map(|a| a / n as f64).collect()
}

fn cluster(raw: &[f64], stderr: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut exps: Vec<f64> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for (i, &v) in raw.iter().enumerate() {
        let joins = i > 0 && {
            let tol = (10.0 * stderr[i].max(stderr[i - 1])).max(CLUSTER_FLOOR);
            v - raw[i - 1] < tol
        };
        if joins {
            *sums.last_mut().expect("nonempty") += v;
            *mult.last_mut().expect("nonempty") += 1;
        } else {
            sums.push(v);
            mult.push(1);
        }
    }
    for (s, m) in sums.iter().zip(&mult) {
        exps.push(s / *m as f64);
    }
    (exps, mult)
}

/// Lyapunov spectrum of the companion cocycle over the rotation by `θ`,
/// averaged over `n_samples` random starting points `ξ`. Sample `s` uses
/// stream `stream_base + s`.
pub fn lyapunov_spectrum_stream(
    c: &CompanionCocycle,
    theta: f64,
    cfg: &LyapunovConfig,
    stream_base: u64,
) -> Result<LyapunovSpectrum> {
    if cfg.n_steps == 0 || cfg.n_samples == 0 {
        return invalid("n_steps and n_samples must be positive");
    }
    if !cfg.allow_rational {
        if let Some((p, q)) = near_rational(theta, RATIONAL_DENOMINATOR_LIMIT) {
            return invalid(format!(
                "θ equals {p}/{q} up to rounding; rotation is not irrational"
            ));
        }
    }
    let runs: Vec<Vec<f64>> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|s| {
            let phi: f64 = stream_rng(cfg.seed, stream_base + s as u64).gen();
            let mut v = qr_run(c, phi, theta, cfg.n_steps);
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    let d = c.d;
    let ns = runs.len() as f64;
    let mut raw = vec![0.0; d];
    let mut stderr = vec![0.0; d];
    for j in 0..d {
        let mean = runs.iter().map(|r| r[j]).sum::<f64>() / ns;
        let var = if runs.len() > 1 {
            runs.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (ns - 1.0)
        } else {
            0.0
        };
        raw[j] = mean;
        stderr[j] = (var / ns).sqrt();
    }
    let (exponents, multiplicities) = cluster(&raw, &stderr);
    Ok(LyapunovSpectrum {
        theta,
        exponents,
        multiplicities,
        raw,
        stderr,
        n_steps: cfg.n_steps,
        n_samples: cfg.n_samples,
    })
}

pub fn lyapunov_spectrum(
    c: &CompanionCocycle,
    theta: f64,
    cfg: &LyapunovConfig,
) -> Result<LyapunovSpectrum> {
    lyapunov_spectrum_stream(c, theta, cfg, 0)
}

/// `θ_k = frac(θ₀ + k/τ)`, skipping points too close to rationals of small denominator.
pub fn kronecker_thetas(count: usize) -> Vec<f64> {
    let step = golden() - 1.0;
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let t = (0.5 * std::f64::consts::SQRT_2 + k as f64 * step).rem_euclid(1.0);
        if near_rational(t, RATIONAL_DENOMINATOR_LIMIT).is_none() {
            out.push(t);
        }
        k += 1;
    }
    out
}

/// `h(α_f) = ∫ Σ_j r_j χ_j(ζ)⁺ dζ` over a Kronecker sequence of `ζ`.
/// `ζ_k` uses streams `k·n_samples …`.
pub fn entropy_via_lyapunov(
    f: &GroupRingElement,
    zeta_count: usize,
    cfg: &LyapunovConfig,
) -> Result<EntropyEstimate> {
    if zeta_count == 0 {
        return invalid("zeta_count must be positive");
    }
    let (h, phi) = monicize(f)?;
    let c = CompanionCocycle::from_element(&h)?;
    let thetas = kronecker_thetas(zeta_count);
    let spectra = thetas
        .par_iter()
        .enumerate()
        .map(|(k, t)| lyapunov_spectrum_stream(&c, *t, cfg, (k * cfg.n_samples) as u64))
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<f64> = spectra.iter().map(|s| s.positive_sum()).collect();
    let n = vals.len() as f64;
    let value = vals.iter().sum::<f64>() / n;
    let spread = if vals.len() > 1 {
        (vals.iter().map(|v| (v - value).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    let mc = spectra
        .iter()
        .map(|s| s.stderr.iter().sum::<f64>())
        .sum::<f64>()
        / n;
    Ok(EntropyEstimate {
        value,
        method: EntropyMethod::Lyapunov,
        error_bound: spread + mc,
        heuristic: true,
        diagnostics: json!({
            "degree": c.d,
            "automorphism": phi,
            "zeta_count": zeta_count,
            "n_steps": cfg.n_steps,
            "n_samples": cfg.n_samples,
            "seed": cfg.seed,
            "thetas": thetas,
            "positive_sums": vals,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly2;
    use crate::numeric::mahler1;
    use crate::ring::Monomial;

    fn elem(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    fn cfg(n: usize) -> LyapunovConfig {
        LyapunovConfig {
            n_steps: n,
            n_samples: 4,
            seed: 7,
            allow_rational: false,
        }
    }

    #[test]
    fn rational_detection() {
        assert_eq!(near_rational(0.25, 1000), Some((1, 4)));
        assert_eq!(near_rational(3.0 / 7.0, 1000), Some((3, 7)));
        assert_eq!(
            near_rational(golden() - 1.0, RATIONAL_DENOMINATOR_LIMIT),
            None
        );
        assert!(kronecker_thetas(50)
            .iter()
            .all(|t| near_rational(*t, 1000).is_none()));
    }

    #[test]
    fn one_dimensional() {
        // y − 3 − x: χ = m(3 + x) = log 3
        let c = CompanionCocycle::from_element(&elem(&[
            ((0, 1, 0), 1),
            ((0, 0, 0), -3),
            ((1, 0, 0), -1),
        ]))
        .unwrap();
        let s = lyapunov_spectrum(&c, golden() - 1.0, &cfg(5000)).unwrap();
        assert_eq!(s.multiplicities, vec![1]);
        assert!((s.exponents[0] - 3f64.ln()).abs() < 1e-3, "{s:?}");
    }

    #[test]
    fn unimodular_example_vanishes() {
        let c = CompanionCocycle::from_element(&elem(&[
            ((0, 2, 0), 1),
            ((1, 1, 0), -1),
            ((0, 0, 0), -1),
        ]))
        .unwrap();
        let s = lyapunov_spectrum(&c, 0.5 * (5f64.sqrt() - 2.0), &cfg(20000)).unwrap();
        assert!(s.raw.iter().all(|v| v.abs() < 1e-2), "{s:?}");
        assert!(s.sum().abs() < 1e-10);
    }

    #[test]
    fn sum_rule() {
        // y² − (1 + x)y − (5 + z x⁻¹): det A = −g₀
        let f = elem(&[
            ((0, 2, 0), 1),
            ((0, 1, 0), -1),
            ((1, 1, 0), -1),
            ((0, 0, 0), -5),
            ((-1, 0, 1), -1),
        ]);
        let c = CompanionCocycle::from_element(&f).unwrap();
        let theta = 0.3819660112501051;
        let s = lyapunov_spectrum(&c, theta, &cfg(4000)).unwrap();
        let g0 = LaurentPoly2::from_terms([((0, 0), 5), ((-1, 1), 1)]).unwrap();
        let m = mahler1(&g0.slice(circle(theta))).unwrap().log_value;
        let tol = 3.0 * s.stderr.iter().sum::<f64>() + 1e-3;
        assert!((s.sum() - m).abs() < tol, "{} vs {m}", s.sum());
    }

    #[test]
    fn deterministic() {
        let c = CompanionCocycle::from_element(&elem(&[
            ((0, 2, 0), 1),
            ((1, 1, 0), -2),
            ((0, 1, 0), 1),
            ((0, 0, 0), 1),
        ]))
        .unwrap();
        let a = lyapunov_spectrum(&c, 0.1234567, &cfg(500)).unwrap();
        let b = lyapunov_spectrum(&c, 0.1234567, &cfg(500)).unwrap();
        assert_eq!(a.raw, b.raw);
    }

    #[test]
    fn entropy_examples() {
        let f = elem(&[((0, 1, 0), 1), ((0, 0, 0), -3), ((1, 0, 0), -1)]);
        let e = entropy_via_lyapunov(&f, 8, &cfg(4000)).unwrap();
        assert!((e.value - 3f64.ln()).abs() < 2e-3, "{e:?}");
        let g = elem(&[((0, 2, 0), 1), ((1, 1, 0), -1), ((0, 0, 0), -1)]);
        let e = entropy_via_lyapunov(&g, 8, &cfg(20000)).unwrap();
        assert!(e.value.abs() < 1e-2, "{e:?}");
    }
}
