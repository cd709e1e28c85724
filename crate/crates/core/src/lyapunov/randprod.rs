use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spectrum::stream_rng;
use crate::error::{invalid, Result};
use crate::numeric::circle;

const RENORM_HIGH: f64 = 1e8;
const RENORM_LOW: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RandomProductTrial {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomProductReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub per_trial: Vec<RandomProductTrial>,
    pub mean: f64,
    pub mean_abs: f64,
    pub std: f64,
}

fn norm(m: &[Complex64; 4]) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `(1/n) log ‖∏_{k=0}^{n−1} [[0, 1], [1, e^{2πi(ka+b)}]]‖` (Frobenius norm),
/// with the running product rescaled whenever its norm leaves `[1e-8, 1e8]`.
pub fn random_product_value(a: f64, b: f64, n: usize) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = [one, zero, zero, one];
    let mut log_scale = 0.0;
    for k in 0..n {
        let e = circle((k as f64 * a + b).rem_euclid(1.0));
        // m · [[0, 1], [1, e]]
        m = [m[1], m[0] + m[1] * e, m[3], m[2] + m[3] * e];
        let s = norm(&m);
        if !(RENORM_LOW..=RENORM_HIGH).contains(&s) {
            log_scale += s.ln();
            m.iter_mut().for_each(|c| *c /= s);
        }
    }
    (log_scale + norm(&m).ln()) / n as f64
}

/// Trial `t` draws `(a, b)` uniformly from `[0,1)²` using stream `t` of the master seed.
pub fn random_product_experiment(
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<RandomProductReport> {
    if n < 1000 {
        return invalid("n must be at least 1000");
    }
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let per_trial: Vec<RandomProductTrial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            RandomProductTrial {
                a,
                b,
                value: random_product_value(a, b, n),
            }
        })
        .collect();
    let k = trials as f64;
    let mean = per_trial.iter().map(|t| t.value).sum::<f64>() / k;
    let mean_abs = per_trial.iter().map(|t| t.value.abs()).sum::<f64>() / k;
    let std = if trials > 1 {
        (per_trial
            .iter()
            .map(|t| (t.value - mean).powi(2))
            .sum::<f64>()
            / (k - 1.0))
            .sqrt()
    } else {
        0.0
    };
    Ok(RandomProductReport {
        n,
        trials,
        seed,
        per_trial,
        mean,
        mean_abs,
        std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_pair_gives_golden_growth() {
        let v = random_product_value(0.0, 0.0, 5000);
        assert!((v - crate::numeric::golden().ln()).abs() < 1e-3);
    }

    #[test]
    fn renormalization_matches_direct_product() {
        let (a, b, n) = (0.3141, 0.2718, 40);
        let mut m = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        for k in 0..n {
            let e = circle(k as f64 * a + b);
            m = [m[1], m[0] + m[1] * e, m[3], m[2] + m[3] * e];
        }
        let direct = norm(&m).ln() / n as f64;
        assert!((random_product_value(a, b, n) - direct).abs() < 1e-12);
    }

    #[test]
    fn seeded_and_small() {
        let r = random_product_experiment(20_000, 6, 3).unwrap();
        let again = random_product_experiment(20_000, 6, 3).unwrap();
        assert_eq!(
            r.per_trial.iter().map(|t| t.value).collect::<Vec<_>>(),
            again.per_trial.iter().map(|t| t.value).collect::<Vec<_>>()
        );
        assert!(r.mean_abs < 0.05, "{r:?}");
        assert!(random_product_experiment(10, 1, 0).is_err());
    }
}
