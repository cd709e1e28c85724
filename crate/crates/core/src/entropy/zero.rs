use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laurent::{
    divide_generalized, generalized_cyclotomic_divisor_search, GeneralizedCyclotomic, LaurentPoly2,
};
use crate::numeric::{mahler_n, MahlerValue, QuadratureGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroEntropyVerdict {
    ZeroCandidate,
    Positive,
    Undetermined,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZeroEntropyConfig {
    pub grid: usize,
    pub margin: f64,
    pub k_max: u64,
    pub n_max: i64,
}

impl Default for ZeroEntropyConfig {
    fn default() -> Self {
        ZeroEntropyConfig {
            grid: 512,
            margin: 1e-3,
            k_max: 30,
            n_max: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroEntropyReport {
    pub verdict: ZeroEntropyVerdict,
    pub mahler: f64,
    pub mahler_error: f64,
    /// Generalized cyclotomic factors found, with multiplicity.
    pub factors: Vec<GeneralizedCyclotomic>,
    /// What is left after dividing out `factors`.
    pub remainder: String,
}

/// `m(f)` integrated in both variable orders, keeping the smaller value.
/// The midpoint rule overestimates near log singularities of the outer variable.
pub(crate) fn mahler2_min_order(f: &LaurentPoly2, n: usize) -> Result<MahlerValue> {
    let grid = QuadratureGrid::new(n, 2);
    let a = mahler_n(&f.to_polyn(), &grid)?;
    let b = mahler_n(&f.swap().to_polyn(), &grid)?;
    Ok(if a.log_value <= b.log_value { a } else { b })
}

/// Classifies a two-variable polynomial as having zero or positive Mahler measure.
pub fn zero_entropy_heuristic(
    f: &LaurentPoly2,
    cfg: &ZeroEntropyConfig,
) -> Result<ZeroEntropyReport> {
    if f.is_zero() {
        return invalid("f must be nonzero");
    }
    let m = mahler2_min_order(f, cfg.grid)?;
    let mut rem = f.clone();
    let mut factors = Vec::new();
    let verdict = if m.log_value > cfg.margin {
        ZeroEntropyVerdict::Positive
    } else {
        loop {
            if rem.len() == 1 && rem.terms().all(|(_, c)| c.abs() == 1) {
                break ZeroEntropyVerdict::ZeroCandidate;
            }
            let Some(d) = generalized_cyclotomic_divisor_search(&rem, cfg.k_max, cfg.n_max)? else {
                break ZeroEntropyVerdict::Undetermined;
            };
            rem = divide_generalized(&rem, d.k, d.n1, d.n2)?.expect("search returned a divisor");
            factors.push(d);
        }
    };
    Ok(ZeroEntropyReport {
        verdict,
        mahler: m.log_value,
        mahler_error: m.error_bound,
        factors,
        remainder: rem.fmt_vars("u1", "u2"),
    })
}
