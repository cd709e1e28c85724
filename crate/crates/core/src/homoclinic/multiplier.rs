//! Partial data for the multiplier method on `2 − x − y`: the formal inverse
//! `Σ_n (x+y)ⁿ / 2^{n+1}` has coefficient `[n;k]_z / 2^{n+1}` at `x^k y^{n−k}`,
//! and multiplying by `(z−1)^p` is meant to make it summable. Only the raw
//! numbers are produced here; no summability claim is made.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly1;
use crate::ring::q_binomial;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiplierRow {
    pub n: u32,
    /// `max_k ‖(z−1)^p [n;k]_z‖₁ / 2^{n+1}`.
    pub max_l1: f64,
    /// `Σ_k ‖(z−1)^p [n;k]_z‖₁ / 2^{n+1}`.
    pub row_l1: f64,
    /// Running sum of `row_l1`.
    pub cumulative: f64,
}

fn l1(p: &LaurentPoly1) -> f64 {
    p.coeffs().iter().map(|c| c.unsigned_abs() as f64).sum()
}

pub fn multiplier_experiment(n_max: u32, power: u32) -> Result<Vec<MultiplierRow>> {
    if n_max == 0 || n_max > 60 {
        return invalid("n_max must be in 1..=60");
    }
    let z_minus_one = LaurentPoly1::from_coeffs(&[-1, 1]);
    let mult = z_minus_one.pow(power)?;
    let mut out = Vec::with_capacity(n_max as usize);
    let mut cumulative = 0.0;
    for n in 0..=n_max {
        let scale = 2f64.powi(n as i32 + 1);
        let mut max_l1: f64 = 0.0;
        let mut row = 0.0;
        for k in 0..=n {
            let v = l1(&q_binomial(n, k)?.mul(&mult)?) / scale;
            max_l1 = max_l1.max(v);
            row += v;
        }
        cumulative += row;
        out.push(MultiplierRow {
            n,
            max_l1,
            row_l1: row,
            cumulative,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_multiplier_rows_are_binomial() {
        // with p = 0 the row mass is Σ_k C(n,k) / 2^{n+1} = 1/2
        for r in multiplier_experiment(20, 0).unwrap() {
            assert!((r.row_l1 - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplier_shrinks_rows() {
        let rows = multiplier_experiment(40, 2).unwrap();
        assert_eq!(rows.len(), 41);
        assert!(rows[40].row_l1 < rows[10].row_l1);
    }
}
