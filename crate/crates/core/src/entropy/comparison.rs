//! `L(f, G)` for `f = 5 − x − x⁻¹ − y − y⁻¹` over `Z²` and the free group `F₂`.

use serde_json::json;

use super::{EntropyEstimate, EntropyMethod};
use crate::error::Result;
use crate::laurent::PolyN;
use crate::numeric::{mahler_n, QuadratureGrid};

/// `L(f, F₂) = log[(35 + 13√13)/18]`.
pub fn free_group_closed_form() -> EntropyEstimate {
    let value = ((35.0 + 13.0 * 13f64.sqrt()) / 18.0).ln();
    EntropyEstimate {
        value,
        method: EntropyMethod::ClosedForm,
        error_bound: 4.0 * f64::EPSILON,
        heuristic: false,
        diagnostics: json!({ "group": "free2", "formula": "log((35+13*sqrt(13))/18)" }),
    }
}

/// `5 − u₁ − u₁⁻¹ − u₂ − u₂⁻¹` in two commuting variables.
pub fn z2_laplacian() -> PolyN {
    PolyN::from_terms(
        2,
        [
            (vec![0, 0], 5),
            (vec![1, 0], -1),
            (vec![-1, 0], -1),
            (vec![0, 1], -1),
            (vec![0, -1], -1),
        ],
    )
    .expect("valid terms")
}

/// `L(f, Z²) = m(5 − u₁ − u₁⁻¹ − u₂ − u₂⁻¹)`.
pub fn z2_value(grid: usize) -> Result<EntropyEstimate> {
    let m = mahler_n(&z2_laplacian(), &QuadratureGrid::new(grid, 2))?;
    Ok(EntropyEstimate {
        value: m.log_value,
        method: EntropyMethod::ClosedForm,
        error_bound: m.error_bound,
        heuristic: true,
        diagnostics: json!({ "group": "z2", "grid": grid, "mahler_method": m.method }),
    })
}
