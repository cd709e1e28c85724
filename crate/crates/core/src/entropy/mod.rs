//! Entropy engines: trace series, periodic determinants, the linear formula,
//! face bounds, determinant lemmas and word counts.

mod comparison;
mod detlemmas;
mod face;
mod linear;
mod periodic;
mod quadratic;
mod riemann;
mod trace;
mod twisted;
pub mod words;
mod zero;

pub use comparison::{free_group_closed_form, z2_laplacian, z2_value};
pub use detlemmas::{
    quadratic_det_formula, quadratic_parts, simple_det_condition, tri_circulant_det,
    tri_circulant_det_simple, tri_circulant_matrix,
};
pub use face::{face_entropy_lower_bound, FaceBound, FaceBoundReport};
pub use linear::{
    entropy_linear, entropy_linear_formula, linear_parts, slice_curves, slice_mahler,
};
pub use periodic::{
    bareiss_det, circulant_det, entropy_periodic, golden_mean_counts, periodic_term,
    GoldenMeanCount, PeriodicReport, PeriodicTerm,
};
pub use quadratic::{
    middle_growth_rate, quadratic_experiment, simple_family, QuadraticConfig, QuadraticCurvePoint,
    QuadraticExperiment,
};
pub use riemann::{riemann_sum_check, RiemannSumReport};
pub use trace::{entropy_trace_series, entropy_trace_series_terms, trace_tail, MAX_TRACE_TERMS};
pub use twisted::{build_a_matrix, TwistedBuilder, TwistedMatrix, XParts};
pub use words::{word_counts, word_counts_cached, WordCountTable, WordGroup};
pub use zero::{zero_entropy_heuristic, ZeroEntropyConfig, ZeroEntropyReport, ZeroEntropyVerdict};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyMethod {
    TraceSeries,
    PeriodicDeterminant,
    LinearFormula,
    Lyapunov,
    ClosedForm,
}

/// An entropy value in nats.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EntropyMethod,
    pub error_bound: f64,
    /// `true` when `error_bound` is an estimate rather than a proven bound.
    pub heuristic: bool,
    pub diagnostics: serde_json::Value,
}
