//! Expansiveness of principal actions: lopsidedness and `ℓ¹` inversion, the
//! criterion for `f = h·y − g`, finite-dimensional checks at rational `ζ`,
//! cocycle scans and the degree-48 example.

mod allan;
mod example48;
mod linear;
mod lopsided;

pub use allan::{allan_rational_check, AllanReport};
pub use example48::{example48_suite, Example48Report, PUBLISHED_G};
pub(crate) use linear::torus_min;
pub use linear::{bounded_cocycle_scan, check_linear_y_expansive, CocycleTrace, LinearCheckConfig};
pub use lopsided::{
    invert_l1, is_lopsided, lopsidize, residual_within, DecayCertificate, L1Approx, LopsidizeBudget,
};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Expansive,
    Nonexpansive,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `ζ` of finite order `n` with `Σ_{j<n} φ_ζ(ξζ^j) = 0`.
    RationalZeta,
    /// A sign change of `m(g(·,ζ)) − m(h(·,ζ))` bracketed numerically.
    IrrationalCrossing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    /// `ξ` as `(re, im)`.
    pub xi: (f64, f64),
    pub zeta: (f64, f64),
    /// `ζ = e^{2πi p/q}` for rational witnesses.
    pub p: Option<u64>,
    pub q: Option<u64>,
}

impl Witness {
    pub fn xi_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.xi.0, self.xi.1)
    }

    pub fn zeta_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.zeta.0, self.zeta.1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansivenessVerdict {
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub diagnostics: serde_json::Value,
}
