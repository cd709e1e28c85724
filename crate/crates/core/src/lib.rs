//! Computational tools for algebraic actions of the discrete Heisenberg group
//! `Γ = <x, y, z | yz = zy, xz = zx, yx = xyz>`.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`] exact arithmetic in the integral group ring `ZΓ`
//! * [`laurent`] integer Laurent polynomials, cyclotomic tests and Sturm-based decisions
//! * [`numeric`] root finding, Mahler measures, torus quadrature and `Q(√5)`
//! * [`expansive`] lopsidedness, ℓ¹ inversion and nonexpansiveness witnesses
//! * [`entropy`] trace-series, periodic-determinant and linear-formula entropy engines
//! * [`lyapunov`] companion cocycles and Lyapunov spectra
//! * [`homoclinic`] fundamental homoclinic points and the symbolic cover
//! * [`cli`] expression parsing, configuration and JSON reports

pub mod cli;
pub mod entropy;
pub mod error;
pub mod expansive;
pub mod homoclinic;
pub mod laurent;
pub mod lyapunov;
pub mod numeric;
pub mod ring;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly1, LaurentPoly2};
pub use ring::{GroupRingElement, Monomial};
