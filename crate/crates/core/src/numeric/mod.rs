//! Floating and exact-field numerics.

pub mod linalg;
mod mahler;
mod quad;
mod roots;
mod sqrt5;

pub use mahler::{mahler1, mahler_n, MahlerMethod, MahlerValue};
pub use quad::{torus_quad, torus_quad_log_modulus, QuadDiagnostics, QuadResult, QuadratureGrid};
pub use roots::{poly_roots, CPoly, RootReport};
pub use sqrt5::{Sqrt5Number, Sqrt5Poly};

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `e^{2πi s}`.
pub fn circle(s: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * s)
}

/// The golden ratio `τ = (1 + √5)/2`.
pub fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}
