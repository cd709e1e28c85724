//! Closed forms for determinants of banded circulants and of the quadratic
//! `A_{ζ,f}` matrices.

use num_complex::Complex64;

use super::twisted::XParts;
use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::linalg::CMatrix;
use crate::ring::GroupRingElement;

fn mat2_mul(a: [Complex64; 4], b: [Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn check_lengths(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Result<usize> {
    let q = a.len();
    if b.len() != q || c.len() != q {
        return invalid("a, b and c must have equal length");
    }
    if q < 3 {
        return invalid("q must be at least 3");
    }
    Ok(q)
}

/// The matrix with `a_j` at `(j, j)`, `b_j` at `(j, j+1)` and `c_j` at `(j, j+2)`, indices mod `q`.
pub fn tri_circulant_matrix(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Result<CMatrix> {
    let q = check_lengths(a, b, c)?;
    let mut m = CMatrix::zeros(q);
    for j in 0..q {
        m.add_to(j, j, a[j]);
        m.add_to(j, (j + 1) % q, b[j]);
        m.add_to(j, (j + 2) % q, c[j]);
    }
    Ok(m)
}

/// `∏a − tr(M₀M₁⋯M_{q−1}) + ∏c` with `M_j = [[−b_j, c_j], [−a_j, 0]]`.
pub fn tri_circulant_det(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Result<Complex64> {
    let q = check_lengths(a, b, c)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut p = [one, zero, zero, one];
    for j in 0..q {
        p = mat2_mul(p, [-b[j], c[j], -a[j], zero]);
    }
    let pa: Complex64 = a.iter().product();
    let pc: Complex64 = c.iter().product();
    Ok(pa - (p[0] + p[3]) + pc)
}

/// The special case `c_j a_{j+1} = −b_j b_{j+1}`:
/// `∏a − (−1)^q (τ^q + σ^q) ∏b + ∏c`.
pub fn tri_circulant_det_simple(
    a: &[Complex64],
    b: &[Complex64],
    c: &[Complex64],
) -> Result<Complex64> {
    let q = check_lengths(a, b, c)?;
    let tau = crate::numeric::golden();
    let lucas = tau.powi(q as i32) + (-1.0 / tau).powi(q as i32);
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let pa: Complex64 = a.iter().product();
    let pb: Complex64 = b.iter().product();
    let pc: Complex64 = c.iter().product();
    Ok(pa - sign * lucas * pb + pc)
}

/// Quadratic parts `(g₀, g₁, g₂)` of `f = x^k (g₀ + x g₁ + x² g₂)`.
pub fn quadratic_parts(f: &GroupRingElement) -> Result<[LaurentPoly2; 3]> {
    let p = XParts::new(f)?;
    if p.degree() != 2 {
        return invalid("f is not quadratic in x");
    }
    Ok([p.parts[0].clone(), p.parts[1].clone(), p.parts[2].clone()])
}

/// `det A_{ζ,f}(ξ,η)` for `f = g₀ + x g₁ + x² g₂` by the tri-circulant closed form,
/// with `ζ` a primitive `q`-th root of unity.
pub fn quadratic_det_formula(
    g: &[LaurentPoly2; 3],
    zeta: Complex64,
    xi: Complex64,
    eta: Complex64,
    q: usize,
) -> Result<Complex64> {
    let ev = |p: &LaurentPoly2, scale: Complex64| -> Vec<Complex64> {
        (0..q)
            .map(|j| p.eval(eta * zeta.powi(j as i32), zeta) * scale)
            .collect()
    };
    let one = Complex64::new(1.0, 0.0);
    tri_circulant_det(&ev(&g[0], one), &ev(&g[1], xi), &ev(&g[2], xi * xi))
}

/// Whether `g₁(y,z) g₁(yz,z) = −g₂(y,z) g₀(yz,z)` holds exactly.
pub fn simple_det_condition(g: &[LaurentPoly2; 3]) -> Result<bool> {
    // p(yz, z): (i, j) ↦ (i, i + j)
    let shift = |p: &LaurentPoly2| p.monomial_substitute(1, 1, 0, 1);
    let lhs = g[1].mul(&shift(&g[1])?)?;
    let rhs = g[2].mul(&shift(&g[0])?)?.neg()?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::build_a_matrix;
    use crate::numeric::{circle, Sqrt5Number};
    use crate::ring::Monomial;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn two_diagonals() {
        let a: Vec<Complex64> = (1..=5).map(|v| Complex64::new(v as f64, 0.0)).collect();
        let b = vec![Complex64::new(0.0, 0.0); 5];
        let c: Vec<Complex64> = (1..=5).map(|v| Complex64::new(0.0, v as f64)).collect();
        let d = tri_circulant_det(&a, &b, &c).unwrap();
        let want: Complex64 = a.iter().product::<Complex64>() + c.iter().product::<Complex64>();
        assert!((d - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn random_against_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in 3..=8 {
            let a: Vec<_> = (0..q).map(|_| rc(&mut rng)).collect();
            let b: Vec<_> = (0..q).map(|_| rc(&mut rng)).collect();
            let c: Vec<_> = (0..q).map(|_| rc(&mut rng)).collect();
            let d = tri_circulant_det(&a, &b, &c).unwrap();
            let dense = tri_circulant_matrix(&a, &b, &c).unwrap().det();
            assert!((d - dense).norm() < 1e-10 * dense.norm().max(1.0), "q={q}");
        }
    }

    #[test]
    fn simple_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in 3..=9 {
            let a: Vec<_> = (0..q).map(|_| rc(&mut rng) + 2.0).collect();
            let b: Vec<_> = (0..q).map(|_| rc(&mut rng)).collect();
            let c: Vec<_> = (0..q)
                .map(|j| -b[j] * b[(j + 1) % q] / a[(j + 1) % q])
                .collect();
            let d = tri_circulant_matrix(&a, &b, &c).unwrap().det();
            let s = tri_circulant_det_simple(&a, &b, &c).unwrap();
            assert!((d - s).norm() < 1e-9 * d.norm().max(1.0), "q={q}");
        }
    }

    #[test]
    fn golden_coefficient_is_lucas() {
        // a = 1, b = 1, c = −1 satisfies the condition; det − 1 − (−1)^q = −(−1)^q (τ^q + σ^q)
        for q in 3..=20usize {
            let mut m = vec![vec![BigInt::from(0); q]; q];
            for (j, row) in m.iter_mut().enumerate() {
                row[j] += 1;
                row[(j + 1) % q] += 1;
                row[(j + 2) % q] -= 1;
            }
            let det: BigInt = crate::entropy::bareiss_det(m);
            let sign = BigInt::from(if q % 2 == 0 { 1 } else { -1 });
            let coeff: BigInt = -(det - BigInt::from(1) - &sign) * &sign;
            let tq = &Sqrt5Number::tau().pow(q as u32) + &Sqrt5Number::sigma().pow(q as u32);
            assert!(tq.is_rational() && tq.a.is_integer());
            assert_eq!(coeff, tq.a.to_integer(), "q={q}");
        }
    }

    #[test]
    fn quadratic_against_matrix() {
        let f = GroupRingElement::from_terms([
            (Monomial::new(0, 0, 0), 3),
            (Monomial::new(0, 1, 1), -1),
            (Monomial::new(1, 0, 0), 2),
            (Monomial::new(1, -1, 2), 1),
            (Monomial::new(2, 0, 0), 1),
            (Monomial::new(2, 2, -1), -2),
        ])
        .unwrap();
        let g = quadratic_parts(&f).unwrap();
        for q in [3usize, 4, 5, 7, 8] {
            let zeta = circle(1.0 / q as f64);
            let (xi, eta) = (circle(0.17), circle(0.61));
            let d = quadratic_det_formula(&g, zeta, xi, eta, q).unwrap();
            let dense = build_a_matrix(&f, zeta, q, xi, eta).unwrap().det();
            assert!((d - dense).norm() < 1e-9 * dense.norm().max(1.0), "q={q}");
        }
    }

    #[test]
    fn simple_condition_detects_example() {
        // g₀ = −g(yz⁻¹,z) g(y,z), g₁ = g, g₂ = 1 with g = 3 + y
        let gy = LaurentPoly2::from_terms([((0, 0), 3), ((1, 0), 1)]).unwrap();
        let g0 = gy
            .monomial_substitute(1, -1, 0, 1)
            .unwrap()
            .mul(&gy)
            .unwrap()
            .neg()
            .unwrap();
        let parts = [g0, gy.clone(), LaurentPoly2::constant(1)];
        assert!(simple_det_condition(&parts).unwrap());
        let other = [LaurentPoly2::constant(1), gy, LaurentPoly2::constant(1)];
        assert!(!simple_det_condition(&other).unwrap());
    }
}
