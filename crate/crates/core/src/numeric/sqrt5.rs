use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// `a + b√5` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sqrt5Number {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Sqrt5Number {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Sqrt5Number { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        Sqrt5Number {
            a: rat(n, 1),
            b: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `τ = (1 + √5)/2`.
    pub fn tau() -> Self {
        Sqrt5Number {
            a: rat(1, 2),
            b: rat(1, 2),
        }
    }

    /// `σ = (1 - √5)/2`.
    pub fn sigma() -> Self {
        Sqrt5Number {
            a: rat(1, 2),
            b: rat(-1, 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b√5`.
    pub fn conj(&self) -> Self {
        Sqrt5Number {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// `a² - 5b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return invalid("inverse of zero in Q(√5)");
        }
        Ok(Sqrt5Number {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

impl Add for &Sqrt5Number {
    type Output = Sqrt5Number;
    fn add(self, o: &Sqrt5Number) -> Sqrt5Number {
        Sqrt5Number {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &Sqrt5Number {
    type Output = Sqrt5Number;
    fn sub(self, o: &Sqrt5Number) -> Sqrt5Number {
        Sqrt5Number {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &Sqrt5Number {
    type Output = Sqrt5Number;
    fn mul(self, o: &Sqrt5Number) -> Sqrt5Number {
        let five = BigRational::from_integer(BigInt::from(5));
        Sqrt5Number {
            a: &self.a * &o.a + five * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &Sqrt5Number {
    type Output = Sqrt5Number;
    fn neg(self) -> Sqrt5Number {
        Sqrt5Number {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl fmt::Display for Sqrt5Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt5", self.a, self.b)
    }
}

/// Polynomial over `Q(√5)` with ascending coefficients from `z^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sqrt5Poly {
    pub coeffs: Vec<Sqrt5Number>,
}

impl Sqrt5Poly {
    pub fn new(mut coeffs: Vec<Sqrt5Number>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Sqrt5Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|v| Sqrt5Number::from_int(*v)).collect())
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Sqrt5Number::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Sqrt5Number::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Rational coefficients, or `None` if some `b`-part is nonzero.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_rational() {
                    Some(c.a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Integer coefficients, or `None` if not all coefficients are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<i128>> {
        self.rational_coeffs()?
            .into_iter()
            .map(|r| {
                if r.denom().is_one() {
                    r.to_integer().to_i128()
                } else {
                    None
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_identities() {
        let t = Sqrt5Number::tau();
        let s = Sqrt5Number::sigma();
        assert_eq!(&t * &s, Sqrt5Number::from_int(-1));
        assert_eq!(&t + &s, Sqrt5Number::one());
        assert_eq!(t.conj(), s);
        assert_eq!(&t * &t.inv().unwrap(), Sqrt5Number::one());
        assert!((t.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn conjugate_product_is_rational() {
        let p = Sqrt5Poly::new(vec![
            Sqrt5Number::tau(),
            Sqrt5Number::from_int(3),
            Sqrt5Number::sigma().pow(3),
        ]);
        let q = p.mul(&p.conj());
        assert!(q.rational_coeffs().is_some());
    }
}
