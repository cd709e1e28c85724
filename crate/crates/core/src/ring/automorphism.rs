use serde::{Deserialize, Serialize};

use super::{GroupRingElement, Monomial};
use crate::error::{invalid, Result};

/// The automorphism `x ↦ x^a y^b z^r`, `y ↦ x^c y^d z^s`, `z ↦ z^{ad-bc}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub r: i64,
    pub s: i64,
}

impl GroupAutomorphism {
    pub fn new(a: i64, b: i64, c: i64, d: i64, r: i64, s: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 && det != -1 {
            return invalid(format!("automorphism determinant ad-bc = {det} is not ±1"));
        }
        Ok(GroupAutomorphism { a, b, c, d, r, s })
    }

    pub fn identity() -> Self {
        GroupAutomorphism {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
            r: 0,
            s: 0,
        }
    }

    /// `x ↔ y`, `z ↦ z^{-1}`.
    pub fn swap_xy() -> Self {
        GroupAutomorphism {
            a: 0,
            b: 1,
            c: 1,
            d: 0,
            r: 0,
            s: 0,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn image_x(&self) -> Monomial {
        Monomial::new(self.a, self.b, self.r)
    }

    pub fn image_y(&self) -> Monomial {
        Monomial::new(self.c, self.d, self.s)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<Monomial> {
        let xs = self.image_x().pow(m.k)?;
        let ys = self.image_y().pow(m.l)?;
        let zs = Monomial::new(0, 0, self.det()).pow(m.m)?;
        xs.mul(&ys)?.mul(&zs)
    }

    pub fn apply(&self, f: &GroupRingElement) -> Result<GroupRingElement> {
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            terms.push((self.apply_monomial(m)?, *c));
        }
        GroupRingElement::from_terms(terms)
    }

    /// The inverse automorphism.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        // Linear part inverts as a 2x2 integer matrix; the z-shifts are then
        // solved from the requirement that x and y are fixed by the composite.
        let (a, b, c, d) = (self.d * det, -self.b * det, -self.c * det, self.a * det);
        let mut inv = GroupAutomorphism {
            a,
            b,
            c,
            d,
            r: 0,
            s: 0,
        };
        let img_x = self.apply_monomial(&inv.image_x())?;
        let img_y = self.apply_monomial(&inv.image_y())?;
        inv.r = -img_x.m * det;
        inv.s = -img_y.m * det;
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> GroupRingElement {
        GroupRingElement::x()
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(GroupAutomorphism::new(2, 0, 0, 1, 0, 0).is_err());
        assert!(GroupAutomorphism::new(1, 1, 1, 2, 3, -1).is_ok());
    }

    #[test]
    fn z_maps_to_det_power() {
        let phi = GroupAutomorphism::swap_xy();
        assert_eq!(
            phi.apply(&GroupRingElement::z()).unwrap(),
            GroupRingElement::monomial(Monomial::new(0, 0, -1), 1)
        );
        let id = GroupAutomorphism::identity();
        let f = x().add(&GroupRingElement::y()).unwrap();
        assert_eq!(id.apply(&f).unwrap(), f);
    }

    #[test]
    fn relation_is_preserved() {
        let phi = GroupAutomorphism::new(2, 1, 1, 1, 3, -2).unwrap();
        let y = GroupRingElement::y();
        let z = GroupRingElement::z();
        let lhs = phi.apply(&y.mul(&x()).unwrap()).unwrap();
        let rhs = phi
            .apply(&x())
            .unwrap()
            .mul(&phi.apply(&y).unwrap())
            .unwrap()
            .mul(&phi.apply(&z).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trips() {
        let phi = GroupAutomorphism::new(2, 1, 1, 1, 3, -2).unwrap();
        let inv = phi.inverse().unwrap();
        for m in [
            Monomial::x(),
            Monomial::y(),
            Monomial::z(),
            Monomial::new(3, -1, 4),
        ] {
            assert_eq!(
                phi.apply_monomial(&inv.apply_monomial(&m).unwrap())
                    .unwrap(),
                m
            );
            assert_eq!(
                inv.apply_monomial(&phi.apply_monomial(&m).unwrap())
                    .unwrap(),
                m
            );
        }
    }
}
