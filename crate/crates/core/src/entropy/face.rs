use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::laurent::LaurentPoly2;
use crate::numeric::mahler1;
use crate::ring::GroupRingElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceBound {
    /// Endpoints of the face; equal for a vertex.
    pub from: (i64, i64),
    pub to: (i64, i64),
    /// Primitive direction `(p, q)` of an edge.
    pub direction: Option<(i64, i64)>,
    /// `f_F` written in `w = x^p y^q` and `z`, after the unit `x^a y^b`.
    pub face_poly: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceBoundReport {
    pub faces: Vec<FaceBound>,
    /// `max_F m(f_F)`.
    pub bound: f64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `x^{a+jp} y^{b+jq} = x^a y^b (x^p y^q)^j z^{e_j}` with
/// `e_j = −pq·j(j−1)/2 − b·p·j`.
fn twist(b: i64, p: i64, q: i64, j: i64) -> i64 {
    -p * q * j * (j - 1) / 2 - b * p * j
}

/// Lower bounds `h(α_f) ≥ m(f_F)` for every vertex and edge of the Newton polygon.
pub fn face_entropy_lower_bound(f: &GroupRingElement, grid: usize) -> Result<FaceBoundReport> {
    if f.is_zero() {
        return invalid("the zero element has no faces");
    }
    let polys = f.coefficient_polys()?;
    let newton = f.newton_polygon();
    let mut faces = Vec::new();
    for v in &newton.vertices {
        let c = &polys[v];
        let m = mahler1(&c.to_cpoly())?;
        faces.push(FaceBound {
            from: *v,
            to: *v,
            direction: None,
            face_poly: c.fmt_var("z"),
            value: m.log_value,
            error: m.error_bound,
        });
    }
    for (a, b) in newton.edges() {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let g = gcd(dx, dy);
        let (p, q) = (dx / g, dy / g);
        let mut terms = Vec::new();
        for j in 0..=g {
            if let Some(c) = polys.get(&(a.0 + j * p, a.1 + j * q)) {
                let e = twist(a.1, p, q, j);
                terms.extend(c.terms().map(|(m, v)| ((j, m + e), v)));
            }
        }
        let face = LaurentPoly2::from_terms(terms)?;
        let m = super::zero::mahler2_min_order(&face, grid)?;
        faces.push(FaceBound {
            from: a,
            to: b,
            direction: Some((p, q)),
            face_poly: face.fmt_vars("w", "z"),
            value: m.log_value,
            error: m.error_bound,
        });
    }
    let bound = faces
        .iter()
        .map(|f| f.value)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FaceBoundReport { faces, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn elem(terms: &[((i64, i64, i64), i128)]) -> GroupRingElement {
        GroupRingElement::from_terms(
            terms
                .iter()
                .map(|((k, l, m), c)| (Monomial::new(*k, *l, *m), *c)),
        )
        .unwrap()
    }

    #[test]
    fn twist_matches_group_law() {
        for (b, p, q) in [(0, 1, 0), (2, 1, 1), (-1, 2, -3), (3, -1, 2)] {
            let base = Monomial::new(5, b, 0);
            let w = Monomial::new(p, q, 0);
            for j in 0..5 {
                let lhs = base.mul(&w.pow(j).unwrap()).unwrap();
                assert_eq!((lhs.k, lhs.l), (5 + j * p, b + j * q));
                assert_eq!(-lhs.m, twist(b, p, q, j), "b={b} p={p} q={q} j={j}");
            }
        }
    }

    #[test]
    fn three_plus_x_plus_y() {
        let f = elem(&[((0, 0, 0), 3), ((1, 0, 0), 1), ((0, 1, 0), 1)]);
        let r = face_entropy_lower_bound(&f, 128).unwrap();
        assert!((r.bound - 3f64.ln()).abs() < 1e-9);
        let hyp = r
            .faces
            .iter()
            .find(|f| f.direction == Some((-1, 1)))
            .unwrap();
        assert!(hyp.value.abs() < 1e-9);
    }

    #[test]
    fn unit_square_bottom_edge() {
        let f = elem(&[
            ((1, 1, 2), 1),
            ((1, 0, 1), -1),
            ((0, 1, 0), 1),
            ((0, 0, 1), -1),
        ]);
        let r = face_entropy_lower_bound(&f, 64).unwrap();
        let bottom = r
            .faces
            .iter()
            .find(|f| f.from == (0, 0) && f.to == (1, 0))
            .unwrap();
        assert!(bottom.value.abs() < 1e-9);
        assert!(r
            .faces
            .iter()
            .filter(|f| f.direction.is_none())
            .all(|f| f.value.abs() < 1e-12));
    }

    #[test]
    fn single_vertex() {
        let f = elem(&[((2, 1, 0), 2), ((2, 1, 1), -1)]);
        let r = face_entropy_lower_bound(&f, 16).unwrap();
        assert_eq!(r.faces.len(), 1);
        assert!((r.bound - 2f64.ln()).abs() < 1e-12);
    }
}
