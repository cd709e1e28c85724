use serde::{Deserialize, Serialize};

/// Convex hull of the `(k, l)` support of an element, vertices counterclockwise
/// in strictly convex position. Degenerate hulls (a point or a segment) keep
/// one or two vertices; the zero element has no vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, i64)>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

impl NewtonPolygon {
    pub fn empty() -> Self {
        NewtonPolygon {
            vertices: Vec::new(),
        }
    }

    /// Monotone-chain hull; collinear points are dropped.
    pub fn hull<I: IntoIterator<Item = (i64, i64)>>(points: I) -> Self {
        let mut pts: Vec<(i64, i64)> = points.into_iter().collect();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 2 {
            return NewtonPolygon { vertices: pts };
        }
        let mut lower: Vec<(i64, i64)> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<(i64, i64)> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        NewtonPolygon { vertices: lower }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Minkowski sum, computed as the hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &NewtonPolygon) -> NewtonPolygon {
        if self.is_empty() || other.is_empty() {
            return NewtonPolygon::empty();
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push((a.0 + b.0, a.1 + b.1));
            }
        }
        NewtonPolygon::hull(pts)
    }

    /// Twice the enclosed area.
    pub fn double_area(&self) -> i128 {
        let n = self.vertices.len();
        if n < 3 {
            return 0;
        }
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128
            })
            .sum()
    }

    /// Edges as consecutive vertex pairs. A segment hull has a single edge.
    pub fn edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        match self.vertices.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            n => (0..n)
                .map(|i| (self.vertices[i], self.vertices[(i + 1) % n]))
                .collect(),
        }
    }

    /// True when `p` lies on the closed segment `[a, b]`.
    pub fn on_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
        cross(a, b, p) == 0
            && p.0 >= a.0.min(b.0)
            && p.0 <= a.0.max(b.0)
            && p.1 >= a.1.min(b.1)
            && p.1 <= a.1.max(b.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let n = NewtonPolygon::hull([(1, 1), (1, 0), (0, 1), (0, 0)]);
        assert_eq!(n.vertices, vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(n.double_area(), 2);
    }

    #[test]
    fn collinear_points_dropped() {
        let n = NewtonPolygon::hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1)]);
        assert_eq!(n.vertices, vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
        let seg = NewtonPolygon::hull([(0, 0), (1, 1), (2, 2)]);
        assert_eq!(seg.vertices, vec![(0, 0), (2, 2)]);
    }

    #[test]
    fn segments_sum_to_square() {
        let a = NewtonPolygon::hull([(0, 0), (0, 1)]);
        let b = NewtonPolygon::hull([(0, 0), (1, 0)]);
        assert_eq!(
            a.minkowski_sum(&b).vertices,
            vec![(0, 0), (1, 0), (1, 1), (0, 1)]
        );
    }
}
