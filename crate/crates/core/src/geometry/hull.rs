use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::Point3;

/// Relative (to the bounding-box diagonal) tolerance for visibility and
/// degeneracy tests during hull construction.
const HULL_EPS: f64 = 1e-10;

/// Triangle of a convex hull with its outward plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullFacet {
    pub vertices: [usize; 3],
    pub normal: Point3,
    pub offset: f64,
}

impl HullFacet {
    fn new(points: &[Point3], a: usize, b: usize, c: usize) -> Option<HullFacet> {
        let n = (points[b] - points[a]).cross(points[c] - points[a]);
        let normal = n.try_normalize()?;
        Some(HullFacet {
            vertices: [a, b, c],
            normal,
            offset: -normal.dot(points[a]),
        })
    }

    #[inline]
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) + self.offset
    }
}

/// 3D convex hull as a set of outward-oriented triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull {
    facets: Vec<HullFacet>,
}

impl ConvexHull {
    /// Incremental construction. `None` when fewer than four points are
    /// affinely independent (empty, collinear or coplanar input).
    pub fn build(points: &[Point3]) -> Option<ConvexHull> {
        if points.len() < 4 || points.iter().any(|p| !p.is_finite()) {
            return None;
        }
        let (lo, hi) = points.iter().fold(
            (points[0], points[0]),
            |(lo, hi), p| {
                (
                    Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z)),
                    Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z)),
                )
            },
        );
        let eps = HULL_EPS * (hi - lo).norm().max(f64::MIN_POSITIVE);

        let argmax = |f: &dyn Fn(Point3) -> f64| -> (usize, f64) {
            let mut best = (0, f64::NEG_INFINITY);
            for (i, p) in points.iter().enumerate() {
                let v = f(*p);
                if v > best.1 {
                    best = (i, v);
                }
            }
            best
        };

        let (i0, _) = argmax(&|p| -p.x);
        let p0 = points[i0];
        let (i1, d1) = argmax(&|p| p.distance(p0));
        if d1 <= eps {
            return None;
        }
        let dir = (points[i1] - p0) / d1;
        let (i2, d2) = argmax(&|p| (p - p0).cross(dir).norm());
        if d2 <= eps {
            return None;
        }
        let normal = (points[i1] - p0).cross(points[i2] - p0);
        let normal = normal / normal.norm();
        let (i3, d3) = argmax(&|p| normal.dot(p - p0).abs());
        if d3 <= eps {
            return None;
        }

        let simplex = [i0, i1, i2, i3];
        let inner = (p0 + points[i1] + points[i2] + points[i3]) * 0.25;
        let mut facets = Vec::new();
        for (a, b, c) in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)] {
            let mut f = HullFacet::new(points, a, b, c)?;
            if f.signed_distance(inner) > 0.0 {
                f = HullFacet::new(points, a, c, b)?;
            }
            facets.push(f);
        }

        for (i, &p) in points.iter().enumerate() {
            if simplex.contains(&i) {
                continue;
            }
            let visible: Vec<bool> = facets.iter().map(|f| f.signed_distance(p) > eps).collect();
            if !visible.iter().any(|v| *v) {
                continue;
            }
            let mut edges = BTreeSet::new();
            for (f, _) in facets.iter().zip(&visible).filter(|(_, v)| **v) {
                let [a, b, c] = f.vertices;
                edges.insert((a, b));
                edges.insert((b, c));
                edges.insert((c, a));
            }
            let horizon: Vec<(usize, usize)> = edges
                .iter()
                .filter(|(a, b)| !edges.contains(&(*b, *a)))
                .copied()
                .collect();
            let mut next: Vec<HullFacet> = facets
                .iter()
                .zip(&visible)
                .filter(|(_, v)| !**v)
                .map(|(f, _)| *f)
                .collect();
            next.extend(
                horizon
                    .into_iter()
                    .filter_map(|(a, b)| HullFacet::new(points, a, b, i)),
            );
            facets = next;
        }
        Some(ConvexHull { facets })
    }

    pub fn facets(&self) -> &[HullFacet] {
        &self.facets
    }

    /// Largest facet-plane signed distance. Positive outside the hull; for
    /// points inside, its negation is the distance to the nearest facet.
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.facets
            .iter()
            .map(|f| f.signed_distance(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Depth of `p` below the hull boundary, zero outside.
    pub fn penetration_depth(&self, p: Point3) -> f64 {
        (-self.signed_distance(p)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cube_corners() -> Vec<Point3> {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push(Point3::new(
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ));
        }
        v
    }

    #[test]
    fn cube_depth_at_center() {
        let hull = ConvexHull::build(&cube_corners()).unwrap();
        assert_eq!(hull.facets().len(), 12);
        assert!((hull.penetration_depth(Point3::new(0.5, 0.5, 0.5)) - 0.5).abs() < 1e-12);
        assert!((hull.penetration_depth(Point3::new(0.9, 0.5, 0.5)) - 0.1).abs() < 1e-12);
        assert_eq!(hull.penetration_depth(Point3::new(2.0, 0.5, 0.5)), 0.0);
        assert!((hull.signed_distance(Point3::new(2.0, 0.5, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interior_points_do_not_change_hull() {
        let mut pts = cube_corners();
        pts.push(Point3::new(0.5, 0.5, 0.5));
        pts.push(Point3::new(0.2, 0.7, 0.1));
        let hull = ConvexHull::build(&pts).unwrap();
        for f in hull.facets() {
            assert!(f.vertices.iter().all(|v| *v < 8));
            for p in &pts {
                assert!(f.signed_distance(*p) < 1e-12);
            }
        }
    }

    #[test]
    fn flat_input_has_no_hull() {
        let pts = vec![Point3::ZERO, Point3::X, Point3::Y, Point3::new(1.0, 1.0, 0.0)];
        assert!(ConvexHull::build(&pts).is_none());
        assert!(ConvexHull::build(&pts[..3]).is_none());
    }
}
