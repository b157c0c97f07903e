use super::eigen::{scatter, symmetric_eigen3};
use super::Point3;
use crate::{Error, Result};

/// Second-largest over largest scatter eigenvalue below which a point set is
/// considered collinear.
pub(crate) const COLLINEAR_RATIO: f64 = 1e-12;

/// Plane `{ p : n·p + b = 0 }` with unit normal `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Point3,
    pub offset: f64,
}

impl Plane {
    /// Normalizes `normal`; `None` if it has zero length.
    pub fn new(normal: Point3, offset: f64) -> Option<Plane> {
        let n = normal.norm();
        (n > 0.0).then(|| Plane {
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn through_point(normal: Point3, point: Point3) -> Option<Plane> {
        let n = normal.try_normalize()?;
        Some(Plane {
            normal: n,
            offset: -n.dot(point),
        })
    }

    #[inline]
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) + self.offset
    }

    /// Flips the normal so that its largest-magnitude component is positive
    /// (first such component on ties).
    pub fn canonicalized(self) -> Plane {
        let n = self.normal.to_array();
        let mut k = 0;
        for i in 1..3 {
            if n[i].abs() > n[k].abs() {
                k = i;
            }
        }
        if n[k] < 0.0 {
            Plane {
                normal: -self.normal,
                offset: -self.offset,
            }
        } else {
            self
        }
    }
}

/// Result of a least-squares plane fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFit {
    pub plane: Plane,
    /// `Σ (n·p + b)²` over the fitted points.
    pub residual: f64,
    pub centroid: Point3,
    /// Scatter-matrix eigenvalues, ascending.
    pub eigenvalues: [f64; 3],
}

/// Least-squares plane `argmin Σ (n·p + b)²` subject to `‖n‖ = 1`.
///
/// Closed form: the normal is the eigenvector of the smallest eigenvalue of
/// the centered scatter matrix, `b = −n·centroid`. The normal is returned in
/// canonical sign (see [`Plane::canonicalized`]).
pub fn fit_plane(points: &[Point3]) -> Result<PlaneFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput("plane fit needs at least 3 points"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite point"));
    }
    let (centroid, s) = scatter(points);
    let (values, vectors) = symmetric_eigen3(s);
    if !(values[2] > 0.0) || values[1] <= COLLINEAR_RATIO * values[2] {
        return Err(Error::DegenerateInput("points are collinear"));
    }
    let plane = Plane::through_point(vectors[0], centroid)
        .expect("eigenvectors are unit length")
        .canonicalized();
    Ok(PlaneFit {
        plane,
        residual: residual(&plane, points),
        centroid,
        eigenvalues: values,
    })
}

pub(crate) fn residual(plane: &Plane, points: &[Point3]) -> f64 {
    points
        .iter()
        .map(|p| {
            let d = plane.signed_distance(*p);
            d * d
        })
        .sum()
}

/// Orthogonal projection of `p` onto `plane`.
pub fn project_to_plane(p: Point3, plane: &Plane) -> Point3 {
    p - plane.normal * plane.signed_distance(p)
}
