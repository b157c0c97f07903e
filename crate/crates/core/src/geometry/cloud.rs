use alloc::vec::Vec;

use super::{point::centroid, Point3, Rotation};
use crate::{Error, Result};

/// Pixel grid of an organized cloud: `points[v * width + u]` is the sample of
/// pixel column `u`, row `v`, usable only where `valid` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct OrganizedGrid {
    pub width: usize,
    pub height: usize,
    pub valid: Vec<bool>,
}

impl OrganizedGrid {
    pub fn index(&self, u: usize, v: usize) -> usize {
        v * self.width + u
    }
}

/// A set of 3D points, optionally organized on a pixel grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    points: Vec<Point3>,
    grid: Option<OrganizedGrid>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Self {
        PointCloud { points, grid: None }
    }

    /// Organized cloud; `points` and `valid` are row-major with `width × height` entries.
    pub fn organized(
        width: usize,
        height: usize,
        points: Vec<Point3>,
        valid: Vec<bool>,
    ) -> Result<Self> {
        let n = width
            .checked_mul(height)
            .ok_or(Error::DegenerateInput("grid size overflows"))?;
        if points.len() != n || valid.len() != n {
            return Err(Error::DegenerateInput(
                "organized cloud needs width*height points and mask entries",
            ));
        }
        if points.iter().zip(&valid).any(|(p, ok)| *ok && !p.is_finite()) {
            return Err(Error::DegenerateInput("valid organized point is not finite"));
        }
        Ok(PointCloud {
            points,
            grid: Some(OrganizedGrid {
                width,
                height,
                valid,
            }),
        })
    }

    /// All stored points, including masked-out grid entries.
    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn grid(&self) -> Option<&OrganizedGrid> {
        self.grid.as_ref()
    }

    pub fn is_organized(&self) -> bool {
        self.grid.is_some()
    }

    pub fn is_valid(&self, index: usize) -> bool {
        match &self.grid {
            Some(g) => g.valid[index],
            None => true,
        }
    }

    /// `(index, point)` of every usable point, in storage order.
    pub fn valid_points(&self) -> impl Iterator<Item = (usize, Point3)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.is_valid(*i))
            .map(|(i, p)| (i, *p))
    }

    pub fn valid_len(&self) -> usize {
        match &self.grid {
            Some(g) => g.valid.iter().filter(|v| **v).count(),
            None => self.points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.valid_len() == 0
    }

    pub fn centroid(&self) -> Option<Point3> {
        centroid(self.valid_points().map(|(_, p)| p))
    }

    /// Applies `p ↦ R p + t` to every point, keeping the grid.
    pub fn transformed(&self, rotation: &Rotation, translation: Point3) -> PointCloud {
        PointCloud {
            points: self
                .points
                .iter()
                .map(|p| rotation.apply(*p) + translation)
                .collect(),
            grid: self.grid.clone(),
        }
    }

    pub fn translated(&self, delta: Point3) -> PointCloud {
        self.transformed(&Rotation::IDENTITY, delta)
    }

    /// Usable points only, as an unorganized cloud.
    pub fn to_unorganized(&self) -> PointCloud {
        PointCloud::new(self.valid_points().map(|(_, p)| p).collect())
    }
}

/// Keeps every `ceil(len / max)`-th point so that at most `max` remain.
pub(crate) fn thin(points: Vec<Point3>, max: usize) -> Vec<Point3> {
    if points.len() <= max {
        return points;
    }
    let stride = points.len().div_ceil(max);
    points.into_iter().step_by(stride).collect()
}

/// Closest cloud point to a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nearest {
    pub distance: f64,
    pub point: Point3,
    pub index: usize,
}

/// Exact nearest neighbor by linear scan; ties go to the lowest index.
pub fn min_distance(p: Point3, cloud: &PointCloud) -> Result<Nearest> {
    let mut best: Option<(f64, usize, Point3)> = None;
    for (i, q) in cloud.valid_points() {
        let d2 = p.distance_squared(q);
        if best.is_none_or(|(b, _, _)| d2 < b) {
            best = Some((d2, i, q));
        }
    }
    let (d2, index, point) = best.ok_or(Error::DegenerateInput("empty point cloud"))?;
    Ok(Nearest {
        distance: crate::math::sqrt(d2),
        point,
        index,
    })
}

/// Farthest cloud point from `p`; ties go to the lowest index.
pub(crate) fn farthest_point(p: Point3, cloud: &PointCloud) -> Result<(usize, Point3)> {
    let mut best: Option<(f64, usize, Point3)> = None;
    for (i, q) in cloud.valid_points() {
        let d2 = p.distance_squared(q);
        if best.is_none_or(|(b, _, _)| d2 > b) {
            best = Some((d2, i, q));
        }
    }
    best.map(|(_, i, q)| (i, q))
        .ok_or(Error::DegenerateInput("empty point cloud"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_square_grid() -> PointCloud {
        let mut pts = Vec::new();
        for i in 0..=4 {
            for j in 0..=4 {
                pts.push(Point3::new(i as f64 * 0.25, j as f64 * 0.25, 0.0));
            }
        }
        PointCloud::new(pts)
    }

    #[test]
    fn coincident_point_has_zero_distance() {
        let c = unit_square_grid();
        let n = min_distance(Point3::new(0.5, 0.75, 0.0), &c).unwrap();
        assert_eq!(n.distance, 0.0);
    }

    #[test]
    fn above_corner() {
        let n = min_distance(Point3::new(0.0, 0.0, 1.0), &unit_square_grid()).unwrap();
        assert_eq!(n.distance, 1.0);
        assert_eq!(n.point, Point3::ZERO);
        assert_eq!(n.index, 0);
    }

    #[test]
    fn ties_prefer_lowest_index() {
        let c = PointCloud::new(vec![Point3::X, -Point3::X, Point3::Y]);
        assert_eq!(min_distance(Point3::ZERO, &c).unwrap().index, 0);
        assert_eq!(farthest_point(Point3::ZERO, &c).unwrap().0, 0);
    }

    #[test]
    fn empty_cloud_is_degenerate() {
        assert!(min_distance(Point3::ZERO, &PointCloud::default()).is_err());
        let masked =
            PointCloud::organized(2, 1, vec![Point3::X, Point3::Y], vec![false, false]).unwrap();
        assert!(min_distance(Point3::ZERO, &masked).is_err());
    }

    #[test]
    fn masked_points_are_ignored() {
        let c = PointCloud::organized(
            2,
            1,
            vec![Point3::ZERO, Point3::new(5.0, 0.0, 0.0)],
            vec![false, true],
        )
        .unwrap();
        assert_eq!(min_distance(Point3::ZERO, &c).unwrap().index, 1);
        assert_eq!(c.centroid(), Some(Point3::new(5.0, 0.0, 0.0)));
    }

    #[test]
    fn organized_shape_checked() {
        assert!(PointCloud::organized(2, 2, vec![Point3::ZERO; 3], vec![true; 4]).is_err());
    }
}
