use core::ops::Mul;

use super::{Point3, UnitQuaternion};
use crate::math;
use crate::{Error, Result};

/// Largest `|RᵀR − I|` entry / `|det R − 1|` accepted when validating input.
pub const ROTATION_TOLERANCE: f64 = 1e-4;

/// A 3×3 rotation matrix. Row-major storage; the columns are the rotated
/// frame axes `[v_x | v_y | v_z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Default for Rotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Validates orthonormality and a positive determinant.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = Rotation { m };
        let deviation = r.orthonormality_error();
        if !(deviation <= ROTATION_TOLERANCE) {
            return Err(Error::InvalidRotation { deviation });
        }
        Ok(r)
    }

    /// Row-major flat array, as stored in trajectory files.
    pub fn from_row_major(a: [f64; 9]) -> Result<Self> {
        Self::from_matrix([[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]])
    }

    /// Builds `[x | y | z]` without validation. Callers guarantee orthonormality.
    pub(crate) fn from_columns_unchecked(x: Point3, y: Point3, z: Point3) -> Self {
        Rotation {
            m: [[x.x, y.x, z.x], [x.y, y.y, z.y], [x.z, y.z, z.z]],
        }
    }

    pub fn from_columns(x: Point3, y: Point3, z: Point3) -> Result<Self> {
        Self::from_matrix(Self::from_columns_unchecked(x, y, z).m)
    }

    /// Rotation by `angle` radians about `axis` (need not be normalized).
    pub fn from_axis_angle(axis: Point3, angle: f64) -> Self {
        UnitQuaternion::from_axis_angle(axis, angle).to_rotation()
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.m;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn column(&self, c: usize) -> Point3 {
        Point3::new(self.m[0][c], self.m[1][c], self.m[2][c])
    }

    pub fn transpose(&self) -> Rotation {
        let m = &self.m;
        Rotation {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn inverse(&self) -> Rotation {
        self.transpose()
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let m = &self.m;
        Point3::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }

    pub fn determinant(&self) -> f64 {
        self.column(0).dot(self.column(1).cross(self.column(2)))
    }

    /// Max of `|RᵀR − I|` entries and `|det R − 1|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = (self.determinant() - 1.0).abs();
        for i in 0..3 {
            for j in 0..3 {
                let g = self.column(i).dot(self.column(j));
                let target = if i == j { 1.0 } else { 0.0 };
                let e = (g - target).abs();
                if !(e <= worst) {
                    worst = e;
                }
            }
        }
        worst
    }

    /// Frobenius norm of `self − other`.
    pub fn frobenius_distance(&self, other: &Rotation) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.m[i][j] - other.m[i][j];
                s += d * d;
            }
        }
        math::sqrt(s)
    }

    /// Geodesic angle between two rotations, radians in `[0, π]`.
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        self.to_quaternion().angle_to(other.to_quaternion())
    }

    /// Shepperd's method; the result has `w ≥ 0`.
    pub fn to_quaternion(&self) -> UnitQuaternion {
        let m = &self.m;
        let trace = m[0][0] + m[1][1] + m[2][2];
        let (w, x, y, z);
        if trace >= m[0][0] && trace >= m[1][1] && trace >= m[2][2] {
            let s = 2.0 * math::sqrt(1.0 + trace);
            w = 0.25 * s;
            x = (m[2][1] - m[1][2]) / s;
            y = (m[0][2] - m[2][0]) / s;
            z = (m[1][0] - m[0][1]) / s;
        } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
            let s = 2.0 * math::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]);
            w = (m[2][1] - m[1][2]) / s;
            x = 0.25 * s;
            y = (m[0][1] + m[1][0]) / s;
            z = (m[0][2] + m[2][0]) / s;
        } else if m[1][1] >= m[2][2] {
            let s = 2.0 * math::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]);
            w = (m[0][2] - m[2][0]) / s;
            x = (m[0][1] + m[1][0]) / s;
            y = 0.25 * s;
            z = (m[1][2] + m[2][1]) / s;
        } else {
            let s = 2.0 * math::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]);
            w = (m[1][0] - m[0][1]) / s;
            x = (m[0][2] + m[2][0]) / s;
            y = (m[1][2] + m[2][1]) / s;
            z = 0.25 * s;
        }
        let q = UnitQuaternion::new_normalize(w, x, y, z);
        if q.w < 0.0 {
            -q
        } else {
            q
        }
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, o: Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Rotation { m }
    }
}

impl Mul<Point3> for Rotation {
    type Output = Point3;
    fn mul(self, p: Point3) -> Point3 {
        self.apply(p)
    }
}

/// Converts a rotation matrix to its unit quaternion (`w ≥ 0`).
///
/// Fails with [`Error::InvalidRotation`] when the matrix deviates from SO(3)
/// by more than [`ROTATION_TOLERANCE`].
pub fn rotation_to_quat(r: &Rotation) -> Result<UnitQuaternion> {
    let deviation = r.orthonormality_error();
    if !(deviation <= ROTATION_TOLERANCE) {
        return Err(Error::InvalidRotation { deviation });
    }
    Ok(r.to_quaternion())
}

pub fn quat_to_rotation(q: &UnitQuaternion) -> Rotation {
    q.to_rotation()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_unit_quaternion() {
        let q = rotation_to_quat(&Rotation::IDENTITY).unwrap();
        assert_eq!((q.w, q.x, q.y, q.z), (1.0, 0.0, 0.0, 0.0));
        assert_eq!(quat_to_rotation(&q), Rotation::IDENTITY);
    }

    #[test]
    fn half_turn_about_x() {
        let r = Rotation::from_matrix([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
            .unwrap();
        let q = rotation_to_quat(&r).unwrap();
        assert!((q.w).abs() < 1e-15);
        assert!((q.x - 1.0).abs() < 1e-15);
        assert!(q.y.abs() < 1e-15 && q.z.abs() < 1e-15);
        assert!(quat_to_rotation(&q).frobenius_distance(&r) < 1e-12);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let err = Rotation::from_matrix([[1.0, 0.01, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidRotation { .. }));
        // reflection
        let err = Rotation::from_matrix([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidRotation { .. }));
    }

    #[test]
    fn accepts_small_drift() {
        let r = Rotation::from_matrix([[1.0, 1e-5, 0.0], [-1e-5, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(r.is_ok());
    }
}
