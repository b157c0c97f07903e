use core::ops::{Mul, Neg};

use super::{Point3, Rotation};
use crate::math;

/// `|q_i · q_j|` above which two quaternions are treated as the same rotation.
pub const SLERP_DEGENERATE_DOT: f64 = 1.0 - 1e-10;

/// Unit quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Default for UnitQuaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new_normalize(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = math::sqrt(w * w + x * x + y * y + z * z);
        UnitQuaternion {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    pub fn from_axis_angle(axis: Point3, angle: f64) -> Self {
        let a = axis / axis.norm();
        let (s, c) = (math::sin(0.5 * angle), math::cos(0.5 * angle));
        UnitQuaternion::new_normalize(c, a.x * s, a.y * s, a.z * s)
    }

    pub fn vector(&self) -> Point3 {
        Point3::new(self.x, self.y, self.z)
    }

    pub fn dot(&self, o: UnitQuaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.dot(*self))
    }

    pub fn conjugate(&self) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Rotation angle of this quaternion, radians in `[0, π]`.
    pub fn angle(&self) -> f64 {
        2.0 * math::atan2(self.vector().norm(), self.w.abs())
    }

    /// Geodesic angle between the rotations represented by `self` and `o`.
    pub fn angle_to(&self, o: UnitQuaternion) -> f64 {
        (self.conjugate() * o).angle()
    }

    pub fn to_rotation(&self) -> Rotation {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        let (xx, yy, zz) = (x * x, y * y, z * z);
        let (xy, xz, yz) = (x * y, x * z, y * z);
        let (wx, wy, wz) = (w * x, w * y, w * z);
        Rotation::from_columns_unchecked(
            Point3::new(1.0 - 2.0 * (yy + zz), 2.0 * (xy + wz), 2.0 * (xz - wy)),
            Point3::new(2.0 * (xy - wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz + wx)),
            Point3::new(2.0 * (xz + wy), 2.0 * (yz - wx), 1.0 - 2.0 * (xx + yy)),
        )
    }

    /// Raises to a real power along the shorter arc: `(cos φ, sin φ·u)^α`.
    fn powf(&self, alpha: f64) -> UnitQuaternion {
        let q = if self.w < 0.0 { -*self } else { *self };
        let v = q.vector();
        let vn = v.norm();
        if vn == 0.0 {
            return UnitQuaternion::IDENTITY;
        }
        let half = math::atan2(vn, q.w) * alpha;
        let axis = v / vn;
        let s = math::sin(half);
        UnitQuaternion::new_normalize(math::cos(half), axis.x * s, axis.y * s, axis.z * s)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

/// Spherical linear interpolation `q_i (q_i⁻¹ q_j)^α` on the shorter arc.
///
/// `q_j` is negated first when `q_i · q_j < 0`. When the two quaternions
/// represent (almost) the same rotation, `q_i` is returned unchanged.
pub fn slerp(qi: UnitQuaternion, qj: UnitQuaternion, alpha: f64) -> UnitQuaternion {
    let d = qi.dot(qj);
    if d.abs() > SLERP_DEGENERATE_DOT {
        return qi;
    }
    let qj = if d < 0.0 { -qj } else { qj };
    if alpha == 0.0 {
        return qi;
    }
    if alpha == 1.0 {
        return qj;
    }
    let q = qi * (qi.conjugate() * qj).powf(alpha);
    UnitQuaternion::new_normalize(q.w, q.x, q.y, q.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn identity_arc() {
        let q = UnitQuaternion::from_axis_angle(Point3::new(1.0, 2.0, 3.0), 0.7);
        assert_eq!(slerp(q, q, 0.37), q);
    }

    #[test]
    fn halfway_to_quarter_turn() {
        let qj = UnitQuaternion::from_axis_angle(Point3::Z, FRAC_PI_2);
        let q = slerp(UnitQuaternion::IDENTITY, qj, 0.5);
        let expect = UnitQuaternion::from_axis_angle(Point3::Z, FRAC_PI_4);
        assert!(q.angle_to(expect) < 1e-12);
    }

    #[test]
    fn double_cover_takes_short_arc() {
        let qi = UnitQuaternion::IDENTITY;
        let qj = -UnitQuaternion::from_axis_angle(Point3::X, 0.4);
        let q = slerp(qi, qj, 0.5);
        assert!((qi.angle_to(q) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn endpoints() {
        let qi = UnitQuaternion::from_axis_angle(Point3::Y, 0.3);
        let qj = UnitQuaternion::from_axis_angle(Point3::X, 2.0);
        assert_eq!(slerp(qi, qj, 0.0), qi);
        assert_eq!(slerp(qi, qj, 1.0), qj);
    }
}
