//! Scalar-first quaternions and attitude kinematics.
//!
//! `UnitQuaternion` describes the body frame relative to the orbit frame.
//! Kinematics follow `q_dot = 1/2 * Omega(w) * q` with
//!
//! ```text
//!           | 0   -wx  -wy  -wz |
//! Omega(w) =| wx   0    wz  -wy |
//!           | wy  -wz   0    wx |
//!           | wz   wy  -wx   0  |
//! ```
//!
//! which is the Hamilton product `q (x) (0, w)` with `w` in body axes.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use super::linalg::{Matrix3, Vector3};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Unconstrained quaternion, `w` is the scalar part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn zeros() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector(&self) -> Vector3<T> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn dot(&self, o: &Self) -> T {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.w * k, self.x * k, self.y * k, self.z * k)
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let u = self.vector();
        let v = o.vector();
        let w = self.w * o.w - u.dot(&v);
        let vec = v * self.w + u * o.w + u.cross(&v);
        Self::new(w, vec.x, vec.y, vec.z)
    }
}

/// Unit-norm quaternion in canonical sign (`w >= 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
#[serde(try_from = "Quaternion<T>", into = "Quaternion<T>")]
pub struct UnitQuaternion<T>(Quaternion<T>);

impl<T: Scalar> TryFrom<Quaternion<T>> for UnitQuaternion<T> {
    type Error = Error;
    fn try_from(q: Quaternion<T>) -> Result<Self> {
        normalize_canonical(q)
    }
}

impl<T: Scalar> From<UnitQuaternion<T>> for Quaternion<T> {
    fn from(q: UnitQuaternion<T>) -> Self {
        q.0
    }
}

/// Scales `q` to unit norm and picks the representative with `w >= 0`.
///
/// When `w == 0` the representative whose first nonzero vector component is
/// positive is kept, so the result is unique.
pub fn normalize_canonical<T: Scalar>(q: Quaternion<T>) -> Result<UnitQuaternion<T>> {
    if !q.is_finite() {
        return Err(Error::NonFinite("quaternion"));
    }
    let n = q.norm();
    if n == T::zero() {
        return Err(Error::ZeroQuaternion);
    }
    let mut u = q.scale(T::one() / n);
    let flip = if u.w != T::zero() {
        u.w < T::zero()
    } else {
        [u.x, u.y, u.z].into_iter().find(|c| *c != T::zero()).is_some_and(|c| c < T::zero())
    };
    if flip {
        u = u.scale(-T::one());
    }
    Ok(UnitQuaternion(u))
}

impl<T: Scalar> Default for UnitQuaternion<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Scalar> UnitQuaternion<T> {
    pub fn identity() -> Self {
        Self(Quaternion::identity())
    }

    /// Rotation of `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: &Vector3<T>, angle: T) -> Result<Self> {
        let a = axis.try_normalize().ok_or(Error::ZeroQuaternion)?;
        let half = angle / T::lit(2.0);
        let s = half.sin();
        normalize_canonical(Quaternion::new(half.cos(), a.x * s, a.y * s, a.z * s))
    }

    /// Builds the attitude from a 3-2-1 (yaw, pitch, roll) sequence given in degrees.
    pub fn from_euler_deg(roll: T, pitch: T, yaw: T) -> Self {
        let half = |d: T| d.to_radians() / T::lit(2.0);
        let (sr, cr) = half(roll).sin_cos();
        let (sp, cp) = half(pitch).sin_cos();
        let (sy, cy) = half(yaw).sin_cos();
        let q = Quaternion::new(
            cr * cp * cy + sr * sp * sy,
            sr * cp * cy - cr * sp * sy,
            cr * sp * cy + sr * cp * sy,
            cr * cp * sy - sr * sp * cy,
        );
        normalize_canonical(q).expect("euler quaternion has unit norm")
    }

    pub fn quaternion(&self) -> &Quaternion<T> {
        &self.0
    }

    pub fn scalar(&self) -> T {
        self.0.w
    }

    /// Vector part, the `q*` of the PD law.
    pub fn vector(&self) -> Vector3<T> {
        self.0.vector()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.conjugate())
    }

    /// Composition `self (x) other`, renormalized and canonicalized.
    pub fn compose(&self, other: &Self) -> Self {
        normalize_canonical(self.0 * other.0).expect("product of unit quaternions is nonzero")
    }

    /// Rotation matrix taking body-frame components to orbit-frame components.
    pub fn body_to_reference(&self) -> Matrix3<T> {
        let Quaternion { w, x, y, z } = self.0;
        let two = T::lit(2.0);
        let one = T::one();
        Matrix3::from([
            [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
            [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
            [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
        ])
    }

    /// Attitude matrix: orbit-frame components to body-frame components.
    pub fn reference_to_body(&self) -> Matrix3<T> {
        self.body_to_reference().transpose()
    }

    /// Expresses a reference-frame vector in body axes.
    pub fn to_body(&self, v: &Vector3<T>) -> Vector3<T> {
        self.reference_to_body() * *v
    }

    /// Rotation angle in radians, in `[0, pi]`.
    pub fn angle(&self) -> T {
        let v = self.vector().norm();
        T::lit(2.0) * v.atan2(self.0.w.abs())
    }

    /// 3-2-1 Euler angles `(roll, pitch, yaw)` in degrees.
    pub fn to_euler_deg(&self) -> (T, T, T) {
        quat_to_euler(self)
    }
}

/// `1/2 * Omega(w) * q`.
pub fn quat_derivative<T: Scalar>(q: &Quaternion<T>, omega: &Vector3<T>) -> Quaternion<T> {
    let half = T::lit(0.5);
    let v = q.vector();
    let w_dot = -omega.dot(&v) * half;
    let v_dot = (*omega * q.w - omega.cross(&v)) * half;
    Quaternion::new(w_dot, v_dot.x, v_dot.y, v_dot.z)
}

/// 3-2-1 intrinsic Euler angles in degrees.
///
/// Roll and yaw are in `(-180, 180]`, pitch in `[-90, 90]`. At gimbal lock
/// roll is set to zero and the whole rotation is carried by yaw.
pub fn quat_to_euler<T: Scalar>(q: &UnitQuaternion<T>) -> (T, T, T) {
    let r = q.body_to_reference();
    let sin_pitch = (-r.m[2][0]).max(-T::one()).min(T::one());
    let lock = T::one() - T::lit(1e-12);
    let (roll, pitch, yaw) = if sin_pitch.abs() >= lock {
        let pitch = T::FRAC_PI_2() * sin_pitch.signum();
        (T::zero(), pitch, (-r.m[0][1]).atan2(r.m[1][1]))
    } else {
        (r.m[2][1].atan2(r.m[2][2]), sin_pitch.asin(), r.m[1][0].atan2(r.m[0][0]))
    };
    let wrap = |a: T| {
        let d = a.to_degrees();
        if d <= T::lit(-180.0) {
            d + T::lit(360.0)
        } else {
            d
        }
    };
    (wrap(roll), pitch.to_degrees(), wrap(yaw))
}
