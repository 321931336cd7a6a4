//! Small fixed-size vector and matrix types used throughout the simulator.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Three-component column vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[T; 3]", into = "[T; 3]")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Vector3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> From<[T; 3]> for Vector3<T> {
    fn from(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl<T: Scalar> From<Vector3<T>> for [T; 3] {
    fn from(v: Vector3<T>) -> Self {
        [v.x, v.y, v.z]
    }
}

impl<T: Scalar> Vector3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zeros() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn x_axis() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn y_axis() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn z_axis() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Unit vector along axis `i` (0, 1 or 2).
    pub fn axis(i: usize) -> Self {
        match i {
            0 => Self::x_axis(),
            1 => Self::y_axis(),
            2 => Self::z_axis(),
            _ => panic!("axis index {i} out of range"),
        }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn try_normalize(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(*self / n)
        } else {
            None
        }
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn component_mul(&self, o: &Self) -> Self {
        Self::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn zip_map(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self::new(f(self.x, o.x), f(self.y, o.y), f(self.z, o.z))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs(&self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    /// Outer product `self * o^T`.
    pub fn outer(&self, o: &Self) -> Matrix3<T> {
        let a = self.to_array();
        let b = o.to_array();
        Matrix3::from_fn(|i, j| a[i] * b[j])
    }
}

impl<T> Index<usize> for Vector3<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("index {i} out of range for Vector3"),
        }
    }
}

impl<T: Scalar> Add for Vector3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> AddAssign for Vector3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vector3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> SubAssign for Vector3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> Neg for Vector3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Scalar> Mul<T> for Vector3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

impl<T: Scalar> Div<T> for Vector3<T> {
    type Output = Self;
    fn div(self, k: T) -> Self {
        Self::new(self.x / k, self.y / k, self.z / k)
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[T; 3]; 3]", into = "[[T; 3]; 3]")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Matrix3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Scalar> From<[[T; 3]; 3]> for Matrix3<T> {
    fn from(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }
}

impl<T: Scalar> From<Matrix3<T>> for [[T; 3]; 3] {
    fn from(a: Matrix3<T>) -> Self {
        a.m
    }
}

impl<T: Scalar> Matrix3<T> {
    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        }
        Self { m }
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_diagonal(d: &Vector3<T>) -> Self {
        let d = d.to_array();
        Self::from_fn(|i, j| if i == j { d[i] } else { T::zero() })
    }

    pub fn from_rows(r0: &Vector3<T>, r1: &Vector3<T>, r2: &Vector3<T>) -> Self {
        Self { m: [r0.to_array(), r1.to_array(), r2.to_array()] }
    }

    /// Skew-symmetric cross-product matrix: `skew(a) * b == a x b`.
    pub fn skew(a: &Vector3<T>) -> Self {
        let z = T::zero();
        Self { m: [[z, -a.z, a.y], [a.z, z, -a.x], [-a.y, a.x, z]] }
    }

    pub fn row(&self, i: usize) -> Vector3<T> {
        Vector3::from(self.m[i])
    }

    pub fn column(&self, j: usize) -> Vector3<T> {
        Vector3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn diagonal(&self) -> Vector3<T> {
        Vector3::new(self.m[0][0], self.m[1][1], self.m[2][2])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i])
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Adjugate-based inverse; `None` when the determinant is zero or not finite.
    pub fn try_inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        let m = &self.m;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Some(Self::from_fn(|i, j| adj[i][j] / det))
    }

    pub fn mul_vec(&self, v: &Vector3<T>) -> Vector3<T> {
        Vector3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn mul_mat(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j])
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * k)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_fn(|i, j| f(self.m[i][j]))
    }

    pub fn zip_map(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self::from_fn(|i, j| f(self.m[i][j], o.m[i][j]))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |a, &b| a.max(b.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }
}

impl<T: Scalar> Add for Matrix3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.zip_map(&o, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for Matrix3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.zip_map(&o, |a, b| a - b)
    }
}

impl<T: Scalar> Mul<Vector3<T>> for Matrix3<T> {
    type Output = Vector3<T>;
    fn mul(self, v: Vector3<T>) -> Vector3<T> {
        self.mul_vec(&v)
    }
}

impl<T: Scalar> Mul for Matrix3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_mat(&o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vector3::<f64>::x_axis();
        let y = Vector3::<f64>::y_axis();
        assert_eq!(x.cross(&y), Vector3::z_axis());
        assert_eq!(Matrix3::skew(&x) * y, x.cross(&y));
    }

    #[test]
    fn inverse_round_trips() {
        let a = Matrix3::from([[2.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 4.0]]);
        let prod = a * a.try_inverse().unwrap();
        assert!((prod - Matrix3::identity()).max_abs() < 1e-14);
        assert!(Matrix3::<f64>::zeros().try_inverse().is_none());
    }

    #[test]
    fn works_in_single_precision() {
        let v = Vector3::<f32>::new(3.0, 4.0, 0.0);
        assert_eq!(v.norm(), 5.0);
    }
}
