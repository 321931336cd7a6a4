//! Rigid-body rotational dynamics and the fixed-step RK4 propagator.

use serde::{Deserialize, Serialize};

use super::linalg::{Matrix3, Vector3};
use super::quaternion::{normalize_canonical, quat_derivative, Quaternion, UnitQuaternion};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric positive-definite inertia tensor in kg m^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
#[serde(try_from = "Matrix3<T>", into = "Matrix3<T>")]
pub struct InertiaTensor<T> {
    matrix: Matrix3<T>,
    inverse: Matrix3<T>,
}

impl<T: Scalar> TryFrom<Matrix3<T>> for InertiaTensor<T> {
    type Error = Error;
    fn try_from(m: Matrix3<T>) -> Result<Self> {
        Self::new(m)
    }
}

impl<T: Scalar> From<InertiaTensor<T>> for Matrix3<T> {
    fn from(j: InertiaTensor<T>) -> Self {
        j.matrix
    }
}

impl<T: Scalar> InertiaTensor<T> {
    /// Validates symmetry (1e-12 relative), positive definiteness and the
    /// principal-moment triangle inequality.
    pub fn new(matrix: Matrix3<T>) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite("inertia tensor"));
        }
        let scale = matrix.max_abs();
        let asym = (matrix - matrix.transpose()).max_abs();
        if asym > T::lit(1e-12) * scale {
            return Err(Error::InvalidInertia("tensor is not symmetric"));
        }
        let m = &matrix.m;
        let minor2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let tiny = T::lit(1e-12) * scale;
        if !(m[0][0] > tiny && minor2 > tiny * scale && matrix.determinant() > tiny * scale * scale) {
            return Err(Error::SingularInertia);
        }
        let d = matrix.diagonal();
        // the diagonal of a tensor obeys the same inequality as its principal moments
        let slack = T::lit(1e-12) * scale;
        if d.x + d.y + slack < d.z || d.y + d.z + slack < d.x || d.x + d.z + slack < d.y {
            return Err(Error::InvalidInertia("moments violate the triangle inequality"));
        }
        let inverse = matrix.try_inverse().ok_or(Error::SingularInertia)?;
        Ok(Self { matrix, inverse })
    }

    pub fn diagonal(d: Vector3<T>) -> Result<Self> {
        Self::new(Matrix3::from_diagonal(&d))
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix3<T> {
        &self.inverse
    }

    pub fn apply(&self, v: &Vector3<T>) -> Vector3<T> {
        self.matrix * *v
    }

    /// `1/2 w^T J w`.
    pub fn kinetic_energy(&self, omega: &Vector3<T>) -> T {
        T::lit(0.5) * omega.dot(&self.apply(omega))
    }
}

/// Integrated state: attitude, body rates, wheel momentum and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct AttitudeState<T> {
    pub q: UnitQuaternion<T>,
    /// Body rates relative to the orbit frame, body axes, rad/s.
    pub omega: Vector3<T>,
    /// Momentum exchanged through the x-axis wheel, N m s.
    pub wheel_momentum: T,
    /// Seconds since scenario start.
    pub t: T,
}

impl<T: Scalar> AttitudeState<T> {
    pub fn new(q: UnitQuaternion<T>, omega: Vector3<T>) -> Self {
        Self { q, omega, wheel_momentum: T::zero(), t: T::zero() }
    }

    pub fn is_finite(&self) -> bool {
        self.q.quaternion().is_finite() && self.omega.is_finite() && self.wheel_momentum.is_finite() && self.t.is_finite()
    }
}

/// Time derivative of the `(q, w)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRate<T> {
    pub q_dot: Quaternion<T>,
    pub omega_dot: Vector3<T>,
}

/// `J^-1 (-w x (J w) + tau_c + tau_d)`.
pub fn body_rates_derivative<T: Scalar>(
    inertia: &InertiaTensor<T>,
    omega: &Vector3<T>,
    tau_c: &Vector3<T>,
    tau_d: &Vector3<T>,
) -> Vector3<T> {
    let gyro = omega.cross(&inertia.apply(omega));
    *inertia.inverse() * (*tau_c + *tau_d - gyro)
}

/// Same as [`body_rates_derivative`] but checks that `inertia` is invertible.
pub fn try_body_rates_derivative<T: Scalar>(
    inertia: &Matrix3<T>,
    omega: &Vector3<T>,
    tau_c: &Vector3<T>,
    tau_d: &Vector3<T>,
) -> Result<Vector3<T>> {
    let inv = inertia.try_inverse().ok_or(Error::SingularInertia)?;
    let gyro = omega.cross(&(*inertia * *omega));
    Ok(inv * (*tau_c + *tau_d - gyro))
}

/// Torque-driven rigid body with torques held constant over a step.
#[derive(Debug, Clone, Copy)]
pub struct RigidBody<T> {
    pub inertia: InertiaTensor<T>,
    /// Control torque, body axes.
    pub tau_c: Vector3<T>,
    /// Disturbance torque, body axes.
    pub tau_d: Vector3<T>,
    /// Momentum of internal rotors in body axes, enters as `-w x h`.
    pub internal_momentum: Vector3<T>,
    /// Orbit-frame angular velocity expressed in the orbit frame. When set,
    /// `omega` is the inertial rate and the kinematics use the rate relative
    /// to the rotating orbit frame.
    pub orbit_rate: Option<Vector3<T>>,
}

impl<T: Scalar> RigidBody<T> {
    pub fn torque_free(inertia: InertiaTensor<T>) -> Self {
        Self {
            inertia,
            tau_c: Vector3::zeros(),
            tau_d: Vector3::zeros(),
            internal_momentum: Vector3::zeros(),
            orbit_rate: None,
        }
    }

    pub fn rates(&self, q: &Quaternion<T>, omega: &Vector3<T>) -> StateRate<T> {
        let rel = match self.orbit_rate {
            Some(w_orbit) => {
                // q is not unit inside RK4 stages, scale accordingly
                let n2 = q.dot(q);
                let unit = UnitQuaternionView(q, n2);
                *omega - unit.to_body(&w_orbit)
            }
            None => *omega,
        };
        let gyro_internal = omega.cross(&self.internal_momentum);
        StateRate {
            q_dot: quat_derivative(q, &rel),
            omega_dot: body_rates_derivative(&self.inertia, omega, &self.tau_c, &(self.tau_d - gyro_internal)),
        }
    }
}

/// Rotation by a possibly non-normalized quaternion, dividing out its norm.
struct UnitQuaternionView<'a, T>(&'a Quaternion<T>, T);

impl<T: Scalar> UnitQuaternionView<'_, T> {
    fn to_body(&self, v: &Vector3<T>) -> Vector3<T> {
        // q* v q / |q|^2
        let p = Quaternion::new(T::zero(), v.x, v.y, v.z);
        (self.0.conjugate() * p * *self.0).vector() / self.1
    }
}

/// One classical RK4 step over `(q, w)`; `t` advances by `dt`.
///
/// The quaternion is renormalized and sign-canonicalized afterwards. Wheel
/// momentum is carried through unchanged; it is updated by the wheel model.
pub fn rk4_step<T, F>(state: &AttitudeState<T>, dt: T, rates: F) -> Result<AttitudeState<T>>
where
    T: Scalar,
    F: Fn(&Quaternion<T>, &Vector3<T>) -> StateRate<T>,
{
    if !(dt > T::zero()) {
        return Err(Error::InvalidConfig(format!("step size must be positive, got {dt}")));
    }
    let two = T::lit(2.0);
    let half = dt / two;
    let q0 = *state.q.quaternion();
    let w0 = state.omega;

    let k1 = rates(&q0, &w0);
    let k2 = rates(&(q0 + k1.q_dot.scale(half)), &(w0 + k1.omega_dot * half));
    let k3 = rates(&(q0 + k2.q_dot.scale(half)), &(w0 + k2.omega_dot * half));
    let k4 = rates(&(q0 + k3.q_dot.scale(dt)), &(w0 + k3.omega_dot * dt));

    let sixth = dt / T::lit(6.0);
    let q_sum = k1.q_dot + k2.q_dot.scale(two) + k3.q_dot.scale(two) + k4.q_dot;
    let w_sum = k1.omega_dot + k2.omega_dot * two + k3.omega_dot * two + k4.omega_dot;
    let q = q0 + q_sum.scale(sixth);
    let omega = w0 + w_sum * sixth;
    if !q.is_finite() || !omega.is_finite() {
        return Err(Error::NonFinite("attitude state"));
    }
    Ok(AttitudeState { q: normalize_canonical(q)?, omega, wheel_momentum: state.wheel_momentum, t: state.t + dt })
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = Vector3<f64>;

    fn diag(a: f64, b: f64, c: f64) -> InertiaTensor<f64> {
        InertiaTensor::diagonal(V::new(a, b, c)).unwrap()
    }

    #[test]
    fn principal_axis_spin_is_fixed_point() {
        let j = diag(1.0, 2.0, 3.0);
        for axis in 0..3 {
            let w = V::axis(axis) * 0.7;
            assert_eq!(body_rates_derivative(&j, &w, &V::zeros(), &V::zeros()), V::zeros());
        }
    }

    #[test]
    fn spherical_inertia_has_no_gyroscopic_term() {
        let j = diag(2.5, 2.5, 2.5);
        let w = V::new(0.3, -1.1, 4.0);
        assert!(body_rates_derivative(&j, &w, &V::zeros(), &V::zeros()).max_abs() < 1e-15);
    }

    #[test]
    fn hand_evaluated_gyroscopic_case() {
        // w x Jw = (1,1,1) x (1,2,3) = (1,-2,1); negate and scale by J^-1
        let j = diag(1.0, 2.0, 3.0);
        let got = body_rates_derivative(&j, &V::new(1.0, 1.0, 1.0), &V::zeros(), &V::zeros());
        assert!((got - V::new(-1.0, 1.0, -1.0 / 3.0)).max_abs() < 1e-15);
    }

    #[test]
    fn torques_enter_through_inverse_inertia() {
        let j = diag(1.0, 2.0, 2.5);
        let w = V::new(0.2, -0.4, 0.1);
        let ta = V::new(0.3, 0.5, -0.2);
        let tb = V::new(-0.1, 0.2, 0.6);
        let lhs = body_rates_derivative(&j, &w, &ta, &tb) - body_rates_derivative(&j, &w, &V::zeros(), &V::zeros());
        let rhs = *j.inverse() * (ta + tb);
        assert!((lhs - rhs).max_abs() < 1e-15);
    }

    #[test]
    fn singular_inertia_is_rejected() {
        assert!(matches!(InertiaTensor::diagonal(V::new(1.0, 1.0, 0.0)), Err(Error::SingularInertia)));
        let m = Matrix3::from_diagonal(&V::new(1.0, 1.0, 0.0));
        assert!(matches!(try_body_rates_derivative(&m, &V::zeros(), &V::zeros(), &V::zeros()), Err(Error::SingularInertia)));
        assert!(matches!(InertiaTensor::diagonal(V::new(1.0, 1.0, 3.0)), Err(Error::InvalidInertia(_))));
    }

    #[test]
    fn rest_state_is_unchanged() {
        let body = RigidBody::torque_free(diag(1.0, 2.0, 3.0));
        let s0 = AttitudeState::new(UnitQuaternion::from_euler_deg(10.0, 20.0, 30.0), V::zeros());
        let s1 = rk4_step(&s0, 0.1, |q, w| body.rates(q, w)).unwrap();
        assert_eq!(s1.omega, s0.omega);
        assert!((s1.q.quaternion().dot(s0.q.quaternion()) - 1.0).abs() < 1e-15);
        assert_eq!(s1.t, 0.1);
    }

    fn single_axis_run(w: f64, dt: f64, steps: usize) -> (f64, f64) {
        let mut s = AttitudeState::new(UnitQuaternion::identity(), V::new(w, 0.0, 0.0));
        let free = |q: &Quaternion<f64>, om: &V| StateRate { q_dot: quat_derivative(q, om), omega_dot: V::zeros() };
        for _ in 0..steps {
            s = rk4_step(&s, dt, free).unwrap();
        }
        let expected = UnitQuaternion::from_axis_angle(&V::x_axis(), w * s.t).unwrap();
        // signed angle about x
        let e = expected.inverse().compose(&s.q);
        (2.0 * e.vector().x.atan2(e.scalar()), s.t)
    }

    #[test]
    fn constant_rate_single_axis_rotation() {
        let (err, t) = single_axis_run(0.5, 0.02, 10_000);
        assert!((t - 200.0).abs() < 1e-9);
        assert!(err.abs() < 1e-9, "angle error {err}");
    }

    #[test]
    fn single_axis_phase_error_matches_rk4_truncation() {
        // RK4 on q' = (w/2) i q multiplies by the quartic Taylor polynomial of
        // exp(i phi), phi = w dt / 2; its argument lags phi by a fixed amount
        for (w, dt, n) in [(1.0, 0.1, 500), (0.5, 0.1, 2000), (2.0, 0.05, 800)] {
            let phi: f64 = w * dt / 2.0;
            let re = 1.0 - phi.powi(2) / 2.0 + phi.powi(4) / 24.0;
            let im = phi - phi.powi(3) / 6.0;
            let per_step = 2.0 * (im.atan2(re) - phi);
            let (err, _) = single_axis_run(w, dt, n);
            let predicted = n as f64 * per_step;
            assert!((err - predicted).abs() < 1e-4 * predicted.abs(), "{err} vs {predicted}");
        }
    }

    #[test]
    fn non_positive_step_is_rejected() {
        let s = AttitudeState::<f64>::new(UnitQuaternion::identity(), V::zeros());
        let body = RigidBody::torque_free(diag(1.0, 1.0, 1.0));
        assert!(rk4_step(&s, 0.0, |q, w| body.rates(q, w)).is_err());
    }

    #[test]
    fn orbit_rate_coupling_keeps_inertially_fixed_body_rotating_in_orbit_frame() {
        // an inertially fixed body appears to rotate at -w_orbit relative to the orbit frame
        let n = 1e-3;
        let mut body = RigidBody::torque_free(diag(1.0, 1.0, 1.0));
        body.orbit_rate = Some(V::new(0.0, -n, 0.0));
        let mut s = AttitudeState::new(UnitQuaternion::identity(), V::zeros());
        for _ in 0..100 {
            s = rk4_step(&s, 1.0, |q, w| body.rates(q, w)).unwrap();
        }
        let expected = UnitQuaternion::from_axis_angle(&V::y_axis(), n * 100.0).unwrap();
        assert!(expected.inverse().compose(&s.q).angle() < 1e-9);
    }

    #[test]
    fn generic_over_f32() {
        let j = InertiaTensor::<f32>::diagonal(Vector3::new(1.0, 2.0, 3.0)).unwrap();
        let d = body_rates_derivative(&j, &Vector3::new(1.0, 1.0, 1.0), &Vector3::zeros(), &Vector3::zeros());
        assert!((d.z + 1.0 / 3.0).abs() < 1e-6);
    }
}
