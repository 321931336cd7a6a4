//! Vector and quaternion math, rigid-body dynamics and the RK4 propagator.
//!
//! Everything here is generic over [`Scalar`](crate::Scalar) so the kernel
//! can run in single or double precision.

pub mod dynamics;
pub mod linalg;
pub mod quaternion;

pub use dynamics::{body_rates_derivative, rk4_step, try_body_rates_derivative, AttitudeState, InertiaTensor, RigidBody, StateRate};
pub use linalg::{Matrix3, Vector3};
pub use quaternion::{normalize_canonical, quat_derivative, quat_to_euler, Quaternion, UnitQuaternion};
