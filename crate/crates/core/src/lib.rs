//! Attitude dynamics and control simulator for a spinning 3U CubeSat
//! centrifuge laboratory with a movable regolith payload.
//!
//! The crate is layered bottom-up:
//!
//! * [`attitude`]: scalar-generic quaternion kinematics, Euler's rigid-body
//!   equations and a fixed-step RK4 propagator.
//! * [`mass`]: point-mass catalog, CG and inertia tensor, regolith placement.
//! * [`environment`]: circular orbit, dipole field, sun and eclipse,
//!   exponential atmosphere, and drag / SRP / gravity-gradient torques.
//! * [`control`]: PD and spin laws, magnetorquer and wheel models, modes.
//! * [`sim`]: closed-loop scenarios, metrics, Monte Carlo and telemetry CSV.
//!
//! The double-precision aliases below are what the simulator uses.

pub mod attitude;
pub mod control;
pub mod environment;
mod error;
pub mod mass;
mod scalar;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Vec3 = attitude::Vector3<f64>;
pub type Mat3 = attitude::Matrix3<f64>;
pub type Quat = attitude::Quaternion<f64>;
pub type UnitQuat = attitude::UnitQuaternion<f64>;
pub type InertiaTensor = attitude::InertiaTensor<f64>;
pub type AttitudeState = attitude::AttitudeState<f64>;

pub type Vec3f = attitude::Vector3<f32>;
pub type UnitQuatf = attitude::UnitQuaternion<f32>;
pub type InertiaTensorf = attitude::InertiaTensor<f32>;
pub type AttitudeStatef = attitude::AttitudeState<f32>;
