//! Tilted centred-dipole geomagnetic field.

use super::orbit::OrbitState;
use super::PhysicalConstants;
use crate::Vec3;

/// Unit dipole moment direction in inertial axes at time `t`.
///
/// The moment points toward the southern hemisphere, tilted `tilt_deg` from
/// the spin axis and rotating with the Earth.
pub fn dipole_axis(t: f64, tilt_deg: f64, k: &PhysicalConstants) -> Vec3 {
    let (st, ct) = tilt_deg.to_radians().sin_cos();
    let (sl, cl) = (k.earth_rotation_rad_s * t).sin_cos();
    -Vec3::new(st * cl, st * sl, ct)
}

/// `B = B0 (R/r)^3 (3 (m.r) r - m)`, tesla, inertial axes.
pub fn magnetic_field(orbit: &OrbitState, tilt_deg: f64, k: &PhysicalConstants) -> Vec3 {
    dipole_field(&orbit.position, &dipole_axis(orbit.t, tilt_deg, k), k)
}

pub fn dipole_field(position: &Vec3, axis: &Vec3, k: &PhysicalConstants) -> Vec3 {
    let r = position.norm();
    let rhat = *position / r;
    let scale = k.dipole_b0_t * (k.earth_radius_m / r).powi(3);
    (rhat * (3.0 * axis.dot(&rhat)) - *axis) * scale
}
