//! Unit conversions.

use std::f64::consts::PI;

/// 1 RPM in rad/s.
pub const RPM: f64 = 2.0 * PI / 60.0;

pub fn rpm_to_rad_s(rpm: f64) -> f64 {
    rpm * RPM
}

pub fn rad_s_to_rpm(rad_s: f64) -> f64 {
    rad_s / RPM
}
