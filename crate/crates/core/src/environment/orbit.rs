//! Circular two-body orbit and the local orbit frame.

use serde::{Deserialize, Serialize};

use super::PhysicalConstants;
use crate::error::{Error, Result};
use crate::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OrbitConfig {
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    /// Argument of latitude at t = 0.
    pub phase_deg: f64,
}

impl Default for OrbitConfig {
    /// ISS-like deployment orbit: 400 km, 51.6 deg.
    fn default() -> Self {
        Self { altitude_km: 400.0, inclination_deg: 51.6, raan_deg: 0.0, phase_deg: 0.0 }
    }
}

impl OrbitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(200.0..=2000.0).contains(&self.altitude_km) {
            return Err(Error::AltitudeOutOfRange(self.altitude_km));
        }
        if ![self.inclination_deg, self.raan_deg, self.phase_deg].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidConfig("orbit angles must be finite".into()));
        }
        Ok(())
    }

    pub fn radius_m(&self, k: &PhysicalConstants) -> f64 {
        k.earth_radius_m + self.altitude_km * 1e3
    }

    pub fn mean_motion(&self, k: &PhysicalConstants) -> f64 {
        (k.mu_m3_s2 / self.radius_m(k).powi(3)).sqrt()
    }

    /// `2 pi sqrt(a^3 / mu)`, seconds.
    pub fn period_s(&self, k: &PhysicalConstants) -> f64 {
        2.0 * std::f64::consts::PI / self.mean_motion(k)
    }
}

/// Inertial position and velocity plus the orbit-frame axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    /// Rows are the orbit-frame x (along velocity), y, z (toward Earth) axes
    /// in inertial components.
    pub basis: Mat3,
    pub mean_motion: f64,
}

impl OrbitState {
    pub fn to_orbit_frame(&self, v: &Vec3) -> Vec3 {
        self.basis * *v
    }

    /// Angular velocity of the orbit frame, orbit-frame components.
    pub fn frame_rate(&self) -> Vec3 {
        Vec3::new(0.0, -self.mean_motion, 0.0)
    }
}

pub fn propagate_orbit(cfg: &OrbitConfig, k: &PhysicalConstants, t: f64) -> OrbitState {
    let a = cfg.radius_m(k);
    let n = cfg.mean_motion(k);
    let (si, ci) = cfg.inclination_deg.to_radians().sin_cos();
    let (so, co) = cfg.raan_deg.to_radians().sin_cos();
    let p = Vec3::new(co, so, 0.0);
    let q = Vec3::new(-so * ci, co * ci, si);
    let (su, cu) = (cfg.phase_deg.to_radians() + n * t).sin_cos();
    let position = (p * cu + q * su) * a;
    let velocity = (q * cu - p * su) * (a * n);

    let x = q * cu - p * su;
    let z = -(p * cu + q * su);
    let y = z.cross(&x);
    OrbitState { t, position, velocity, basis: Mat3::from_rows(&x, &y, &z), mean_motion: n }
}
