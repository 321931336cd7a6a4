//! Orbit, geomagnetic field, sun, atmosphere and disturbance torques.
//!
//! Physical constants and the atmosphere table ship in a bundled JSON file;
//! scenario configs may override any of them.

mod atmosphere;
mod field;
mod orbit;
mod sun;
mod torques;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use atmosphere::{atmospheric_density, AtmosphereRow, AtmosphereTable};
pub use field::{dipole_axis, dipole_field, magnetic_field};
pub use orbit::{propagate_orbit, OrbitConfig, OrbitState};
pub use sun::{sun_direction, SunSample};
pub use torques::{
    drag_force_torque, drag_torque, gravity_gradient_torque, srp_force_torque, srp_torque, total_disturbance,
    DisturbanceToggles, Disturbances, Face, ForceAndTorque, SpacecraftGeometry,
};

use crate::error::Result;
use crate::{UnitQuat, Vec3};

const BUNDLED: &str = include_str!("../../data/environment.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub mu_m3_s2: f64,
    pub earth_radius_m: f64,
    pub earth_rotation_rad_s: f64,
    pub solar_flux_w_m2: f64,
    pub speed_of_light_m_s: f64,
    /// Equatorial surface field strength of the dipole, tesla.
    pub dipole_b0_t: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        EnvironmentData::bundled().constants
    }
}

/// Constants plus the atmosphere table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentData {
    pub constants: PhysicalConstants,
    pub atmosphere: AtmosphereTable,
}

impl EnvironmentData {
    pub fn bundled() -> &'static EnvironmentData {
        static DATA: OnceLock<EnvironmentData> = OnceLock::new();
        DATA.get_or_init(|| serde_json::from_str(BUNDLED).expect("bundled environment data is valid"))
    }
}

/// Environment quantities at one instant, body axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentSample {
    /// Geomagnetic field, tesla.
    pub b_body: Vec3,
    /// Unit vector toward the Sun.
    pub sun_dir_body: Vec3,
    pub in_eclipse: bool,
    pub density: f64,
    /// Velocity relative to the atmosphere, m/s.
    pub v_rel_body: Vec3,
    /// Earth centre to spacecraft, m.
    pub r_b_body: Vec3,
}

/// Scenario-level environment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvironmentConfig {
    pub constants: PhysicalConstants,
    pub atmosphere: AtmosphereTable,
    pub dipole_tilt_deg: f64,
    /// Inertial direction toward the Sun.
    pub sun_direction: Vec3,
    /// Subtract the Earth's rotation from the velocity seen by the drag model.
    pub corotating_atmosphere: bool,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        let data = EnvironmentData::bundled();
        Self {
            constants: data.constants,
            atmosphere: data.atmosphere.clone(),
            dipole_tilt_deg: 11.5,
            sun_direction: Vec3::x_axis(),
            corotating_atmosphere: true,
        }
    }
}

/// Orbit plus environment models, sampled in body axes for a given attitude.
#[derive(Debug, Clone)]
pub struct Environment {
    pub orbit: OrbitConfig,
    pub config: EnvironmentConfig,
}

impl Environment {
    pub fn new(orbit: OrbitConfig, config: EnvironmentConfig) -> Result<Self> {
        orbit.validate()?;
        Ok(Self { orbit, config })
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.config.constants
    }

    pub fn orbit_state(&self, t: f64) -> OrbitState {
        propagate_orbit(&self.orbit, &self.config.constants, t)
    }

    pub fn period_s(&self) -> f64 {
        self.orbit.period_s(&self.config.constants)
    }

    /// Samples every environment quantity for attitude `q` (body w.r.t. orbit frame).
    pub fn sample(&self, orbit: &OrbitState, q: &UnitQuat) -> Result<EnvironmentSample> {
        let k = &self.config.constants;
        let to_body = |v_inertial: &Vec3| q.to_body(&orbit.to_orbit_frame(v_inertial));
        let b = magnetic_field(orbit, self.config.dipole_tilt_deg, k);
        let sun = sun_direction(&orbit.position, &self.config.sun_direction, k.earth_radius_m);
        let altitude_km = (orbit.position.norm() - k.earth_radius_m) / 1e3;
        let density = self.config.atmosphere.density(altitude_km)?;
        let v_rel = if self.config.corotating_atmosphere {
            orbit.velocity - Vec3::new(0.0, 0.0, k.earth_rotation_rad_s).cross(&orbit.position)
        } else {
            orbit.velocity
        };
        Ok(EnvironmentSample {
            b_body: to_body(&b),
            sun_dir_body: to_body(&sun.direction),
            in_eclipse: sun.in_eclipse,
            density,
            v_rel_body: to_body(&v_rel),
            r_b_body: to_body(&orbit.position),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{MassCatalog, MassProperties};

    #[test]
    fn nadir_in_body_axes_at_identity_attitude() {
        let env = Environment::new(OrbitConfig::default(), EnvironmentConfig::default()).unwrap();
        let orbit = env.orbit_state(1234.0);
        let s = env.sample(&orbit, &UnitQuat::identity()).unwrap();
        let r = orbit.position.norm();
        assert!((s.r_b_body - Vec3::new(0.0, 0.0, -r)).norm() / r < 1e-12);
        assert!(s.v_rel_body.x > 7000.0);
        assert!((s.sun_dir_body.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disturbance_scale_over_one_orbit() {
        let env = Environment::new(OrbitConfig::default(), EnvironmentConfig::default()).unwrap();
        let props = MassProperties::from_catalog(&MassCatalog::bundled()).unwrap();
        let geom = SpacecraftGeometry::default();
        let cg = props.cg_cm * 0.01;
        let q = UnitQuat::from_euler_deg(20.0, -35.0, 60.0);
        let mut worst: f64 = 0.0;
        for i in 0..500 {
            let orbit = env.orbit_state(env.period_s() * i as f64 / 500.0);
            let s = env.sample(&orbit, &q).unwrap();
            let d = total_disturbance(&geom, &s, &props.inertia, &cg, env.constants(), DisturbanceToggles::all()).unwrap();
            worst = worst.max(d.total.norm());
        }
        assert!(worst > 0.0 && worst < 1e-5, "{worst}");
    }
}
