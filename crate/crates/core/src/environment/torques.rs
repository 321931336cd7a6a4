//! Aerodynamic drag, solar radiation pressure and gravity-gradient torques.
//!
//! Faces contribute only when the projection onto the flow (or sun) direction
//! is strictly positive. The centre of pressure is the projected-area-weighted
//! centroid of the contributing faces; moment arms are measured from the CG,
//! so moving the regolith shifts every arm.

use serde::{Deserialize, Serialize};

use super::{EnvironmentSample, PhysicalConstants};
use crate::error::{Error, Result};
use crate::{InertiaTensor, Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Outward unit normal.
    pub normal: Vec3,
    pub area_m2: f64,
    pub centroid_m: Vec3,
}

/// Flat-faced outer shell with uniform surface coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacecraftGeometry {
    pub faces: Vec<Face>,
    pub drag_coefficient: f64,
    /// Specular reflection coefficient.
    pub specular: f64,
    /// Diffuse reflection coefficient.
    pub diffuse: f64,
}

impl Default for SpacecraftGeometry {
    /// 10 x 10 x 34 cm 3U box centred on the chassis origin.
    fn default() -> Self {
        Self::cuboid(Vec3::new(0.10, 0.10, 0.34), 2.2, 0.6, 0.26)
    }
}

impl SpacecraftGeometry {
    /// Axis-aligned box of edge lengths `size_m` centred on the origin.
    pub fn cuboid(size_m: Vec3, drag_coefficient: f64, specular: f64, diffuse: f64) -> Self {
        let mut faces = Vec::with_capacity(6);
        for axis in 0..3 {
            let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
            let area = size_m[a] * size_m[b];
            for sign in [1.0, -1.0] {
                let normal = Vec3::axis(axis) * sign;
                faces.push(Face { normal, area_m2: area, centroid_m: normal * (0.5 * size_m[axis]) });
            }
        }
        Self { faces, drag_coefficient, specular, diffuse }
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.faces {
            if (f.normal.norm() - 1.0).abs() > 1e-9 || !(f.area_m2 > 0.0) || !f.centroid_m.is_finite() {
                return Err(Error::InvalidConfig("faces need unit normals, positive areas and finite centroids".into()));
            }
        }
        let (s, d) = (self.specular, self.diffuse);
        if !(s >= 0.0 && d >= 0.0 && s + d <= 1.0) {
            return Err(Error::InvalidConfig(format!("reflection coefficients ({s}, {d}) must be >= 0 and sum to <= 1")));
        }
        if !(self.drag_coefficient >= 0.0) {
            return Err(Error::InvalidConfig("drag coefficient must be non-negative".into()));
        }
        Ok(())
    }

    /// Same shell expressed in another frame, `v_new = rotation * v_old`.
    pub fn rotated(&self, rotation: &Mat3) -> Self {
        let mut g = self.clone();
        for f in &mut g.faces {
            f.normal = *rotation * f.normal;
            f.centroid_m = *rotation * f.centroid_m;
        }
        g
    }
}

/// Which disturbance sources are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DisturbanceToggles {
    pub drag: bool,
    pub srp: bool,
    pub gravity_gradient: bool,
}

impl Default for DisturbanceToggles {
    fn default() -> Self {
        Self::all()
    }
}

impl DisturbanceToggles {
    pub fn all() -> Self {
        Self { drag: true, srp: true, gravity_gradient: true }
    }

    pub fn none() -> Self {
        Self { drag: false, srp: false, gravity_gradient: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceAndTorque {
    pub force: Vec3,
    pub torque: Vec3,
}

pub fn drag_force_torque(geom: &SpacecraftGeometry, env: &EnvironmentSample, cg_offset: &Vec3) -> ForceAndTorque {
    let Some(vhat) = env.v_rel_body.try_normalize() else {
        return ForceAndTorque::default();
    };
    let mut projected = 0.0;
    let mut weighted = Vec3::zeros();
    for f in &geom.faces {
        let c = vhat.dot(&f.normal);
        if c > 0.0 {
            projected += f.area_m2 * c;
            weighted += f.centroid_m * (f.area_m2 * c);
        }
    }
    if projected == 0.0 {
        return ForceAndTorque::default();
    }
    let v2 = env.v_rel_body.norm_squared();
    let force = vhat * (-0.5 * geom.drag_coefficient * env.density * v2 * projected);
    let arm = weighted / projected - *cg_offset;
    ForceAndTorque { force, torque: arm.cross(&force) }
}

/// Drag torque about the CG, N m.
pub fn drag_torque(geom: &SpacecraftGeometry, env: &EnvironmentSample, cg_offset: &Vec3) -> Vec3 {
    drag_force_torque(geom, env, cg_offset).torque
}

/// Flat-plate radiation pressure on every sunlit face.
///
/// Per face: `F = -P A cos(t) [ (1 - c_s) S + 2 (c_s cos(t) + c_d / 3) n ]`
/// with `P = W / c` and `cos(t) = n . S`.
pub fn srp_force_torque(
    geom: &SpacecraftGeometry,
    env: &EnvironmentSample,
    cg_offset: &Vec3,
    k: &PhysicalConstants,
) -> ForceAndTorque {
    if env.in_eclipse {
        return ForceAndTorque::default();
    }
    let pressure = k.solar_flux_w_m2 / k.speed_of_light_m_s;
    let s = env.sun_dir_body;
    let mut force = Vec3::zeros();
    let mut lit = 0.0;
    let mut weighted = Vec3::zeros();
    for f in &geom.faces {
        let c = f.normal.dot(&s);
        if c > 0.0 {
            let dir = s * (1.0 - geom.specular) + f.normal * (2.0 * (geom.specular * c + geom.diffuse / 3.0));
            force += dir * (-pressure * f.area_m2 * c);
            lit += f.area_m2 * c;
            weighted += f.centroid_m * (f.area_m2 * c);
        }
    }
    if lit == 0.0 {
        return ForceAndTorque::default();
    }
    let arm = weighted / lit - *cg_offset;
    ForceAndTorque { force, torque: arm.cross(&force) }
}

/// Solar radiation pressure torque about the CG, N m; zero in eclipse.
pub fn srp_torque(geom: &SpacecraftGeometry, env: &EnvironmentSample, cg_offset: &Vec3, k: &PhysicalConstants) -> Vec3 {
    srp_force_torque(geom, env, cg_offset, k).torque
}

/// `3 mu / |r|^5 (r x J r)`, body axes.
pub fn gravity_gradient_torque(inertia: &InertiaTensor, r_b_body: &Vec3, mu: f64) -> Result<Vec3> {
    let r = r_b_body.norm();
    if !(r > 0.0) {
        return Err(Error::ZeroRadius);
    }
    Ok(r_b_body.cross(&inertia.apply(r_b_body)) * (3.0 * mu / r.powi(5)))
}

/// Per-source disturbance torques and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Disturbances {
    pub drag: Vec3,
    pub srp: Vec3,
    pub gravity_gradient: Vec3,
    pub total: Vec3,
}

pub fn total_disturbance(
    geom: &SpacecraftGeometry,
    env: &EnvironmentSample,
    inertia: &InertiaTensor,
    cg_offset: &Vec3,
    k: &PhysicalConstants,
    toggles: DisturbanceToggles,
) -> Result<Disturbances> {
    let drag = if toggles.drag { drag_torque(geom, env, cg_offset) } else { Vec3::zeros() };
    let srp = if toggles.srp { srp_torque(geom, env, cg_offset, k) } else { Vec3::zeros() };
    let gravity_gradient =
        if toggles.gravity_gradient { gravity_gradient_torque(inertia, &env.r_b_body, k.mu_m3_s2)? } else { Vec3::zeros() };
    Ok(Disturbances { drag, srp, gravity_gradient, total: drag + srp + gravity_gradient })
}
