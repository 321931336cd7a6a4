use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{UnitQuat, Vec3};

/// Controller gains. `kp`/`kd` drive the PD law, `k1` the wheel and `k2`
/// the magnetorquer channel of the spin law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Gains {
    pub kp: f64,
    pub kd: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for Gains {
    fn default() -> Self {
        Self { kp: 9e-5, kd: 9e-3, k1: 7e-3, k2: 7e-4 }
    }
}

impl Gains {
    pub fn validate(&self) -> Result<()> {
        if [self.kp, self.kd, self.k1, self.k2].iter().all(|g| *g > 0.0 && g.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("gains must be strictly positive: {self:?}")))
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { kp: self.kp * c, kd: self.kd * c, k1: self.k1 * c, k2: self.k2 * c }
    }
}

/// How the attitude error is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorLaw {
    /// `vec(q) - vec(q_d)`.
    #[default]
    Additive,
    /// `vec(q_d^-1 (x) q)`.
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorState {
    pub q_e_vec: Vec3,
    pub omega_e: Vec3,
}

/// Vector-part and rate deviations from the targets.
pub fn error_state(q: &UnitQuat, q_d: &UnitQuat, omega: &Vec3, omega_d: &Vec3) -> ErrorState {
    ErrorState { q_e_vec: q.vector() - q_d.vector(), omega_e: *omega - *omega_d }
}

pub fn error_state_with(law: ErrorLaw, q: &UnitQuat, q_d: &UnitQuat, omega: &Vec3, omega_d: &Vec3) -> ErrorState {
    match law {
        ErrorLaw::Additive => error_state(q, q_d, omega, omega_d),
        ErrorLaw::Multiplicative => {
            ErrorState { q_e_vec: q_d.inverse().compose(q).vector(), omega_e: *omega - *omega_d }
        }
    }
}

/// `-Kp q_e - Kd w_e`.
pub fn pd_torque(err: &ErrorState, gains: &Gains) -> Vec3 {
    -(err.q_e_vec * gains.kp) - err.omega_e * gains.kd
}

/// Wheel torque `-K1 w_e.x` and magnetic torque `-K2 (0, w_e.y, w_e.z)`.
pub fn spin_torques(err: &ErrorState, gains: &Gains) -> (f64, Vec3) {
    let w = err.omega_e;
    (-gains.k1 * w.x, Vec3::new(0.0, -gains.k2 * w.y, -gains.k2 * w.z))
}
