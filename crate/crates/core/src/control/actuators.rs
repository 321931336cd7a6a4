//! Magnetorquer allocation and x-axis reaction wheel model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ActuatorLimits {
    /// Per-axis coil dipole, A m^2 (physical fidelity).
    pub max_dipole_am2: f64,
    /// Per-axis magnetic torque, N m (ideal fidelity).
    pub max_magnetic_torque_nm: f64,
    pub max_wheel_torque_nm: f64,
    pub max_wheel_momentum_nms: f64,
}

impl Default for ActuatorLimits {
    fn default() -> Self {
        Self {
            max_dipole_am2: 0.2,
            max_magnetic_torque_nm: 2.25e-6,
            max_wheel_torque_nm: 1e-3,
            max_wheel_momentum_nms: 1e-2,
        }
    }
}

impl ActuatorLimits {
    pub fn validate(&self) -> Result<()> {
        let all = [self.max_dipole_am2, self.max_magnetic_torque_nm, self.max_wheel_torque_nm, self.max_wheel_momentum_nms];
        if all.iter().all(|v| *v > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("actuator limits must be positive: {self:?}")))
        }
    }
}

/// Actuator realism level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fidelity {
    /// Magnetic torque applied as commanded, clamped per axis.
    #[default]
    Ideal,
    /// Coil dipoles `m` with torque `m x B`; wheel gyroscopic coupling on.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Saturation {
    pub magnetic: bool,
    pub wheel_torque: bool,
    pub wheel_momentum: bool,
}

impl Saturation {
    pub fn any(&self) -> bool {
        self.magnetic || self.wheel_torque || self.wheel_momentum
    }
}

/// What the actuators actually deliver over one control step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TorqueCommand {
    /// Applied magnetic torque, body axes, N m.
    pub tau_m: Vec3,
    /// Coil dipole, A m^2; zero in ideal fidelity.
    pub dipole: Vec3,
    /// Wheel torque on the body about x, N m.
    pub tau_rw: f64,
    pub saturated: Saturation,
}

impl TorqueCommand {
    pub fn zero() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MagneticCommand {
    pub tau_m: Vec3,
    pub dipole: Vec3,
    pub saturated: bool,
}

fn clamp_axes(v: &Vec3, limit: f64) -> (Vec3, bool) {
    let c = v.map(|a| a.clamp(-limit, limit));
    (c, c != *v)
}

/// Maps a desired torque onto the magnetorquers.
///
/// Physical fidelity can only realize the part of the request perpendicular
/// to the local field: `m = (B x tau) / |B|^2`, `tau_m = m x B`.
pub fn allocate_magnetorquer(
    tau_desired: &Vec3,
    b_body: &Vec3,
    limits: &ActuatorLimits,
    fidelity: Fidelity,
) -> Result<MagneticCommand> {
    match fidelity {
        Fidelity::Ideal => {
            let (tau_m, saturated) = clamp_axes(tau_desired, limits.max_magnetic_torque_nm);
            Ok(MagneticCommand { tau_m, dipole: Vec3::zeros(), saturated })
        }
        Fidelity::Physical => {
            let b2 = b_body.norm_squared();
            if !(b2 > 0.0) {
                return Err(Error::ZeroField);
            }
            let (dipole, saturated) = clamp_axes(&(b_body.cross(tau_desired) / b2), limits.max_dipole_am2);
            Ok(MagneticCommand { tau_m: dipole.cross(b_body), dipole, saturated })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelStep {
    pub tau_applied: f64,
    pub h_w_next: f64,
    pub torque_saturated: bool,
    pub momentum_saturated: bool,
}

/// Clamps the wheel torque and integrates the exchanged momentum over `dt`.
///
/// `h_w` is the momentum delivered to the body through the wheel; when the
/// limit would be crossed the torque is cut to land exactly on it.
pub fn wheel_step(tau_cmd: f64, h_w: f64, limits: &ActuatorLimits, dt: f64) -> WheelStep {
    let max_t = limits.max_wheel_torque_nm;
    let max_h = limits.max_wheel_momentum_nms;
    let mut tau = tau_cmd.clamp(-max_t, max_t);
    let torque_saturated = tau != tau_cmd;
    let mut momentum_saturated = false;
    let next = h_w + tau * dt;
    if next.abs() > max_h {
        let bound = max_h.copysign(next);
        tau = ((bound - h_w) / dt).clamp(-max_t, max_t);
        // already past the bound in the commanded direction
        if tau.signum() == next.signum() && (h_w.abs() >= max_h) {
            tau = 0.0;
        }
        momentum_saturated = true;
    }
    let h_w_next = if momentum_saturated { (h_w + tau * dt).clamp(-max_h, max_h) } else { next };
    WheelStep { tau_applied: tau, h_w_next, torque_saturated, momentum_saturated }
}

/// `tau_m + (tau_rw, 0, 0)`.
pub fn total_control(cmd: &TorqueCommand) -> Vec3 {
    cmd.tau_m + Vec3::new(cmd.tau_rw, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_request_gives_zero_command() {
        let l = ActuatorLimits::default();
        let b = Vec3::new(1e-5, 2e-5, -3e-5);
        for f in [Fidelity::Ideal, Fidelity::Physical] {
            let c = allocate_magnetorquer(&Vec3::zeros(), &b, &l, f).unwrap();
            assert_eq!(c.tau_m, Vec3::zeros());
            assert_eq!(c.dipole, Vec3::zeros());
        }
    }

    #[test]
    fn parallel_request_is_unrealizable() {
        let b = Vec3::new(1e-5, 2e-5, -3e-5);
        let c = allocate_magnetorquer(&(b * 0.01), &b, &ActuatorLimits::default(), Fidelity::Physical).unwrap();
        assert!(c.tau_m.norm() < 1e-15 * (b * 0.01).norm());
    }

    #[test]
    fn perpendicular_request_is_exact() {
        let b = Vec3::new(0.0, 3e-5, 0.0);
        let tau = Vec3::new(1e-7, 0.0, -2e-7);
        let c = allocate_magnetorquer(&tau, &b, &ActuatorLimits::default(), Fidelity::Physical).unwrap();
        assert!((c.tau_m - tau).max_abs() < 1e-12 * tau.norm());
        assert!(!c.saturated);
    }

    #[test]
    fn physical_needs_a_field() {
        let r = allocate_magnetorquer(&Vec3::x_axis(), &Vec3::zeros(), &ActuatorLimits::default(), Fidelity::Physical);
        assert!(matches!(r, Err(Error::ZeroField)));
    }

    #[test]
    fn ideal_clamps_per_axis() {
        let l = ActuatorLimits { max_magnetic_torque_nm: 1e-5, ..Default::default() };
        let c = allocate_magnetorquer(&Vec3::new(3e-5, -2e-6, -4e-5), &Vec3::zeros(), &l, Fidelity::Ideal).unwrap();
        assert_eq!(c.tau_m, Vec3::new(1e-5, -2e-6, -1e-5));
        assert!(c.saturated);
    }

    #[test]
    fn wheel_cases() {
        let l = ActuatorLimits::default();
        assert_eq!(wheel_step(0.0, 3e-3, &l, 0.1).h_w_next, 3e-3);
        let mut h = 0.0;
        for _ in 0..100 {
            h = wheel_step(1e-3, h, &l, 0.1).h_w_next;
        }
        assert!((h - 1e-2).abs() < 1e-15);
        let s = wheel_step(5e-4, l.max_wheel_momentum_nms, &l, 0.1);
        assert_eq!(s.tau_applied, 0.0);
        assert!(s.momentum_saturated);
        assert_eq!(s.h_w_next, l.max_wheel_momentum_nms);
        // partial step lands exactly on the limit
        let s = wheel_step(1e-3, 9.95e-3, &l, 0.1);
        assert!((s.h_w_next - 1e-2).abs() < 1e-18);
        assert!((s.tau_applied - 5e-4).abs() < 1e-12);
        // unloading from the limit is allowed
        let s = wheel_step(-1e-3, l.max_wheel_momentum_nms, &l, 0.1);
        assert_eq!(s.tau_applied, -1e-3);
        assert!(!s.momentum_saturated);
    }

    #[test]
    fn total_control_adds_wheel_on_x() {
        let cmd = TorqueCommand { tau_m: Vec3::new(1e-6, 2e-6, 0.0), tau_rw: 5e-4, ..Default::default() };
        assert_eq!(total_control(&cmd), Vec3::new(5.01e-4, 2e-6, 0.0));
        let wheel_only = TorqueCommand { tau_rw: -3e-4, ..Default::default() };
        let t = total_control(&wheel_only);
        assert_eq!((t.y, t.z), (0.0, 0.0));
        assert_eq!(total_control(&TorqueCommand::zero()), Vec3::zeros());
    }

    proptest! {
        #[test]
        fn physical_torque_is_perpendicular_to_field(
            t in prop::array::uniform3(-1e-4f64..1e-4),
            b in prop::array::uniform3(-5e-5f64..5e-5),
        ) {
            let b = Vec3::from(b);
            prop_assume!(b.norm() > 1e-7);
            let c = allocate_magnetorquer(&Vec3::from(t), &b, &ActuatorLimits::default(), Fidelity::Physical).unwrap();
            prop_assert!(c.tau_m.dot(&b).abs() <= 1e-15 * c.tau_m.norm() * b.norm() + f64::MIN_POSITIVE);
        }

        #[test]
        fn wheel_momentum_stays_bounded(cmds in prop::collection::vec(-2e-3f64..2e-3, 1..400)) {
            let l = ActuatorLimits::default();
            let mut h = 0.0;
            for c in cmds {
                h = wheel_step(c, h, &l, 0.5).h_w_next;
                prop_assert!(h.abs() <= l.max_wheel_momentum_nms);
            }
        }
    }
}
