//! Control laws, actuator models and the mode machine.

mod actuators;
mod laws;
mod modes;

use serde::{Deserialize, Serialize};

pub use actuators::{
    allocate_magnetorquer, total_control, wheel_step, ActuatorLimits, Fidelity, MagneticCommand, Saturation,
    TorqueCommand, WheelStep,
};
pub use laws::{error_state, error_state_with, pd_torque, spin_torques, ErrorLaw, ErrorState, Gains};
pub use modes::{mode_transition, Mode, ModeCommand, ModeKind, ModeSchedule, ModeThresholds};

use crate::error::Result;
use crate::units::RPM;
use crate::{AttitudeState, UnitQuat, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControllerConfig {
    pub gains: Gains,
    pub limits: ActuatorLimits,
    pub fidelity: Fidelity,
    pub error_law: ErrorLaw,
    /// SPIN target rate about body x, rad/s.
    pub spin_rate_rad_s: f64,
    /// NOMINAL / DETUMBLE attitude target relative to the orbit frame.
    pub target: UnitQuat,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            gains: Gains::default(),
            limits: ActuatorLimits::default(),
            fidelity: Fidelity::default(),
            error_law: ErrorLaw::default(),
            spin_rate_rad_s: RPM,
            target: UnitQuat::identity(),
        }
    }
}

/// Command for one step plus the wheel momentum at its end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    pub command: TorqueCommand,
    pub wheel_momentum_next: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Controller {
    pub config: ControllerConfig,
}

impl Controller {
    pub fn new(config: ControllerConfig) -> Result<Self> {
        config.gains.validate()?;
        config.limits.validate()?;
        Ok(Self { config })
    }

    /// Desired rate for a given mode.
    pub fn rate_target(&self, mode: ModeKind) -> Vec3 {
        match mode {
            ModeKind::Spin => Vec3::new(self.config.spin_rate_rad_s, 0.0, 0.0),
            _ => Vec3::zeros(),
        }
    }

    /// Evaluates the law for `mode` and runs it through the actuator models.
    pub fn command(&self, mode: ModeKind, state: &AttitudeState, b_body: &Vec3, dt: f64) -> Result<ControlOutput> {
        let c = &self.config;
        let err = error_state_with(c.error_law, &state.q, &c.target, &state.omega, &self.rate_target(mode));
        let (tau_rw_cmd, tau_m_desired) = match mode {
            ModeKind::Safe => {
                return Ok(ControlOutput { command: TorqueCommand::zero(), wheel_momentum_next: state.wheel_momentum })
            }
            ModeKind::Detumble | ModeKind::Nominal => (0.0, pd_torque(&err, &c.gains)),
            ModeKind::Spin | ModeKind::Despin => spin_torques(&err, &c.gains),
        };
        let mag = allocate_magnetorquer(&tau_m_desired, b_body, &c.limits, c.fidelity)?;
        let wheel = wheel_step(tau_rw_cmd, state.wheel_momentum, &c.limits, dt);
        Ok(ControlOutput {
            command: TorqueCommand {
                tau_m: mag.tau_m,
                dipole: mag.dipole,
                tau_rw: wheel.tau_applied,
                saturated: Saturation {
                    magnetic: mag.saturated,
                    wheel_torque: wheel.torque_saturated,
                    wheel_momentum: wheel.momentum_saturated,
                },
            },
            wheel_momentum_next: wheel.h_w_next,
        })
    }

    /// Rotor momentum in body axes for the gyroscopic term. The wheel holds
    /// the opposite of what it has handed to the body.
    pub fn rotor_momentum(&self, wheel_momentum: f64) -> Vec3 {
        match self.config.fidelity {
            Fidelity::Ideal => Vec3::zeros(),
            Fidelity::Physical => Vec3::new(-wheel_momentum, 0.0, 0.0),
        }
    }
}
