//! Scenario configuration and its resolution into simulation inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::{
    ActuatorLimits, ControllerConfig, ErrorLaw, Fidelity, Gains, ModeCommand, ModeKind, ModeSchedule, ModeThresholds,
};
use crate::environment::{DisturbanceToggles, EnvironmentConfig, OrbitConfig, SpacecraftGeometry};
use crate::error::{Error, Result};
use crate::mass::{sample_regolith, MassCatalog, MassProperties};
use crate::units::{rpm_to_rad_s, RPM};
use crate::{InertiaTensor, Mat3, UnitQuat, Vec3};

/// Where the regolith sits for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegolithPolicy {
    /// The catalog's own regolith position.
    #[default]
    Stowed,
    /// Geometric centre of the chamber.
    Centroid,
    /// Explicit position, cm.
    Fixed(Vec3),
    /// Uniform draw inside the chamber from the run seed.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyAxes {
    /// Principal axes of the current mass distribution.
    #[default]
    Principal,
    /// Chassis geometric axes; products of inertia kept.
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MassConfig {
    /// Catalog JSON file; the bundled catalog when absent.
    pub catalog: Option<PathBuf>,
    pub regolith: RegolithPolicy,
    pub regolith_mass_kg: Option<f64>,
    pub body_axes: BodyAxes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedCommand {
    pub t_s: f64,
    pub command: ModeCommand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModeConfig {
    pub initial: ModeKind,
    /// Let the state machine move between modes on its own.
    pub automatic: bool,
    pub thresholds: ModeThresholds,
    pub schedule: ModeSchedule,
    pub commands: Vec<TimedCommand>,
}

impl Default for ModeConfig {
    fn default() -> Self {
        Self {
            initial: ModeKind::Detumble,
            automatic: false,
            thresholds: ModeThresholds::default(),
            schedule: ModeSchedule::default(),
            commands: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialState {
    pub omega_rpm: Vec3,
    /// Overrides `omega_rpm` when present.
    pub omega_rad_s: Option<Vec3>,
    /// Roll, pitch, yaw of the body relative to the orbit frame.
    pub euler_deg: Vec3,
    pub wheel_momentum_nms: f64,
}

impl Default for InitialState {
    fn default() -> Self {
        Self { omega_rpm: Vec3::zeros(), omega_rad_s: None, euler_deg: Vec3::zeros(), wheel_momentum_nms: 0.0 }
    }
}

impl InitialState {
    pub fn omega(&self) -> Vec3 {
        self.omega_rad_s.unwrap_or(self.omega_rpm * RPM)
    }

    pub fn attitude(&self) -> UnitQuat {
        UnitQuat::from_euler_deg(self.euler_deg.x, self.euler_deg.y, self.euler_deg.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Control, environment and telemetry step, s.
    pub dt_s: f64,
    /// RK4 steps per `dt_s`; torques are held across them.
    pub substeps: u32,
    pub duration_s: Option<f64>,
    pub duration_orbits: Option<f64>,
    pub fidelity: Fidelity,
    pub disturbances: DisturbanceToggles,
    pub seed: Option<u64>,
    pub initial: InitialState,
    /// Record every N-th step; default is every step for runs up to 120 s
    /// and a 1 s cadence otherwise.
    pub telemetry_every: Option<u64>,
    /// Kinematics relative to the rotating orbit frame.
    pub orbit_rate_coupling: bool,
    pub error_law: ErrorLaw,
    /// Fractional settle band for rate targets.
    pub settle_band: f64,
    pub spin_rate_rpm: f64,
    /// Per-axis Euler bound for nominal alignment, deg.
    pub alignment_tolerance_deg: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt_s: 0.1,
            substeps: 1,
            duration_s: None,
            duration_orbits: Some(12.0),
            fidelity: Fidelity::Ideal,
            disturbances: DisturbanceToggles::all(),
            seed: None,
            initial: InitialState::default(),
            telemetry_every: None,
            orbit_rate_coupling: false,
            error_law: ErrorLaw::Additive,
            settle_band: 0.01,
            spin_rate_rpm: 1.0,
            alignment_tolerance_deg: 5.0,
        }
    }
}

/// Monte Carlo draw ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingConfig {
    /// Draw the regolith uniformly inside the chamber for every run.
    pub regolith: bool,
    /// Draw an all-axes initial rate uniformly in `[lo, hi]` RPM.
    pub omega_rpm: Option<[f64; 2]>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { regolith: true, omega_rpm: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub orbit: OrbitConfig,
    pub mass: MassConfig,
    pub geometry: SpacecraftGeometry,
    pub gains: Gains,
    pub limits: ActuatorLimits,
    pub mode: ModeConfig,
    pub sim: SimConfig,
    pub environment: EnvironmentConfig,
    pub montecarlo: SamplingConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::preset(ModeKind::Detumble)
    }
}

impl Scenario {
    /// Bundled setup for one mode.
    pub fn preset(mode: ModeKind) -> Self {
        let mut s = Self {
            orbit: OrbitConfig::default(),
            mass: MassConfig::default(),
            geometry: SpacecraftGeometry::default(),
            gains: Gains::default(),
            limits: ActuatorLimits::default(),
            mode: ModeConfig { initial: mode, ..Default::default() },
            sim: SimConfig::default(),
            environment: EnvironmentConfig::default(),
            montecarlo: SamplingConfig::default(),
        };
        match mode {
            ModeKind::Detumble => {
                s.sim.initial.omega_rpm = Vec3::new(35.0, 35.0, 35.0);
                s.sim.duration_orbits = Some(12.0);
                // RK4 bleeds energy at |w| dt near 1 rad
                s.sim.substeps = 4;
            }
            ModeKind::Spin | ModeKind::Despin => {
                s.mass.regolith = RegolithPolicy::Centroid;
                s.sim.duration_orbits = None;
                s.sim.duration_s = Some(120.0);
                if mode == ModeKind::Despin {
                    s.sim.initial.omega_rpm = Vec3::new(1.0, 0.0, 0.0);
                }
            }
            ModeKind::Nominal => {
                s.mass.regolith = RegolithPolicy::Sampled;
                s.sim.initial.euler_deg = Vec3::new(90.0, 90.0, 90.0);
                // z-axis derivative loop is sampled: Kd dt / Jzz must stay below 2
                s.sim.dt_s = 0.02;
                s.sim.duration_orbits = Some(4.0);
            }
            ModeKind::Safe => {
                s.sim.duration_orbits = Some(1.0);
            }
        }
        s
    }

    /// Full ConOps sequence with automatic transitions.
    pub fn conops() -> Self {
        let mut s = Self::preset(ModeKind::Detumble);
        s.sim.initial.omega_rpm = Vec3::new(5.0, 5.0, 5.0);
        s.sim.duration_orbits = Some(5.0);
        // nominal legs need the short step; 5 RPM does not need sub-steps
        s.sim.dt_s = 0.02;
        s.sim.substeps = 1;
        s.mode.automatic = true;
        s.mode.schedule = ModeSchedule { automatic: true, nominal_dwell_s: 5400.0, spin_dwell_s: 600.0, cycles: 1 };
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config { what: "scenario".into(), path, source: e.into_inner() }
        })
    }

    /// Loads a scenario; a relative catalog path is taken relative to the file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut s = Self::from_json_str(&text).map_err(|e| match e {
            Error::Config { path: key, source, .. } => Error::Config { what: path.display().to_string(), path: key, source },
            other => other,
        })?;
        if let (Some(cat), Some(dir)) = (&s.mass.catalog, path.parent()) {
            if cat.is_relative() {
                s.mass.catalog = Some(dir.join(cat));
            }
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn seed(&self) -> u64 {
        self.sim.seed.unwrap_or(0)
    }

    pub fn period_s(&self) -> f64 {
        self.orbit.period_s(&self.environment.constants)
    }

    pub fn duration_s(&self) -> f64 {
        match (self.sim.duration_s, self.sim.duration_orbits) {
            (Some(s), _) => s,
            (None, Some(o)) => o * self.period_s(),
            (None, None) => f64::NAN,
        }
    }

    pub fn steps(&self) -> u64 {
        (self.duration_s() / self.sim.dt_s).round().max(1.0) as u64
    }

    pub fn telemetry_every(&self) -> u64 {
        self.sim.telemetry_every.unwrap_or_else(|| {
            if self.duration_s() <= 120.0 {
                1
            } else {
                (1.0 / self.sim.dt_s).round().max(1.0) as u64
            }
        })
    }

    pub fn controller_config(&self) -> ControllerConfig {
        ControllerConfig {
            gains: self.gains,
            limits: self.limits,
            fidelity: self.sim.fidelity,
            error_law: self.sim.error_law,
            spin_rate_rad_s: rpm_to_rad_s(self.sim.spin_rate_rpm),
            target: UnitQuat::identity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dt = self.sim.dt_s;
        let dur = self.duration_s();
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("sim.dt_s must be positive, got {dt}")));
        }
        if !(dur > 0.0 && dur.is_finite()) {
            return Err(Error::InvalidConfig("sim needs a positive duration_s or duration_orbits".into()));
        }
        if dt > dur {
            return Err(Error::InvalidConfig(format!("dt {dt} s exceeds the duration {dur} s")));
        }
        if !(self.sim.settle_band > 0.0 && self.sim.settle_band < 1.0) {
            return Err(Error::InvalidConfig("sim.settle_band must lie in (0, 1)".into()));
        }
        if self.sim.substeps == 0 {
            return Err(Error::InvalidConfig("sim.substeps must be at least 1".into()));
        }
        if self.sim.telemetry_every == Some(0) {
            return Err(Error::InvalidConfig("sim.telemetry_every must be at least 1".into()));
        }
        if let Some([lo, hi]) = self.montecarlo.omega_rpm {
            if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidConfig("montecarlo.omega_rpm needs lo <= hi".into()));
            }
        }
        self.orbit.validate()?;
        self.geometry.validate()?;
        self.gains.validate()?;
        self.limits.validate()
    }

    fn catalog(&self) -> Result<MassCatalog> {
        let mut c = match &self.mass.catalog {
            Some(p) => MassCatalog::from_path(p)?,
            None => MassCatalog::bundled(),
        };
        if let Some(m) = self.mass.regolith_mass_kg {
            c = c.with_regolith_mass(m);
        }
        Ok(c)
    }

    /// Regolith position this scenario resolves to, cm.
    pub fn regolith_position(&self, catalog: &MassCatalog) -> Vec3 {
        match self.mass.regolith {
            RegolithPolicy::Stowed if catalog.regolith_sampled() => sample_regolith(catalog.chamber(), self.seed()),
            RegolithPolicy::Stowed => catalog.regolith().position_cm,
            RegolithPolicy::Centroid => catalog.chamber().center(),
            RegolithPolicy::Fixed(p) => p,
            RegolithPolicy::Sampled => sample_regolith(catalog.chamber(), self.seed()),
        }
    }

    /// Mass properties and geometry in the body frame the run integrates in.
    pub fn resolve(&self) -> Result<ResolvedScenario> {
        self.validate()?;
        let base = self.catalog()?;
        let regolith_cm = self.regolith_position(&base);
        let catalog = base.with_regolith_at(regolith_cm);
        let props = MassProperties::from_catalog(&catalog)?;
        let rotation = match self.mass.body_axes {
            BodyAxes::Principal => props.principal_frame().rotation,
            BodyAxes::Geometric => Mat3::identity(),
        };
        let j_body = rotation.mul_mat(props.inertia.matrix()).mul_mat(&rotation.transpose());
        Ok(ResolvedScenario {
            regolith_cm,
            total_mass_kg: props.total_mass,
            cg_body_m: rotation * props.cg_cm * 0.01,
            inertia: InertiaTensor::new(j_body.zip_map(&j_body.transpose(), |a, b| 0.5 * (a + b)))?,
            geometry: self.geometry.rotated(&rotation),
            body_rotation: rotation,
        })
    }
}

/// Scenario quantities that depend on the regolith draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScenario {
    pub regolith_cm: Vec3,
    pub total_mass_kg: f64,
    /// CG offset from the chassis origin, body axes, m.
    pub cg_body_m: Vec3,
    pub inertia: InertiaTensor,
    pub geometry: SpacecraftGeometry,
    /// Geometric to body axes.
    pub body_rotation: Mat3,
}
