//! Closed-loop propagation of one scenario.

use serde::Serialize;

use super::metrics::{within_band, HoldTracker};
use super::scenario::{ResolvedScenario, Scenario};
use super::telemetry::TelemetryRecord;
use crate::attitude::{rk4_step, RigidBody};
use crate::control::{mode_transition, total_control, Controller, Mode, ModeKind, TorqueCommand};
use crate::environment::{total_disturbance, Environment};
use crate::error::{Error, Result};
use crate::{AttitudeState, Mat3, UnitQuat, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SaturationCounts {
    pub magnetic: u64,
    pub wheel_torque: u64,
    pub wheel_momentum: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinalState {
    pub t_s: f64,
    pub q: [f64; 4],
    pub omega_rad_s: Vec3,
    pub euler_deg: Vec3,
    pub wheel_momentum_nms: f64,
    pub mode: ModeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeChange {
    pub t_s: f64,
    pub mode: ModeKind,
}

/// Summary metrics of one run. Optional times are `None` when the condition
/// was not met by the end of the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub mode: ModeKind,
    pub converged: bool,
    pub dt_s: f64,
    pub substeps: u32,
    pub duration_s: f64,
    pub steps: u64,
    pub orbit_period_s: f64,
    pub seed: u64,
    pub regolith_cm: Vec3,
    pub total_mass_kg: f64,
    /// Inertia in body axes, kg m^2.
    pub inertia: Mat3,
    pub body_rotation: Mat3,
    /// `|w| < detumble threshold` for the rest of the run.
    pub detumble_time_orbits: Option<f64>,
    /// Rate inside the settle band of the mode's target for the rest of the run.
    pub settle_time_s: Option<f64>,
    /// `|w| < despin threshold` for the rest of the run.
    pub rate_hold_time_s: Option<f64>,
    /// Every Euler angle inside the alignment tolerance for the rest of the run.
    pub alignment_time_orbits: Option<f64>,
    /// Largest body-z off-nadir angle once aligned and rate-settled, deg.
    pub max_cone_angle_post_settle_deg: Option<f64>,
    pub max_q_err_post_settle: Option<f64>,
    pub max_omega_post_settle: Option<f64>,
    /// Largest cross-axis rate `sqrt(wy^2 + wz^2)` after settling, rad/s.
    pub max_cross_axis_rate_post_settle: Option<f64>,
    pub saturation: SaturationCounts,
    pub max_wheel_momentum_nms: f64,
    /// Largest `|tau_m . B| / (|tau_m| |B|)` over the run.
    pub max_torque_field_cosine: f64,
    pub modes: Vec<ModeChange>,
    pub final_state: FinalState,
}

/// Worst-case values recorded from a given time onward.
///
/// Metrics that only count after settling are kept as a suffix maximum over
/// step samples, so the value is the maximum over the final compliant run.
#[derive(Debug, Clone, Copy, Default)]
struct SuffixMax {
    value: f64,
}

impl SuffixMax {
    fn push(&mut self, ok: bool, v: f64) {
        self.value = if ok { self.value.max(v) } else { 0.0 };
    }
}

fn cone_angle_deg(q: &UnitQuat) -> f64 {
    // body z in orbit axes, against orbit z (nadir)
    let r = q.body_to_reference();
    r.m[2][2].clamp(-1.0, 1.0).acos().to_degrees()
}

fn record(state: &AttitudeState, cmd: &TorqueCommand, mode: ModeKind) -> TelemetryRecord {
    let (r, p, y) = state.q.to_euler_deg();
    let q = state.q.quaternion();
    TelemetryRecord {
        t: state.t,
        q: [q.w, q.x, q.y, q.z],
        omega: state.omega,
        euler_deg: Vec3::new(r, p, y),
        tau_m: cmd.tau_m,
        tau_rw: cmd.tau_rw,
        wheel_momentum: state.wheel_momentum,
        mode,
    }
}

/// Runs a scenario, collecting decimated telemetry.
pub fn run_scenario(scenario: &Scenario) -> Result<(Vec<TelemetryRecord>, RunResult)> {
    let mut tm = Vec::new();
    let result = run_scenario_with(scenario, |r| tm.push(*r))?;
    Ok((tm, result))
}

/// Runs a scenario, handing each recorded sample to `sink`.
pub fn run_scenario_with(scenario: &Scenario, sink: impl FnMut(&TelemetryRecord)) -> Result<RunResult> {
    let resolved = scenario.resolve()?;
    run_resolved(scenario, &resolved, sink)
}

pub fn run_resolved(
    scenario: &Scenario,
    resolved: &ResolvedScenario,
    mut sink: impl FnMut(&TelemetryRecord),
) -> Result<RunResult> {
    let env = Environment::new(scenario.orbit, scenario.environment.clone())?;
    let controller = Controller::new(scenario.controller_config())?;
    let sim = &scenario.sim;
    let dt = sim.dt_s;
    let substeps = sim.substeps.max(1);
    let n = scenario.steps();
    let every = scenario.telemetry_every();
    let period = env.period_s();
    let thresholds = scenario.mode.thresholds;
    let band = sim.settle_band;
    let spin_rate = controller.config.spin_rate_rad_s;

    let mut state = AttitudeState::new(sim.initial.attitude(), sim.initial.omega());
    state.wheel_momentum = sim.initial.wheel_momentum_nms;
    let mut mode = Mode::new(scenario.mode.initial, 0.0);
    let mut modes = vec![ModeChange { t_s: 0.0, mode: mode.kind }];
    let mut commands = scenario.mode.commands.clone();
    commands.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
    let mut next_cmd = 0;

    let mut detumble = HoldTracker::default();
    let mut settle = HoldTracker::default();
    let mut rate_hold = HoldTracker::default();
    let mut aligned = HoldTracker::default();
    let mut cone = SuffixMax::default();
    let mut q_err = SuffixMax::default();
    let mut omega_max = SuffixMax::default();
    let mut cross = SuffixMax::default();
    let mut sat = SaturationCounts::default();
    let mut max_h: f64 = state.wheel_momentum.abs();
    let mut max_cos: f64 = 0.0;

    for k in 0..=n {
        // pending commands due by now, then the automatic edges
        let mut command = None;
        while next_cmd < commands.len() && commands[next_cmd].t_s <= state.t + 1e-9 * dt {
            command = Some(commands[next_cmd].command);
            next_cmd += 1;
        }
        if scenario.mode.automatic || command.is_some() {
            let schedule = if scenario.mode.automatic { scenario.mode.schedule } else { Default::default() };
            let next = mode_transition(&mode, &state, &thresholds, &schedule, command);
            if next.kind != mode.kind {
                modes.push(ModeChange { t_s: state.t, mode: next.kind });
            }
            mode = next;
        }

        let orbit = env.orbit_state(state.t);
        let sample = env.sample(&orbit, &state.q)?;
        let dist = total_disturbance(
            &resolved.geometry,
            &sample,
            &resolved.inertia,
            &resolved.cg_body_m,
            env.constants(),
            sim.disturbances,
        )?;
        let out = controller.command(mode.kind, &state, &sample.b_body, dt)?;
        let cmd = out.command;

        // metrics on the state at t_k
        let rate = state.omega.norm();
        let target = controller.rate_target(mode.kind);
        let in_band = within_band(&state.omega, &target, band, band * spin_rate);
        detumble.push(state.t, rate < thresholds.detumble_rad_s);
        settle.push(state.t, in_band);
        rate_hold.push(state.t, rate < thresholds.despin_rad_s);
        let (r, p, y) = state.q.to_euler_deg();
        let tol = sim.alignment_tolerance_deg;
        let is_aligned = r.abs() < tol && p.abs() < tol && y.abs() < tol;
        aligned.push(state.t, is_aligned);
        cone.push(is_aligned && in_band, cone_angle_deg(&state.q));
        q_err.push(in_band, state.q.vector().norm());
        omega_max.push(in_band, rate);
        cross.push(in_band, state.omega.y.hypot(state.omega.z));

        if k % every == 0 || k == n {
            sink(&record(&state, &cmd, mode.kind));
        }
        if k == n {
            break;
        }

        sat.magnetic += cmd.saturated.magnetic as u64;
        sat.wheel_torque += cmd.saturated.wheel_torque as u64;
        sat.wheel_momentum += cmd.saturated.wheel_momentum as u64;
        let tm = cmd.tau_m.norm() * sample.b_body.norm();
        if tm > 0.0 {
            max_cos = max_cos.max(cmd.tau_m.dot(&sample.b_body).abs() / tm);
        }

        let body = RigidBody {
            inertia: resolved.inertia,
            tau_c: total_control(&cmd),
            tau_d: dist.total,
            internal_momentum: controller.rotor_momentum(state.wheel_momentum),
            orbit_rate: sim.orbit_rate_coupling.then(|| orbit.frame_rate()),
        };
        let h = dt / substeps as f64;
        let mut next = state;
        for _ in 0..substeps {
            next = rk4_step(&next, h, |q, w| body.rates(q, w)).map_err(|e| match e {
                Error::NonFinite(_) | Error::ZeroQuaternion => Error::Diverged { step: k, t: state.t },
                other => other,
            })?;
        }
        next.wheel_momentum = out.wheel_momentum_next;
        // keep t on the grid rather than accumulating dt
        next.t = (k + 1) as f64 * dt;
        max_h = max_h.max(next.wheel_momentum.abs());
        state = next;
    }

    let detumble_time_orbits = detumble.since().map(|t| t / period);
    let settle_time_s = settle.elapsed();
    let rate_hold_time_s = rate_hold.elapsed();
    let alignment_time_orbits = aligned.since().map(|t| t / period);
    let settled = settle_time_s.is_some();
    let converged = match scenario.mode.initial {
        _ if scenario.mode.automatic => {
            mode.kind == ModeKind::Nominal && modes.iter().any(|m| m.mode == ModeKind::Despin)
        }
        ModeKind::Detumble => detumble_time_orbits.is_some(),
        ModeKind::Spin => settled,
        ModeKind::Despin => settled && rate_hold_time_s.is_some(),
        ModeKind::Nominal => alignment_time_orbits.is_some(),
        ModeKind::Safe => true,
    };
    let (r, p, y) = state.q.to_euler_deg();
    let q = state.q.quaternion();
    Ok(RunResult {
        mode: scenario.mode.initial,
        converged,
        dt_s: dt,
        substeps,
        duration_s: n as f64 * dt,
        steps: n,
        orbit_period_s: period,
        seed: scenario.seed(),
        regolith_cm: resolved.regolith_cm,
        total_mass_kg: resolved.total_mass_kg,
        inertia: *resolved.inertia.matrix(),
        body_rotation: resolved.body_rotation,
        detumble_time_orbits,
        settle_time_s,
        rate_hold_time_s,
        alignment_time_orbits,
        max_cone_angle_post_settle_deg: (alignment_time_orbits.is_some() && settled).then_some(cone.value),
        max_q_err_post_settle: settled.then_some(q_err.value),
        max_omega_post_settle: settled.then_some(omega_max.value),
        max_cross_axis_rate_post_settle: settled.then_some(cross.value),
        saturation: sat,
        max_wheel_momentum_nms: max_h,
        max_torque_field_cosine: max_cos,
        modes,
        final_state: FinalState {
            t_s: state.t,
            q: [q.w, q.x, q.y, q.z],
            omega_rad_s: state.omega,
            euler_deg: Vec3::new(r, p, y),
            wheel_momentum_nms: state.wheel_momentum,
            mode: mode.kind,
        },
    })
}
