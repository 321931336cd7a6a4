//! ConOps mode state machine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::AttitudeState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Detumble,
    Nominal,
    Spin,
    Despin,
    Safe,
}

impl ModeKind {
    pub const ALL: [ModeKind; 5] = [Self::Detumble, Self::Nominal, Self::Spin, Self::Despin, Self::Safe];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Detumble => "detumble",
            Self::Nominal => "nominal",
            Self::Spin => "spin",
            Self::Despin => "despin",
            Self::Safe => "safe",
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode {
    pub kind: ModeKind,
    /// Simulation time the mode was entered, s.
    pub entered_at: f64,
    /// Completed spin segments, for schedules with more than one cycle.
    pub spins_completed: u32,
}

impl Mode {
    pub fn new(kind: ModeKind, entered_at: f64) -> Self {
        Self { kind, entered_at, spins_completed: 0 }
    }

    fn enter(&self, kind: ModeKind, t: f64) -> Self {
        Self { kind, entered_at: t, spins_completed: self.spins_completed }
    }
}

/// Ground or onboard request fed to the machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeCommand {
    Spin,
    Despin,
    Safe,
    /// Leave SAFE; the spacecraft restarts in DETUMBLE.
    Release,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModeThresholds {
    /// DETUMBLE exits once `|w|` drops below this, rad/s.
    pub detumble_rad_s: f64,
    /// DESPIN exits once `|w|` drops below this, rad/s.
    pub despin_rad_s: f64,
}

impl Default for ModeThresholds {
    fn default() -> Self {
        Self { detumble_rad_s: 0.01, despin_rad_s: 1e-3 }
    }
}

/// Automatic ConOps timing. Without it NOMINAL and SPIN only leave on command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModeSchedule {
    pub automatic: bool,
    /// Time spent in NOMINAL before spinning up, s.
    pub nominal_dwell_s: f64,
    /// Time spent in SPIN before spinning down, s.
    pub spin_dwell_s: f64,
    /// Number of spin segments to fly.
    pub cycles: u32,
}

impl Default for ModeSchedule {
    fn default() -> Self {
        Self { automatic: false, nominal_dwell_s: 1800.0, spin_dwell_s: 600.0, cycles: 1 }
    }
}

impl ModeSchedule {
    pub fn conops() -> Self {
        Self { automatic: true, ..Self::default() }
    }
}

/// Advances the machine by one evaluation at time `state.t`.
///
/// Commands that have no edge from the current mode are ignored.
pub fn mode_transition(
    mode: &Mode,
    state: &AttitudeState,
    thresholds: &ModeThresholds,
    schedule: &ModeSchedule,
    command: Option<ModeCommand>,
) -> Mode {
    let t = state.t;
    if mode.kind == ModeKind::Safe {
        return match command {
            Some(ModeCommand::Release) => mode.enter(ModeKind::Detumble, t),
            _ => *mode,
        };
    }
    if command == Some(ModeCommand::Safe) || !state.is_finite() {
        return mode.enter(ModeKind::Safe, t);
    }
    let rate = state.omega.norm();
    let dwell = t - mode.entered_at;
    match mode.kind {
        ModeKind::Detumble if rate < thresholds.detumble_rad_s => mode.enter(ModeKind::Nominal, t),
        ModeKind::Nominal => {
            let due = schedule.automatic && dwell >= schedule.nominal_dwell_s && mode.spins_completed < schedule.cycles;
            if command == Some(ModeCommand::Spin) || due {
                mode.enter(ModeKind::Spin, t)
            } else {
                *mode
            }
        }
        ModeKind::Spin => {
            if command == Some(ModeCommand::Despin) || (schedule.automatic && dwell >= schedule.spin_dwell_s) {
                let mut next = mode.enter(ModeKind::Despin, t);
                next.spins_completed += 1;
                next
            } else {
                *mode
            }
        }
        ModeKind::Despin if rate < thresholds.despin_rad_s => mode.enter(ModeKind::Nominal, t),
        _ => *mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{UnitQuat, Vec3};

    fn state(w: f64, t: f64) -> AttitudeState {
        let mut s = AttitudeState::new(UnitQuat::identity(), Vec3::new(w, 0.0, 0.0));
        s.t = t;
        s
    }

    fn step(m: &Mode, w: f64, t: f64, cmd: Option<ModeCommand>) -> Mode {
        mode_transition(m, &state(w, t), &ModeThresholds::default(), &ModeSchedule::default(), cmd)
    }

    #[test]
    fn detumble_exits_below_threshold() {
        let m = Mode::new(ModeKind::Detumble, 0.0);
        assert_eq!(step(&m, 0.011, 5.0, None).kind, ModeKind::Detumble);
        let n = step(&m, 0.009, 5.0, None);
        assert_eq!(n.kind, ModeKind::Nominal);
        assert_eq!(n.entered_at, 5.0);
    }

    #[test]
    fn nominal_self_loop_and_commands() {
        let m = Mode::new(ModeKind::Nominal, 0.0);
        assert_eq!(step(&m, 0.0, 1e6, None), m);
        assert_eq!(step(&m, 0.0, 1.0, Some(ModeCommand::Despin)), m);
        let s = step(&m, 0.0, 1.0, Some(ModeCommand::Spin));
        assert_eq!(s.kind, ModeKind::Spin);
        let d = step(&s, 0.1, 2.0, Some(ModeCommand::Despin));
        assert_eq!(d.kind, ModeKind::Despin);
        assert_eq!(d.spins_completed, 1);
        assert_eq!(step(&d, 0.002, 3.0, None).kind, ModeKind::Despin);
        assert_eq!(step(&d, 0.0005, 3.0, None).kind, ModeKind::Nominal);
    }

    #[test]
    fn safe_is_absorbing_until_release() {
        for kind in ModeKind::ALL {
            let s = step(&Mode::new(kind, 0.0), 0.5, 1.0, Some(ModeCommand::Safe));
            assert_eq!(s.kind, ModeKind::Safe);
            for cmd in [None, Some(ModeCommand::Spin), Some(ModeCommand::Despin), Some(ModeCommand::Safe)] {
                assert_eq!(step(&s, 0.0, 2.0, cmd).kind, ModeKind::Safe);
            }
            assert_eq!(step(&s, 0.0, 3.0, Some(ModeCommand::Release)).kind, ModeKind::Detumble);
        }
    }

    #[test]
    fn non_finite_state_goes_safe() {
        let m = Mode::new(ModeKind::Spin, 0.0);
        assert_eq!(step(&m, f64::NAN, 1.0, None).kind, ModeKind::Safe);
    }

    #[test]
    fn automatic_schedule_visits_modes_in_order() {
        let sched = ModeSchedule { automatic: true, nominal_dwell_s: 10.0, spin_dwell_s: 5.0, cycles: 1 };
        let th = ModeThresholds::default();
        let mut m = Mode::new(ModeKind::Detumble, 0.0);
        let mut seen = vec![m.kind];
        // rate profile: tumbling, slow, spinning, stopped
        let rate = |t: f64, kind: ModeKind| match kind {
            ModeKind::Detumble if t < 3.0 => 0.5,
            ModeKind::Spin => 0.1,
            ModeKind::Despin if t < 25.0 => 0.05,
            _ => 0.0,
        };
        for i in 0..100 {
            let t = i as f64;
            m = mode_transition(&m, &state(rate(t, m.kind), t), &th, &sched, None);
            if *seen.last().unwrap() != m.kind {
                seen.push(m.kind);
            }
        }
        use ModeKind::*;
        assert_eq!(seen, vec![Detumble, Nominal, Spin, Despin, Nominal]);
    }

    #[test]
    fn parse_and_display() {
        for k in ModeKind::ALL {
            assert_eq!(k.to_string().parse::<ModeKind>().unwrap(), k);
        }
        assert!("tumble".parse::<ModeKind>().is_err());
    }
}
