//! Convergence metrics over rate histories.
//!
//! Each metric has an online tracker, used inside the run loop at full step
//! resolution, and a slice form for recorded telemetry.

use super::telemetry::TelemetryRecord;
use crate::Vec3;

/// Tracks the first time after which a predicate holds for every later sample.
#[derive(Debug, Clone, Copy, Default)]
pub struct HoldTracker {
    start: Option<f64>,
    since: Option<f64>,
}

impl HoldTracker {
    pub fn push(&mut self, t: f64, ok: bool) {
        self.start.get_or_insert(t);
        match (ok, self.since) {
            (true, None) => self.since = Some(t),
            (false, _) => self.since = None,
            _ => {}
        }
    }

    /// Absolute time the current compliant run began.
    pub fn since(&self) -> Option<f64> {
        self.since
    }

    /// Time from the first sample to the start of the current compliant run.
    pub fn elapsed(&self) -> Option<f64> {
        Some(self.since? - self.start?)
    }
}

/// Rate-norm threshold crossing, holding to the end.
pub fn detumble_time(telemetry: &[TelemetryRecord], threshold: f64, orbit_period: f64) -> Option<f64> {
    let mut h = HoldTracker::default();
    for r in telemetry {
        h.push(r.t, r.omega.norm() < threshold);
    }
    h.since().map(|t| t / orbit_period)
}

/// Whether `omega` is inside the settle band around `target`.
///
/// The band is `band * |target|`, or `floor` when that is smaller (zero targets).
pub fn within_band(omega: &Vec3, target: &Vec3, band: f64, floor: f64) -> bool {
    (*omega - *target).norm() <= (band * target.norm()).max(floor)
}

/// Seconds from the first sample until the rate enters the band for good.
pub fn settle_time(telemetry: &[TelemetryRecord], target: &Vec3, band: f64, floor: f64) -> Option<f64> {
    let mut h = HoldTracker::default();
    for r in telemetry {
        h.push(r.t, within_band(&r.omega, target, band, floor));
    }
    h.elapsed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ModeKind;

    fn series(f: impl Fn(f64) -> Vec3, dt: f64, n: usize) -> Vec<TelemetryRecord> {
        (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                TelemetryRecord { t, omega: f(t), mode: ModeKind::Spin, ..Default::default() }
            })
            .collect()
    }

    #[test]
    fn already_below_threshold_is_zero() {
        let tm = series(|_| Vec3::new(0.001, 0.0, 0.0), 1.0, 10);
        assert_eq!(detumble_time(&tm, 0.01, 5545.0), Some(0.0));
        assert_eq!(settle_time(&tm, &Vec3::new(0.001, 0.0, 0.0), 0.01, 0.0), Some(0.0));
    }

    #[test]
    fn single_crossing_and_recrossing() {
        let tm = series(|t| Vec3::new(if t < 300.0 { 0.02 } else { 0.005 }, 0.0, 0.0), 1.0, 1000);
        assert_eq!(detumble_time(&tm, 0.01, 600.0), Some(0.5));
        let bump = series(|t| Vec3::new(if t < 300.0 || (500.0..510.0).contains(&t) { 0.02 } else { 0.0 }, 0.0, 0.0), 1.0, 1000);
        assert_eq!(detumble_time(&bump, 0.01, 600.0), Some(510.0 / 600.0));
        let never = series(|_| Vec3::new(0.02, 0.0, 0.0), 1.0, 10);
        assert_eq!(detumble_time(&never, 0.01, 600.0), None);
    }

    #[test]
    fn exponential_approach_settles_near_4_6_tau() {
        let tau = 2.0;
        let target = Vec3::new(0.1, 0.0, 0.0);
        let tm = series(|t| target * (1.0 - (-t / tau).exp()), 1e-3, 30_000);
        let s = settle_time(&tm, &target, 0.01, 0.0).unwrap();
        assert!((s - 100f64.ln() * tau).abs() < 2e-3, "{s}");
    }

    #[test]
    fn zero_target_uses_floor() {
        let tm = series(|t| Vec3::new(0.1 * (-t).exp(), 0.0, 0.0), 1e-3, 20_000);
        let s = settle_time(&tm, &Vec3::zeros(), 0.01, 1e-3).unwrap();
        assert!((s - 100f64.ln()).abs() < 2e-3);
        assert_eq!(settle_time(&tm, &Vec3::zeros(), 0.01, 0.0), None);
    }
}
