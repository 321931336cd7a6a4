//! Scenario assembly, closed-loop runs, metrics and Monte Carlo batches.

mod metrics;
mod monte_carlo;
mod run;
mod scenario;
mod telemetry;

pub use metrics::{detumble_time, settle_time, within_band, HoldTracker};
pub use monte_carlo::{monte_carlo, run_scenario_for, run_seed, write_results_csv, McReport, McRun, McSummary, Stats};
pub use run::{run_resolved, run_scenario, run_scenario_with, FinalState, ModeChange, RunResult, SaturationCounts};
pub use scenario::{
    BodyAxes, InitialState, MassConfig, ModeConfig, RegolithPolicy, ResolvedScenario, SamplingConfig, Scenario,
    SimConfig, TimedCommand,
};
pub use telemetry::{write_csv, CsvWriter, TelemetryRecord, CSV_HEADER};
