//! `adcslab` command-line front end.

mod plot;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adcslab::control::{Fidelity, ModeKind};
use adcslab::mass::{corner_envelope, inertia_matrix, principal_frame, MassCatalog, MassProperties};
use adcslab::sim::{monte_carlo, run_scenario, write_csv, write_results_csv, RunResult, Scenario};
use adcslab::{Error, Mat3, Vec3};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

const SEED_ENV: &str = "ADCSLAB_SEED";

#[derive(Parser)]
#[command(name = "adcslab", version, about = "CubeSat attitude dynamics and control simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its telemetry.
    Simulate(SimulateArgs),
    /// Mass properties of a component catalog.
    Inertia(InertiaArgs),
    /// Seeded batch of runs over regolith placement and initial rates.
    Montecarlo(MonteCarloArgs),
    /// Full mode sequence with automatic transitions.
    Conops(ConopsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Detumble,
    Nominal,
    Spin,
    Despin,
    Safe,
}

impl From<ModeArg> for ModeKind {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Detumble => ModeKind::Detumble,
            ModeArg::Nominal => ModeKind::Nominal,
            ModeArg::Spin => ModeKind::Spin,
            ModeArg::Despin => ModeKind::Despin,
            ModeArg::Safe => ModeKind::Safe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    Ideal,
    Physical,
}

/// Overrides applied on top of the scenario file.
#[derive(Args, Default)]
struct Overrides {
    /// Scenario JSON; built-in presets when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; beats the config file and ADCSLAB_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Run length in seconds.
    #[arg(long, conflicts_with = "orbits")]
    duration: Option<f64>,
    /// Run length in orbits.
    #[arg(long)]
    orbits: Option<f64>,
    /// Control and telemetry step, s.
    #[arg(long)]
    dt: Option<f64>,
    /// RK4 sub-steps per control step.
    #[arg(long)]
    substeps: Option<u32>,
    #[arg(long, value_enum)]
    fidelity: Option<FidelityArg>,
    /// Disable every disturbance torque.
    #[arg(long)]
    no_disturbances: bool,
    #[arg(long)]
    no_drag: bool,
    #[arg(long)]
    no_srp: bool,
    #[arg(long)]
    no_gravity_gradient: bool,
    /// Initial body rate in RPM on all three axes.
    #[arg(long)]
    omega_rpm: Option<f64>,
}

#[derive(Args)]
struct Outputs {
    /// Telemetry CSV path.
    #[arg(long, default_value = "telemetry.csv")]
    out: PathBuf,
    /// Write the run summary JSON here as well as to stdout.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// SVG of body rates and Euler angles.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Mode to fly; with --config it replaces the file's initial mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Args)]
struct ConopsArgs {
    #[command(flatten)]
    overrides: Overrides,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Args)]
struct InertiaArgs {
    /// Catalog JSON; the bundled table when omitted.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Regolith position override, cm.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
    regolith: Option<Vec<f64>>,
    /// Also bound CG and inertia over the eight chamber corners.
    #[arg(long)]
    sweep_corners: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Number of runs.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Draw the all-axes initial rate uniformly from this RPM range.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    omega_range: Option<Vec<f64>>,
    /// Keep the scenario's regolith position instead of sampling it.
    #[arg(long)]
    fixed_regolith: bool,
    #[command(flatten)]
    overrides: Overrides,
    /// Per-run results CSV.
    #[arg(long, default_value = "montecarlo.csv")]
    out: PathBuf,
    /// Write the batch summary JSON here as well as to stdout.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}

/// IO errors carry no file name of their own.
fn with_path(e: Error, p: &Path) -> anyhow::Error {
    match e {
        Error::Io(io) => anyhow::Error::new(io).context(format!("reading {}", p.display())),
        other => other.into(),
    }
}

fn load_scenario(o: &Overrides, preset: impl FnOnce() -> Scenario) -> Result<Scenario> {
    let mut s = match &o.config {
        Some(p) => Scenario::from_path(p).map_err(|e| with_path(e, p))?,
        None => preset(),
    };
    apply(o, &mut s)?;
    Ok(s)
}

fn apply(o: &Overrides, s: &mut Scenario) -> Result<()> {
    // flag > config > environment
    if let Some(seed) = o.seed {
        s.sim.seed = Some(seed);
    } else if s.sim.seed.is_none() {
        s.sim.seed = env_seed()?;
    }
    if let Some(d) = o.duration {
        s.sim.duration_s = Some(d);
        s.sim.duration_orbits = None;
    }
    if let Some(n) = o.orbits {
        s.sim.duration_orbits = Some(n);
        s.sim.duration_s = None;
    }
    if let Some(dt) = o.dt {
        s.sim.dt_s = dt;
    }
    if let Some(n) = o.substeps {
        s.sim.substeps = n;
    }
    if let Some(f) = o.fidelity {
        s.sim.fidelity = match f {
            FidelityArg::Ideal => Fidelity::Ideal,
            FidelityArg::Physical => Fidelity::Physical,
        };
    }
    let d = &mut s.sim.disturbances;
    if o.no_disturbances {
        d.drag = false;
        d.srp = false;
        d.gravity_gradient = false;
    }
    d.drag &= !o.no_drag;
    d.srp &= !o.no_srp;
    d.gravity_gradient &= !o.no_gravity_gradient;
    if let Some(w) = o.omega_rpm {
        s.sim.initial.omega_rad_s = None;
        s.sim.initial.omega_rpm = Vec3::new(w, w, w);
    }
    s.validate()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn run_and_report(s: &Scenario, outputs: &Outputs, title: &str) -> Result<ExitCode> {
    let (tm, result) = run_scenario(s)?;
    let f = write_csv(create(&outputs.out)?, &tm).with_context(|| format!("writing {}", outputs.out.display()))?;
    f.into_inner().map_err(|e| e.into_error())?;
    if let Some(p) = &outputs.plot {
        std::fs::write(p, plot::render(&tm, title)).with_context(|| format!("writing {}", p.display()))?;
    }
    report(&result, outputs.summary.as_deref())
}

fn report(result: &RunResult, path: Option<&Path>) -> Result<ExitCode> {
    if let Some(p) = path {
        write_json(p, result)?;
    }
    println!("{}", serde_json::to_string_pretty(result)?);
    Ok(if result.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn simulate(a: SimulateArgs) -> Result<ExitCode> {
    let mode = a.mode.map(ModeKind::from);
    let mut s = load_scenario(&a.overrides, || Scenario::preset(mode.unwrap_or(ModeKind::Detumble)))?;
    if let Some(m) = mode {
        s.mode.initial = m;
    }
    run_and_report(&s, &a.outputs, &format!("{} mode", s.mode.initial))
}

fn conops(a: ConopsArgs) -> Result<ExitCode> {
    let mut s = load_scenario(&a.overrides, Scenario::conops)?;
    s.mode.automatic = true;
    s.mode.schedule.automatic = true;
    run_and_report(&s, &a.outputs, "ConOps sequence")
}

fn montecarlo(a: MonteCarloArgs) -> Result<ExitCode> {
    let mode = a.mode.map(ModeKind::from);
    let mut s = load_scenario(&a.overrides, || Scenario::preset(mode.unwrap_or(ModeKind::Detumble)))?;
    if let Some(m) = mode {
        s.mode.initial = m;
    }
    if a.fixed_regolith {
        s.montecarlo.regolith = false;
    }
    if let Some(r) = &a.omega_range {
        anyhow::ensure!(r[0] <= r[1] && r[0] >= 0.0, "--omega-range needs 0 <= LO <= HI");
        s.montecarlo.omega_rpm = Some([r[0], r[1]]);
    }
    let report = monte_carlo(&s, a.runs as usize, s.seed(), a.workers)?;
    let f = write_results_csv(create(&a.out)?, &report).with_context(|| format!("writing {}", a.out.display()))?;
    f.into_inner().map_err(|e| e.into_error())?;
    if let Some(p) = &a.summary {
        write_json(p, &report.summary)?;
    }
    println!("{}", serde_json::to_string_pretty(&report.summary)?);
    for r in &report.runs {
        if let Err(e) = &r.outcome {
            eprintln!("run {} (seed {}): {e}", r.index, r.seed);
        }
    }
    Ok(if report.summary.converged == report.summary.runs { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn fmt_mat(m: &Mat3) -> String {
    m.m.iter()
        .map(|r| format!("  [{:>13.6e} {:>13.6e} {:>13.6e}]", r[0], r[1], r[2]))
        .collect::<Vec<_>>()
        .join("\n")
}

fn fmt_vec(v: &Vec3) -> String {
    format!("({:.6}, {:.6}, {:.6})", v.x, v.y, v.z)
}

fn inertia(a: InertiaArgs) -> Result<ExitCode> {
    let mut cat = match &a.catalog {
        Some(p) => MassCatalog::from_path(p).map_err(|e| with_path(e, p))?,
        None => MassCatalog::bundled(),
    };
    if let Some(r) = &a.regolith {
        cat = cat.with_regolith_at(Vec3::new(r[0], r[1], r[2]));
    }
    let j = inertia_matrix(&cat);
    let cg = adcslab::mass::compute_cg(&cat);
    let degenerate = match MassProperties::from_catalog(&cat) {
        Ok(_) => None,
        Err(e @ Error::DegenerateCatalog { .. }) => Some(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    if let Some(w) = &degenerate {
        eprintln!("warning: {w}");
    }
    let principal = degenerate.is_none().then(|| principal_frame(&j));
    let envelope = a.sweep_corners.then(|| corner_envelope(&cat, cat.chamber()));

    if a.json {
        let out = serde_json::json!({
            "total_mass_kg": cat.total_mass(),
            "cg_cm": cg,
            "inertia_kg_m2": j,
            "principal": principal,
            "degenerate": degenerate.is_some(),
            "corner_envelope": envelope,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("total mass: {:.6} kg", cat.total_mass());
    println!("regolith:   {} cm", fmt_vec(&cat.regolith().position_cm));
    println!("CG:         {} cm", fmt_vec(&cg));
    println!("inertia about CG, geometric axes (kg m^2):\n{}", fmt_mat(&j));
    if let Some(p) = principal {
        println!("principal moments: ({:.6e}, {:.6e}, {:.6e}) kg m^2", p.moments.x, p.moments.y, p.moments.z);
    }
    if let Some(env) = envelope {
        println!("\nregolith at chamber corners:");
        println!("  {:>28}  {:>34}  {:>12} {:>12} {:>12}", "regolith (cm)", "CG (cm)", "Jxx", "Jyy", "Jzz");
        for c in &env.corners {
            println!(
                "  {:>28}  {:>34}  {:>12.6e} {:>12.6e} {:>12.6e}",
                fmt_vec(&c.regolith_cm),
                fmt_vec(&c.cg_cm),
                c.inertia.m[0][0],
                c.inertia.m[1][1],
                c.inertia.m[2][2]
            );
        }
        println!("CG envelope: min {} max {} cm", fmt_vec(&env.cg_min), fmt_vec(&env.cg_max));
        println!("inertia envelope min:\n{}", fmt_mat(&env.inertia_min));
        println!("inertia envelope max:\n{}", fmt_mat(&env.inertia_max));
    }
    Ok(ExitCode::SUCCESS)
}

/// Error plus causes, skipping causes the outer message already quotes.
fn error_chain(e: &anyhow::Error) -> String {
    let mut out = e.to_string();
    for cause in e.chain().skip(1) {
        let c = cause.to_string();
        if !out.contains(&c) {
            out.push_str(": ");
            out.push_str(&c);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Inertia(a) => inertia(a),
        Command::Montecarlo(a) => montecarlo(a),
        Command::Conops(a) => conops(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", error_chain(&e));
            ExitCode::from(1)
        }
    }
}
