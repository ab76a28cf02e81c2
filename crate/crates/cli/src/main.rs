//! Command-line driver for the moving-boundary wetting solver.
//!
//! Four subcommands cover the workflow: `run` executes a configuration and
//! writes artifacts (config echo, time series, field history, report);
//! `verify` replays the audits from a previous run's artifacts; `converge`
//! measures self-convergence orders; `sweep` runs a family of configs that
//! differ in one parameter.
//!
//! Exit codes: 0 success; 2 rejected configuration (admissibility or usage);
//! 3 solver failure (guards, divergence); 4 failed audit or out-of-window
//! convergence order; 5 malformed artifacts.

use clap::{Args, Parser, Subcommand, ValueEnum};
use porewet_core::config::{Config, Mode, SignalEntry};
use porewet_core::error::{SolverError, ValidationError};
use porewet_core::front::FixedPointConfig;
use porewet_core::functional::trapezoid;
use porewet_core::transform::ReferenceGrid;
use porewet_core::verify::{
    field_bounds, front_rate_bounds, mass_audit, parse_fields_csv, parse_timeseries_csv,
    run_gamma, run_monolithic, self_convergence_spatial, self_convergence_temporal,
    write_fields_csv, write_timeseries_csv, RunOutput, SELF_SPATIAL_ORDER_WINDOW,
    SELF_TEMPORAL_ORDER_WINDOW, TOL_BOUND,
};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Parser)]
#[command(name = "porewet", version, about = "Moving-boundary wetting solver")]
struct Cli {
    /// Seed recorded with the run; reserved for sampled workloads.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one configuration and write artifacts.
    Run(RunArgs),
    /// Replay the audits from a previous run's artifacts.
    Verify(VerifyArgs),
    /// Measure self-convergence orders for a configuration.
    Converge(ConvergeArgs),
    /// Run a family of configs that differ in one parameter.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Monolithic,
    Gamma,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Monolithic => Mode::Monolithic,
            ModeArg::Gamma => Mode::Gamma,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory to write artifacts into.
    #[arg(long)]
    out: PathBuf,
    /// Override the solution mode from the config.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Skip the post-run audits.
    #[arg(long)]
    no_verify: bool,
    /// Mass-ledger tolerance for the post-run audit.
    #[arg(long, default_value_t = 0.01)]
    mass_tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Artifact directory written by `run`.
    #[arg(long)]
    artifacts: PathBuf,
    /// Mass-ledger tolerance.
    #[arg(long, default_value_t = 0.01)]
    mass_tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    /// Shrink the time step on a fixed fine grid.
    Time,
    /// Refine the grid at a fixed small time step.
    Space,
}

#[derive(Args)]
struct ConvergeArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Refinement axis.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Number of resolutions (at least 3).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(3..=8))]
    levels: u32,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML run configuration used as the base point.
    #[arg(long)]
    config: PathBuf,
    /// Parameter to vary, as a dotted path (e.g. `physical.a0`).
    #[arg(long)]
    param: String,
    /// Comma-separated values for the parameter.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<String>,
    /// Write the summary CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command, carrying its exit code.
enum Failure {
    /// Unusable input: file problems, config shape, unknown sweep keys.
    Usage(String),
    /// The model failed admissibility validation.
    Rejected(ValidationError),
    /// The solver gave up.
    Solver(SolverError),
    /// An audit found a violation, or an order fell outside its window.
    Audit(String),
    /// Artifacts could not be read back.
    Artifact(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Rejected(_) => 2,
            Failure::Solver(SolverError::MalformedArtifact { .. }) => 5,
            Failure::Solver(_) => 3,
            Failure::Audit(_) => 4,
            Failure::Artifact(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Rejected(e) => e.to_string(),
            Failure::Solver(e @ SolverError::MalformedArtifact { .. }) => e.to_string(),
            Failure::Solver(e) => format!("solver failure: {e}"),
            Failure::Audit(m) => format!("audit failure: {m}"),
            Failure::Artifact(m) => format!("malformed artifacts: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(cli.seed, args),
        Command::Verify(args) => cmd_verify(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_config(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    Config::from_toml_str(&text).map_err(Failure::Usage)
}

/// Audit a run output and describe the outcome. `Err` carries the first
/// violated audit.
fn audit_output(
    out: &RunOutput,
    model: &porewet_core::model::ValidatedModel,
    mass_tol: f64,
) -> (String, Result<(), String>) {
    let fields = field_bounds(&out.fields, model, TOL_BOUND);
    let rates = front_rate_bounds(&out.records, model, TOL_BOUND);
    let mass = mass_audit(&out.records, model);
    let text = format!(
        "field bounds:  {} (margins {:+.3e} / {:+.3e}, tol {:.1e})\n\
         front rates:   {} (margins {:+.3e} / {:+.3e}, tol {:.1e})\n\
         mass ledger:   max error {:.3e} (tol {:.1e}), replay gap {:.3e}\n",
        if fields.ok() { "ok" } else { "VIOLATED" },
        fields.lower_margin,
        fields.upper_margin,
        fields.tol,
        if rates.ok() { "ok" } else { "VIOLATED" },
        rates.lower_margin,
        rates.upper_margin,
        rates.tol,
        mass.max_error,
        mass_tol,
        mass.ledger_gap,
    );
    let verdict = if !fields.ok() {
        Err(format!(
            "field bounds violated (margins {:+.3e} / {:+.3e})",
            fields.lower_margin, fields.upper_margin
        ))
    } else if !rates.ok() {
        Err(format!(
            "front rate bounds violated (margins {:+.3e} / {:+.3e})",
            rates.lower_margin, rates.upper_margin
        ))
    } else if mass.max_error > mass_tol {
        Err(format!("mass ledger error {:.3e} exceeds {:.1e}", mass.max_error, mass_tol))
    } else {
        Ok(())
    };
    (text, verdict)
}

fn cmd_run(seed: u64, args: RunArgs) -> Result<(), Failure> {
    let mut config = read_config(&args.config)?;
    if let Some(mode) = args.mode {
        config.run.mode = mode.into();
    }
    let spec = config.to_model_spec().map_err(Failure::Usage)?;
    let model = spec.validate().map_err(Failure::Rejected)?;
    let grid = ReferenceGrid::new(config.run.n).map_err(Failure::Solver)?;
    let stepper = config.stepper_config();
    let steps = config.stepper.steps;

    let mut fixed_point_note = String::new();
    let output = match config.run.mode {
        Mode::Monolithic => {
            run_monolithic(&model, grid, &stepper, steps).map_err(Failure::Solver)?
        }
        Mode::Gamma => {
            let mut fp = FixedPointConfig::for_model(&model, model.t_end());
            if let Some(tol) = config.run.fp_tol {
                fp.fp_tol = tol;
            }
            fp.fp_max = config.run.fp_max;
            let (out, outcome) = run_gamma(&model, grid, &stepper, steps, &fp)
                .map_err(Failure::Solver)?;
            fixed_point_note = format!(
                "fixed point:   {} iterations, last distance {:.3e}\n",
                outcome.iterations,
                outcome.distances.last().copied().unwrap_or(0.0),
            );
            out
        }
    };

    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", args.out.display())))?;
    let write = |name: &str, text: &str| -> Result<(), Failure> {
        fs::write(args.out.join(name), text)
            .map_err(|e| Failure::Usage(format!("cannot write {name}: {e}")))
    };

    write("config.toml", &config.to_toml_string())?;
    write("timeseries.csv", &write_timeseries_csv(&output.records))?;
    let times: Vec<f64> = output.records.iter().map(|r| r.t).collect();
    let fronts: Vec<f64> = output.records.iter().map(|r| r.s).collect();
    write("fields.csv", &write_fields_csv(&times, &fronts, &output.fields))?;

    let verify_enabled = !args.no_verify && config.run.verify;
    let (audit_text, audit_verdict) = audit_output(&output, &model, args.mass_tol);
    let last = output.records.last().expect("run has records");
    let mode_name = match config.run.mode {
        Mode::Monolithic => "monolithic",
        Mode::Gamma => "gamma",
    };
    let report = format!(
        "porewet run report\n\
         mode:          {mode_name}\n\
         grid:          {} cells, {} steps, dt {:.6e}\n\
         seed:          {seed}\n\
         final front:   {:.16e}\n\
         final mass:    {:.16e}\n\
         picard sweeps: {} (max per step)\n\
         advective cfl: {:.3e} (max)\n\
         {fixed_point_note}{}",
        config.run.n,
        steps,
        stepper.dt,
        last.s,
        last.mass,
        output.picard_iterations_max,
        output.cfl_max,
        if verify_enabled { audit_text.as_str() } else { "audits:        skipped\n" },
    );
    write("report.txt", &report)?;

    println!(
        "run complete: {} steps, front {:.6} -> {:.6}, artifacts in {}",
        steps,
        output.records[0].s,
        last.s,
        args.out.display()
    );
    if verify_enabled {
        audit_verdict.map_err(Failure::Audit)?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let dir = &args.artifacts;
    let read = |name: &str| -> Result<String, Failure> {
        fs::read_to_string(dir.join(name))
            .map_err(|e| Failure::Artifact(format!("cannot read {name}: {e}")))
    };

    let config = Config::from_toml_str(&read("config.toml")?).map_err(Failure::Artifact)?;
    let spec = config.to_model_spec().map_err(Failure::Artifact)?;
    let model = spec.validate().map_err(Failure::Rejected)?;
    let records = parse_timeseries_csv(&read("timeseries.csv")?).map_err(Failure::Solver)?;
    let (times, fronts, fields) = parse_fields_csv(&read("fields.csv")?).map_err(Failure::Solver)?;

    if times.len() != records.len() {
        return Err(Failure::Artifact(format!(
            "time series has {} rows but field history has {}",
            records.len(),
            times.len()
        )));
    }
    let n = fields[0].len() - 1;
    let grid = ReferenceGrid::new(n).map_err(Failure::Solver)?;
    for (i, r) in records.iter().enumerate() {
        let consistent = r.t == times[i]
            && r.s == fronts[i]
            && r.u_wall == fields[i][0]
            && r.u_front == fields[i][n]
            && (r.mass - (r.s - model.a()) * trapezoid(&fields[i], grid)).abs() <= 1e-12;
        if !consistent {
            return Err(Failure::Artifact(format!(
                "row {i}: time series and field history disagree"
            )));
        }
    }

    let output = RunOutput {
        records,
        fields,
        picard_iterations_max: 0,
        cfl_max: 0.0,
    };
    let (text, verdict) = audit_output(&output, &model, args.mass_tol);
    print!("{text}");
    verdict.map_err(Failure::Audit)?;
    println!("verify ok: {} rows audited", output.records.len());
    Ok(())
}

fn cmd_converge(args: ConvergeArgs) -> Result<(), Failure> {
    let config = read_config(&args.config)?;
    let spec = config.to_model_spec().map_err(Failure::Usage)?;
    let model = spec.validate().map_err(Failure::Rejected)?;
    let t_end = model.t_end();
    let levels = args.levels as usize;

    let (study, window, axis_name) = match args.axis {
        AxisArg::Time => {
            let grid = ReferenceGrid::new(256).map_err(Failure::Solver)?;
            let dts: Vec<f64> = (0..levels).map(|i| t_end / (50.0 * (1 << i) as f64)).collect();
            let study =
                self_convergence_temporal(&model, grid, &dts).map_err(Failure::Solver)?;
            (study, SELF_TEMPORAL_ORDER_WINDOW, "time")
        }
        AxisArg::Space => {
            let ns: Vec<usize> = (0..levels).map(|i| 8 << i).collect();
            let study = self_convergence_spatial(&model, t_end / 4000.0, &ns)
                .map_err(Failure::Solver)?;
            (study, SELF_SPATIAL_ORDER_WINDOW, "space")
        }
    };

    println!("axis {axis_name}: {} resolutions", levels);
    for (i, e) in study.errors.iter().enumerate() {
        if i == 0 {
            println!("  gap {i}: {e:.6e}");
        } else {
            println!("  gap {i}: {e:.6e}   order {:.3}", study.orders[i - 1]);
        }
    }
    let last = study
        .last_order()
        .ok_or_else(|| Failure::Usage("need at least three resolutions".into()))?;
    println!("last order: {last:.3} (window [{}, {}])", window.0, window.1);
    if last < window.0 || last > window.1 {
        return Err(Failure::Audit(format!(
            "observed order {last:.3} outside [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(())
}

/// Apply one sweep override to a config.
fn apply_param(config: &mut Config, param: &str, value: &str) -> Result<(), String> {
    let as_f64 = || value.parse::<f64>().map_err(|_| format!("`{value}` is not a number"));
    let as_usize =
        || value.parse::<usize>().map_err(|_| format!("`{value}` is not an integer"));
    match param {
        "physical.a" => config.physical.a = as_f64()?,
        "physical.a0" => config.physical.a0 = as_f64()?,
        "physical.H" => config.physical.henry = as_f64()?,
        "physical.k" => config.physical.k = as_f64()?,
        "physical.T" => config.physical.t_end = as_f64()?,
        "constitutive.beta_max" => config.constitutive.beta_max = Some(as_f64()?),
        "constitutive.phi_max" => config.constitutive.phi_max = Some(as_f64()?),
        "constitutive.r_phi" => config.constitutive.r_phi = Some(as_f64()?),
        "boundary.h" => config.boundary.h = SignalEntry::Constant(as_f64()?),
        "initial.s0" => config.initial.s0 = as_f64()?,
        "initial.u0" => {
            config.initial.u0 = porewet_core::config::ProfileEntry::Constant(as_f64()?)
        }
        "stepper.steps" => config.stepper.steps = as_usize()?,
        "run.n" => config.run.n = as_usize()?,
        other => return Err(format!("unknown sweep parameter `{other}`")),
    }
    Ok(())
}

struct SweepRow {
    value: String,
    status: &'static str,
    code: u8,
    detail: String,
}

fn sweep_one(base: &Config, param: &str, value: &str) -> SweepRow {
    let mut config = base.clone();
    if let Err(msg) = apply_param(&mut config, param, value) {
        return SweepRow { value: value.into(), status: "usage", code: 2, detail: msg };
    }
    let spec = match config.to_model_spec() {
        Ok(s) => s,
        Err(msg) => return SweepRow { value: value.into(), status: "usage", code: 2, detail: msg },
    };
    let model = match spec.validate() {
        Ok(m) => m,
        Err(_) => {
            return SweepRow {
                value: value.into(),
                status: "rejected",
                code: 2,
                detail: "model failed validation".into(),
            }
        }
    };
    let grid = match ReferenceGrid::new(config.run.n) {
        Ok(g) => g,
        Err(e) => {
            return SweepRow { value: value.into(), status: "solver", code: 3, detail: e.to_string() }
        }
    };
    let stepper = config.stepper_config();
    let out = match run_monolithic(&model, grid, &stepper, config.stepper.steps) {
        Ok(o) => o,
        Err(e) => {
            return SweepRow { value: value.into(), status: "solver", code: 3, detail: e.to_string() }
        }
    };
    let (_, verdict) = audit_output(&out, &model, 0.01);
    if let Err(msg) = verdict {
        return SweepRow { value: value.into(), status: "audit", code: 4, detail: msg };
    }
    let last = out.records.last().expect("run has records");
    SweepRow {
        value: value.into(),
        status: "ok",
        code: 0,
        detail: format!("{:.16e},{:.16e}", last.s, last.mass),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let base = read_config(&args.config)?;
    let values = &args.values;

    let default_threads = std::thread::available_parallelism().map(usize::from).unwrap_or(1);
    let threads = std::env::var("PW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(default_threads)
        .min(values.len().max(1));

    let slots: Vec<Mutex<Option<SweepRow>>> = values.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= values.len() {
                    break;
                }
                let row = sweep_one(&base, &args.param, &values[idx]);
                *slots[idx].lock().expect("slot poisoned") = Some(row);
            });
        }
    });

    let mut csv = String::from("param,value,status,final_s,final_mass\n");
    let mut first_failure: Option<u8> = None;
    for slot in &slots {
        let row = slot.lock().expect("slot poisoned").take().expect("all slots filled");
        let (s, mass) = if row.code == 0 {
            let mut parts = row.detail.split(',');
            (
                parts.next().unwrap_or("").to_string(),
                parts.next().unwrap_or("").to_string(),
            )
        } else {
            eprintln!("{} = {}: {} ({})", args.param, row.value, row.status, row.detail);
            (String::new(), String::new())
        };
        csv.push_str(&format!("{},{},{},{},{}\n", args.param, row.value, row.status, s, mass));
        if row.code != 0 && first_failure.is_none() {
            first_failure = Some(row.code);
        }
    }

    match &args.out {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }

    match first_failure {
        None => Ok(()),
        Some(2) => Err(Failure::Usage("sweep had rejected configurations".into())),
        Some(4) => Err(Failure::Audit("sweep had failed audits".into())),
        Some(_) => Err(Failure::Solver(SolverError::GuardTripped {
            what: "sweep had solver failures".into(),
        })),
    }
}
