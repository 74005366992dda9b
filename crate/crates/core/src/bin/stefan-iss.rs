//! `stefan-iss` command-line front end.
//!
//! Exit status: 0 success, 1 validity violations or failed assumptions,
//! 2 usage or parse errors, 3 solver failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use stefan_iss::io::{write_json, write_run_artifacts};
use stefan_iss::oracle::run_oracle;
use stefan_iss::report::{self, RunOutcome};
use stefan_iss::{check_assumptions, Error, Scenario, StepError, Termination};

const ZINC_ONE_PHASE: &str = include_str!("../../scenarios/zinc_one_phase.json");
const ZINC_TWO_PHASE: &str = include_str!("../../scenarios/zinc_two_phase.json");
const THREADS_ENV: &str = "STEFAN_ISS_THREADS";

#[derive(Parser)]
#[command(
    name = "stefan-iss",
    version,
    about = "Stefan problem under backstepping control: runs, sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectory.csv and report.json.
    Run(RunArgs),
    /// Run once per heat-loss magnitude and compare terminal offsets.
    Sweep(SweepArgs),
    /// Self-convergence of the terminal interface position over grids.
    Converge(ConvergeArgs),
    /// Compare fixed-temperature runs with the Neumann similarity solution.
    Oracle(OracleArgs),
    /// Evaluate the assumption gate only.
    Check(ScenarioArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON; the bundled zinc scenario when omitted.
    scenario: Option<PathBuf>,
    /// Use the two-phase model (bundled two-phase scenario when no file is given).
    #[arg(long)]
    two_phase: bool,
    #[arg(long, value_name = "S")]
    tfinal: Option<f64>,
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    #[arg(long, value_name = "PER_S")]
    gain: Option<f64>,
    #[arg(long, value_name = "M")]
    setpoint: Option<f64>,
    /// Decay rate K of the heat loss, 1/s.
    #[arg(long, value_name = "K")]
    qf_decay: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Heat-loss magnitude, W/m².
    #[arg(long, value_name = "W_PER_M2")]
    qf_bar: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Comma-separated heat-loss magnitudes, W/m².
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    qf_bar: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    grids: Vec<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Liquid properties are taken from this scenario (bundled zinc otherwise).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Stefan number C_p ΔT / ΔH*; defaults to ΔT = 10 K.
    #[arg(long, value_name = "ST")]
    stefan_number: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "100,200")]
    grids: Vec<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(anyhow::Error),
    Solver(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let solver = e.chain().any(|c| {
            c.downcast_ref::<StepError>().is_some()
                || matches!(
                    c.downcast_ref::<Error>(),
                    Some(Error::Step(_) | Error::Analysis(_))
                )
        });
        if solver {
            Failure::Solver(e)
        } else {
            Failure::Usage(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failure: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        bail!("{THREADS_ENV} must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn load(args: &ScenarioArgs) -> anyhow::Result<Scenario> {
    let mut scenario = match &args.scenario {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed: Scenario = serde_json::from_str(&text)
                .map_err(Error::from)
                .with_context(|| format!("parsing {}", path.display()))?;
            parsed
        }
        None if args.two_phase => serde_json::from_str(ZINC_TWO_PHASE)?,
        None => serde_json::from_str(ZINC_ONE_PHASE)?,
    };
    if args.two_phase && !scenario.is_two_phase() {
        bail!("--two-phase needs a scenario with a solid section");
    }
    if let Some(t) = args.tfinal {
        scenario.t_final = t;
    }
    if let Some(n) = args.grid {
        scenario.grid = n;
    }
    if let Some(c) = args.gain {
        scenario.gain = c;
    }
    if let Some(s) = args.setpoint {
        scenario.setpoint = s;
    }
    if let Some(k) = args.qf_decay {
        scenario.disturbance = scenario
            .disturbance
            .with_magnitude(scenario.disturbance.sup(), Some(k))?;
    }
    scenario.validate().context("invalid scenario")?;
    Ok(scenario)
}

fn finish(outcome: &RunOutcome, dir: &Path) -> anyhow::Result<bool> {
    write_run_artifacts(dir, outcome).with_context(|| format!("writing {}", dir.display()))?;
    let r = &outcome.report;
    println!(
        "s(t_f) = {:.6e} m, offset = {:.6e} m, Psi(t_f) = {:.6e}, energy residual = {:.3e}, violations = {}",
        r.terminal.s,
        r.terminal.offset,
        r.terminal.psi,
        r.energy_residual,
        r.violations.len()
    );
    for e in r.assumptions.entries.iter().filter(|e| !e.passed()) {
        println!(
            "assumption {} failed: {} (lhs {}, rhs {})",
            e.id, e.detail, e.lhs, e.rhs
        );
    }
    if let Termination::PhaseDisappeared { t, s } = r.termination {
        println!("phase disappeared at t = {t} s (s = {s} m)");
    }
    Ok(r.success())
}

fn cmd_run(args: RunArgs) -> Outcome {
    let mut scenario = load(&args.scenario)?;
    if let Some(q) = args.qf_bar {
        scenario.disturbance = scenario
            .disturbance
            .with_magnitude(q, args.scenario.qf_decay)
            .map_err(anyhow::Error::from)?;
    }
    let outcome = report::execute(&scenario)?;
    if outcome.report.termination != Termination::Completed {
        finish(&outcome, &args.out)?;
        return Err(Failure::Solver(anyhow::anyhow!("run terminated early")));
    }
    Ok(finish(&outcome, &args.out)?)
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let scenario = load(&args.scenario)?;
    let (outcomes, summary) = report::sweep(&scenario, &args.qf_bar, args.scenario.qf_decay)?;
    fs::create_dir_all(&args.out).map_err(anyhow::Error::from)?;
    let mut ok = summary.offsets_strictly_increasing;
    for (i, (o, q)) in outcomes.iter().zip(&args.qf_bar).enumerate() {
        let dir = args.out.join(format!("run_{i}_qf_{q}"));
        print!("q_f = {q}: ");
        ok &= finish(o, &dir)?;
    }
    write_json(&args.out.join("sweep.json"), &summary).map_err(anyhow::Error::from)?;
    println!(
        "offsets strictly increasing: {}",
        summary.offsets_strictly_increasing
    );
    Ok(ok)
}

fn cmd_converge(args: ConvergeArgs) -> Outcome {
    let scenario = load(&args.scenario)?;
    if args.grids.len() < 3 {
        return Err(Failure::Usage(anyhow::anyhow!(
            "--grids needs at least 3 sizes"
        )));
    }
    let summary = report::converge(&scenario, &args.grids)?;
    fs::create_dir_all(&args.out).map_err(anyhow::Error::from)?;
    write_json(&args.out.join("converge.json"), &summary).map_err(anyhow::Error::from)?;
    for (n, s) in summary.grids.iter().zip(&summary.s_final) {
        println!("N = {n}: s(t_f) = {s:.16e}");
    }
    match (summary.exact, summary.observed_order) {
        (true, _) => println!("observed order: exact (identical results)"),
        (false, Some(p)) => println!("observed order: {p:.3}"),
        (false, None) => println!("observed order: undefined"),
    }
    Ok(true)
}

fn cmd_oracle(args: OracleArgs) -> Outcome {
    let scenario = load(&ScenarioArgs {
        scenario: args.scenario,
        two_phase: false,
        tfinal: None,
        grid: None,
        gain: None,
        setpoint: None,
        qf_decay: None,
    })?;
    let liquid = scenario.liquid;
    let stefan = args
        .stefan_number
        .unwrap_or(liquid.heat_capacity * 10.0 / liquid.latent_heat);
    if args.grids.is_empty() {
        return Err(Failure::Usage(anyhow::anyhow!(
            "--grids needs at least one size"
        )));
    }
    let results = args
        .grids
        .iter()
        .map(|&n| run_oracle(&liquid, stefan, n))
        .collect::<Result<Vec<_>, Error>>()?;
    fs::create_dir_all(&args.out).map_err(anyhow::Error::from)?;
    write_json(&args.out.join("oracle.json"), &results).map_err(anyhow::Error::from)?;
    for r in &results {
        println!(
            "St = {}, lambda = {:.12}, N = {}: max relative error {:.3e}",
            r.stefan_number, r.lambda, r.grid, r.max_rel_error
        );
    }
    Ok(true)
}

fn cmd_check(args: ScenarioArgs) -> Outcome {
    let scenario = load(&args)?;
    let report = check_assumptions(&scenario);
    println!("{}", stefan_iss::io::to_json(&report));
    Ok(report.all_passed())
}
