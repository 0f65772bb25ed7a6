use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use irs_noma_core::baselines::{oma_sum_rate, oracle_exhaustive};
use irs_noma_core::channel::{draw_scenario_seeded, ScenarioConfig};
use irs_noma_core::model::{
    build_hermitian_form, order_users, per_user_rates, sum_rate, watts_to_dbm,
};
use irs_noma_core::rounding::round_solution;
use irs_noma_core::scenario::ScenarioFile;
use irs_noma_core::sdr::{sdr_duality_check, solve_sdr, StartPoint};
use irs_noma_core::{ExperimentPlan, RoundingOptions, Scheme, SolverSettings, SweepVariable};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Exit status when `solve` stops at the iteration cap.
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "irs-noma",
    version,
    about = "IRS-assisted uplink NOMA: SDR beamforming, baselines and Monte Carlo sweeps",
    after_help = "Exit status: 0 success, 1 runtime or input error, 2 usage error, \
                  3 solver hit its iteration cap (solve)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario file and print the solution report
    Solve(SolveArgs),
    /// Sweep the number of IRS elements N
    SweepN(SweepNArgs),
    /// Sweep the number of users K
    SweepK(SweepKArgs),
    /// Exhaustive phase-grid search on a small scenario file
    Oracle(OracleArgs),
    /// Draw a random scenario and write it as a scenario file
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Scenario file (JSON)
    scenario: PathBuf,
    /// Write W, its spectrum and the residual trace as JSON to this file
    #[arg(long, value_name = "FILE")]
    dump_sdr: Option<PathBuf>,
    /// Gaussian randomization candidates tried after eigenvector rounding
    #[arg(long, default_value_t = 0)]
    randomization_samples: usize,
    #[arg(long, default_value_t = 0)]
    randomization_seed: u64,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SweepNArgs {
    /// Element counts, strictly increasing
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    values: Vec<usize>,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct SweepKArgs {
    /// User counts, strictly increasing
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    values: Vec<usize>,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Monte Carlo trials per sweep point
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Master seed; per-trial seeds are derived from (seed, value, trial)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Schemes to run: noma-sdr, noma-prop, noma-up-tight, noma-up-stated,
    /// oma, random-phase, oracle, noma-rand
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "noma-sdr,noma-prop,noma-up-tight,noma-up-stated,oma,random-phase"
    )]
    schemes: Vec<Scheme>,
    /// Directory for the CSV and summary files
    #[arg(short, long, env = "IRS_NOMA_OUTPUT_DIR", default_value = "results")]
    output_dir: PathBuf,
    /// Add a wall_time_s column (makes the CSV non-reproducible)
    #[arg(long)]
    timing: bool,
    /// Random phase draws averaged by the random-phase scheme
    #[arg(long, default_value_t = 100)]
    random_draws: usize,
    /// Phase levels of the oracle grid
    #[arg(long, default_value_t = 16)]
    oracle_levels: usize,
    /// Largest N the oracle scheme is run for
    #[arg(long, default_value_t = 6)]
    oracle_max_n: usize,
    /// Gaussian randomization candidates for the noma-rand scheme
    #[arg(long, default_value_t = 32)]
    randomization_samples: usize,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Scenario file (JSON)
    scenario: PathBuf,
    /// Phase levels per element
    #[arg(long, default_value_t = 16)]
    levels: usize,
    /// Refuse instances with more elements than this
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Seed for the draw [default: the config file's seed, else 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output file [default: stdout]
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
#[command(next_help_heading = "Scenario")]
struct ScenarioArgs {
    /// TOML file with scenario settings; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// IRS elements N [default: 16]
    #[arg(long)]
    elements: Option<usize>,
    /// Users K [default: 3]
    #[arg(long)]
    users: Option<usize>,
    /// Per-user transmit power in dBm [default: 20]
    #[arg(long, allow_negative_numbers = true)]
    p_max_dbm: Option<f64>,
    /// Bandwidth in Hz [default: 1e6]
    #[arg(long)]
    bandwidth_hz: Option<f64>,
    /// Noise power spectral density in dBm/Hz [default: -174]
    #[arg(long, allow_negative_numbers = true)]
    noise_psd_dbm_hz: Option<f64>,
    /// Carrier frequency in Hz [default: 2e9]
    #[arg(long)]
    carrier_freq_hz: Option<f64>,
    /// Minimum link distance in m [default: 1]
    #[arg(long)]
    d_min: Option<f64>,
    /// Maximum IRS-BS distance in m [default: 50]
    #[arg(long)]
    d_bs_irs_max: Option<f64>,
    /// Maximum IRS-user distance in m [default: 200]
    #[arg(long)]
    d_irs_user_max: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Spectral,
    Identity,
}

#[derive(Args)]
#[command(next_help_heading = "Solver")]
struct SolverArgs {
    /// Stopping threshold on the relative primal and dual residuals
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Iteration cap; hitting it is reported, not fatal
    #[arg(long, default_value_t = 5000)]
    max_iterations: usize,
    /// Initial ADMM penalty (relative to the normalized form)
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Initial point of the splitting iteration
    #[arg(long, value_enum, default_value_t = Start::Spectral)]
    start: Start,
}

impl SolverArgs {
    fn settings(&self) -> SolverSettings {
        SolverSettings {
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            rho: self.rho,
            start: match self.start {
                Start::Spectral => StartPoint::Spectral,
                Start::Identity => StartPoint::Identity,
            },
            ..SolverSettings::default()
        }
    }
}

impl ScenarioArgs {
    fn config(&self) -> CliResult<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = read(path)?;
                toml::from_str::<ScenarioConfig>(&text)
                    .map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => ScenarioConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(
            p_max_dbm,
            bandwidth_hz,
            noise_psd_dbm_hz,
            carrier_freq_hz,
            d_min,
            d_bs_irs_max,
            d_irs_user_max
        );
        if let Some(n) = self.elements {
            cfg.n_elements = n;
        }
        if let Some(k) = self.users {
            cfg.n_users = k;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn load_scenario(path: &Path) -> CliResult<ScenarioFile> {
    ScenarioFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

#[derive(Serialize)]
struct SolveReport {
    n_elements: usize,
    n_users: usize,
    noise_power_dbm: f64,
    status: irs_noma_core::SolveStatus,
    iterations: usize,
    primal_residual: f64,
    dual_residual: f64,
    sdr_objective: f64,
    solver_objective: f64,
    rounded_objective: f64,
    tight_bound: f64,
    stated_bound: f64,
    duality_gap_bound: f64,
    sdr_lambda1: f64,
    sdr_lambda2: f64,
    noma_prop_rate: f64,
    noma_sdr_rate: f64,
    oma_rate: f64,
    decoding_order: Vec<usize>,
    per_user_rates: Vec<f64>,
    phases_rad: Vec<f64>,
    zero_elements: Vec<usize>,
    randomization_improved: bool,
}

fn log2_1p(x: f64) -> f64 {
    x.max(0.0).ln_1p() / std::f64::consts::LN_2
}

fn cmd_solve(args: &SolveArgs) -> CliResult<ExitCode> {
    let file = load_scenario(&args.scenario)?;
    let (cs, params) = file.to_model()?;
    let h = build_hermitian_form(&cs, &params.p_max)?;
    let sol = solve_sdr(&h, &args.solver.settings())?;
    if let Some(path) = &args.dump_sdr {
        let f =
            fs::File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
        sol.write_dump(std::io::BufWriter::new(f))?;
    }
    let options = RoundingOptions {
        randomization_samples: args.randomization_samples,
        randomization_seed: args.randomization_seed,
    };
    let cert = sdr_duality_check(&h, &sol)?;
    let report = round_solution(&h, sol, &options)?;
    let noise = params.noise_power;
    let order = order_users(&cs);
    let (l1, l2) = report.solution.top_eigenvalues();
    let out = SolveReport {
        n_elements: cs.n_elements(),
        n_users: cs.n_users(),
        noise_power_dbm: watts_to_dbm(noise),
        status: report.solution.status,
        iterations: report.solution.iterations,
        primal_residual: report.solution.primal_residual,
        dual_residual: report.solution.dual_residual,
        sdr_objective: report.sdr_objective,
        solver_objective: report.solver_objective,
        rounded_objective: report.rounded_objective,
        tight_bound: report.bounds.tight,
        stated_bound: report.bounds.as_stated,
        duality_gap_bound: cert.gap_bound,
        sdr_lambda1: l1,
        sdr_lambda2: l2,
        noma_prop_rate: sum_rate(&cs, &report.phases, &params.p_max, noise)?,
        noma_sdr_rate: log2_1p(report.sdr_objective / noise),
        oma_rate: oma_sum_rate(&cs, &params)?,
        per_user_rates: per_user_rates(&cs, &report.phases, &params.p_max, noise, &order)?,
        decoding_order: order,
        phases_rad: report.phases.angles(),
        zero_elements: report.zero_elements.clone(),
        randomization_improved: report.randomization_improved,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        print_solve(&out);
    }
    if report.solution.is_converged() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "warning: SDR solver stopped at the iteration cap ({} iterations); report uses the best iterate",
            out.iterations
        );
        Ok(ExitCode::from(EXIT_NOT_CONVERGED))
    }
}

fn print_solve(r: &SolveReport) {
    println!(
        "N = {}, K = {}, noise = {:.2} dBm",
        r.n_elements, r.n_users, r.noise_power_dbm
    );
    println!(
        "solver: {:?} after {} iterations (primal {:.2e}, dual {:.2e})",
        r.status, r.iterations, r.primal_residual, r.dual_residual
    );
    println!("SDR objective:      {:.9e}", r.sdr_objective);
    println!("rounded objective:  {:.9e}", r.rounded_objective);
    println!("tight bound:        {:.9e}", r.tight_bound);
    println!("stated bound:       {:.9e}", r.stated_bound);
    println!("duality gap bound:  {:.3e}", r.duality_gap_bound);
    println!(
        "W eigenvalues:      {:.6} {:.6}",
        r.sdr_lambda1, r.sdr_lambda2
    );
    println!("NOMA (rounded):     {:.6} bit/s/Hz", r.noma_prop_rate);
    println!("NOMA (SDR):         {:.6} bit/s/Hz", r.noma_sdr_rate);
    println!("OMA:                {:.6} bit/s/Hz", r.oma_rate);
    let order: Vec<String> = r.decoding_order.iter().map(|k| k.to_string()).collect();
    println!("decoding order:     {}", order.join(" "));
    let rates: Vec<String> = r.per_user_rates.iter().map(|x| format!("{x:.6}")).collect();
    println!("per-user rates:     {}", rates.join(" "));
    let phases: Vec<String> = r.phases_rad.iter().map(|x| format!("{x:.4}")).collect();
    println!("phases (rad):       {}", phases.join(" "));
    if !r.zero_elements.is_empty() {
        println!("zero elements set to phase 0: {:?}", r.zero_elements);
    }
}

fn cmd_sweep(variable: SweepVariable, values: &[usize], args: &SweepArgs) -> CliResult<ExitCode> {
    let mut plan = ExperimentPlan::new(variable, values.to_vec());
    plan.trials = args.trials;
    plan.master_seed = args.seed;
    plan.schemes = args.schemes.clone();
    plan.base = args.scenario.config()?;
    plan.solver = args.solver.settings();
    plan.random_phase_draws = args.random_draws;
    plan.oracle_levels = args.oracle_levels;
    plan.oracle_max_n = args.oracle_max_n;
    plan.randomization_samples = args.randomization_samples;
    plan.include_timing = args.timing;

    let result = irs_noma_core::run_sweep(&plan)?;
    fs::create_dir_all(&args.output_dir)
        .map_err(|e| format!("cannot create {}: {e}", args.output_dir.display()))?;
    let stem = match variable {
        SweepVariable::Elements => "sweep-n",
        SweepVariable::Users => "sweep-k",
    };
    let csv = args.output_dir.join(format!("{stem}.csv"));
    let summary = args.output_dir.join(format!("{stem}-summary.json"));
    fs::write(&csv, result.csv_string()?)?;
    let mut buf = Vec::new();
    result.write_summary_json(&mut buf)?;
    fs::write(&summary, buf)?;

    print!("{}", result.summary_table());
    println!("wrote {} and {}", csv.display(), summary.display());
    let nonconverged: usize = result.summary.points.iter().map(|p| p.nonconverged).sum();
    if nonconverged > 0 {
        eprintln!("warning: {nonconverged} trials hit the solver iteration cap and are excluded from the means");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct OracleReport {
    n_elements: usize,
    levels: usize,
    best_objective: f64,
    best_rate: f64,
    best_levels: Vec<usize>,
    evaluated: u64,
}

fn cmd_oracle(args: &OracleArgs) -> CliResult<ExitCode> {
    let file = load_scenario(&args.scenario)?;
    let (cs, params) = file.to_model()?;
    let h = build_hermitian_form(&cs, &params.p_max)?;
    let r = oracle_exhaustive(&h, args.levels, args.max_n)?;
    let out = OracleReport {
        n_elements: cs.n_elements(),
        levels: args.levels,
        best_objective: r.best_objective,
        best_rate: log2_1p(r.best_objective / params.noise_power),
        best_levels: r.best_levels,
        evaluated: r.evaluated,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!(
            "grid: {} levels, {} points evaluated",
            out.levels, out.evaluated
        );
        println!("best objective:     {:.9e}", out.best_objective);
        println!("best rate:          {:.6} bit/s/Hz", out.best_rate);
        println!("best levels:        {:?}", out.best_levels);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: &GenArgs) -> CliResult<ExitCode> {
    let cfg = args.scenario.config()?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let scenario = draw_scenario_seeded(&cfg, seed)?;
    let json = ScenarioFile::from_scenario(&scenario, Some(seed)).to_json()?;
    match &args.output {
        Some(path) => fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::SweepN(a) => cmd_sweep(SweepVariable::Elements, &a.values, &a.sweep),
        Command::SweepK(a) => cmd_sweep(SweepVariable::Users, &a.values, &a.sweep),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
