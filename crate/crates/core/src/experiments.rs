//! Seeded Monte Carlo sweeps over the number of IRS elements or users.
//!
//! Every `(sweep value, trial)` pair draws its own scenario from
//! [`trial_seed`]`(master_seed, value, trial)`, solves every selected scheme
//! and produces one [`TrialRecord`]. Trials run in parallel; records are
//! always emitted in `(value, trial)` order, so the CSV is byte-identical for
//! identical plans.
//!
//! CSV layout (long format, one row per record and scheme):
//!
//! ```text
//! sweep,value,trial,seed,n_elements,n_users,scheme,objective,sum_rate_bps_hz,throughput_bps,sdr_lambda1,sdr_lambda2,sdr_iterations,converged
//! ```
//!
//! `objective` is `w^H H w` for the NOMA schemes (bounds give the bound
//! value) and empty for OMA. `throughput_bps` is the rate times bandwidth.
//! A trailing `wall_time_s` column is added only when timing is requested,
//! since it breaks byte-stability.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    oma_sum_rate, oracle_exhaustive, random_phase_baseline, ORACLE_LEVELS, ORACLE_MAX_N,
};
use crate::channel::{draw_scenario_seeded, splitmix64, trial_seed, ScenarioConfig};
use crate::error::{invalid, Error, Result};
use crate::model::build_hermitian_form;
use crate::rounding::{round_solution, RoundingOptions};
use crate::sdr::{solve_sdr, SolverSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Relaxation value `Tr(H W*)`.
    NomaSdr,
    /// Leading-eigenvector rounding of `W*`.
    NomaProp,
    /// `λ·N` spectral bound.
    NomaUpTight,
    /// `λ·N²` spectral bound.
    NomaUpStated,
    Oma,
    /// Mean objective over uniformly random phases.
    RandomPhase,
    /// Exhaustive phase-grid search; skipped when `N` exceeds the oracle limit.
    Oracle,
    /// Eigenvector rounding followed by Gaussian randomization.
    NomaRand,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::NomaSdr,
        Scheme::NomaProp,
        Scheme::NomaUpTight,
        Scheme::NomaUpStated,
        Scheme::Oma,
        Scheme::RandomPhase,
        Scheme::Oracle,
        Scheme::NomaRand,
    ];

    /// Schemes run when none are requested explicitly.
    pub const DEFAULT: [Scheme; 6] = [
        Scheme::NomaSdr,
        Scheme::NomaProp,
        Scheme::NomaUpTight,
        Scheme::NomaUpStated,
        Scheme::Oma,
        Scheme::RandomPhase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::NomaSdr => "noma-sdr",
            Scheme::NomaProp => "noma-prop",
            Scheme::NomaUpTight => "noma-up-tight",
            Scheme::NomaUpStated => "noma-up-stated",
            Scheme::Oma => "oma",
            Scheme::RandomPhase => "random-phase",
            Scheme::Oracle => "oracle",
            Scheme::NomaRand => "noma-rand",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    /// Number of IRS elements `N`.
    Elements,
    /// Number of users `K`.
    Users,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Elements => "n",
            SweepVariable::Users => "k",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub variable: SweepVariable,
    /// Non-empty, strictly increasing.
    pub values: Vec<usize>,
    pub trials: usize,
    /// Scenario template; the swept field is overwritten per point.
    pub base: ScenarioConfig,
    pub schemes: Vec<Scheme>,
    pub master_seed: u64,
    pub solver: SolverSettings,
    pub random_phase_draws: usize,
    pub oracle_levels: usize,
    pub oracle_max_n: usize,
    pub randomization_samples: usize,
    /// Add the `wall_time_s` column to the CSV.
    pub include_timing: bool,
}

impl ExperimentPlan {
    pub fn new(variable: SweepVariable, values: Vec<usize>) -> Self {
        Self {
            variable,
            values,
            trials: 1000,
            base: ScenarioConfig::default(),
            schemes: Scheme::DEFAULT.to_vec(),
            master_seed: 0,
            solver: SolverSettings::default(),
            random_phase_draws: 100,
            oracle_levels: ORACLE_LEVELS,
            oracle_max_n: ORACLE_MAX_N,
            randomization_samples: 32,
            include_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(invalid("sweep needs at least one value"));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sweep values must be strictly increasing"));
        }
        if self.values[0] == 0 {
            return Err(invalid("sweep values must be at least 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(invalid("at least one scheme must be selected"));
        }
        if self.random_phase_draws == 0 {
            return Err(invalid("random-phase draws must be at least 1"));
        }
        self.solver.validate()?;
        self.config_for(self.values[0]).validate()
    }

    pub fn config_for(&self, value: usize) -> ScenarioConfig {
        let mut cfg = self.base.clone();
        match self.variable {
            SweepVariable::Elements => cfg.n_elements = value,
            SweepVariable::Users => cfg.n_users = value,
        }
        cfg
    }

    fn has(&self, scheme: Scheme) -> bool {
        self.schemes.contains(&scheme)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub objective: Option<f64>,
    /// bits/s/Hz.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub value: usize,
    pub trial: usize,
    pub seed: u64,
    pub n_elements: usize,
    pub n_users: usize,
    pub bandwidth_hz: f64,
    /// In plan order; the oracle is absent when `N` exceeds its limit.
    pub results: Vec<SchemeResult>,
    pub sdr_lambda1: f64,
    pub sdr_lambda2: f64,
    pub sdr_iterations: usize,
    pub converged: bool,
    pub gap_bound: f64,
    pub wall_time_s: f64,
}

impl TrialRecord {
    pub fn get(&self, scheme: Scheme) -> Option<&SchemeResult> {
        self.results.iter().find(|r| r.scheme == scheme)
    }

    pub fn rate(&self, scheme: Scheme) -> Option<f64> {
        self.get(scheme).map(|r| r.rate)
    }
}

fn rate_of(objective: f64, noise: f64) -> f64 {
    (objective.max(0.0) / noise).ln_1p() / std::f64::consts::LN_2
}

/// Draw and solve one `(value, trial)` pair.
pub fn run_trial(plan: &ExperimentPlan, value: usize, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let cfg = plan.config_for(value);
    let seed = trial_seed(plan.master_seed, value as u64, trial as u64);
    let scenario = draw_scenario_seeded(&cfg, seed)?;
    let noise = scenario.params.noise_power;
    let h = build_hermitian_form(&scenario.channels, &scenario.params.p_max)?;

    let needs_sdr =
        plan.has(Scheme::NomaSdr) || plan.has(Scheme::NomaProp) || plan.has(Scheme::NomaRand);
    let (report, randomized) = if needs_sdr {
        let sol = solve_sdr(&h, &plan.solver)?;
        let randomized = if plan.has(Scheme::NomaRand) {
            let opts = RoundingOptions {
                randomization_samples: plan.randomization_samples,
                randomization_seed: splitmix64(seed ^ 0x5244_4e44),
            };
            Some(round_solution(&h, sol.clone(), &opts)?.rounded_objective)
        } else {
            None
        };
        (
            Some(round_solution(&h, sol, &RoundingOptions::default())?),
            randomized,
        )
    } else {
        (None, None)
    };

    let bounds = crate::rounding::upper_bound_sphere(&h);
    let mut results = Vec::with_capacity(plan.schemes.len());
    for &scheme in &plan.schemes {
        let objective = match scheme {
            Scheme::NomaSdr => report.as_ref().map(|r| r.sdr_objective),
            Scheme::NomaProp => report.as_ref().map(|r| r.rounded_objective),
            Scheme::NomaRand => randomized,
            Scheme::NomaUpTight => Some(bounds.tight),
            Scheme::NomaUpStated => Some(bounds.as_stated),
            Scheme::RandomPhase => {
                let mut rng = ChaCha20Rng::seed_from_u64(splitmix64(seed ^ 0x5241_4e44));
                Some(random_phase_baseline(&h, plan.random_phase_draws, &mut rng)?.mean)
            }
            Scheme::Oracle => {
                if h.n() > plan.oracle_max_n {
                    continue;
                }
                Some(oracle_exhaustive(&h, plan.oracle_levels, plan.oracle_max_n)?.best_objective)
            }
            Scheme::Oma => {
                results.push(SchemeResult {
                    scheme,
                    objective: None,
                    rate: oma_sum_rate(&scenario.channels, &scenario.params)?,
                });
                continue;
            }
        };
        let objective = objective.expect("SDR report present for NOMA schemes");
        results.push(SchemeResult {
            scheme,
            objective: Some(objective),
            rate: rate_of(objective, noise),
        });
    }

    let (sdr_lambda1, sdr_lambda2, sdr_iterations, converged, gap_bound) = match &report {
        Some(r) => {
            let (l1, l2) = r.solution.top_eigenvalues();
            (
                l1,
                l2,
                r.solution.iterations,
                r.solution.is_converged(),
                r.gap_bound,
            )
        }
        None => (f64::NAN, f64::NAN, 0, true, f64::NAN),
    };

    Ok(TrialRecord {
        value,
        trial,
        seed,
        n_elements: cfg.n_elements,
        n_users: cfg.n_users,
        bandwidth_hz: cfg.bandwidth_hz,
        results,
        sdr_lambda1,
        sdr_lambda2,
        sdr_iterations,
        converged,
        gap_bound,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    /// Records used (non-converged solves excluded).
    pub count: usize,
    pub mean_rate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub value: usize,
    pub trials: usize,
    pub nonconverged: usize,
    pub mean_sdr_lambda1: f64,
    pub mean_sdr_lambda2: f64,
    pub schemes: Vec<SchemeSummary>,
}

impl PointSummary {
    pub fn mean(&self, scheme: Scheme) -> Option<f64> {
        self.schemes
            .iter()
            .find(|s| s.scheme == scheme)
            .map(|s| s.mean_rate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub sweep: SweepVariable,
    pub master_seed: u64,
    pub trials: usize,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub include_timing: bool,
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn summarize(plan: &ExperimentPlan, records: &[TrialRecord]) -> SweepSummary {
    let points = plan
        .values
        .iter()
        .map(|&value| {
            let at: Vec<&TrialRecord> = records.iter().filter(|r| r.value == value).collect();
            let used: Vec<&TrialRecord> = at.iter().copied().filter(|r| r.converged).collect();
            let lambda = |f: fn(&TrialRecord) -> f64| {
                mean_and_stderr(&used.iter().map(|r| f(r)).collect::<Vec<_>>()).0
            };
            let schemes = plan
                .schemes
                .iter()
                .filter_map(|&scheme| {
                    let rates: Vec<f64> = used.iter().filter_map(|r| r.rate(scheme)).collect();
                    if rates.is_empty() && at.iter().all(|r| r.get(scheme).is_none()) {
                        return None;
                    }
                    let (mean_rate, std_error) = mean_and_stderr(&rates);
                    Some(SchemeSummary {
                        scheme,
                        count: rates.len(),
                        mean_rate,
                        std_error,
                    })
                })
                .collect();
            PointSummary {
                value,
                trials: at.len(),
                nonconverged: at.len() - used.len(),
                mean_sdr_lambda1: lambda(|r| r.sdr_lambda1),
                mean_sdr_lambda2: lambda(|r| r.sdr_lambda2),
                schemes,
            }
        })
        .collect();
    SweepSummary {
        sweep: plan.variable,
        master_seed: plan.master_seed,
        trials: plan.trials,
        points,
    }
}

/// Run every `(value, trial)` pair of the plan.
pub fn run_sweep(plan: &ExperimentPlan) -> Result<SweepResult> {
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = plan
        .values
        .iter()
        .flat_map(|&v| (0..plan.trials).map(move |t| (v, t)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(v, t)| run_trial(plan, v, t))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(plan, &records);
    Ok(SweepResult {
        variable: plan.variable,
        include_timing: plan.include_timing,
        records,
        summary,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SweepResult {
    pub fn csv_header(&self) -> String {
        let mut h = String::from(
            "sweep,value,trial,seed,n_elements,n_users,scheme,objective,sum_rate_bps_hz,\
             throughput_bps,sdr_lambda1,sdr_lambda2,sdr_iterations,converged",
        );
        if self.include_timing {
            h.push_str(",wall_time_s");
        }
        h
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        for r in &self.records {
            for s in &r.results {
                write!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    self.variable.name(),
                    r.value,
                    r.trial,
                    r.seed,
                    r.n_elements,
                    r.n_users,
                    s.scheme,
                    opt(s.objective),
                    s.rate,
                    s.rate * r.bandwidth_hz,
                    r.sdr_lambda1,
                    r.sdr_lambda2,
                    r.sdr_iterations,
                    r.converged,
                )?;
                if self.include_timing {
                    write!(out, ",{}", r.wall_time_s)?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV is ASCII"))
    }

    pub fn write_summary_json(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.summary)?;
        Ok(())
    }

    /// Plain-text table of mean rates per point.
    pub fn summary_table(&self) -> String {
        let mut s = String::new();
        let schemes: Vec<Scheme> = self
            .summary
            .points
            .iter()
            .flat_map(|p| p.schemes.iter().map(|x| x.scheme))
            .fold(Vec::new(), |mut acc, x| {
                if !acc.contains(&x) {
                    acc.push(x);
                }
                acc
            });
        s.push_str(&format!("{:>6}", self.variable.name()));
        for x in &schemes {
            s.push_str(&format!(" {:>15}", x.name()));
        }
        s.push_str(&format!(" {:>8}\n", "nonconv"));
        for p in &self.summary.points {
            s.push_str(&format!("{:>6}", p.value));
            for x in &schemes {
                match p.schemes.iter().find(|y| y.scheme == *x) {
                    Some(y) => s.push_str(&format!(" {:>8.4}±{:<6.4}", y.mean_rate, y.std_error)),
                    None => s.push_str(&format!(" {:>15}", "-")),
                }
            }
            s.push_str(&format!(" {:>8}\n", p.nonconverged));
        }
        s
    }
}
