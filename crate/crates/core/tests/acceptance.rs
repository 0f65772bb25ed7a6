//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use irs_noma_core::baselines::{oma_sum_rate, oracle_exhaustive, random_phase_baseline};
use irs_noma_core::channel::{draw_scenario_seeded, ScenarioConfig};
use irs_noma_core::model::{
    build_hermitian_form, cascaded_channel, per_user_rates, sum_rate, HermitianForm,
};
use irs_noma_core::rounding::{round_solution, upper_bound_sphere};
use irs_noma_core::sdr::StartPoint;
use irs_noma_core::{
    round_full_pipeline, run_sweep, solve_sdr, Error, ExperimentPlan, RoundingOptions, Scheme,
    SolveStatus, SolverSettings, SweepVariable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn scenario_form(
    n: usize,
    k: usize,
    seed: u64,
) -> (irs_noma_core::channel::Scenario, HermitianForm) {
    let cfg = ScenarioConfig {
        n_elements: n,
        n_users: k,
        ..ScenarioConfig::default()
    };
    let s = draw_scenario_seeded(&cfg, seed).unwrap();
    let h = build_hermitian_form(&s.channels, &s.params.p_max).unwrap();
    (s, h)
}

fn telescoping() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let mut max_err: f64 = 0.0;
    let mut orderings = 0usize;
    for _ in 0..1000 {
        let n = r.random_range(1..=32);
        let k = r.random_range(1..=5);
        let cs = random_channels(&mut r, n, k);
        let w = random_phases(&mut r, n);
        let p = random_powers(&mut r, k);
        let noise = r.random_range(0.01..1.0);
        let closed = sum_rate(&cs, &w, &p, noise).unwrap();
        for order in permutations(k) {
            let total: f64 = per_user_rates(&cs, &w, &p, noise, &order)
                .unwrap()
                .iter()
                .sum();
            max_err = max_err.max((total - closed).abs());
            orderings += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: max_err < 1e-9 && secs < 10.0,
        detail: format!(
            "max abs error {max_err:.2e} over 1000 instances, {orderings} orderings, {secs:.2} s"
        ),
    }
}

fn bridge() -> Outcome {
    let mut r = rng(202);
    let mut max_rel: f64 = 0.0;
    for _ in 0..1000 {
        let n = r.random_range(1..=32);
        let cs = random_channels(&mut r, n, 1);
        let phi = random_phases(&mut r, n);
        let w = conj_phases(&phi);
        let direct = cascaded_gain_oracle(cs.h_bs(), &phi, &cs.h_users()[0]);
        let lib_cascaded = cascaded_channel(&cs, 0, &phi).norm_sqr();
        let effective = cs.gain(0, &w);
        for v in [lib_cascaded, effective] {
            max_rel = max_rel.max((v - direct).abs() / direct);
        }
    }
    Outcome {
        pass: max_rel < 1e-12,
        detail: format!("max relative error {max_rel:.2e} over 1000 pairs"),
    }
}

fn chain() -> Outcome {
    let settings = SolverSettings::default();
    let mut violations = Vec::new();
    for i in 0..500u64 {
        let n = [4, 8, 16][(i % 3) as usize];
        let (_, h) = scenario_form(n, 3, 30_000 + i);
        let sol = solve_sdr(&h, &settings).unwrap();
        let rep = round_solution(&h, sol, &RoundingOptions::default()).unwrap();
        let mut prng = ChaCha20Rng::seed_from_u64(i);
        let random = random_phase_baseline(&h, 100, &mut prng).unwrap().mean;
        let b = upper_bound_sphere(&h);
        let ok = random <= rep.rounded_objective
            && rep.rounded_objective <= rep.sdr_objective
            && rep.sdr_objective <= b.tight * (1.0 + 1e-6)
            && b.tight <= b.as_stated * (1.0 + 1e-6);
        if !ok {
            violations.push(i);
        }
    }
    Outcome {
        pass: violations.is_empty(),
        detail: format!(
            "{} of 500 instances violate the chain {:?}",
            violations.len(),
            violations
        ),
    }
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let settings = SolverSettings::default();
    let mut near = 0;
    let mut dominated = 0;
    let mut worst: f64 = f64::INFINITY;
    for i in 0..100u64 {
        let k = 1 + (i % 3) as usize;
        let (_, h) = scenario_form(4, k, 40_000 + i);
        let rep = round_full_pipeline(&h, &settings, &RoundingOptions::default()).unwrap();
        let best = oracle_exhaustive(&h, 16, 6).unwrap().best_objective;
        let ratio = rep.rounded_objective / best;
        worst = worst.min(ratio);
        if ratio >= 0.95 {
            near += 1;
        }
        if rep.sdr_objective >= best {
            dominated += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: near >= 95 && dominated == 100 && secs < 300.0,
        detail: format!(
            "rounded >= 0.95 oracle on {near}/100 (worst ratio {worst:.4}), SDR >= oracle on {dominated}/100, {secs:.1} s"
        ),
    }
}

fn single_user(records: &[irs_noma_core::TrialRecord]) -> Outcome {
    let k1: Vec<_> = records.iter().filter(|r| r.n_users == 1).collect();
    let mut max_rel: f64 = 0.0;
    for r in &k1 {
        let prop = r.rate(Scheme::NomaProp).unwrap();
        let oma = r.rate(Scheme::Oma).unwrap();
        max_rel = max_rel.max((prop - oma).abs() / oma);
    }
    // Direct check on the library rate functions as well.
    let mut direct: f64 = 0.0;
    for i in 0..200u64 {
        let (s, h) = scenario_form(16, 1, 50_000 + i);
        let sol = solve_sdr(&h, &SolverSettings::default()).unwrap();
        let rep = round_solution(&h, sol, &RoundingOptions::default()).unwrap();
        let noma = sum_rate(
            &s.channels,
            &rep.phases,
            &s.params.p_max,
            s.params.noise_power,
        )
        .unwrap();
        let oma = oma_sum_rate(&s.channels, &s.params).unwrap();
        direct = direct.max((noma - oma).abs() / oma);
    }
    Outcome {
        pass: k1.len() == 200 && max_rel < 1e-6 && direct < 1e-6,
        detail: format!(
            "max relative gap {max_rel:.2e} over {} sweep trials, {direct:.2e} over 200 direct trials",
            k1.len()
        ),
    }
}

fn near_rank_one(summary: &irs_noma_core::experiments::PointSummary) -> Outcome {
    let n = 16.0;
    let (l1, l2) = (summary.mean_sdr_lambda1, summary.mean_sdr_lambda2);
    Outcome {
        pass: summary.trials == 200 && l1 >= 0.9 * n && l2 <= 0.1 * n,
        detail: format!(
            "mean lambda1 {l1:.4}, mean lambda2 {l2:.4} over {} trials (N = 16)",
            summary.trials
        ),
    }
}

fn growth_in_n(points: &[irs_noma_core::experiments::PointSummary]) -> Outcome {
    let x: Vec<f64> = points.iter().map(|p| (p.value as f64).log2()).collect();
    let y: Vec<f64> = points
        .iter()
        .map(|p| p.mean(Scheme::NomaProp).unwrap())
        .collect();
    let increasing = y.windows(2).all(|w| w[1] > w[0]);
    let (a, b, r2) = linear_fit(&x, &y);
    let nonconv: usize = points.iter().map(|p| p.nonconverged).sum();
    Outcome {
        pass: increasing && r2 >= 0.98,
        detail: format!(
            "means {:?}, fit {a:.3} + {b:.3} log2 N, R^2 {r2:.4}, {nonconv} non-converged",
            y.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
        ),
    }
}

fn gap_in_k(points: &[irs_noma_core::experiments::PointSummary]) -> Outcome {
    let gaps: Vec<(usize, f64)> = points
        .iter()
        .map(|p| {
            (
                p.value,
                p.mean(Scheme::NomaProp).unwrap() - p.mean(Scheme::Oma).unwrap(),
            )
        })
        .collect();
    let from2: Vec<f64> = gaps.iter().filter(|(k, _)| *k >= 2).map(|g| g.1).collect();
    let nonneg = from2.iter().all(|&g| g >= 0.0);
    let monotone = from2.windows(2).all(|w| w[1] >= w[0]);
    Outcome {
        pass: nonneg && monotone && from2.len() == 3,
        detail: format!(
            "mean NOMA-prop minus OMA by K: {}",
            gaps.iter()
                .map(|(k, g)| format!("K={k}: {g:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn solver_health() -> Outcome {
    let settings = SolverSettings::default();
    let sizes = [2, 4, 8, 16, 24, 32, 48, 64];
    let mut converged = 0;
    let mut max_iter = 0;
    let mut surfaced = true;
    for i in 0..500u64 {
        let n = sizes[(i as usize) % sizes.len()];
        let k = 1 + (i as usize / sizes.len()) % 5;
        let (_, h) = scenario_form(n, k, 60_000 + i);
        let sol = solve_sdr(&h, &settings).unwrap();
        max_iter = max_iter.max(sol.iterations);
        let ok = sol.status == SolveStatus::Converged
            && sol.primal_residual <= 1e-6
            && sol.dual_residual <= 1e-6
            && sol.iterations <= 5000;
        if ok {
            converged += 1;
        } else {
            surfaced &= sol.status == SolveStatus::MaxIterations;
        }
    }

    // A forced iteration cap must show up in the pipeline error, the CSV
    // and the summary counts.
    let capped = SolverSettings {
        max_iterations: 3,
        start: StartPoint::Identity,
        ..SolverSettings::default()
    };
    let (_, h) = scenario_form(16, 3, 7);
    surfaced &= matches!(
        round_full_pipeline(&h, &capped, &RoundingOptions::default()),
        Err(Error::NotConverged(_))
    );
    let mut plan = ExperimentPlan::new(SweepVariable::Elements, vec![8, 16]);
    plan.trials = 5;
    plan.solver = capped;
    let res = run_sweep(&plan).unwrap();
    let flagged = res.records.iter().filter(|r| !r.converged).count();
    let counted: usize = res.summary.points.iter().map(|p| p.nonconverged).sum();
    let csv = res.csv_string().unwrap();
    surfaced &=
        flagged == 10 && counted == 10 && csv.lines().skip(1).all(|l| l.ends_with(",false"));

    Outcome {
        pass: converged >= 495 && surfaced,
        detail: format!(
            "{converged}/500 converged (max {max_iter} iterations); forced cap surfaced: {surfaced}"
        ),
    }
}

fn determinism() -> Outcome {
    let mut plan = ExperimentPlan::new(SweepVariable::Elements, vec![4, 8]);
    plan.trials = 12;
    plan.master_seed = 99;
    plan.schemes = Scheme::ALL.to_vec();
    let a = run_sweep(&plan).unwrap().csv_string().unwrap();
    let b = run_sweep(&plan).unwrap().csv_string().unwrap();
    let mut plan_k = ExperimentPlan::new(SweepVariable::Users, vec![1, 3]);
    plan_k.trials = 12;
    let c = run_sweep(&plan_k).unwrap().csv_string().unwrap();
    let d = run_sweep(&plan_k).unwrap().csv_string().unwrap();
    Outcome {
        pass: a == b && c == d,
        detail: format!(
            "N sweep {} bytes identical: {}, K sweep {} bytes identical: {}",
            a.len(),
            a == b,
            c.len(),
            c == d
        ),
    }
}

fn report(id: usize, name: &str, o: &Outcome) -> bool {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id:>2} {name}: {}", o.detail);
    o.pass
}

fn main() -> ExitCode {
    let mut all = true;
    all &= report(1, "telescoping identity", &telescoping());
    all &= report(2, "cascaded/effective bridge", &bridge());
    all &= report(3, "relaxation chain", &chain());
    all &= report(4, "oracle near-optimality", &oracle());

    let mut plan_k = ExperimentPlan::new(SweepVariable::Users, vec![1, 2, 3, 4]);
    plan_k.trials = 200;
    plan_k.master_seed = 2;
    plan_k.schemes = vec![Scheme::NomaSdr, Scheme::NomaProp, Scheme::Oma];
    let sweep_k = run_sweep(&plan_k).unwrap();

    let mut plan_n = ExperimentPlan::new(SweepVariable::Elements, vec![8, 16, 32, 64]);
    plan_n.trials = 200;
    plan_n.master_seed = 1;
    plan_n.schemes = vec![Scheme::NomaSdr, Scheme::NomaProp];
    let sweep_n = run_sweep(&plan_n).unwrap();

    all &= report(5, "single-user tightness", &single_user(&sweep_k.records));
    all &= report(
        6,
        "near-rank-one relaxation",
        &near_rank_one(&sweep_n.summary.points[1]),
    );
    all &= report(7, "rate growth in N", &growth_in_n(&sweep_n.summary.points));
    all &= report(
        8,
        "NOMA over OMA gap in K",
        &gap_in_k(&sweep_k.summary.points),
    );
    all &= report(9, "solver health", &solver_health());
    all &= report(10, "determinism", &determinism());

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
