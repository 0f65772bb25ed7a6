use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use irs_noma_core::baselines::oracle_exhaustive;
use irs_noma_core::channel::{draw_scenario_seeded, ScenarioConfig};
use irs_noma_core::linalg::CMatrix;
use irs_noma_core::model::{build_hermitian_form, HermitianForm};
use irs_noma_core::sdr::project_psd;
use irs_noma_core::{round_full_pipeline, solve_sdr, Complex64, RoundingOptions, SolverSettings};

fn form(n: usize, seed: u64) -> HermitianForm {
    let cfg = ScenarioConfig {
        n_elements: n,
        ..ScenarioConfig::default()
    };
    let s = draw_scenario_seeded(&cfg, seed).unwrap();
    build_hermitian_form(&s.channels, &s.params.p_max).unwrap()
}

fn bench_sdr(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_sdr");
    g.sample_size(10);
    for n in [8, 16, 32, 64] {
        let h = form(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| solve_sdr(black_box(h), &SolverSettings::default()).unwrap())
        });
    }
    g.finish();
}

fn bench_pipeline(c: &mut Criterion) {
    let h = form(16, 2);
    c.bench_function("round_full_pipeline/16", |b| {
        b.iter(|| {
            round_full_pipeline(
                black_box(&h),
                &SolverSettings::default(),
                &RoundingOptions::default(),
            )
            .unwrap()
        })
    });
}

fn bench_psd(c: &mut Criterion) {
    let mut g = c.benchmark_group("project_psd");
    for n in [16, 64] {
        let h = form(n, 3);
        // Shift so that roughly half the spectrum is clamped.
        let shift = Complex64::new(h.top_eigenvalue() / 2.0, 0.0);
        let shifted = h.matrix() - CMatrix::identity(n, n) * shift;
        g.bench_with_input(BenchmarkId::from_parameter(n), &shifted, |b, m| {
            b.iter(|| project_psd(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_exhaustive");
    g.sample_size(10);
    for n in [4, 5] {
        let h = form(n, 4);
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| oracle_exhaustive(black_box(h), 16, 6).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_sdr, bench_pipeline, bench_psd, bench_oracle);
criterion_main!(benches);
