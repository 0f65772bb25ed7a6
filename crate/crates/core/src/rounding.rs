//! From the relaxed matrix `W*` back to a feasible phase vector, plus the
//! spectral upper bounds on the unit-modulus optimum.
//!
//! The rounding is the leading-eigenvector rule: take the top eigenpair
//! `(λ₁, q₁)` of `W*`, form `w̃ = sqrt(λ₁) q₁`, then project each entry onto
//! the unit circle.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::channel::complex_gaussian;
use crate::error::Result;
use crate::linalg;
use crate::model::{ComplexVec, HermitianForm, PhaseVector};
use crate::sdr::{sdr_duality_check, solve_sdr, SdrSolution, SolverSettings};

/// `w̃ = sqrt(λ₁) q₁` for the top eigenpair of `W*`.
///
/// With a repeated top eigenvalue the first vector returned by the
/// eigensolver is used, so only the rounded objective (not the vector) is
/// stable across platforms in that case.
pub fn extract_leading(sol: &SdrSolution) -> Result<ComplexVec> {
    let eig = linalg::hermitian_eigen(&sol.w)?;
    let scale = eig.values[0].max(0.0).sqrt();
    ComplexVec::new(eig.vector(0).into_iter().map(|z| z * scale).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub phases: PhaseVector,
    /// Entries of `w̃` that were exactly zero and were mapped to `1 + 0i`.
    pub zero_elements: Vec<usize>,
}

/// `ŵ_i = w̃_i / |w̃_i|`, with zero entries mapped to `1`.
pub fn normalize_to_feasible(w_tilde: &[Complex64]) -> Result<Normalized> {
    let mut zero_elements = Vec::new();
    let entries = w_tilde
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let r = z.norm();
            if r == 0.0 {
                zero_elements.push(i);
                Complex64::new(1.0, 0.0)
            } else {
                // from_polar keeps |ŵ_i| = 1 to the last ulp.
                Complex64::from_polar(1.0, z.arg())
            }
        })
        .collect();
    Ok(Normalized {
        phases: PhaseVector::new(ComplexVec::new(entries)?)?,
        zero_elements,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereBounds {
    /// `λ·N`: the maximum of `w^H H w` over the sphere `w^H w = N`.
    pub tight: f64,
    /// `λ·N²`, the looser bound obtained from the sphere of radius `N`.
    pub as_stated: f64,
}

pub fn upper_bound_sphere(h: &HermitianForm) -> SphereBounds {
    let n = h.n() as f64;
    let lambda = h.top_eigenvalue();
    SphereBounds {
        tight: lambda * n,
        as_stated: lambda * n * n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoundingOptions {
    /// Gaussian randomization candidates drawn from `W*` after the
    /// eigenvector rounding. Zero disables the pass.
    pub randomization_samples: usize,
    pub randomization_seed: u64,
}

#[derive(Debug, Clone)]
pub struct RoundingReport {
    pub phases: PhaseVector,
    /// `ŵ^H H ŵ`.
    pub rounded_objective: f64,
    /// Best objective of the relaxation found: the solver's `Tr(H W*)`, or
    /// the lifted rounded point `ŵ ŵ^H` when that one is higher.
    pub sdr_objective: f64,
    /// `Tr(H W*)` as returned by the solver.
    pub solver_objective: f64,
    /// True when `ŵ ŵ^H` beat the solver iterate.
    pub lifted: bool,
    pub gap_bound: f64,
    pub bounds: SphereBounds,
    pub zero_elements: Vec<usize>,
    pub randomization_improved: bool,
    pub solution: SdrSolution,
}

impl RoundingReport {
    /// Eigenvalues of `W*`, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.solution.spectrum
    }
}

/// Solve the relaxation and round it. Solver non-convergence is returned as
/// [`crate::Error::NotConverged`]; use [`round_solution`] to round such an
/// iterate anyway.
pub fn round_full_pipeline(
    h: &HermitianForm,
    settings: &SolverSettings,
    options: &RoundingOptions,
) -> Result<RoundingReport> {
    let sol = solve_sdr(h, settings)?.into_converged()?;
    round_solution(h, sol, options)
}

/// Round an already computed relaxation solution.
pub fn round_solution(
    h: &HermitianForm,
    sol: SdrSolution,
    options: &RoundingOptions,
) -> Result<RoundingReport> {
    let w_tilde = extract_leading(&sol)?;
    let Normalized {
        mut phases,
        zero_elements,
    } = normalize_to_feasible(&w_tilde)?;
    let mut rounded_objective = h.objective(&phases);

    let mut randomization_improved = false;
    if options.randomization_samples > 0 {
        if let Some((cand, value)) = gaussian_randomization(h, &sol, options)? {
            if value > rounded_objective {
                phases = cand;
                rounded_objective = value;
                randomization_improved = true;
            }
        }
    }

    let certificate = sdr_duality_check(h, &sol)?;
    let lifted = rounded_objective > sol.objective;
    Ok(RoundingReport {
        phases,
        rounded_objective,
        sdr_objective: sol.objective.max(rounded_objective),
        solver_objective: sol.objective,
        lifted,
        gap_bound: certificate.gap_bound,
        bounds: upper_bound_sphere(h),
        zero_elements,
        randomization_improved,
        solution: sol,
    })
}

/// Best of `samples` candidates `normalize(W^{1/2} g)`, `g ~ CN(0, I)`.
fn gaussian_randomization(
    h: &HermitianForm,
    sol: &SdrSolution,
    options: &RoundingOptions,
) -> Result<Option<(PhaseVector, f64)>> {
    let eig = linalg::hermitian_eigen(&sol.w)?;
    let n = h.n();
    let roots: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(options.randomization_seed);
    let mut best: Option<(PhaseVector, f64)> = None;
    for _ in 0..options.randomization_samples {
        let g: Vec<Complex64> = roots
            .iter()
            .map(|&r| complex_gaussian(&mut rng, 1.0) * r)
            .collect();
        let xi: Vec<Complex64> = (0..n)
            .map(|i| (0..n).map(|j| eig.vectors[(i, j)] * g[j]).sum())
            .collect();
        let cand = normalize_to_feasible(&xi)?.phases;
        let value = h.objective(&cand);
        if best.as_ref().is_none_or(|b| value > b.1) {
            best = Some((cand, value));
        }
    }
    Ok(best)
}
