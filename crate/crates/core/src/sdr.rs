//! Semidefinite relaxation of the unit-modulus quadratic program
//!
//! ```text
//! maximize    Tr(H W)
//! subject to  W_ii = 1,  i = 1..N
//!             W ⪰ 0 (complex Hermitian)
//! ```
//!
//! solved with a two-block ADMM splitting. `X` lives in the affine set
//! `{X Hermitian, diag(X) = 1}`, `Z` in the PSD cone, and the consensus
//! constraint `X = Z` carries the scaled dual `U`:
//!
//! ```text
//! X ← Π_diag(Z − U + H/ρ)        (diagonal reset to 1)
//! Z ← Π_psd(X + U)               (eigenvalue clamp)
//! U ← U + X − Z
//! ```
//!
//! `H` is divided by its largest eigenvalue before the loop so that the
//! penalty and the tolerances are scale-free.
//!
//! Residuals, both relative, Frobenius norms:
//!
//! * primal: `‖X − Z‖ / max(‖X‖, ‖Z‖)`
//! * dual: `ρ ‖Z − Z_prev‖ / max(‖ρU‖, ‖H/λ‖)`
//!
//! The loop stops when both fall below `tolerance`. The returned `W` is the
//! PSD iterate `Z` rescaled by `D^{-1/2} Z D^{-1/2}` with `D = diag(Z)`, a
//! congruence that keeps `W ⪰ 0` and makes the unit diagonal exact.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::channel::complex_gaussian;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::model::HermitianForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPoint {
    /// `Z = I`, `U = 0`.
    Identity,
    /// `Z` = a random unit-diagonal rank-one matrix drawn from the seed.
    Random(u64),
    /// `Z = v v^H` with `v` the unit-modulus projection of the top
    /// eigenvector of `H`, and `U` set to the dual that makes `(Z, U)` a
    /// fixed point whenever `v v^H` is optimal.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub max_iterations: usize,
    /// Stopping threshold on both relative residuals.
    pub tolerance: f64,
    /// Initial penalty, relative to `H/λ`.
    pub rho: f64,
    /// Rebalance ρ when one residual exceeds the other by `rho_balance`.
    pub adaptive_rho: bool,
    pub rho_balance: f64,
    pub rho_factor: f64,
    /// Iterations between ρ updates.
    pub rho_interval: usize,
    /// Over-relaxation factor in `(0, 2)`; 1 is plain ADMM.
    pub relaxation: f64,
    pub start: StartPoint,
    /// Keep the per-iteration residual history in [`SdrSolution::trace`].
    pub record_trace: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: 1e-6,
            rho: 1.0,
            adaptive_rho: true,
            rho_balance: 10.0,
            rho_factor: 2.0,
            rho_interval: 10,
            relaxation: 1.0,
            start: StartPoint::Spectral,
            record_trace: false,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if !(self.rho > 0.0) || !(self.rho_factor > 1.0) || !(self.rho_balance > 1.0) {
            return Err(Error::InvalidInput(
                "penalty parameters out of range".into(),
            ));
        }
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::InvalidInput("relaxation must lie in (0, 2)".into()));
        }
        if self.rho_interval == 0 {
            return Err(Error::InvalidInput(
                "rho_interval must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub primal: f64,
    pub dual: f64,
    pub rho: f64,
}

#[derive(Debug, Clone)]
pub struct SdrSolution {
    /// Unit-diagonal Hermitian PSD matrix.
    pub w: CMatrix,
    /// `Tr(H W)` in the units of `H`.
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    /// Eigenvalues of `W`, descending.
    pub spectrum: Vec<f64>,
    pub status: SolveStatus,
    /// Final penalty (scale of `H/λ`).
    pub rho: f64,
    pub trace: Vec<TracePoint>,
}

impl SdrSolution {
    pub fn is_converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// `Ok(self)` if converged, otherwise [`Error::NotConverged`] carrying it.
    pub fn into_converged(self) -> Result<Self> {
        if self.is_converged() {
            Ok(self)
        } else {
            Err(Error::NotConverged(Box::new(self)))
        }
    }

    pub fn top_eigenvalues(&self) -> (f64, f64) {
        (
            self.spectrum[0],
            self.spectrum.get(1).copied().unwrap_or(0.0),
        )
    }

    /// JSON dump of `W`, its spectrum and the residual trace.
    pub fn write_dump(&self, out: impl std::io::Write) -> Result<()> {
        #[derive(Serialize)]
        struct Dump<'a> {
            n: usize,
            status: SolveStatus,
            objective: f64,
            iterations: usize,
            primal_residual: f64,
            dual_residual: f64,
            spectrum: &'a [f64],
            /// Row-major `[re, im]` pairs.
            w: Vec<Vec<[f64; 2]>>,
            trace: &'a [TracePoint],
        }
        let n = self.w.nrows();
        let dump = Dump {
            n,
            status: self.status,
            objective: self.objective,
            iterations: self.iterations,
            primal_residual: self.primal_residual,
            dual_residual: self.dual_residual,
            spectrum: &self.spectrum,
            w: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| [self.w[(i, j)].re, self.w[(i, j)].im])
                        .collect()
                })
                .collect(),
            trace: &self.trace,
        };
        serde_json::to_writer_pretty(out, &dump)?;
        Ok(())
    }
}

/// Frobenius-nearest PSD matrix: eigendecompose, clamp negative eigenvalues
/// to zero, reconstruct.
pub fn project_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = linalg::hermitian_eigen(m)?;
    let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    Ok(linalg::reconstruct(&eig.vectors, &clamped))
}

fn reset_diagonal(m: &mut CMatrix) {
    for i in 0..m.nrows() {
        m[(i, i)] = Complex64::new(1.0, 0.0);
    }
}

/// `D^{-1/2} Z D^{-1/2}`; a row with non-positive diagonal is zeroed and its
/// diagonal set to one, which keeps the result PSD.
fn unit_diagonal_rescale(z: &CMatrix) -> CMatrix {
    let n = z.nrows();
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = z[(i, i)].re;
            if d > f64::MIN_POSITIVE {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut w = linalg::hermitian_part(&CMatrix::from_fn(n, n, |i, j| {
        z[(i, j)] * (scale[i] * scale[j])
    }));
    reset_diagonal(&mut w);
    w
}

fn rank_one_lift(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

fn unit_modulus(z: Complex64) -> Complex64 {
    if z.norm() > 0.0 {
        z / z.norm()
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Starting `(Z, U)` for the loop; `hn` is the normalized form.
fn initial_point(
    h: &HermitianForm,
    hn: &CMatrix,
    rho: f64,
    start: StartPoint,
) -> (CMatrix, CMatrix) {
    let n = h.n();
    match start {
        StartPoint::Identity => (CMatrix::identity(n, n), CMatrix::zeros(n, n)),
        StartPoint::Spectral => {
            let v: Vec<Complex64> = h
                .top_eigenvector()
                .iter()
                .map(|&z| unit_modulus(z))
                .collect();
            let z = rank_one_lift(&v);
            // Y = H − Diag(Re diag(H Z)), scaled by 1/ρ.
            let hz = hn * &z;
            let mut u = hn.clone();
            for i in 0..n {
                u[(i, i)] -= Complex64::new(hz[(i, i)].re, 0.0);
            }
            (z, u.unscale(rho))
        }
        StartPoint::Random(seed) => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let v: Vec<Complex64> = (0..n)
                .map(|_| unit_modulus(complex_gaussian(&mut rng, 1.0)))
                .collect();
            (rank_one_lift(&v), CMatrix::zeros(n, n))
        }
    }
}

/// Solve the relaxation. Non-convergence is reported through
/// [`SdrSolution::status`]; the returned matrix is then the iterate with the
/// smallest residuals seen.
pub fn solve_sdr(h: &HermitianForm, settings: &SolverSettings) -> Result<SdrSolution> {
    settings.validate()?;
    let n = h.n();
    let scale = h.top_eigenvalue();

    if scale <= 0.0 {
        // H = 0: every feasible W is optimal.
        return finish(
            h,
            CMatrix::identity(n, n),
            0.0,
            0.0,
            0,
            SolveStatus::Converged,
            settings.rho,
            vec![],
        );
    }

    let hn: CMatrix = h.matrix().unscale(scale);
    let hn_norm = linalg::frobenius(&hn);

    let mut rho = settings.rho;
    let (mut z, mut u) = initial_point(h, &hn, rho, settings.start);
    let mut trace = Vec::new();

    let mut best: Option<(f64, CMatrix, f64, f64, usize)> = None;
    let mut status = SolveStatus::MaxIterations;
    let mut last = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;

    for it in 1..=settings.max_iterations {
        iterations = it;
        let mut x = &z - &u + hn.unscale(rho);
        reset_diagonal(&mut x);
        x = linalg::hermitian_part(&x);

        let x_hat = if settings.relaxation == 1.0 {
            x.clone()
        } else {
            x.scale(settings.relaxation) + z.scale(1.0 - settings.relaxation)
        };
        let z_prev = std::mem::replace(&mut z, project_psd(&(&x_hat + &u))?);
        u += &x_hat - &z;

        let primal = linalg::frobenius(&(&x - &z))
            / linalg::frobenius(&x)
                .max(linalg::frobenius(&z))
                .max(f64::MIN_POSITIVE);
        let dual =
            rho * linalg::frobenius(&(&z - &z_prev)) / (rho * linalg::frobenius(&u)).max(hn_norm);
        last = (primal, dual);

        if settings.record_trace {
            trace.push(TracePoint { primal, dual, rho });
        }

        let worst = primal.max(dual);
        if best.as_ref().is_none_or(|b| worst < b.0) {
            best = Some((worst, z.clone(), primal, dual, it));
        }

        if primal < settings.tolerance && dual < settings.tolerance {
            status = SolveStatus::Converged;
            break;
        }

        if settings.adaptive_rho && it % settings.rho_interval == 0 {
            if primal > settings.rho_balance * dual {
                rho *= settings.rho_factor;
                u.unscale_mut(settings.rho_factor);
            } else if dual > settings.rho_balance * primal {
                rho /= settings.rho_factor;
                u.scale_mut(settings.rho_factor);
            }
        }
    }

    let (z_out, primal, dual) = match (status, best) {
        (SolveStatus::MaxIterations, Some((_, bz, p, d, _))) => (bz, p, d),
        _ => (z, last.0, last.1),
    };
    finish(h, z_out, primal, dual, iterations, status, rho, trace)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    h: &HermitianForm,
    z: CMatrix,
    primal: f64,
    dual: f64,
    iterations: usize,
    status: SolveStatus,
    rho: f64,
    trace: Vec<TracePoint>,
) -> Result<SdrSolution> {
    let w = unit_diagonal_rescale(&z);
    let spectrum = linalg::hermitian_eigen(&w)?.values;
    let objective = linalg::trace_product(h.matrix(), &w);
    Ok(SdrSolution {
        w,
        objective,
        primal_residual: primal,
        dual_residual: dual,
        iterations,
        spectrum,
        status,
        rho,
        trace,
    })
}

/// Certified upper bound on the SDR optimum and on the suboptimality of a
/// returned solution.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityCertificate {
    /// Dual multipliers of the diagonal constraints.
    pub dual: Vec<f64>,
    /// Smallest eigenvalue of `Diag(y) − H`.
    pub slack_min_eigenvalue: f64,
    /// Valid upper bound on `max Tr(H W)` over the feasible set.
    pub upper_bound: f64,
    /// `upper_bound − objective`, clamped at zero.
    pub gap_bound: f64,
}

/// Weak-duality certificate for a solution.
///
/// For any `y`, every feasible `W` satisfies
/// `Tr(H W) = Σ y_i − Tr((Diag(y) − H) W) ≤ Σ y_i − N·min(0, λ_min(Diag(y) − H))`
/// because `Tr(W) = N`. The multipliers are read off the primal solution as
/// `y_i = Re (H W)_ii`, which satisfies complementary slackness at an exact
/// optimum.
pub fn sdr_duality_check(h: &HermitianForm, sol: &SdrSolution) -> Result<DualityCertificate> {
    let n = h.n();
    if sol.w.nrows() != n {
        return Err(Error::DimensionMismatch {
            what: "SDR solution".into(),
            expected: n,
            found: sol.w.nrows(),
        });
    }
    let hw = h.matrix() * &sol.w;
    let dual: Vec<f64> = (0..n).map(|i| hw[(i, i)].re).collect();
    let mut slack = -h.matrix().clone();
    for (i, &y) in dual.iter().enumerate() {
        slack[(i, i)] += Complex64::new(y, 0.0);
    }
    let slack_min = *linalg::hermitian_eigen(&slack)?
        .values
        .last()
        .expect("non-empty spectrum");
    let upper_bound = dual.iter().sum::<f64>() - n as f64 * slack_min.min(0.0);
    Ok(DualityCertificate {
        dual,
        slack_min_eigenvalue: slack_min,
        upper_bound,
        gap_bound: (upper_bound - sol.objective).max(0.0),
    })
}
