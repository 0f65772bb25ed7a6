//! Reference schemes: OMA with per-slot closed-form phases, random phases,
//! and an exhaustive search over a uniform phase grid for small `N`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::RngCore;

use crate::channel::uniform01;
use crate::error::{invalid, Error, Result};
use crate::model::{oma_rate, ChannelSet, ComplexVec, HermitianForm, PhaseVector, SystemParams};

/// Default largest `N` accepted by [`oracle_exhaustive`].
pub const ORACLE_MAX_N: usize = 6;
/// Default phase levels for [`oracle_exhaustive`].
pub const ORACLE_LEVELS: usize = 16;

/// `w_i = ĥ_k(i) / |ĥ_k(i)|`, which co-phases every term of `w^H ĥ_k` and
/// attains `|w^H ĥ_k|^2 = (Σ_i |ĥ_k(i)|)^2`. Zero entries get `w_i = 1`.
pub fn oma_optimal_phases(h_eff: &[Complex64]) -> Result<PhaseVector> {
    let w = h_eff
        .iter()
        .map(|z| {
            if z.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, z.arg())
            }
        })
        .collect();
    PhaseVector::new(ComplexVec::new(w)?)
}

/// OMA sum rate: each user gets a `1/K` slot, full power and its own
/// co-phased IRS configuration.
pub fn oma_sum_rate(cs: &ChannelSet, params: &SystemParams) -> Result<f64> {
    params.check_channels(cs)?;
    let k = cs.n_users();
    (0..k)
        .map(|u| {
            let w = oma_optimal_phases(&cs.effective()[u])?;
            oma_rate(cs, u, &w, params.p_max[u], params.noise_power, k)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_objective: f64,
    pub best_phases: PhaseVector,
    /// Grid index `l` of each element, `w_i = exp(j 2π l_i / L)`.
    pub best_levels: Vec<usize>,
    pub evaluated: u64,
}

/// Exhaustive maximum of `w^H H w` over `w_i ∈ {exp(j 2π l / L)}`.
///
/// `w^H H w` is invariant to a common phase rotation, so the first element
/// is pinned to level 0; every other grid point is a rotation of one that is
/// enumerated. Enumeration is lexicographic in the level vector and only a
/// strictly larger value replaces the incumbent, so ties resolve to the
/// lexicographically smallest level vector.
pub fn oracle_exhaustive(h: &HermitianForm, levels: usize, max_n: usize) -> Result<OracleResult> {
    let n = h.n();
    if n > max_n {
        return Err(Error::InstanceTooLarge { n, max_n });
    }
    if levels < 2 {
        return Err(invalid("oracle needs at least 2 phase levels"));
    }
    let grid: Vec<Complex64> = (0..levels)
        .map(|l| Complex64::from_polar(1.0, 2.0 * PI * l as f64 / levels as f64))
        .collect();
    let m = h.matrix();

    let mut idx = vec![0usize; n];
    let mut w: Vec<Complex64> = vec![grid[0]; n];
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = idx.clone();
    let mut evaluated = 0u64;
    loop {
        let value = quad(m, &w);
        evaluated += 1;
        if value > best {
            best = value;
            best_idx.clone_from(&idx);
        }
        // Odometer over elements 1..n, last element fastest.
        let mut pos = n;
        loop {
            if pos <= 1 {
                let best_phases = PhaseVector::new(ComplexVec::new(
                    best_idx.iter().map(|&l| grid[l]).collect(),
                )?)?;
                return Ok(OracleResult {
                    best_objective: best,
                    best_phases,
                    best_levels: best_idx,
                    evaluated,
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < levels {
                w[pos] = grid[idx[pos]];
                break;
            }
            idx[pos] = 0;
            w[pos] = grid[0];
        }
    }
}

fn quad(m: &crate::linalg::CMatrix, w: &[Complex64]) -> f64 {
    let n = w.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += m[(i, i)].re;
        let mut row = Complex64::new(0.0, 0.0);
        for j in (i + 1)..n {
            row += m[(i, j)] * w[j];
        }
        acc += 2.0 * (w[i].conj() * row).re;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPhaseStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub trials: usize,
}

/// Statistics of `w^H H w` over i.i.d. uniform phases.
pub fn random_phase_baseline(
    h: &HermitianForm,
    trials: usize,
    rng: &mut impl RngCore,
) -> Result<RandomPhaseStats> {
    if trials == 0 {
        return Err(invalid("random-phase baseline needs at least one trial"));
    }
    let n = h.n();
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for _ in 0..trials {
        let w: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(1.0, 2.0 * PI * uniform01(rng)))
            .collect();
        let v = h.objective(&w);
        sum += v;
        min = min.min(v);
        max = max.max(v);
    }
    Ok(RandomPhaseStats {
        mean: sum / trials as f64,
        min,
        max,
        trials,
    })
}
