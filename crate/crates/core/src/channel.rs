//! Random scenario generation: geometry, large-scale pathloss and Rayleigh
//! fading.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with a
//! 64-bit value. Uniform doubles take the top 53 bits of `next_u64`, and
//! Gaussians use the Box-Muller transform, so the whole draw can be
//! reproduced outside Rust from the same ChaCha20 keystream.
//!
//! Draw order for one scenario: the IRS→BS distance, then the `K` IRS→user
//! distances, then `h_bs` entry by entry, then each `h_k` entry by entry.
//! Every complex entry consumes two uniforms (one Box-Muller pair).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{dbm_to_watts, ChannelSet, ComplexVec, SystemParams};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Knobs for one random scenario. Defaults: 16 elements, 3 users, IRS→BS
/// distance on `[1, 50]` m, IRS→user distances on `[1, 200]` m, 20 dBm per
/// user, 1 MHz bandwidth, -174 dBm/Hz noise density, 2 GHz carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_elements: usize,
    pub n_users: usize,
    pub d_min: f64,
    pub d_bs_irs_max: f64,
    pub d_irs_user_max: f64,
    pub p_max_dbm: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
    pub carrier_freq_hz: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_elements: 16,
            n_users: 3,
            d_min: 1.0,
            d_bs_irs_max: 50.0,
            d_irs_user_max: 200.0,
            p_max_dbm: 20.0,
            bandwidth_hz: 1e6,
            noise_psd_dbm_hz: -174.0,
            carrier_freq_hz: 2e9,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 || self.n_users == 0 {
            return Err(invalid("N and K must be at least 1"));
        }
        if !(self.d_min > 0.0) {
            return Err(invalid("d_min must be positive"));
        }
        if !(self.d_bs_irs_max >= self.d_min) || !(self.d_irs_user_max >= self.d_min) {
            return Err(invalid("maximum distances must be at least d_min"));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(invalid("bandwidth must be positive"));
        }
        if !(self.carrier_freq_hz > 0.0) {
            return Err(invalid("carrier frequency must be positive"));
        }
        if !self.p_max_dbm.is_finite() || !self.noise_psd_dbm_hz.is_finite() {
            return Err(invalid("power levels must be finite"));
        }
        Ok(())
    }
}

/// IRS→user pathloss `30 + 28 log10(d)` dB.
pub fn pathloss_irs_user_db(d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(invalid(format!("distance must be positive, got {d}")));
    }
    Ok(30.0 + 28.0 * d.log10())
}

/// Free-space loss `20 log10(4π d f / c)` dB.
pub fn pathloss_bs_irs_db(d: f64, freq_hz: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(invalid(format!("distance must be positive, got {d}")));
    }
    if !(freq_hz > 0.0) || !freq_hz.is_finite() {
        return Err(invalid(format!(
            "carrier frequency must be positive, got {freq_hz}"
        )));
    }
    Ok(20.0 * d.log10() + 20.0 * freq_hz.log10() + 20.0 * (4.0 * PI / SPEED_OF_LIGHT).log10())
}

pub fn db_to_linear_gain(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

/// Uniform double on `[0, 1)` from the top 53 bits of one `u64`.
pub fn uniform01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `[lo, hi]` (upper end reached only through rounding).
pub fn uniform_range(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform01(rng)
}

/// Circularly-symmetric complex Gaussian with `E|z|^2 = variance`.
pub fn complex_gaussian(rng: &mut impl RngCore, variance: f64) -> Complex64 {
    let u1 = 1.0 - uniform01(rng);
    let u2 = uniform01(rng);
    let r = (-2.0 * u1.ln()).sqrt() * (variance / 2.0).sqrt();
    Complex64::from_polar(r, 2.0 * PI * u2)
}

/// Link geometry behind a drawn scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d_bs_irs: f64,
    pub d_irs_users: Vec<f64>,
    pub gain_bs_irs: f64,
    pub gain_irs_users: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub channels: ChannelSet,
    pub params: SystemParams,
    pub geometry: Geometry,
}

/// Draw one scenario from `rng`.
pub fn draw_scenario(cfg: &ScenarioConfig, rng: &mut impl RngCore) -> Result<Scenario> {
    cfg.validate()?;
    let d_bs_irs = uniform_range(rng, cfg.d_min, cfg.d_bs_irs_max);
    let d_irs_users: Vec<f64> = (0..cfg.n_users)
        .map(|_| uniform_range(rng, cfg.d_min, cfg.d_irs_user_max))
        .collect();

    let gain_bs_irs = db_to_linear_gain(pathloss_bs_irs_db(d_bs_irs, cfg.carrier_freq_hz)?);
    let gain_irs_users = d_irs_users
        .iter()
        .map(|&d| pathloss_irs_user_db(d).map(db_to_linear_gain))
        .collect::<Result<Vec<_>>>()?;

    let mut fading = |gain: f64| -> Result<ComplexVec> {
        ComplexVec::new(
            (0..cfg.n_elements)
                .map(|_| complex_gaussian(rng, gain))
                .collect(),
        )
    };
    let h_bs = fading(gain_bs_irs)?;
    let h_users = gain_irs_users
        .iter()
        .map(|&g| fading(g))
        .collect::<Result<Vec<_>>>()?;

    let channels = ChannelSet::new(h_bs, h_users)?;
    let params = SystemParams::new(
        cfg.n_elements,
        vec![dbm_to_watts(cfg.p_max_dbm); cfg.n_users],
        cfg.bandwidth_hz,
        cfg.noise_psd_dbm_hz,
    )?;
    Ok(Scenario {
        channels,
        params,
        geometry: Geometry {
            d_bs_irs,
            d_irs_users,
            gain_bs_irs,
            gain_irs_users,
        },
    })
}

/// Draw one scenario from a fresh ChaCha20 stream seeded with `seed`.
pub fn draw_scenario_seeded(cfg: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    draw_scenario(cfg, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one trial: `splitmix64(splitmix64(splitmix64(master) ^ value) ^ trial)`.
///
/// Depends only on the triple, so adding sweep points leaves the draws of
/// other points untouched.
pub fn trial_seed(master: u64, sweep_value: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ sweep_value) ^ trial)
}
