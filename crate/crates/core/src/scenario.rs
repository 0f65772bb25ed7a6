//! JSON scenario files and the companion result documents.
//!
//! Scenario schema (`format = "irs-noma-scenario"`, `version = 1`):
//!
//! ```json
//! {
//!   "format": "irs-noma-scenario",
//!   "version": 1,
//!   "n_elements": 2,
//!   "n_users": 1,
//!   "p_max_dbm": [30.0],
//!   "noise": { "bandwidth_hz": 1e6, "noise_psd_dbm_hz": -174.0, "noise_power_dbm": 30.0 },
//!   "h_bs": [[1.0, 0.0], [1.0, 0.0]],
//!   "h_users": [[[1.0, 0.0], [0.0, 1.0]]]
//! }
//! ```
//!
//! Complex numbers are `[real, imaginary]` pairs. `noise_power_dbm` is
//! optional; when absent the noise power is `noise_psd_dbm_hz + 10 log10(bandwidth_hz)`.
//! `geometry` and `seed` are optional and informational.

use serde::{Deserialize, Serialize};

use crate::channel::{Geometry, Scenario};
use crate::error::{Error, Result};
use crate::model::{dbm_to_watts, watts_to_dbm, ChannelSet, ComplexVec, SystemParams};

pub const SCENARIO_FORMAT: &str = "irs-noma-scenario";
pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_power_dbm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format: String,
    pub version: u32,
    pub n_elements: usize,
    pub n_users: usize,
    pub p_max_dbm: Vec<f64>,
    pub noise: NoiseSpec,
    pub h_bs: Vec<[f64; 2]>,
    pub h_users: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
}

fn pairs(v: &ComplexVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn scenario_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Scenario {
        field: field.into(),
        message: message.into(),
    }
}

impl ScenarioFile {
    pub fn from_parts(
        channels: &ChannelSet,
        params: &SystemParams,
        seed: Option<u64>,
        geometry: Option<Geometry>,
    ) -> Self {
        let derived = params.noise_psd_dbm_hz + 10.0 * params.bandwidth_hz.log10();
        let noise_dbm = watts_to_dbm(params.noise_power);
        Self {
            format: SCENARIO_FORMAT.into(),
            version: SCENARIO_VERSION,
            n_elements: channels.n_elements(),
            n_users: channels.n_users(),
            p_max_dbm: params.p_max.iter().map(|&p| watts_to_dbm(p)).collect(),
            noise: NoiseSpec {
                bandwidth_hz: params.bandwidth_hz,
                noise_psd_dbm_hz: params.noise_psd_dbm_hz,
                noise_power_dbm: ((noise_dbm - derived).abs() > 1e-9).then_some(noise_dbm),
            },
            h_bs: pairs(channels.h_bs()),
            h_users: channels.h_users().iter().map(pairs).collect(),
            seed,
            geometry,
        }
    }

    pub fn from_scenario(s: &Scenario, seed: Option<u64>) -> Self {
        Self::from_parts(&s.channels, &s.params, seed, Some(s.geometry.clone()))
    }

    /// Parse JSON text. Syntax and type errors carry the field path plus line
    /// and column; semantic errors name the offending field.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != SCENARIO_FORMAT {
            return Err(scenario_err(
                "format",
                format!("expected \"{SCENARIO_FORMAT}\""),
            ));
        }
        if self.version != SCENARIO_VERSION {
            return Err(scenario_err(
                "version",
                format!("unsupported version {}", self.version),
            ));
        }
        if self.n_elements == 0 {
            return Err(scenario_err("n_elements", "must be at least 1"));
        }
        if self.n_users == 0 {
            return Err(scenario_err("n_users", "must be at least 1"));
        }
        if self.p_max_dbm.len() != self.n_users {
            return Err(scenario_err(
                "p_max_dbm",
                format!(
                    "expected {} entries, found {}",
                    self.n_users,
                    self.p_max_dbm.len()
                ),
            ));
        }
        if let Some(k) = self.p_max_dbm.iter().position(|p| !p.is_finite()) {
            return Err(scenario_err(format!("p_max_dbm[{k}]"), "must be finite"));
        }
        if !(self.noise.bandwidth_hz > 0.0) {
            return Err(scenario_err("noise.bandwidth_hz", "must be positive"));
        }
        if !self.noise.noise_psd_dbm_hz.is_finite() {
            return Err(scenario_err("noise.noise_psd_dbm_hz", "must be finite"));
        }
        if matches!(self.noise.noise_power_dbm, Some(p) if !p.is_finite()) {
            return Err(scenario_err("noise.noise_power_dbm", "must be finite"));
        }
        if self.h_bs.len() != self.n_elements {
            return Err(scenario_err(
                "h_bs",
                format!(
                    "expected {} entries, found {}",
                    self.n_elements,
                    self.h_bs.len()
                ),
            ));
        }
        if self.h_users.len() != self.n_users {
            return Err(scenario_err(
                "h_users",
                format!(
                    "expected {} users, found {}",
                    self.n_users,
                    self.h_users.len()
                ),
            ));
        }
        for (k, h) in self.h_users.iter().enumerate() {
            if h.len() != self.n_elements {
                return Err(scenario_err(
                    format!("h_users[{k}]"),
                    format!("expected {} entries, found {}", self.n_elements, h.len()),
                ));
            }
        }
        Ok(())
    }

    pub fn to_model(&self) -> Result<(ChannelSet, SystemParams)> {
        self.validate()?;
        let to_vec = |field: String, v: &[[f64; 2]]| {
            ComplexVec::from_parts(&v.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>())
                .map_err(|e| scenario_err(field, e.to_string()))
        };
        let h_bs = to_vec("h_bs".into(), &self.h_bs)?;
        let h_users = self
            .h_users
            .iter()
            .enumerate()
            .map(|(k, h)| to_vec(format!("h_users[{k}]"), h))
            .collect::<Result<Vec<_>>>()?;
        let channels = ChannelSet::new(h_bs, h_users)?;
        let mut params = SystemParams::new(
            self.n_elements,
            self.p_max_dbm.iter().map(|&p| dbm_to_watts(p)).collect(),
            self.noise.bandwidth_hz,
            self.noise.noise_psd_dbm_hz,
        )?;
        if let Some(p) = self.noise.noise_power_dbm {
            params.noise_power = dbm_to_watts(p);
        }
        params.validate()?;
        Ok((channels, params))
    }
}
