//! Sum-rate maximization for IRS-assisted uplink NOMA.
//!
//! The NOMA sum rate collapses to `log2(1 + w^H H w / σ^2)` with
//! `H = Σ_k P_k ĥ_k ĥ_k^H`, so the passive beamforming problem is a
//! unit-modulus quadratic maximization. It is solved through its
//! semidefinite relaxation ([`sdr`]) followed by leading-eigenvector rounding
//! ([`rounding`]), and compared against OMA, random phases, spectral bounds
//! and an exhaustive small-instance oracle ([`baselines`]).

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod rounding;
pub mod scenario;
pub mod sdr;

pub use error::{Error, Result};
pub use experiments::{run_sweep, ExperimentPlan, Scheme, SweepResult, SweepVariable, TrialRecord};
pub use model::{
    build_hermitian_form, effective_channels, oma_rate, order_users, sinr_per_user, sum_rate,
    ChannelSet, ComplexVec, HermitianForm, PhaseVector, SystemParams,
};
pub use num_complex::Complex64;
pub use rounding::{round_full_pipeline, RoundingOptions, RoundingReport};
pub use sdr::{solve_sdr, SdrSolution, SolveStatus, SolverSettings};
