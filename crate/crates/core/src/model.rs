//! Rate-level model of IRS-assisted uplink NOMA.
//!
//! `K` single-antenna users reach a single-antenna base station only through
//! an IRS with `N` passive elements. The element phases form the diagonal
//! reflection matrix `Φ = diag(φ_1, ..., φ_N)` with `|φ_i| = 1`. Everything
//! here works on the equivalent phase vector `w` with `w_i = conj(φ_i)` and
//! the effective channels `ĥ_k = conj(h_bs) ∘ h_k`, for which
//!
//! ```text
//! |h_bs^H Φ h_k|^2 = |w^H ĥ_k|^2
//! ```
//!
//! holds exactly. Symbol-level quantities (transmitted symbols, received
//! samples, noise realizations) are not simulated; only gains and rates are.
//!
//! Rates are in bits/s/Hz throughout. Multiplying by bandwidth happens only
//! when experiment results are reported.

use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};

/// Allowed deviation of `|w_i|` from one for a [`PhaseVector`].
pub const UNIT_MODULUS_TOL: f64 = 1e-9;
/// Allowed relative deviation from Hermitian symmetry for a [`HermitianForm`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues of a [`HermitianForm`] may dip to `-PSD_TOL * max(1, λ)`.
pub const PSD_TOL: f64 = 1e-9;

/// A non-empty vector of finite complex numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("complex vector must have at least one entry"));
        }
        if let Some(i) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid(format!("entry {i} is not finite")));
        }
        Ok(Self(entries))
    }

    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            parts
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `self^H other`.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.0.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Deref for ComplexVec {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVec {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ComplexVec> for Vec<Complex64> {
    fn from(v: ComplexVec) -> Self {
        v.0
    }
}

/// Channels of one scenario: IRS→BS, each user→IRS, and the derived
/// effective channels `ĥ_k = conj(h_bs) ∘ h_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    h_bs: ComplexVec,
    h_users: Vec<ComplexVec>,
    effective: Vec<ComplexVec>,
}

impl ChannelSet {
    pub fn new(h_bs: ComplexVec, h_users: Vec<ComplexVec>) -> Result<Self> {
        effective_channels(h_bs, h_users)
    }

    pub fn n_elements(&self) -> usize {
        self.h_bs.len()
    }

    pub fn n_users(&self) -> usize {
        self.h_users.len()
    }

    pub fn h_bs(&self) -> &ComplexVec {
        &self.h_bs
    }

    pub fn h_users(&self) -> &[ComplexVec] {
        &self.h_users
    }

    pub fn effective(&self) -> &[ComplexVec] {
        &self.effective
    }

    /// Cascaded power gain `|w^H ĥ_k|^2` of user `k` under phases `w`.
    pub fn gain(&self, k: usize, w: &PhaseVector) -> f64 {
        w.inner(&self.effective[k]).norm_sqr()
    }

    /// Keep only the listed users, in the given order.
    pub fn select_users(&self, users: &[usize]) -> Result<Self> {
        if users.is_empty() {
            return Err(invalid("at least one user must be selected"));
        }
        let picked = users
            .iter()
            .map(|&k| {
                self.h_users
                    .get(k)
                    .cloned()
                    .ok_or_else(|| invalid(format!("user index {k} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.h_bs.clone(), picked)
    }
}

/// Transmit-power ceilings and noise of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n_elements: usize,
    pub n_users: usize,
    /// Per-user power ceiling `P_k^max` in watts.
    pub p_max: Vec<f64>,
    /// Receiver noise power `σ^2` in watts.
    pub noise_power: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
}

impl SystemParams {
    pub fn new(
        n_elements: usize,
        p_max: Vec<f64>,
        bandwidth_hz: f64,
        noise_psd_dbm_hz: f64,
    ) -> Result<Self> {
        let noise_power = dbm_to_watts(noise_psd_dbm_hz + 10.0 * bandwidth_hz.log10());
        let params = Self {
            n_elements,
            n_users: p_max.len(),
            p_max,
            noise_power,
            bandwidth_hz,
            noise_psd_dbm_hz,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(invalid("N must be at least 1"));
        }
        if self.n_users == 0 || self.p_max.len() != self.n_users {
            return Err(invalid(format!(
                "need K >= 1 power ceilings, got K = {} with {} ceilings",
                self.n_users,
                self.p_max.len()
            )));
        }
        if let Some(k) = self.p_max.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(invalid(format!("p_max[{k}] must be positive and finite")));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(invalid("noise power must be positive and finite"));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(invalid("bandwidth must be positive"));
        }
        Ok(())
    }

    pub fn check_channels(&self, cs: &ChannelSet) -> Result<()> {
        if cs.n_elements() != self.n_elements {
            return Err(Error::DimensionMismatch {
                what: "channel vectors".into(),
                expected: self.n_elements,
                found: cs.n_elements(),
            });
        }
        if cs.n_users() != self.n_users {
            return Err(Error::DimensionMismatch {
                what: "user list".into(),
                expected: self.n_users,
                found: cs.n_users(),
            });
        }
        Ok(())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// A unit-modulus IRS phase vector `w`, i.e. a feasible beamformer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexVec", into = "ComplexVec")]
pub struct PhaseVector(ComplexVec);

impl PhaseVector {
    pub fn new(w: ComplexVec) -> Result<Self> {
        if let Some(i) = w
            .iter()
            .position(|z| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
        {
            return Err(invalid(format!(
                "phase entry {i} has modulus {}, expected 1",
                w[i].norm()
            )));
        }
        Ok(Self(w))
    }

    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Self::new(ComplexVec::new(
            angles
                .iter()
                .map(|&a| Complex64::from_polar(1.0, a))
                .collect(),
        )?)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::from_angles(&vec![0.0; n])
    }

    pub fn angles(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }

    /// The reflection coefficients `φ_i = conj(w_i)`.
    pub fn reflection_coefficients(&self) -> Vec<Complex64> {
        self.0.iter().map(|z| z.conj()).collect()
    }

    pub fn as_vec(&self) -> &ComplexVec {
        &self.0
    }
}

impl Deref for PhaseVector {
    type Target = ComplexVec;
    fn deref(&self) -> &ComplexVec {
        &self.0
    }
}

impl TryFrom<ComplexVec> for PhaseVector {
    type Error = Error;
    fn try_from(v: ComplexVec) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PhaseVector> for ComplexVec {
    fn from(v: PhaseVector) -> Self {
        v.0
    }
}

/// The PSD matrix `H = Σ_k P_k ĥ_k ĥ_k^H` with its leading eigenpair cached.
#[derive(Debug, Clone)]
pub struct HermitianForm {
    matrix: CMatrix,
    top_eigenvalue: f64,
    top_eigenvector: ComplexVec,
    min_eigenvalue: f64,
}

impl HermitianForm {
    /// Wrap an explicit matrix, checking Hermitian symmetry and PSD-ness.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(invalid("H must be a non-empty square matrix"));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("H has non-finite entries"));
        }
        let defect = linalg::hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(invalid(format!(
                "H is not Hermitian (relative defect {defect:.3e})"
            )));
        }
        let matrix = linalg::hermitian_part(&matrix);
        let eig = linalg::hermitian_eigen(&matrix)?;
        let top = eig.values[0];
        let min = *eig.values.last().expect("non-empty spectrum");
        if min < -PSD_TOL * top.max(1.0) {
            return Err(invalid(format!("H is not PSD (min eigenvalue {min:.3e})")));
        }
        Ok(Self {
            top_eigenvector: ComplexVec::new(eig.vector(0))?,
            matrix,
            top_eigenvalue: top,
            min_eigenvalue: min,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_matrix(DMatrix::identity(n, n))
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// λ, the largest eigenvalue of `H`.
    pub fn top_eigenvalue(&self) -> f64 {
        self.top_eigenvalue
    }

    /// Unit-norm eigenvector for λ.
    pub fn top_eigenvector(&self) -> &ComplexVec {
        &self.top_eigenvector
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// `w^H H w`.
    pub fn objective(&self, w: &[Complex64]) -> f64 {
        linalg::quadratic_form(&self.matrix, w)
    }
}

/// Build `ĥ_k = conj(h_bs) ∘ h_k` for every user.
///
/// The conjugate on `h_bs` is what makes `|h_bs^H Φ h_k|^2 = |w^H ĥ_k|^2`
/// exact for complex channels when `w_i = conj(φ_i)`.
pub fn effective_channels(h_bs: ComplexVec, h_users: Vec<ComplexVec>) -> Result<ChannelSet> {
    if h_users.is_empty() {
        return Err(invalid("at least one user channel is required"));
    }
    let n = h_bs.len();
    let effective = h_users
        .iter()
        .enumerate()
        .map(|(k, h)| {
            if h.len() != n {
                return Err(Error::DimensionMismatch {
                    what: format!("user channel {k}"),
                    expected: n,
                    found: h.len(),
                });
            }
            ComplexVec::new(
                h_bs.iter()
                    .zip(h.iter())
                    .map(|(b, u)| b.conj() * u)
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelSet {
        h_bs,
        h_users,
        effective,
    })
}

/// Cascaded channel `h_bs^H Φ h_k` for an explicit reflection vector `φ`.
pub fn cascaded_channel(cs: &ChannelSet, k: usize, phi: &[Complex64]) -> Complex64 {
    cs.h_bs
        .iter()
        .zip(phi)
        .zip(cs.h_users[k].iter())
        .map(|((b, p), u)| b.conj() * p * u)
        .sum()
}

/// SIC decoding order: users sorted by descending `|h_bs^H h_k|` (no IRS
/// phases involved). Ties keep the lower original index first.
pub fn order_users(cs: &ChannelSet) -> Vec<usize> {
    let strength: Vec<f64> = cs.h_users.iter().map(|h| cs.h_bs.inner(h).norm()).collect();
    let mut order: Vec<usize> = (0..cs.n_users()).collect();
    order.sort_by(|&a, &b| strength[b].total_cmp(&strength[a]));
    order
}

fn check_rate_inputs(cs: &ChannelSet, w: &PhaseVector, powers: &[f64], noise: f64) -> Result<()> {
    if !(noise > 0.0) {
        return Err(invalid("noise power must be positive"));
    }
    if w.len() != cs.n_elements() {
        return Err(Error::DimensionMismatch {
            what: "phase vector".into(),
            expected: cs.n_elements(),
            found: w.len(),
        });
    }
    if powers.len() != cs.n_users() {
        return Err(Error::DimensionMismatch {
            what: "power vector".into(),
            expected: cs.n_users(),
            found: powers.len(),
        });
    }
    if let Some(k) = powers.iter().position(|&p| !(p >= 0.0 && p.is_finite())) {
        return Err(invalid(format!(
            "power {k} must be non-negative and finite"
        )));
    }
    Ok(())
}

/// Per-user SINR under SIC, indexed by original user index.
///
/// The user at position `j` of `order` sees interference only from users at
/// positions after `j`; the last decoded user sees noise only.
pub fn sinr_per_user(
    cs: &ChannelSet,
    w: &PhaseVector,
    powers: &[f64],
    noise: f64,
    order: &[usize],
) -> Result<Vec<f64>> {
    check_rate_inputs(cs, w, powers, noise)?;
    let k = cs.n_users();
    let mut seen = vec![false; k];
    if order.len() != k
        || order
            .iter()
            .any(|&u| u >= k || std::mem::replace(&mut seen[u], true))
    {
        return Err(invalid("decoding order must be a permutation of the users"));
    }

    let received: Vec<f64> = (0..k).map(|u| cs.gain(u, w) * powers[u]).collect();
    let mut sinr = vec![0.0; k];
    let mut interference = 0.0;
    for &u in order.iter().rev() {
        sinr[u] = received[u] / (interference + noise);
        interference += received[u];
    }
    Ok(sinr)
}

/// NOMA sum rate `log2(1 + Σ_k P_k |w^H ĥ_k|^2 / σ^2)`, independent of the
/// decoding order.
pub fn sum_rate(cs: &ChannelSet, w: &PhaseVector, powers: &[f64], noise: f64) -> Result<f64> {
    check_rate_inputs(cs, w, powers, noise)?;
    let total: f64 = (0..cs.n_users()).map(|u| cs.gain(u, w) * powers[u]).sum();
    Ok((total / noise).ln_1p() / std::f64::consts::LN_2)
}

/// Per-user rates `log2(1 + γ_k)` for a given decoding order.
pub fn per_user_rates(
    cs: &ChannelSet,
    w: &PhaseVector,
    powers: &[f64],
    noise: f64,
    order: &[usize],
) -> Result<Vec<f64>> {
    Ok(sinr_per_user(cs, w, powers, noise, order)?
        .into_iter()
        .map(|g| g.ln_1p() / std::f64::consts::LN_2)
        .collect())
}

/// OMA rate of user `k` with a `1/K` share of the degrees of freedom:
/// `(1/K) log2(1 + K |w^H ĥ_k|^2 P_k / σ^2)`.
pub fn oma_rate(
    cs: &ChannelSet,
    k: usize,
    w: &PhaseVector,
    power: f64,
    noise: f64,
    n_users: usize,
) -> Result<f64> {
    if k >= cs.n_users() {
        return Err(invalid(format!("user index {k} out of range")));
    }
    if n_users == 0 {
        return Err(invalid("K must be at least 1"));
    }
    if !(noise > 0.0) {
        return Err(invalid("noise power must be positive"));
    }
    if w.len() != cs.n_elements() {
        return Err(Error::DimensionMismatch {
            what: "phase vector".into(),
            expected: cs.n_elements(),
            found: w.len(),
        });
    }
    let share = n_users as f64;
    Ok((share * cs.gain(k, w) * power / noise).ln_1p() / std::f64::consts::LN_2 / share)
}

/// `H = Σ_k P_k ĥ_k ĥ_k^H`, so that `w^H H w = Σ_k P_k |w^H ĥ_k|^2`.
pub fn build_hermitian_form(cs: &ChannelSet, p_max: &[f64]) -> Result<HermitianForm> {
    if p_max.len() != cs.n_users() {
        return Err(Error::DimensionMismatch {
            what: "power vector".into(),
            expected: cs.n_users(),
            found: p_max.len(),
        });
    }
    let n = cs.n_elements();
    let mut h = CMatrix::zeros(n, n);
    for (hk, &p) in cs.effective.iter().zip(p_max) {
        let v = nalgebra::DVector::from_column_slice(hk);
        h.gerc(Complex64::new(p, 0.0), &v, &v, Complex64::new(1.0, 0.0));
    }
    HermitianForm::from_matrix(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cv(parts: &[(f64, f64)]) -> ComplexVec {
        ComplexVec::from_parts(parts).unwrap()
    }

    #[test]
    fn effective_channel_identity_and_conjugation() {
        let cs = effective_channels(cv(&[(1.0, 0.0)]), vec![cv(&[(1.0, 0.0)])]).unwrap();
        assert_eq!(cs.effective()[0][0], c(1.0, 0.0));

        let cs = effective_channels(cv(&[(0.0, 1.0)]), vec![cv(&[(0.0, 1.0)])]).unwrap();
        assert_eq!(cs.effective()[0][0], c(1.0, 0.0));
    }

    #[test]
    fn effective_channel_dimension_mismatch() {
        let err = effective_channels(cv(&[(1.0, 0.0), (0.0, 0.0)]), vec![cv(&[(1.0, 0.0)])]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn empty_and_nonfinite_vectors_rejected() {
        assert!(ComplexVec::new(vec![]).is_err());
        assert!(ComplexVec::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn order_single_user_and_orthogonal() {
        let cs = ChannelSet::new(cv(&[(1.0, 0.0)]), vec![cv(&[(2.0, 0.0)])]).unwrap();
        assert_eq!(order_users(&cs), vec![0]);

        let cs = ChannelSet::new(
            cv(&[(1.0, 0.0), (0.0, 0.0)]),
            vec![cv(&[(0.0, 0.0), (1.0, 0.0)]), cv(&[(1.0, 0.0), (0.0, 0.0)])],
        )
        .unwrap();
        assert_eq!(order_users(&cs), vec![1, 0]);
    }

    #[test]
    fn order_ties_keep_lower_index() {
        let u = cv(&[(1.0, 0.0)]);
        let cs = ChannelSet::new(cv(&[(1.0, 0.0)]), vec![u.clone(), u.clone(), u]).unwrap();
        assert_eq!(order_users(&cs), vec![0, 1, 2]);
    }

    #[test]
    fn sinr_hand_cases() {
        let one = cv(&[(1.0, 0.0)]);
        let w = PhaseVector::ones(1).unwrap();
        let cs = ChannelSet::new(one.clone(), vec![one.clone()]).unwrap();
        assert_eq!(
            sinr_per_user(&cs, &w, &[1.0], 1.0, &[0]).unwrap(),
            vec![1.0]
        );

        let cs = ChannelSet::new(one.clone(), vec![one.clone(), one]).unwrap();
        let g = sinr_per_user(&cs, &w, &[1.0, 1.0], 1.0, &[0, 1]).unwrap();
        assert_eq!(g, vec![0.5, 1.0]);
        let r = sum_rate(&cs, &w, &[1.0, 1.0], 1.0).unwrap();
        assert_relative_eq!(r, 3f64.log2(), epsilon = 1e-15);
        assert_relative_eq!(r, 1.5f64.log2() + 2f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn sinr_rejects_bad_inputs() {
        let one = cv(&[(1.0, 0.0)]);
        let w = PhaseVector::ones(1).unwrap();
        let cs = ChannelSet::new(one.clone(), vec![one.clone(), one]).unwrap();
        assert!(sinr_per_user(&cs, &w, &[1.0, 1.0], 0.0, &[0, 1]).is_err());
        assert!(sinr_per_user(&cs, &w, &[1.0, 1.0], 1.0, &[0, 0]).is_err());
        assert!(sinr_per_user(&cs, &w, &[1.0], 1.0, &[0, 1]).is_err());
        assert!(sum_rate(&cs, &w, &[1.0, 1.0], -1.0).is_err());
    }

    #[test]
    fn single_user_rate_is_one_bit() {
        let one = cv(&[(1.0, 0.0)]);
        let cs = ChannelSet::new(one.clone(), vec![one]).unwrap();
        let w = PhaseVector::ones(1).unwrap();
        assert_eq!(sum_rate(&cs, &w, &[1.0], 1.0).unwrap(), 1.0);
        assert_eq!(oma_rate(&cs, 0, &w, 1.0, 1.0, 1).unwrap(), 1.0);
    }

    #[test]
    fn oma_rate_two_users() {
        let one = cv(&[(1.0, 0.0)]);
        let cs = ChannelSet::new(one.clone(), vec![one.clone(), one]).unwrap();
        let w = PhaseVector::ones(1).unwrap();
        let r = oma_rate(&cs, 0, &w, 1.0, 1.0, 2).unwrap();
        assert_relative_eq!(r, 0.5 * 3f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn hermitian_form_rank_one() {
        let cs = ChannelSet::new(
            cv(&[(1.0, 0.0), (1.0, 0.0)]),
            vec![cv(&[(1.0, 0.0), (0.0, 1.0)])],
        )
        .unwrap();
        let h = build_hermitian_form(&cs, &[1.0]).unwrap();
        let m = h.matrix();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, -1.0));
        assert_eq!(m[(1, 0)], c(0.0, 1.0));
        assert_eq!(m[(1, 1)], c(1.0, 0.0));
        assert_relative_eq!(h.top_eigenvalue(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_form_identity() {
        let cs = ChannelSet::new(
            cv(&[(1.0, 0.0), (1.0, 0.0)]),
            vec![cv(&[(1.0, 0.0), (0.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)])],
        )
        .unwrap();
        let h = build_hermitian_form(&cs, &[1.0, 1.0]).unwrap();
        assert_eq!(*h.matrix(), CMatrix::identity(2, 2));
        assert_relative_eq!(h.top_eigenvalue(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_form_rejects_non_hermitian_and_indefinite() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(HermitianForm::from_matrix(m).is_err());
        let m =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(HermitianForm::from_matrix(m).is_err());
    }

    #[test]
    fn phase_vector_modulus_check() {
        assert!(PhaseVector::new(cv(&[(1.0, 0.0), (0.0, -1.0)])).is_ok());
        assert!(PhaseVector::new(cv(&[(1.0 + 1e-6, 0.0)])).is_err());
    }

    #[test]
    fn noise_from_psd_and_bandwidth() {
        let p = SystemParams::new(4, vec![0.1], 1e6, -174.0).unwrap();
        assert_relative_eq!(p.noise_power, 10f64.powf(-14.4), max_relative = 1e-12);
        assert_relative_eq!(watts_to_dbm(p.noise_power), -114.0, epsilon = 1e-9);
    }
}
