//! Test-only instance generators and reference implementations.
//!
//! The references deliberately avoid the library's own helpers: gains are
//! computed through an explicit `diag(φ)` matrix product, SIC rates by the
//! literal interference sum, and eigendecompositions with nalgebra's
//! symmetric solver instead of the faer backend the library uses.

#![allow(dead_code)]

use std::f64::consts::PI;

use irs_noma_core::{ChannelSet, Complex64, ComplexVec, PhaseVector};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-variance circular complex Gaussian.
pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    Complex64::from_polar((-u1.ln()).sqrt(), 2.0 * PI * u2)
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> ComplexVec {
    ComplexVec::new((0..n).map(|_| gaussian(rng)).collect()).unwrap()
}

pub fn random_channels(rng: &mut impl Rng, n: usize, k: usize) -> ChannelSet {
    let h_bs = gaussian_vec(rng, n);
    let users = (0..k).map(|_| gaussian_vec(rng, n)).collect();
    ChannelSet::new(h_bs, users).unwrap()
}

pub fn random_phases(rng: &mut impl Rng, n: usize) -> PhaseVector {
    let angles: Vec<f64> = (0..n).map(|_| rng.random_range(-PI..PI)).collect();
    PhaseVector::from_angles(&angles).unwrap()
}

pub fn random_powers(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(0.05..2.0)).collect()
}

/// `w = conj(φ)`.
pub fn conj_phases(phi: &PhaseVector) -> PhaseVector {
    let angles: Vec<f64> = phi.angles().iter().map(|a| -a).collect();
    PhaseVector::from_angles(&angles).unwrap()
}

/// All permutations of `0..k` (Heap's algorithm).
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn heap(m: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..m - 1 {
            heap(m - 1, a, out);
            if m.is_multiple_of(2) {
                a.swap(i, m - 1);
            } else {
                a.swap(0, m - 1);
            }
        }
        heap(m - 1, a, out);
    }
    let mut a: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    heap(k, &mut a, &mut out);
    out
}

fn column(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}

/// `|h_bs^H diag(φ) h_k|^2` with the diagonal matrix built explicitly.
pub fn cascaded_gain_oracle(h_bs: &[Complex64], phi: &[Complex64], h_k: &[Complex64]) -> f64 {
    let d = CMat::from_diagonal(&column(phi));
    let v = column(h_bs).adjoint() * d * column(h_k);
    v[(0, 0)].norm_sqr()
}

/// SIC rates by definition: user at position `j` of `order` is interfered
/// by every user decoded after it.
pub fn sic_rates_oracle(received: &[f64], noise: f64, order: &[usize]) -> Vec<f64> {
    let mut rates = vec![0.0; received.len()];
    for (j, &u) in order.iter().enumerate() {
        let interference: f64 = order[j + 1..].iter().map(|&v| received[v]).sum();
        rates[u] = (1.0 + received[u] / (interference + noise)).log2();
    }
    rates
}

/// Eigenpairs via nalgebra, eigenvalues descending.
pub fn eigen_oracle(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

/// Frobenius-nearest PSD matrix via nalgebra.
pub fn psd_projection_oracle(m: &CMat) -> CMat {
    let (values, vectors) = eigen_oracle(m);
    let clamped = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v.max(0.0), 0.0)),
    );
    &vectors * CMat::from_diagonal(&clamped) * vectors.adjoint()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Random Hermitian matrix with unit-variance Gaussian entries.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
    let a = CMat::from_fn(n, n, |_, _| gaussian(rng));
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Least-squares fit `y = a + b x`; returns `(a, b, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - a - b * xi).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|yi| (yi - my).powi(2)).sum();
    (a, b, 1.0 - ss_res / ss_tot)
}
