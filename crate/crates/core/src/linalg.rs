//! Dense complex Hermitian helpers shared by the model, solver and rounding.
//!
//! Matrices are `nalgebra` types. All eigendecompositions go through
//! [`hermitian_eigen`], which runs faer's sequential self-adjoint solver and
//! returns eigenpairs sorted by descending eigenvalue. The sort is stable, so
//! exactly repeated eigenvalues keep faer's order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenpairs of a Hermitian matrix, largest eigenvalue first.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j).iter().copied().collect()
    }
}

/// Eigendecomposition of a Hermitian matrix; only the lower triangle is read.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let n = m.nrows();
    let fm = faer::Mat::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
    let eig = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::Eigendecomposition(n))?;
    let raw: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let u = eig.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));

    let values = order.iter().map(|&j| raw[j]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// `(M + M^H) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Reconstruct `V diag(values) V^H` using only the columns with a nonzero weight.
pub fn reconstruct(vectors: &CMatrix, values: &[f64]) -> CMatrix {
    let n = vectors.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (j, &lambda) in values.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let v = vectors.column(j);
        out.gerc(
            Complex64::new(lambda, 0.0),
            &v,
            &v,
            Complex64::new(1.0, 0.0),
        );
    }
    out
}

/// `Re Tr(A B)` for Hermitian `A`, `B`, computed as `sum_ij A_ij conj(B_ij)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `x^H M x`, real part (imaginary part vanishes for Hermitian `M`).
pub fn quadratic_form(m: &CMatrix, x: &[Complex64]) -> f64 {
    let v = DVector::from_column_slice(x);
    (v.adjoint() * m * &v)[(0, 0)].re
}

/// Largest absolute deviation from Hermitian symmetry, relative to the largest entry.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst / scale
}
