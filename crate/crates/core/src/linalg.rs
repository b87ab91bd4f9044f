//! Dense complex linear-algebra helpers shared by the numerical modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize, m: usize) -> CMatrix {
    CMatrix::zeros(n, m)
}

pub fn real_diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = C64::new(*v, 0.0);
    }
    m
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||A - A^H||_F`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// `(M + M^H) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `||U^H U - I||_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    frobenius(&(u.adjoint() * u - identity(u.ncols())))
}

/// `max(||P^2 - P||_F, ||P - P^H||_F)`.
pub fn projection_defect(p: &CMatrix) -> f64 {
    let idem = frobenius(&(p * p - p));
    idem.max(hermiticity_defect(p))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Ascending eigenvalues of a Hermitian matrix and the matching orthonormal
/// eigenvectors as columns. Each column is rotated so that its first
/// component of non-negligible size is real and positive.
pub fn hermitian_eigen(m: &CMatrix, t: f64) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), zeros(0, 0)));
    }
    if n == 1 {
        return Ok((vec![m[(0, 0)].re], identity(1)));
    }
    let herm = hermitian_part(m);
    let eig = SymmetricEigen::try_new(herm, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::EigenFailure {
        t,
        norm: frobenius(m),
    })?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure { t, norm: frobenius(m) });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let phase = col
            .iter()
            .find(|z| z.norm() > 1e-8)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(C64::new(1.0, 0.0));
        for r in 0..n {
            vectors[(r, dst)] = col[r] * phase;
        }
    }
    Ok((values, vectors))
}

/// `exp(i * tau * H)` for Hermitian `H`, through its eigendecomposition.
pub fn hermitian_exp(h: &CMatrix, tau: f64) -> Result<CMatrix> {
    let n = h.nrows();
    if tau == 0.0 {
        return Ok(identity(n));
    }
    if n == 1 {
        let mut out = zeros(1, 1);
        out[(0, 0)] = C64::from_polar(1.0, tau * h[(0, 0)].re);
        return Ok(out);
    }
    let (values, vectors) = hermitian_eigen(h, f64::NAN)?;
    let mut scaled = vectors.clone();
    for (j, lambda) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, tau * lambda);
        for r in 0..n {
            scaled[(r, j)] *= phase;
        }
    }
    Ok(scaled * vectors.adjoint())
}

/// Singular values in descending order; empty for matrices with a zero dimension.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Orthonormal basis (as columns) of the range of an orthogonal projection.
pub fn projection_basis(p: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(p, f64::NAN)?;
    let cols: Vec<usize> = (0..values.len()).filter(|&j| values[j] > 0.5).collect();
    Ok(select_columns(&vectors, &cols))
}

pub fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    let mut out = zeros(m.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

pub fn block_diagonal(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        out.view_mut((offset, offset), (b.nrows(), b.ncols())).copy_from(b);
        offset += b.nrows();
    }
    out
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn vector_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_pauli_x() {
        let mut m = zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        m[(1, 0)] = C64::new(1.0, 0.0);
        let (vals, vecs) = hermitian_eigen(&m, 0.0).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((vecs[(0, 0)] - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((vecs[(1, 0)] - C64::new(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exp_of_diagonal_is_phase() {
        let h = real_diagonal(&[1.0, -2.0]);
        let u = hermitian_exp(&h, 0.5).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, 0.5)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, -1.0)).norm() < 1e-14);
        assert!(unitarity_defect(&u) < 1e-14);
    }

    #[test]
    fn singular_values_of_empty() {
        assert!(singular_values(&zeros(0, 3)).is_empty());
    }
}
