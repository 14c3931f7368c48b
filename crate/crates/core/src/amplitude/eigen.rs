//! Eigenpairs of small dense matrices.
//!
//! The complex Schur form `M = Q T Q†` comes from nalgebra. Eigenvectors are
//! recovered by back-substitution on the triangular factor, then clusters of
//! (numerically) equal eigenvalues are orthonormalized so degenerate
//! eigenspaces come back with an orthonormal basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::Matrix;
use super::port::PortStateVector;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`eigensystem_small`].
pub const MAX_EIGEN_DIM: usize = 8;

const CLUSTER_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: PortStateVector<Complex64>,
}

/// Eigenvalues grouped with an orthonormal basis of their eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: Complex64,
    pub basis: Vec<PortStateVector<Complex64>>,
}

impl Eigenspace {
    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }
}

pub fn eigensystem_small(m: &Matrix<Complex64>) -> Result<Vec<EigenPair>> {
    let n = m.dim();
    if n == 0 || n > MAX_EIGEN_DIM {
        return Err(Error::InvalidArgument(format!(
            "eigensystem_small supports 1..={MAX_EIGEN_DIM} dimensions, got {n}"
        )));
    }
    let a = m.to_nalgebra();
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-15, 10_000)
        .ok_or(Error::NonConvergence { steps: 10_000, residual: f64::NAN })?;
    let (q, t) = schur.unpack();

    let mut pairs: Vec<(Complex64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let y = triangular_eigvec(&t, k);
            let v = &q * nalgebra::DVector::from_vec(y);
            (lambda, normalize(v.iter().copied().collect()))
        })
        .collect();

    // Sort by eigenvalue argument so output order is deterministic.
    pairs.sort_by(|a, b| {
        let key = |z: &Complex64| (z.arg() * 1e9).round() as i64;
        key(&a.0).cmp(&key(&b.0)).then(a.0.norm().total_cmp(&b.0.norm()))
    });

    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end].0 - pairs[start].0).norm() < CLUSTER_TOL {
            end += 1;
        }
        let basis = gram_schmidt(pairs[start..end].iter().map(|p| p.1.clone()).collect());
        for (i, v) in basis.into_iter().enumerate() {
            out.push(EigenPair { value: pairs[start + i].0, vector: PortStateVector::new(v) });
        }
        start = end;
    }

    let residual = out.iter().map(|p| eigen_residual(&a, p)).fold(0.0, f64::max);
    if out.len() != n || residual > RESIDUAL_TOL {
        return Err(Error::NonConvergence { steps: n, residual });
    }
    Ok(out)
}

/// Group eigenpairs whose eigenvalues agree within `tol`.
pub fn eigenspaces(pairs: &[EigenPair], tol: f64) -> Vec<Eigenspace> {
    let mut spaces: Vec<Eigenspace> = Vec::new();
    for p in pairs {
        match spaces.iter_mut().find(|s| (s.value - p.value).norm() < tol) {
            Some(s) => s.basis.push(p.vector.clone()),
            None => spaces.push(Eigenspace { value: p.value, basis: vec![p.vector.clone()] }),
        }
    }
    spaces
}

/// `‖M v − λ v‖`.
fn eigen_residual(a: &DMatrix<Complex64>, p: &EigenPair) -> f64 {
    let v = nalgebra::DVector::from_column_slice(p.vector.amplitudes());
    (a * &v - v * p.value).norm()
}

// Solve (T − λ_k I) y = 0 with y_k = 1 and y_j = 0 for j > k.
fn triangular_eigvec(t: &DMatrix<Complex64>, k: usize) -> Vec<Complex64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[k] = Complex64::new(1.0, 0.0);
    for j in (0..k).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for l in j + 1..=k {
            s += t[(j, l)] * y[l];
        }
        let d = t[(j, j)] - lambda;
        y[j] = if d.norm() < CLUSTER_TOL { Complex64::new(0.0, 0.0) } else { -s / d };
    }
    y
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn gram_schmidt(vectors: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for b in &basis {
            let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        basis.push(normalize(v));
    }
    basis
}
