use std::fmt;

use num_complex::Complex64;

use super::scalar::Amplitude;
use crate::error::{Error, Result};

/// Dense square matrix over an [`Amplitude`] scalar, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<A = Complex64> {
    dim: usize,
    entries: Vec<A>,
}

/// Port-space transition matrices are plain floating-point matrices unless
/// stated otherwise.
pub type UnitaryMatrix = Matrix<Complex64>;

impl<A: Amplitude> Matrix<A> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![A::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { A::one() } else { A::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> A) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<A>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &A {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: A) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<A> {
        (0..self.dim).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            let mut acc = A::zero();
            for k in 0..n {
                acc += self.get(i, k).mul(rhs.get(k, j));
            }
            acc
        }))
    }

    pub fn apply(&self, v: &[A]) -> Result<Vec<A>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| {
                let mut acc = A::zero();
                for (k, x) in v.iter().enumerate() {
                    acc += self.get(i, k).mul(x);
                }
                acc
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &A) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(Amplitude::to_c64).collect() }
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_deviation(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a.to_c64() - b.to_c64()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M·M† − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self
            .matmul(&self.adjoint())
            .expect("square matrix times its adjoint");
        prod.max_deviation(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() < tol
    }

    pub fn rows(&self) -> impl Iterator<Item = &[A]> {
        self.entries.chunks(self.dim.max(1))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found })
        }
    }
}

impl Matrix<Complex64> {
    /// Convert to another scalar type, failing on unrepresentable entries.
    pub fn convert<B: Amplitude>(&self) -> Result<Matrix<B>> {
        let entries = self
            .entries
            .iter()
            .map(|z| B::from_c64(*z).ok_or_else(|| Error::NotRepresentable(z.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { dim: self.dim, entries })
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

impl<A: fmt::Debug> fmt::Debug for Matrix<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for row in self.entries.chunks(self.dim.max(1)) {
            let cells: Vec<String> = row.iter().map(|a| format!("{a:?}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
