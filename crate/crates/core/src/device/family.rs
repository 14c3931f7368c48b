//! Closed-form transition matrices: the symmetric three-port family and the
//! Grover coin, plus comparison up to a global phase.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::spec::MultiportSpec;
use super::steady::transfer_matrix;
use crate::amplitude::{Amplitude, Matrix};
use crate::error::{Error, Result};

/// The most general 3×3 unitary with equal diagonal entries `a` and equal
/// off-diagonal entries `b`, parametrized by the phase of `a` and the
/// relative phase `φ = arg b − arg a`:
///
/// `a = e^{iφ_a} α`, `b = e^{i(φ_a + φ)} β`, `α = 1/√(1 + 8cos²φ)`,
/// `β = −2α cos φ`.
pub fn symmetric_unitary(phi_a: f64, phi: f64) -> Matrix<Complex64> {
    let c = phi.cos();
    let alpha = 1.0 / (1.0 + 8.0 * c * c).sqrt();
    let beta = -2.0 * alpha * c;
    let a = Complex64::from_polar(alpha, phi_a);
    let b = Complex64::from_polar(1.0, phi_a + phi) * beta;
    Matrix::from_fn(3, |i, j| if i == j { a } else { b })
}

/// The converged default three-port matrix `−(i/3)·[[1,−2,−2],[−2,1,−2],[−2,−2,1]]`
/// in any scalar type.
pub fn three_port_closed_form<A: Amplitude>() -> Matrix<A> {
    let third = A::i().mul(&A::from_ratio(-1, 3));
    Matrix::from_fn(3, |i, j| if i == j { third.clone() } else { third.scale_int(-2) })
}

/// `n × n` Grover coin: `2/n` off the diagonal, `2/n − 1` on it.
pub fn grover_coin(n: usize) -> Result<Matrix<Complex64>> {
    grover_coin_in::<Complex64>(n)
}

pub fn grover_coin_in<A: Amplitude>(n: usize) -> Result<Matrix<A>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Grover coin needs n ≥ 2, got {n}")));
    }
    let off = A::from_ratio(2, n as i64);
    let diag = off.clone() - A::one();
    Ok(Matrix::from_fn(n, |i, j| if i == j { diag.clone() } else { off.clone() }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub matches: bool,
    /// Unit-modulus `c` with `m1 ≈ c · m2`.
    pub phase: Complex64,
    pub max_deviation: f64,
}

/// Compare two matrices up to a global phase.
///
/// The phase is taken from the Frobenius overlap `⟨m2, m1⟩`, which is the
/// least-squares optimum and exact whenever the matrices agree up to phase.
pub fn compare_up_to_global_phase(m1: &Matrix<Complex64>, m2: &Matrix<Complex64>, tol: f64) -> Result<PhaseMatch> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch { expected: m1.dim(), found: m2.dim() });
    }
    let mut overlap = Complex64::new(0.0, 0.0);
    for (r1, r2) in m1.rows().zip(m2.rows()) {
        for (a, b) in r1.iter().zip(r2) {
            overlap += b.conj() * a;
        }
    }
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    let max_deviation = m1.max_deviation(&m2.scale(&phase));
    Ok(PhaseMatch { matches: max_deviation < tol, phase, max_deviation })
}

#[derive(Debug, Clone, Copy)]
pub struct MirrorPhaseFit {
    pub mirror_phase: f64,
    pub fit: PhaseMatch,
}

/// Search the common mirror phase of an otherwise default `n`-port whose
/// summed transfer matrix best matches `target` up to global phase: a grid scan
/// with spacing `grid` followed by golden-section refinement around the best
/// grid point.
pub fn fit_mirror_phase(n: usize, target: &Matrix<Complex64>, grid: f64, tol: f64) -> Result<MirrorPhaseFit> {
    if !(grid > 0.0) {
        return Err(Error::InvalidArgument("grid spacing must be positive".into()));
    }
    let deviation = |phase: f64| -> Result<PhaseMatch> {
        let m = transfer_matrix(&MultiportSpec::new(n).with_mirror_phase(phase))?;
        compare_up_to_global_phase(&m, target, tol)
    };
    let points = (TAU / grid).ceil() as usize;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..points {
        let phase = k as f64 * grid;
        let d = deviation(phase)?.max_deviation;
        if d < best.1 {
            best = (phase, d);
        }
    }
    let (mut lo, mut hi) = (best.0 - grid, best.0 + grid);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if deviation(m1)?.max_deviation < deviation(m2)?.max_deviation {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mirror_phase = (0.5 * (lo + hi)).rem_euclid(TAU);
    Ok(MirrorPhaseFit { mirror_phase, fit: deviation(mirror_phase)? })
}
