use num_complex::Complex64;

use super::graph::compile;
use super::spec::MultiportSpec;
use crate::amplitude::{Matrix, PortLabel};
use crate::error::{Error, Result};

/// Long-time port-to-port transition matrix, accumulated from step evolution.
#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    /// Column `j` holds the summed exit amplitudes for input port `j`.
    pub matrix: Matrix<Complex64>,
    /// Largest norm of the amplitude still inside the device, over inputs.
    pub residual: f64,
    pub steps_used: usize,
    pub converged: bool,
}

impl SteadyStateResult {
    /// Turn a non-converged result into [`Error::NonConvergence`].
    pub fn into_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { steps: self.steps_used, residual: self.residual })
        }
    }
}

/// Evolve each single-photon input until the norm of the un-exited amplitude
/// drops below `tol` (or `spec.max_steps` is reached) and sum the exit
/// amplitudes coherently. The tail beyond the last step is not extrapolated.
pub fn steady_state(spec: &MultiportSpec, tol: f64) -> Result<SteadyStateResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let graph = compile::<Complex64>(spec)?;
    let n = graph.ports();
    let mut matrix = Matrix::zeros(n);
    let mut residual: f64 = 0.0;
    let mut steps_used = 0;
    for input in 0..n {
        let mut ev = graph.inject(PortLabel(input))?;
        let mut remaining = 1.0;
        while remaining >= tol && ev.step_index() < spec.max_steps {
            let rec = ev.advance();
            for (port, a) in rec.exits.iter().enumerate() {
                let acc = *matrix.get(port, input) + a;
                matrix.set(port, input, acc);
            }
            remaining = rec.internal_norm_sqr.re.max(0.0).sqrt();
        }
        residual = residual.max(remaining);
        steps_used = steps_used.max(ev.step_index());
    }
    Ok(SteadyStateResult { matrix, residual, steps_used, converged: residual < tol })
}

/// Steady-state matrix from a direct linear solve of the summed series.
/// Agrees with [`steady_state`] whenever the latter converges.
pub fn transfer_matrix(spec: &MultiportSpec) -> Result<Matrix<Complex64>> {
    compile::<Complex64>(spec)?.network().total_transfer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_triangle_converges() {
        let res = steady_state(&MultiportSpec::new(3), 1e-12).unwrap();
        assert!(res.converged);
        let third = Complex64::new(0.0, -1.0 / 3.0);
        assert!((res.matrix.get(0, 0) - third).norm() < 1e-11);
        assert!((res.matrix.get(1, 0) - Complex64::new(0.0, 2.0 / 3.0)).norm() < 1e-11);
    }

    #[test]
    fn step_cap_reports_non_convergence() {
        let res = steady_state(&MultiportSpec::new(3).with_max_steps(10), 1e-12).unwrap();
        assert!(!res.converged);
        assert_eq!(res.steps_used, 10);
        assert!(matches!(res.into_converged(), Err(Error::NonConvergence { steps: 10, .. })));
    }

    #[test]
    fn direct_solve_agrees_with_stepping() {
        let spec = MultiportSpec::new(4).with_mirror_phase(0.4).with_edge_phase(1.1);
        let stepped = steady_state(&spec.clone().with_max_steps(2000), 1e-13).unwrap();
        assert!(stepped.converged);
        let direct = transfer_matrix(&spec).unwrap();
        assert!(direct.max_deviation(&stepped.matrix) < 1e-11);
    }

    #[test]
    fn non_positive_tolerance_rejected() {
        assert!(steady_state(&MultiportSpec::new(3), 0.0).is_err());
    }
}
