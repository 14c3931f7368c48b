use num_complex::Complex64;

use super::evolution::exit_record;
use super::spec::MultiportSpec;
use crate::amplitude::{Amplitude, PortLabel};
use crate::error::{Error, Result};

const RATIO_TOL: f64 = 1e-9;

/// Truncated transition-amplitude series for one input/output pair.
#[derive(Debug, Clone)]
pub struct AmplitudeSeries<A> {
    /// Nonzero exit amplitudes `(N, term)`.
    pub terms: Vec<(usize, A)>,
    /// Running sum after each nonzero term.
    pub partial_sums: Vec<(usize, A)>,
    /// Common ratio of the geometric tail.
    pub ratio: Complex64,
    /// Index into `terms` where the geometric tail starts.
    pub tail_start: usize,
    /// Finite head plus the analytically summed geometric tail.
    pub extrapolated: Complex64,
}

/// Sum the exit amplitudes `input → output` over `N ≤ n_max` and extrapolate
/// the longest geometric tail of the nonzero terms.
///
/// Refuses when fewer than three trailing terms share a common ratio, or
/// when that ratio has modulus ≥ 1.
pub fn amplitude_series<A: Amplitude>(
    spec: &MultiportSpec,
    input: PortLabel,
    output: PortLabel,
    n_max: usize,
) -> Result<AmplitudeSeries<A>> {
    output.check(spec.ports())?;
    let rec = exit_record::<A>(spec, input, n_max)?;
    let terms: Vec<(usize, A)> = rec
        .rows
        .iter()
        .map(|r| (r.n, r.amplitudes[output.index()].clone()))
        .filter(|(_, a)| !a.is_negligible())
        .collect();
    let mut acc = A::zero();
    let partial_sums = terms
        .iter()
        .map(|(n, a)| {
            acc += a.clone();
            (*n, acc.clone())
        })
        .collect();

    let z: Vec<Complex64> = terms.iter().map(|(_, a)| a.to_c64()).collect();
    if z.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "only {} nonzero terms up to N = {n_max}; cannot extrapolate",
            z.len()
        )));
    }
    let last = z.len() - 1;
    let ratio = z[last] / z[last - 1];
    let mut tail_start = last - 1;
    while tail_start > 0 {
        let r = z[tail_start] / z[tail_start - 1];
        if (r - ratio).norm() > RATIO_TOL * ratio.norm().max(1.0) {
            break;
        }
        tail_start -= 1;
    }
    if last - tail_start < 2 {
        return Err(Error::InvalidArgument("successive terms do not share a constant ratio".into()));
    }
    if ratio.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!("tail ratio {ratio} does not converge")));
    }
    let head: Complex64 = z[..tail_start].iter().sum();
    let extrapolated = head + z[tail_start] / (Complex64::new(1.0, 0.0) - ratio);
    Ok(AmplitudeSeries { terms, partial_sums, ratio, tail_start, extrapolated })
}
