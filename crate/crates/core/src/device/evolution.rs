use serde_json::{json, Value};

use super::graph::compile;
use super::spec::MultiportSpec;
use crate::amplitude::{Amplitude, PortLabel};
use crate::error::{Error, Result};

/// Exit amplitudes after the `n`-th beam-splitter encounter.
#[derive(Debug, Clone)]
pub struct ExitRow<A> {
    pub n: usize,
    /// Coherent exit amplitude at each port.
    pub amplitudes: Vec<A>,
    pub step_probability: A,
    pub cumulative: A,
    /// Probability still inside the device after this step.
    pub internal: A,
}

/// Per-step exit amplitudes for one single-photon input.
#[derive(Debug, Clone)]
pub struct ExitRecord<A> {
    pub input: PortLabel,
    pub rows: Vec<ExitRow<A>>,
}

impl<A: Amplitude> ExitRecord<A> {
    pub fn row(&self, n: usize) -> Option<&ExitRow<A>> {
        self.rows.get(n.checked_sub(1)?)
    }

    /// Largest `|internal + cumulative − 1|` over all steps.
    pub fn conservation_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| ((r.internal.clone() + r.cumulative.clone()).re_f64() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// True when `internal + cumulative` equals one in the scalar type itself.
    pub fn conserves_exactly(&self) -> bool {
        self.rows.iter().all(|r| r.internal.clone() + r.cumulative.clone() == A::one())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let amps: serde_json::Map<String, Value> = r
                    .amplitudes
                    .iter()
                    .enumerate()
                    .map(|(p, a)| (PortLabel(p).to_string(), a.to_json()))
                    .collect();
                json!({
                    "n": r.n,
                    "exit": amps,
                    "step_probability": r.step_probability.re_f64(),
                    "cumulative": r.cumulative.re_f64(),
                })
            })
            .collect();
        json!({ "input": self.input.to_string(), "rows": rows })
    }
}

/// Step the compiled device from a photon at `input` through `n_max`
/// beam-splitter encounters.
pub fn exit_record<A: Amplitude>(spec: &MultiportSpec, input: PortLabel, n_max: usize) -> Result<ExitRecord<A>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("N_max must be at least 2, got {n_max}")));
    }
    let graph = compile::<A>(spec)?;
    let mut ev = graph.inject(input)?;
    let mut cumulative = A::zero();
    let mut rows = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let rec = ev.advance();
        let mut step_probability = A::zero();
        for a in &rec.exits {
            step_probability += a.abs_sqr();
        }
        cumulative += step_probability.clone();
        rows.push(ExitRow {
            n: rec.step,
            amplitudes: rec.exits,
            step_probability,
            cumulative: cumulative.clone(),
            internal: rec.internal_norm_sqr,
        });
    }
    Ok(ExitRecord { input, rows })
}
