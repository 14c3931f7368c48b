use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::gate::{process_pair, HeraldKind};
use super::state::{BellFamily, BellKind};
use crate::amplitude::{Amplitude, Matrix, PortLabel};
use crate::error::Result;

/// One input/control combination under both heralding conditions.
#[derive(Debug, Clone)]
pub struct TruthRow<A> {
    pub input: BellKind,
    pub control: BellKind,
    pub out_s: Option<BellKind>,
    pub out_o: Option<BellKind>,
    pub phase_s: Option<Complex64>,
    pub phase_o: Option<Complex64>,
    pub prob_s: A,
    pub prob_o: A,
    /// Squared norm of the `s` output after the coherent functional.
    pub coherent_s: A,
    pub rejected: A,
}

impl<A: Amplitude> TruthRow<A> {
    pub fn output(&self, kind: HeraldKind) -> Option<BellKind> {
        match kind {
            HeraldKind::S => self.out_s,
            HeraldKind::O => self.out_o,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TruthTable<A> {
    pub herald: PortLabel,
    /// Rows in `BellKind::ALL × BellKind::ALL` order (input major).
    pub rows: Vec<TruthRow<A>>,
}

impl<A: Amplitude> TruthTable<A> {
    pub fn row(&self, input: BellKind, control: BellKind) -> Option<&TruthRow<A>> {
        self.rows.iter().find(|r| r.input == input && r.control == control)
    }

    /// Every entry is a definite Bell state.
    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.out_s.is_some() && r.out_o.is_some())
    }

    /// Outputs for a fixed input as the control varies.
    pub fn restriction(&self, input: BellKind, kind: HeraldKind) -> Vec<(BellKind, Option<BellKind>)> {
        self.rows.iter().filter(|r| r.input == input).map(|r| (r.control, r.output(kind))).collect()
    }

    pub fn to_json(&self) -> Value {
        let label = |k: Option<BellKind>| k.map_or(Value::Null, |k| json!(k.ascii()));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "input": r.input.ascii(),
                    "control": r.control.ascii(),
                    "out_s": label(r.out_s),
                    "out_o": label(r.out_o),
                    "prob_s": r.prob_s.to_json(),
                    "prob_o": r.prob_o.to_json(),
                    "coherent_s": r.coherent_s.to_json(),
                    "rejected": r.rejected.to_json(),
                })
            })
            .collect();
        json!({ "herald": self.herald.to_string(), "rows": rows })
    }
}

/// All 16 input/control combinations, evaluated in parallel.
pub fn full_truth_table<A: Amplitude>(herald: PortLabel, u: &Matrix<A>) -> Result<TruthTable<A>> {
    let pairs: Vec<(BellKind, BellKind)> =
        BellKind::ALL.iter().flat_map(|&a| BellKind::ALL.iter().map(move |&b| (a, b))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(input, control)| {
            let r = process_pair(input, control, herald, u)?;
            Ok(TruthRow {
                input,
                control,
                out_s: r.s.output(),
                out_o: r.o.output(),
                phase_s: r.s.classification.as_ref().and_then(|c| c.phase()),
                phase_o: r.o.classification.as_ref().and_then(|c| c.phase()),
                prob_s: r.s.probability,
                prob_o: r.o.probability,
                coherent_s: r.s.coherent_probability,
                rejected: r.rejected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTable { herald, rows })
}

/// One line of the entangled-state CNOT read from the `s` column: target and
/// control are Ψ± (`+ → 0`, `− → 1`), the output Φ± carries the result bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CnotRow {
    pub target: BellKind,
    pub control: BellKind,
    pub output: Option<BellKind>,
    pub target_bit: u8,
    pub control_bit: u8,
    /// `None` when the output is not a Φ state.
    pub output_bit: Option<u8>,
}

impl CnotRow {
    pub fn is_correct(&self) -> bool {
        self.output_bit == Some(self.control_bit ^ self.target_bit)
    }
}

/// CNOT bit table from the Ψ-input, Ψ-control block under `s`. The target
/// sits on the input pair, the control on the control pair.
pub fn cnot_table<A: Amplitude>(table: &TruthTable<A>) -> Vec<CnotRow> {
    let psi = [BellKind::PSI_PLUS, BellKind::PSI_MINUS];
    let mut out = Vec::with_capacity(4);
    for &target in &psi {
        for &control in &psi {
            let output = table.row(target, control).and_then(|r| r.out_s);
            let output_bit = output.filter(|k| k.family == BellFamily::Phi).map(BellKind::sign_bit);
            out.push(CnotRow {
                target,
                control,
                output,
                target_bit: target.sign_bit(),
                control_bit: control.sign_bit(),
                output_bit,
            });
        }
    }
    out
}
