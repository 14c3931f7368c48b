use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::state::{bell_state, classify_bell, BellKind, BellLabel, Classification};
use crate::amplitude::{apply_port_unitary, bosonic_product, Amplitude, Matrix, MultiPhotonState, Occupation, Polarization, PortLabel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeraldKind {
    /// Two photons of the same polarization at the herald port.
    S,
    /// One H and one V photon at the herald port.
    O,
}

impl HeraldKind {
    pub const BOTH: [HeraldKind; 2] = [HeraldKind::S, HeraldKind::O];
}

impl fmt::Display for HeraldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeraldKind::S => "s",
            HeraldKind::O => "o",
        })
    }
}

impl FromStr for HeraldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" | "same" => Ok(HeraldKind::S),
            "o" | "opposite" => Ok(HeraldKind::O),
            _ => Err(Error::InvalidArgument(format!("unknown herald condition {s:?} (expected s or o)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HeraldCondition {
    pub kind: HeraldKind,
    pub port: PortLabel,
}

impl HeraldCondition {
    pub fn new(kind: HeraldKind, port: PortLabel) -> Self {
        Self { kind, port }
    }

    pub fn at_a(kind: HeraldKind) -> Self {
        Self { kind, port: PortLabel::A }
    }
}

/// Port roles of the three-port gate: input on `(herald, x)`, control on
/// `(herald, y)`, output read on `(x, y)` with `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateLayout {
    pub herald: PortLabel,
    pub input: (PortLabel, PortLabel),
    pub control: (PortLabel, PortLabel),
    pub output: (PortLabel, PortLabel),
}

impl GateLayout {
    pub fn new(herald: PortLabel) -> Result<Self> {
        herald.check(3)?;
        let others: Vec<PortLabel> = (0..3).map(PortLabel).filter(|&p| p != herald).collect();
        let (x, y) = (others[0], others[1]);
        Ok(Self { herald, input: (herald, x), control: (herald, y), output: (x, y) })
    }
}

fn check_three_port<A: Amplitude>(u: &Matrix<A>) -> Result<()> {
    if u.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: u.dim() });
    }
    Ok(())
}

/// Two-photon image `(U⊗U)|label⟩`.
pub fn intermediate_expansion<A: Amplitude>(label: BellLabel, u: &Matrix<A>) -> Result<MultiPhotonState<A>> {
    apply_port_unitary(u, &bell_state(label, u.dim())?)
}

/// Creation-operator product of the two scattered pairs, before any
/// normalization. Its squared norm exceeds one when the pairs share the
/// herald mode.
pub fn raw_gate_product<A: Amplitude>(
    input: BellKind,
    control: BellKind,
    layout: &GateLayout,
    u: &Matrix<A>,
) -> Result<MultiPhotonState<A>> {
    check_three_port(u)?;
    let a = intermediate_expansion(BellLabel::new(input, layout.input.0, layout.input.1)?, u)?;
    let b = intermediate_expansion(BellLabel::new(control, layout.control.0, layout.control.1)?, u)?;
    bosonic_product(&a, &b)
}

/// Normalized four-photon state entering the detectors.
pub fn gate_product<A: Amplitude>(
    input: BellKind,
    control: BellKind,
    layout: &GateLayout,
    u: &Matrix<A>,
) -> Result<MultiPhotonState<A>> {
    raw_gate_product(input, control, layout, u)?.normalized()
}

/// One heralded branch of the gate.
#[derive(Debug, Clone)]
pub struct GateOutcome<A> {
    pub condition: HeraldCondition,
    /// Two-photon state left on the output pair, not renormalized.
    pub output_state: MultiPhotonState<A>,
    /// `None` when the branch has zero amplitude.
    pub classification: Option<Classification>,
    /// Squared norm of the projected four-photon component.
    pub probability: A,
    /// Squared norm after the heralding functional; differs from
    /// `probability` only for the `s` condition.
    pub coherent_probability: A,
}

impl<A: Amplitude> GateOutcome<A> {
    pub fn output(&self) -> Option<BellKind> {
        self.classification.as_ref().and_then(Classification::kind)
    }
}

/// Both heralded branches for one input/control pair.
#[derive(Debug, Clone)]
pub struct GateReport<A> {
    pub input: BellKind,
    pub control: BellKind,
    pub layout: GateLayout,
    pub s: GateOutcome<A>,
    pub o: GateOutcome<A>,
    /// Probability of every detection pattern that heralds neither branch.
    pub rejected: A,
}

impl<A: Amplitude> GateReport<A> {
    pub fn branch(&self, kind: HeraldKind) -> &GateOutcome<A> {
        match kind {
            HeraldKind::S => &self.s,
            HeraldKind::O => &self.o,
        }
    }
}

/// Run both heralding conditions on the gate with herald port `herald`.
///
/// `o` projects onto one H and one V photon at the herald port. `s` applies
/// the coherent functional `(⟨2H| + ⟨2V|)/√2` at the herald port, keeping the
/// relative phase of the two same-polarization branches.
pub fn process_pair<A: Amplitude>(
    input: BellKind,
    control: BellKind,
    herald: PortLabel,
    u: &Matrix<A>,
) -> Result<GateReport<A>> {
    let layout = GateLayout::new(herald)?;
    let state = gate_product(input, control, &layout, u)?;
    let h = A::inv_sqrt_int(2).expect("1/√2 is representable");
    let (x, y) = layout.output;
    let mut o_terms: Vec<(Occupation, A)> = Vec::new();
    let mut s_terms: Vec<(Occupation, A)> = Vec::new();
    let mut s_prob = A::zero();
    for (occ, amp) in state.terms() {
        if occ.count_at(herald) != 2 || occ.count_at(x) != 1 || occ.count_at(y) != 1 {
            continue;
        }
        let at = occ.at_port(herald);
        let pols: Vec<Polarization> = at.modes().iter().map(|m| m.pol).collect();
        let rest = occ.without_port(herald);
        if pols[0] == pols[1] {
            s_prob += amp.abs_sqr();
            s_terms.push((rest, amp.mul(&h)));
        } else {
            o_terms.push((rest, amp.clone()));
        }
    }
    let o_state = MultiPhotonState::from_terms(3, o_terms)?;
    let s_state = MultiPhotonState::from_terms(3, s_terms)?;
    let o_prob = o_state.norm_sqr();
    let outcome = |kind, st: MultiPhotonState<A>, probability: A| -> Result<GateOutcome<A>> {
        let classification = if st.is_empty() { None } else { Some(classify_bell(&st, layout.output)?) };
        Ok(GateOutcome {
            condition: HeraldCondition::new(kind, herald),
            coherent_probability: st.norm_sqr(),
            output_state: st,
            classification,
            probability,
        })
    };
    let rejected = A::one() - s_prob.clone() - o_prob.clone();
    Ok(GateReport {
        input,
        control,
        layout,
        s: outcome(HeraldKind::S, s_state, s_prob)?,
        o: outcome(HeraldKind::O, o_state, o_prob)?,
        rejected,
    })
}

/// Single heralded branch of the gate.
pub fn process<A: Amplitude>(
    input: BellKind,
    control: BellKind,
    condition: HeraldCondition,
    u: &Matrix<A>,
) -> Result<GateOutcome<A>> {
    let report = process_pair(input, control, condition.port, u)?;
    Ok(match condition.kind {
        HeraldKind::S => report.s,
        HeraldKind::O => report.o,
    })
}
