//! Bell states of photon pairs and the four-photon heralded gate built from
//! a three-port.

pub mod gate;
pub mod group;
pub mod state;
pub mod tables;

pub use gate::{
    gate_product, intermediate_expansion, process, process_pair, raw_gate_product, GateLayout, GateOutcome,
    GateReport, HeraldCondition, HeraldKind,
};
pub use group::{group_table, Axiom, AxiomReport, GroupTable};
pub use state::{bell_state, classify_bell, BellFamily, BellKind, BellLabel, BellSign, Classification, CLASSIFY_THRESHOLD};
pub use tables::{cnot_table, full_truth_table, CnotRow, TruthRow, TruthTable};
