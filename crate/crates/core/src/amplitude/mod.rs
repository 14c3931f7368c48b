//! Amplitudes, port-space vectors, bosonic multi-photon states and small
//! dense matrices.

pub mod eigen;
pub mod exact;
pub mod fock;
pub mod matrix;
pub mod port;
pub mod scalar;

pub use eigen::{eigensystem_small, eigenspaces, EigenPair, Eigenspace};
pub use exact::{ExactComplex, Rational, Surd};
pub use fock::{
    apply_port_unitary, bosonic_product, bosonic_product_with_capacity, project, Mode,
    MultiPhotonState, Occupation, Polarization, MAX_PHOTONS,
};
pub use matrix::{Matrix, UnitaryMatrix};
pub use port::{PortLabel, PortStateVector};
pub use scalar::{format_c64, Amplitude, NumericMode, FLOAT_TOLERANCE, PRUNE_THRESHOLD};
