//! Single multiport devices: specification, compilation to a scattering
//! graph, step evolution, path sums, steady state and closed forms.

pub mod evolution;
pub mod family;
pub mod graph;
pub mod paths;
pub mod series;
pub mod spec;
pub mod steady;

pub use evolution::{exit_record, ExitRecord, ExitRow};
pub use family::{
    compare_up_to_global_phase, fit_mirror_phase, grover_coin, grover_coin_in, symmetric_unitary,
    three_port_closed_form, MirrorPhaseFit, PhaseMatch,
};
pub use graph::{compile, DeviceEmbedding, DeviceGraph};
pub use paths::{enumerate_paths, mirror_count_distribution, PathSymbol, PathSymbolKind, PathTrace};
pub use series::{amplitude_series, AmplitudeSeries};
pub use spec::{MultiportSpec, VertexParams, DEFAULT_MAX_STEPS};
pub use steady::{steady_state, transfer_matrix, SteadyStateResult};
