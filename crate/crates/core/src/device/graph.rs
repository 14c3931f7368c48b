//! Compilation of a [`MultiportSpec`] into a scattering network.
//!
//! Each vertex is one beam-splitter node with four arms. Its mirror unit is
//! a segment from the node's mirror arm back to itself carrying the
//! round-trip factor, so a full mirror bounce takes one step like an
//! inter-vertex edge does.

use num_complex::Complex64;

use super::spec::{MultiportSpec, VertexParams};
use crate::amplitude::{Amplitude, Matrix, PortLabel};
use crate::error::{Error, Result};
use crate::scatter::{ArmRef, Evolution, ScatteringNetwork, StepOverrides};

pub const ARM_EXTERNAL: usize = 0;
pub const ARM_MIRROR: usize = 1;
/// Edge toward the next vertex.
pub const ARM_NEXT: usize = 2;
/// Edge toward the previous vertex.
pub const ARM_PREV: usize = 3;

/// Whether `in → out` at a beam splitter is a transmission.
pub fn is_through(in_arm: usize, out_arm: usize) -> bool {
    matches!(
        (in_arm, out_arm),
        (ARM_EXTERNAL, ARM_NEXT) | (ARM_NEXT, ARM_EXTERNAL) | (ARM_MIRROR, ARM_PREV) | (ARM_PREV, ARM_MIRROR)
    )
}

/// 4×4 beam-splitter block, rows outgoing arm, columns incoming arm.
pub fn splitter_block<A: Amplitude>(r: &A, t: &A) -> Matrix<A> {
    Matrix::from_fn(4, |out, inp| {
        if out == inp || matches!((out, inp), (0, 1) | (1, 0) | (2, 3) | (3, 2)) {
            A::zero()
        } else if is_through(inp, out) {
            t.clone()
        } else {
            r.clone()
        }
    })
}

fn convert<A: Amplitude>(z: Complex64, what: &str) -> Result<A> {
    A::from_c64(z).ok_or_else(|| Error::NotRepresentable(format!("{what} = {z}")))
}

/// Vertex parameters converted into the working scalar type.
#[derive(Debug, Clone)]
pub struct VertexAmplitudes<A> {
    pub r: A,
    pub t: A,
    pub mirror: A,
}

impl<A: Amplitude> VertexAmplitudes<A> {
    pub fn from_params(p: &VertexParams) -> Result<Self> {
        Ok(Self { r: convert(p.r, "r")?, t: convert(p.t, "t")?, mirror: convert(p.mirror, "mirror")? })
    }
}

fn edge_factor<A: Amplitude>(phase: f64) -> Result<A> {
    convert(Complex64::from_polar(1.0, phase), "edge phase factor")
}

/// Where one multiport lives inside a larger network.
#[derive(Debug, Clone)]
pub struct DeviceEmbedding {
    /// Beam-splitter node for each port, in port order.
    pub splitters: Vec<usize>,
    /// Mirror segment for each vertex.
    pub mirror_segments: Vec<usize>,
    /// `(forward, backward)` segment ids for each polygon edge.
    pub edge_segments: Vec<(usize, usize)>,
}

impl DeviceEmbedding {
    /// Add the device's nodes and internal segments to `net`, leaving the
    /// external arms unwired.
    pub fn embed<A: Amplitude>(net: &mut ScatteringNetwork<A>, spec: &MultiportSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.ports();
        let params = spec
            .vertices
            .iter()
            .map(VertexAmplitudes::<A>::from_params)
            .collect::<Result<Vec<_>>>()?;
        let splitters: Vec<usize> = params.iter().map(|p| net.add_node(splitter_block(&p.r, &p.t))).collect();
        let mut mirror_segments = Vec::with_capacity(n);
        for (k, p) in params.iter().enumerate() {
            let arm = ArmRef::new(splitters[k], ARM_MIRROR);
            mirror_segments.push(net.connect(arm, arm, p.mirror.clone())?);
        }
        let mut edge_segments = Vec::with_capacity(n);
        for k in 0..n {
            let next = (k + 1) % n;
            let factor = edge_factor::<A>(spec.edge_phases[k])?;
            edge_segments.push(net.connect_both(
                ArmRef::new(splitters[k], ARM_NEXT),
                ArmRef::new(splitters[next], ARM_PREV),
                factor,
            )?);
        }
        Ok(Self { splitters, mirror_segments, edge_segments })
    }

    pub fn external_arm(&self, port: usize) -> ArmRef {
        ArmRef::new(self.splitters[port], ARM_EXTERNAL)
    }

    /// Overrides that swap this device's parameters for those of `spec`.
    pub fn overrides_for<A: Amplitude>(&self, spec: &MultiportSpec, out: &mut StepOverrides<A>) -> Result<()> {
        spec.validate()?;
        if spec.ports() != self.splitters.len() {
            return Err(Error::DimensionMismatch { expected: self.splitters.len(), found: spec.ports() });
        }
        for (k, p) in spec.vertices.iter().enumerate() {
            let a = VertexAmplitudes::<A>::from_params(p)?;
            out.nodes.insert(self.splitters[k], splitter_block(&a.r, &a.t));
            out.segments.insert(self.mirror_segments[k], a.mirror);
            let f = edge_factor::<A>(spec.edge_phases[k])?;
            out.segments.insert(self.edge_segments[k].0, f.clone());
            out.segments.insert(self.edge_segments[k].1, f);
        }
        Ok(())
    }
}

/// Compiled directed-edge scattering graph of a single multiport, with one
/// lead per external port (lead index = port index).
#[derive(Debug, Clone)]
pub struct DeviceGraph<A> {
    network: ScatteringNetwork<A>,
    embedding: DeviceEmbedding,
}

pub fn compile<A: Amplitude>(spec: &MultiportSpec) -> Result<DeviceGraph<A>> {
    let mut network = ScatteringNetwork::new();
    let embedding = DeviceEmbedding::embed(&mut network, spec)?;
    for port in 0..spec.ports() {
        network.add_lead(embedding.external_arm(port))?;
    }
    network.validate()?;
    Ok(DeviceGraph { network, embedding })
}

impl<A: Amplitude> DeviceGraph<A> {
    pub fn ports(&self) -> usize {
        self.embedding.splitters.len()
    }

    pub fn splitter_count(&self) -> usize {
        self.embedding.splitters.len()
    }

    pub fn mirror_count(&self) -> usize {
        self.embedding.mirror_segments.len()
    }

    /// Directed modes on the polygon edges (two per edge).
    pub fn inter_vertex_modes(&self) -> usize {
        2 * self.embedding.edge_segments.len()
    }

    /// Directed modes on the mirror stubs (outbound and return per mirror).
    pub fn mirror_stub_modes(&self) -> usize {
        2 * self.embedding.mirror_segments.len()
    }

    pub fn network(&self) -> &ScatteringNetwork<A> {
        &self.network
    }

    pub fn embedding(&self) -> &DeviceEmbedding {
        &self.embedding
    }

    pub fn is_mirror_segment(&self, segment: usize) -> bool {
        self.embedding.mirror_segments.contains(&segment)
    }

    /// Port whose splitter is `node`.
    pub fn vertex_of(&self, node: usize) -> PortLabel {
        PortLabel(
            self.embedding
                .splitters
                .iter()
                .position(|&s| s == node)
                .expect("node belongs to this device"),
        )
    }

    /// Single photon injected at `input`.
    pub fn inject(&self, input: PortLabel) -> Result<Evolution<'_, A>> {
        input.check(self.ports())?;
        self.network.evolve(&[(input.index(), A::one())])
    }
}
