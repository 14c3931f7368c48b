use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::graph::{GraphSpec, VertexKind, VertexPort};
use crate::amplitude::{Amplitude, Matrix, FLOAT_TOLERANCE};
use crate::device::{DeviceEmbedding, MultiportSpec};
use crate::error::{Error, Result};
use crate::feasibility::{coherence_budget, CoherenceBudget, TimingBudget};
use crate::scatter::{ArmRef, ScatteringNetwork, StepOverrides};

#[derive(Debug, Clone)]
enum VertexNodes {
    Ideal(usize),
    Physical(DeviceEmbedding),
}

impl VertexNodes {
    fn arm(&self, port: usize) -> ArmRef {
        match self {
            VertexNodes::Ideal(node) => ArmRef::new(*node, port),
            VertexNodes::Physical(emb) => emb.external_arm(port),
        }
    }
}

/// Replacement parameters for one vertex during one step.
#[derive(Debug, Clone)]
pub enum VertexOverride {
    Coin(Matrix<Complex64>),
    Device(MultiportSpec),
}

/// Per-step parameter changes: step index (1-based scattering count) →
/// vertex → override.
#[derive(Debug, Clone, Default)]
pub struct Schedule {
    pub steps: BTreeMap<usize, BTreeMap<usize, VertexOverride>>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, step: usize, vertex: usize, o: VertexOverride) -> &mut Self {
        self.steps.entry(step).or_default().insert(vertex, o);
        self
    }
}

/// Compiled walk on a graph of multiports.
#[derive(Debug, Clone)]
pub struct WalkEngine<A> {
    graph: GraphSpec,
    network: ScatteringNetwork<A>,
    vertices: Vec<VertexNodes>,
    /// `(forward, backward)` segment ids per graph edge.
    edge_segments: Vec<(usize, usize)>,
    /// Owning vertex of each segment; `None` for inter-vertex edges.
    segment_vertex: Vec<Option<usize>>,
}

pub fn build_network<A: Amplitude>(graph: &GraphSpec) -> Result<WalkEngine<A>> {
    graph.validate()?;
    let mut network = ScatteringNetwork::new();
    let mut vertices = Vec::with_capacity(graph.vertices.len());
    let mut segment_vertex = Vec::new();
    for (k, v) in graph.vertices.iter().enumerate() {
        let nodes = match v {
            VertexKind::Ideal { coin } => VertexNodes::Ideal(network.add_node(coin.convert::<A>()?)),
            VertexKind::Physical { spec } => VertexNodes::Physical(DeviceEmbedding::embed(&mut network, spec)?),
        };
        segment_vertex.resize(network.segments().len(), Some(k));
        vertices.push(nodes);
    }
    let mut edge_segments = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let factor = A::from_c64(Complex64::from_polar(1.0, e.phase))
            .ok_or_else(|| Error::NotRepresentable(format!("edge phase factor for phase {}", e.phase)))?;
        let a = vertices[e.a.vertex].arm(e.a.port);
        let b = vertices[e.b.vertex].arm(e.b.port);
        edge_segments.push(network.connect_both(a, b, factor)?);
    }
    segment_vertex.resize(network.segments().len(), None);
    for l in &graph.leads {
        network.add_lead(vertices[l.vertex].arm(l.port))?;
    }
    network.validate()?;
    Ok(WalkEngine { graph: graph.clone(), network, vertices, edge_segments, segment_vertex })
}

/// State of the walk after one step.
#[derive(Debug, Clone)]
pub struct WalkStep<A> {
    pub step: usize,
    /// Probability on each graph edge (both directions).
    pub edge_probabilities: Vec<A>,
    /// Probability inside each vertex's internal modes (zero for ideal vertices).
    pub vertex_probabilities: Vec<A>,
    /// Amplitude leaving through each lead during this step.
    pub lead_amplitudes: Vec<A>,
    pub lead_probabilities: Vec<A>,
    /// Accumulated exit probability per lead.
    pub cumulative: Vec<A>,
    pub internal: A,
}

impl<A: Amplitude> WalkStep<A> {
    pub fn total_exited(&self) -> A {
        let mut t = A::zero();
        for c in &self.cumulative {
            t += c.clone();
        }
        t
    }

    /// `|internal + exited − norm|` in floating point.
    pub fn conservation_defect(&self, initial_norm: f64) -> f64 {
        ((self.internal.clone() + self.total_exited()).re_f64() - initial_norm).abs()
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[A]| v.iter().map(Amplitude::to_json).collect::<Vec<_>>();
        json!({
            "step": self.step,
            "edges": list(&self.edge_probabilities),
            "vertices": list(&self.vertex_probabilities),
            "lead_amplitudes": list(&self.lead_amplitudes),
            "lead_probabilities": list(&self.lead_probabilities),
            "cumulative": list(&self.cumulative),
            "internal": self.internal.to_json(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct WalkRun<A> {
    pub steps: Vec<WalkStep<A>>,
    pub initial_norm: f64,
}

impl<A: Amplitude> WalkRun<A> {
    pub fn max_conservation_defect(&self) -> f64 {
        self.steps.iter().map(|s| s.conservation_defect(self.initial_norm)).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "initial_norm": self.initial_norm,
            "steps": self.steps.iter().map(WalkStep::to_json).collect::<Vec<_>>(),
        })
    }
}

impl<A: Amplitude> WalkEngine<A> {
    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn network(&self) -> &ScatteringNetwork<A> {
        &self.network
    }

    pub fn lead_count(&self) -> usize {
        self.graph.leads.len()
    }

    /// Directed modes on inter-vertex edges.
    pub fn inter_vertex_modes(&self) -> usize {
        2 * self.edge_segments.len()
    }

    /// Directed modes inside expanded vertices.
    pub fn internal_vertex_modes(&self) -> usize {
        self.segment_vertex.iter().filter(|v| v.is_some()).count()
    }

    pub fn lead_port(&self, lead: usize) -> Option<VertexPort> {
        self.graph.leads.get(lead).copied()
    }

    fn overrides(&self, schedule: &Schedule) -> Result<BTreeMap<usize, StepOverrides<A>>> {
        let mut out = BTreeMap::new();
        for (&step, per_vertex) in &schedule.steps {
            if step == 0 {
                return Err(Error::InvalidArgument("schedule steps are 1-based".into()));
            }
            let mut o = StepOverrides::default();
            for (&v, ov) in per_vertex {
                let nodes = self
                    .vertices
                    .get(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("schedule refers to missing vertex {v}")))?;
                match (nodes, ov) {
                    (VertexNodes::Ideal(node), VertexOverride::Coin(m)) => {
                        let deg = self.graph.vertices[v].degree();
                        if m.dim() != deg {
                            return Err(Error::DimensionMismatch { expected: deg, found: m.dim() });
                        }
                        let dev = m.unitarity_deviation();
                        if dev > FLOAT_TOLERANCE {
                            return Err(Error::InvalidArgument(format!(
                                "step {step} coin for vertex {v} is not unitary (deviation {dev:.3e})"
                            )));
                        }
                        o.nodes.insert(*node, m.convert::<A>()?);
                    }
                    (VertexNodes::Physical(emb), VertexOverride::Device(spec)) => {
                        emb.overrides_for(spec, &mut o).map_err(|e| {
                            Error::InvalidArgument(format!("step {step} override for vertex {v}: {e}"))
                        })?;
                    }
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "step {step} override kind does not match vertex {v}"
                        )))
                    }
                }
            }
            out.insert(step, o);
        }
        Ok(out)
    }

    /// Coherence budget for walks on this engine under the given timing.
    pub fn coherence_budget(&self, timing: &TimingBudget) -> Result<CoherenceBudget> {
        coherence_budget(timing.tau_coh, timing.t_clock)
    }
}

/// Inject `input` (lead amplitudes) and record `steps` steps.
pub fn run_walk<A: Amplitude>(
    engine: &WalkEngine<A>,
    input: &[(usize, A)],
    steps: usize,
    schedule: Option<&Schedule>,
) -> Result<WalkRun<A>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("a walk needs at least one step".into()));
    }
    let overrides = match schedule {
        Some(s) => engine.overrides(s)?,
        None => BTreeMap::new(),
    };
    let mut initial = A::zero();
    for (_, a) in input {
        initial += a.abs_sqr();
    }
    let mut ev = engine.network.evolve(input)?;
    let leads = engine.lead_count();
    let mut cumulative = vec![A::zero(); leads];
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let step = ev.step_index() + 1;
        let rec = ev.advance_with(overrides.get(&step));
        let seg = ev.segment_amplitudes();
        let mut edge_probabilities = Vec::with_capacity(engine.edge_segments.len());
        for &(f, b) in &engine.edge_segments {
            edge_probabilities.push(seg[f].abs_sqr() + seg[b].abs_sqr());
        }
        let mut vertex_probabilities = vec![A::zero(); engine.vertices.len()];
        for (id, owner) in engine.segment_vertex.iter().enumerate() {
            if let Some(v) = owner {
                vertex_probabilities[*v] += seg[id].abs_sqr();
            }
        }
        let lead_probabilities: Vec<A> = rec.exits.iter().map(Amplitude::abs_sqr).collect();
        for (c, p) in cumulative.iter_mut().zip(&lead_probabilities) {
            *c += p.clone();
        }
        out.push(WalkStep {
            step,
            edge_probabilities,
            vertex_probabilities,
            lead_amplitudes: rec.exits,
            lead_probabilities,
            cumulative: cumulative.clone(),
            internal: rec.internal_norm_sqr,
        });
    }
    Ok(WalkRun { steps: out, initial_norm: initial.re_f64() })
}

/// Single photon on one lead.
pub fn run_walk_from_lead<A: Amplitude>(
    engine: &WalkEngine<A>,
    lead: usize,
    steps: usize,
    schedule: Option<&Schedule>,
) -> Result<WalkRun<A>> {
    if lead >= engine.lead_count() {
        return Err(Error::InvalidArgument(format!("no lead {lead}; the graph has {}", engine.lead_count())));
    }
    run_walk(engine, &[(lead, A::one())], steps, schedule)
}
