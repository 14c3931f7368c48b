use num_complex::Complex64;

use crate::amplitude::{Matrix, FLOAT_TOLERANCE};
use crate::device::MultiportSpec;
use crate::error::{Error, Result};

/// A port of one vertex of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct VertexPort {
    pub vertex: usize,
    pub port: usize,
}

impl VertexPort {
    pub fn new(vertex: usize, port: usize) -> Self {
        Self { vertex, port }
    }
}

#[derive(Debug, Clone)]
pub enum VertexKind {
    /// Scatters incoming edge amplitudes by the coin in one step.
    Ideal { coin: Matrix<Complex64> },
    /// Expanded into beam splitters and mirrors.
    Physical { spec: MultiportSpec },
}

impl VertexKind {
    pub fn degree(&self) -> usize {
        match self {
            VertexKind::Ideal { coin } => coin.dim(),
            VertexKind::Physical { spec } => spec.ports(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VertexKind::Ideal { coin } => {
                let dev = coin.unitarity_deviation();
                if dev > FLOAT_TOLERANCE {
                    return Err(Error::InvalidSpec(format!("coin is not unitary (deviation {dev:.3e})")));
                }
                Ok(())
            }
            VertexKind::Physical { spec } => spec.validate(),
        }
    }
}

/// Undirected edge between two vertex ports; traversal takes one step and
/// multiplies by `e^{i·phase}` in either direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSpec {
    pub a: VertexPort,
    pub b: VertexPort,
    pub phase: f64,
}

impl EdgeSpec {
    pub fn new(a: VertexPort, b: VertexPort) -> Self {
        Self { a, b, phase: 0.0 }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }
}

/// Network of multiports. Every vertex port is used by exactly one edge end
/// or one lead; leads are absorbing detectors that can also inject.
#[derive(Debug, Clone, Default)]
pub struct GraphSpec {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<EdgeSpec>,
    pub leads: Vec<VertexPort>,
    pub allow_disconnected: bool,
}

impl GraphSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexKind) -> usize {
        self.vertices.push(v);
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, e: EdgeSpec) -> &mut Self {
        self.edges.push(e);
        self
    }

    pub fn add_lead(&mut self, at: VertexPort) -> usize {
        self.leads.push(at);
        self.leads.len() - 1
    }

    /// One vertex with a lead on every port, lead `k` on port `k`.
    pub fn single(v: VertexKind) -> Self {
        let mut g = Self::new();
        let d = v.degree();
        let id = g.add_vertex(v);
        for p in 0..d {
            g.add_lead(VertexPort::new(id, p));
        }
        g
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidSpec("graph has no vertices".into()));
        }
        for (k, v) in self.vertices.iter().enumerate() {
            v.validate().map_err(|e| Error::InvalidSpec(format!("vertex {k}: {e}")))?;
        }
        let mut used: Vec<Vec<bool>> = self.vertices.iter().map(|v| vec![false; v.degree()]).collect();
        let mut claim = |vp: VertexPort, what: &str| -> Result<()> {
            let slot = used
                .get_mut(vp.vertex)
                .ok_or_else(|| Error::InvalidSpec(format!("{what} refers to missing vertex {}", vp.vertex)))?
                .get_mut(vp.port)
                .ok_or_else(|| {
                    Error::InvalidSpec(format!("{what} uses port {} of vertex {}, beyond its degree", vp.port, vp.vertex))
                })?;
            if *slot {
                return Err(Error::InvalidSpec(format!("port {} of vertex {} is used twice", vp.port, vp.vertex)));
            }
            *slot = true;
            Ok(())
        };
        for (k, e) in self.edges.iter().enumerate() {
            if !e.phase.is_finite() {
                return Err(Error::InvalidSpec(format!("edge {k} phase is not finite")));
            }
            claim(e.a, &format!("edge {k}"))?;
            claim(e.b, &format!("edge {k}"))?;
        }
        for (k, &l) in self.leads.iter().enumerate() {
            claim(l, &format!("lead {k}"))?;
        }
        for (v, ports) in used.iter().enumerate() {
            if let Some(p) = ports.iter().position(|u| !u) {
                return Err(Error::InvalidSpec(format!(
                    "vertex {v} has degree {} but port {p} is not connected",
                    ports.len()
                )));
            }
        }
        if !self.allow_disconnected && !self.is_connected() {
            return Err(Error::InvalidSpec("graph is not connected".into()));
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.edges {
            if e.a.vertex < n && e.b.vertex < n {
                let (ra, rb) = (find(&mut parent, e.a.vertex), find(&mut parent, e.b.vertex));
                parent[ra] = rb;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }
}
