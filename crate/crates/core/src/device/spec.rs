use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Steps an evolution may take before giving up.
pub const DEFAULT_MAX_STEPS: usize = 128;

const PARAM_TOL: f64 = 1e-12;

/// Beam-splitter and mirror-unit parameters of one vertex.
///
/// The beam splitter couples its four arms as two through-pairs
/// (external ↔ next edge, mirror ↔ previous edge) with amplitude `t`; the
/// crossed couplings carry `r`. The block is unitary when `|r|² + |t|² = 1`
/// and `r·t* + t·r* = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexParams {
    pub r: Complex64,
    pub t: Complex64,
    /// Round-trip factor picked up at the mirror unit.
    pub mirror: Complex64,
}

impl Default for VertexParams {
    /// 50/50 splitter with `r = i/√2`, `t = 1/√2` and a mirror unit of `−i`.
    fn default() -> Self {
        Self {
            r: Complex64::new(0.0, FRAC_1_SQRT_2),
            t: Complex64::new(FRAC_1_SQRT_2, 0.0),
            mirror: Complex64::new(0.0, -1.0),
        }
    }
}

impl VertexParams {
    pub fn with_mirror_phase(mut self, phase: f64) -> Self {
        self.mirror = Complex64::from_polar(1.0, phase);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.r.norm_sqr() + self.t.norm_sqr();
        if (norm - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidSpec(format!("|r|² + |t|² = {norm}, expected 1")));
        }
        let cross = self.r * self.t.conj() + self.t * self.r.conj();
        if cross.norm() > PARAM_TOL {
            return Err(Error::InvalidSpec(format!("r·t* + t·r* = {cross}, expected 0")));
        }
        if (self.mirror.norm() - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidSpec(format!("|mirror| = {}, expected 1", self.mirror.norm())));
        }
        Ok(())
    }
}

/// Parametric description of an n-sided directionally-unbiased multiport.
///
/// Vertex `k` is port `k`; edge `k` joins vertex `k` to vertex `k + 1 (mod n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiportSpec {
    pub vertices: Vec<VertexParams>,
    /// Extra propagation phase per inter-vertex traversal, in radians.
    pub edge_phases: Vec<f64>,
    pub max_steps: usize,
}

impl MultiportSpec {
    /// Identical default vertices and zero edge phases.
    pub fn new(n: usize) -> Self {
        Self::uniform(n, VertexParams::default(), 0.0)
    }

    pub fn uniform(n: usize, vertex: VertexParams, edge_phase: f64) -> Self {
        Self { vertices: vec![vertex; n], edge_phases: vec![edge_phase; n], max_steps: DEFAULT_MAX_STEPS }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_mirror_phase(mut self, phase: f64) -> Self {
        for v in &mut self.vertices {
            *v = v.with_mirror_phase(phase);
        }
        self
    }

    pub fn with_edge_phase(mut self, phase: f64) -> Self {
        self.edge_phases.iter_mut().for_each(|p| *p = phase);
        self
    }

    pub fn ports(&self) -> usize {
        self.vertices.len()
    }

    /// True when all vertices and all edge phases are identical.
    pub fn is_uniform(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0] == w[1])
            && self.edge_phases.windows(2).all(|w| w[0] == w[1])
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ports();
        if n < 3 {
            return Err(Error::InvalidSpec(format!("a multiport needs at least 3 ports, got {n}")));
        }
        if self.edge_phases.len() != n {
            return Err(Error::InvalidSpec(format!(
                "{} edge phases for {n} edges",
                self.edge_phases.len()
            )));
        }
        if let Some(p) = self.edge_phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidSpec(format!("edge phase {p} is not finite")));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidSpec("max_steps must be positive".into()));
        }
        for (k, v) in self.vertices.iter().enumerate() {
            v.validate().map_err(|e| match e {
                Error::InvalidSpec(msg) => Error::InvalidSpec(format!("vertex {k}: {msg}")),
                other => other,
            })?;
        }
        Ok(())
    }
}
