//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use multiport::amplitude::{Matrix, PortLabel};
use multiport::bell::BellKind;
use multiport::device::{MultiportSpec, VertexParams};
use multiport::walk::{EdgeSpec, GraphSpec, VertexKind, VertexPort};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random splitter with `t = cos θ e^{iχ}`, `r = i sin θ e^{iχ}` and a random
/// mirror phase. θ stays away from the decoupled limits so walks drain.
pub fn random_vertex(rng: &mut impl Rng) -> VertexParams {
    let theta = rng.random_range(0.25..(PI / 2.0 - 0.25));
    let chi = rng.random_range(0.0..2.0 * PI);
    let mirror = rng.random_range(0.0..2.0 * PI);
    VertexParams {
        r: Complex64::from_polar(theta.sin(), chi + PI / 2.0),
        t: Complex64::from_polar(theta.cos(), chi),
        mirror: Complex64::from_polar(1.0, mirror),
    }
}

pub fn random_spec(rng: &mut impl Rng, n: usize) -> MultiportSpec {
    let mut spec = MultiportSpec::new(n);
    for v in &mut spec.vertices {
        *v = random_vertex(rng);
    }
    for p in &mut spec.edge_phases {
        *p = rng.random_range(0.0..2.0 * PI);
    }
    spec
}

pub fn random_identical_spec(rng: &mut impl Rng, n: usize) -> MultiportSpec {
    MultiportSpec::uniform(n, random_vertex(rng), 0.0)
}

/// Largest `|M[σ(i)][σ(j)] − M[i][j]|` over the cyclic shift and the
/// reflection `k ↦ −k`.
pub fn dihedral_defect(m: &Matrix<Complex64>) -> f64 {
    let n = m.dim();
    let perms: [Box<dyn Fn(usize) -> usize>; 2] = [Box::new(move |k| (k + 1) % n), Box::new(move |k| (n - k) % n)];
    let mut worst: f64 = 0.0;
    for p in &perms {
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((m.get(p(i), p(j)) - m.get(i, j)).norm());
            }
        }
    }
    worst
}

/// Reference gate action: `(input, control, out_s, out_o)`.
pub fn reference_truth_table() -> Vec<(BellKind, BellKind, BellKind, BellKind)> {
    use BellKind as K;
    let (pp, pm, fp, fm) = (K::PSI_PLUS, K::PSI_MINUS, K::PHI_PLUS, K::PHI_MINUS);
    vec![
        (pp, pp, fp, pp),
        (pp, pm, fm, pm),
        (pm, pp, fm, pm),
        (pm, pm, fp, pp),
        (fp, fp, fp, pp),
        (fp, fm, fm, pm),
        (fm, fp, fm, pm),
        (fm, fm, fp, pp),
        (pp, fp, pp, fp),
        (pp, fm, pm, fm),
        (pm, fp, pm, fm),
        (pm, fm, pp, fp),
        (fp, pp, pp, fp),
        (fp, pm, pm, fm),
        (fm, pp, pm, fm),
        (fm, pm, pp, fp),
    ]
}

/// Reference `s`-condition action on a Ψ+ input: `(control, output)`.
pub fn reference_psi_plus_row() -> Vec<(BellKind, BellKind)> {
    use BellKind as K;
    vec![
        (K::PSI_PLUS, K::PHI_PLUS),
        (K::PSI_MINUS, K::PHI_MINUS),
        (K::PHI_PLUS, K::PSI_PLUS),
        (K::PHI_MINUS, K::PSI_MINUS),
    ]
}

/// Two default three-ports joined by vertex 0 port 1 — vertex 1 port 2.
/// Leads in order: (0,0), (0,2), (1,0), (1,1).
pub fn two_vertex_graph() -> GraphSpec {
    let mut g = GraphSpec::new();
    g.add_vertex(VertexKind::Physical { spec: MultiportSpec::new(3) });
    g.add_vertex(VertexKind::Physical { spec: MultiportSpec::new(3) });
    g.add_edge(EdgeSpec::new(VertexPort::new(0, 1), VertexPort::new(1, 2)));
    for (v, p) in [(0, 0), (0, 2), (1, 0), (1, 1)] {
        g.add_lead(VertexPort::new(v, p));
    }
    g
}

/// Independent dense model of [`two_vertex_graph`].
///
/// Each splitter `g = 3v + k` has arms ext/mirror/next/prev. The state lives
/// on incoming arm amplitudes (24 of them); one step is scatter, then
/// propagate. Outgoing amplitude on a lead arm is recorded and dropped.
pub struct DenseTwoVertex {
    pub scatter: Vec<Vec<Complex64>>,
    pub propagate: Vec<Vec<Complex64>>,
    pub lead_arms: Vec<usize>,
    /// Outgoing arm indices of the inter-vertex edge, both directions.
    pub bridge_arms: [usize; 2],
}

const EXT: usize = 0;
const MIR: usize = 1;
const NEXT: usize = 2;
const PREV: usize = 3;

fn arm(v: usize, k: usize, a: usize) -> usize {
    4 * (3 * v + k) + a
}

impl DenseTwoVertex {
    pub fn new() -> Self {
        let dim = 24;
        let r = c(0.0, FRAC_1_SQRT_2);
        let t = c(FRAC_1_SQRT_2, 0.0);
        let mut scatter = vec![vec![c(0.0, 0.0); dim]; dim];
        for g in 0..6 {
            let b = 4 * g;
            // (out, in, amplitude)
            for (o, i, a) in [
                (NEXT, EXT, t),
                (EXT, NEXT, t),
                (PREV, MIR, t),
                (MIR, PREV, t),
                (PREV, EXT, r),
                (EXT, PREV, r),
                (NEXT, MIR, r),
                (MIR, NEXT, r),
            ] {
                scatter[b + o][b + i] = a;
            }
        }
        let mut propagate = vec![vec![c(0.0, 0.0); dim]; dim];
        for v in 0..2 {
            for k in 0..3 {
                let m = arm(v, k, MIR);
                propagate[m][m] = c(0.0, -1.0);
                let next = (k + 1) % 3;
                propagate[arm(v, next, PREV)][arm(v, k, NEXT)] = c(1.0, 0.0);
                propagate[arm(v, k, NEXT)][arm(v, next, PREV)] = c(1.0, 0.0);
            }
        }
        let (x, y) = (arm(0, 1, EXT), arm(1, 2, EXT));
        propagate[y][x] = c(1.0, 0.0);
        propagate[x][y] = c(1.0, 0.0);
        let lead_arms = vec![arm(0, 0, EXT), arm(0, 2, EXT), arm(1, 0, EXT), arm(1, 1, EXT)];
        Self { scatter, propagate, lead_arms, bridge_arms: [x, y] }
    }

    fn apply(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
        m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Per step: lead exit amplitudes, probability on the bridge edge and
    /// total internal probability.
    pub fn run(&self, lead: usize, steps: usize) -> Vec<(Vec<Complex64>, f64, f64)> {
        let mut incoming = vec![c(0.0, 0.0); 24];
        incoming[self.lead_arms[lead]] = c(1.0, 0.0);
        let mut out = Vec::new();
        for _ in 0..steps {
            let mut outgoing = Self::apply(&self.scatter, &incoming);
            let exits: Vec<Complex64> = self.lead_arms.iter().map(|&a| outgoing[a]).collect();
            for &a in &self.lead_arms {
                outgoing[a] = c(0.0, 0.0);
            }
            let bridge = self.bridge_arms.iter().map(|&a| outgoing[a].norm_sqr()).sum();
            let internal = outgoing.iter().map(|z| z.norm_sqr()).sum();
            out.push((exits, bridge, internal));
            incoming = Self::apply(&self.propagate, &outgoing);
        }
        out
    }
}

pub const A: PortLabel = PortLabel::A;
pub const B: PortLabel = PortLabel::B;
pub const C: PortLabel = PortLabel::C;

pub mod criteria;
