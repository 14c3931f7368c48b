//! Directed-edge scattering networks.
//!
//! A network is a set of nodes, each with `d` arms and a local `d × d`
//! scattering matrix (rows: outgoing arm, columns: incoming arm). Every
//! outgoing arm either feeds a directed segment into some node's incoming
//! arm, carrying a propagation factor, or is an absorbing lead. One step
//! translates all amplitude along its segments and then scatters it at every
//! node; amplitude scattered into a lead is recorded as an exit and never
//! re-enters. Injection counts as the first scattering event, so exits
//! recorded at step `k` come from the `k`-th scattering.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::amplitude::{Amplitude, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArmRef {
    pub node: usize,
    pub arm: usize,
}

impl ArmRef {
    pub fn new(node: usize, arm: usize) -> Self {
        Self { node, arm }
    }
}

#[derive(Debug, Clone)]
pub struct Segment<A> {
    pub from: ArmRef,
    pub to: ArmRef,
    pub factor: A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutLink {
    Unwired,
    Segment(usize),
    Lead(usize),
}

/// Per-step replacements for node scattering matrices and segment factors.
#[derive(Debug, Clone)]
pub struct StepOverrides<A> {
    pub nodes: BTreeMap<usize, Matrix<A>>,
    pub segments: BTreeMap<usize, A>,
}

impl<A> Default for StepOverrides<A> {
    fn default() -> Self {
        Self { nodes: BTreeMap::new(), segments: BTreeMap::new() }
    }
}

impl<A> StepOverrides<A> {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.segments.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringNetwork<A> {
    offsets: Vec<usize>,
    scatter: Vec<Matrix<A>>,
    out_links: Vec<OutLink>,
    in_wired: Vec<bool>,
    segments: Vec<Segment<A>>,
    leads: Vec<ArmRef>,
}

impl<A: Amplitude> Default for ScatteringNetwork<A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<A: Amplitude> ScatteringNetwork<A> {
    pub fn new() -> Self {
        Self {
            offsets: vec![0],
            scatter: Vec::new(),
            out_links: Vec::new(),
            in_wired: Vec::new(),
            segments: Vec::new(),
            leads: Vec::new(),
        }
    }

    /// Add a node whose degree is the dimension of `scatter`.
    pub fn add_node(&mut self, scatter: Matrix<A>) -> usize {
        let d = scatter.dim();
        let id = self.scatter.len();
        self.scatter.push(scatter);
        let end = self.offsets[id] + d;
        self.offsets.push(end);
        self.out_links.extend(std::iter::repeat_n(OutLink::Unwired, d));
        self.in_wired.extend(std::iter::repeat_n(false, d));
        id
    }

    /// Directed segment from an outgoing arm to an incoming arm.
    pub fn connect(&mut self, from: ArmRef, to: ArmRef, factor: A) -> Result<usize> {
        let g_from = self.global(from)?;
        let g_to = self.global(to)?;
        if self.out_links[g_from] != OutLink::Unwired {
            return Err(Error::InvalidSpec(format!("outgoing arm {from:?} wired twice")));
        }
        if self.in_wired[g_to] {
            return Err(Error::InvalidSpec(format!("incoming arm {to:?} wired twice")));
        }
        let id = self.segments.len();
        self.segments.push(Segment { from, to, factor });
        self.out_links[g_from] = OutLink::Segment(id);
        self.in_wired[g_to] = true;
        Ok(id)
    }

    /// Both directions of an undirected connection; returns the two segment ids.
    pub fn connect_both(&mut self, a: ArmRef, b: ArmRef, factor: A) -> Result<(usize, usize)> {
        Ok((self.connect(a, b, factor.clone())?, self.connect(b, a, factor)?))
    }

    /// Mark an arm as an external lead (injection in, absorbing exit out).
    pub fn add_lead(&mut self, arm: ArmRef) -> Result<usize> {
        let g = self.global(arm)?;
        if self.out_links[g] != OutLink::Unwired || self.in_wired[g] {
            return Err(Error::InvalidSpec(format!("lead arm {arm:?} already wired")));
        }
        let id = self.leads.len();
        self.leads.push(arm);
        self.out_links[g] = OutLink::Lead(id);
        self.in_wired[g] = true;
        Ok(id)
    }

    /// Every arm must be wired in both directions.
    pub fn validate(&self) -> Result<()> {
        for node in 0..self.scatter.len() {
            for arm in 0..self.degree(node) {
                let g = self.offsets[node] + arm;
                if self.out_links[g] == OutLink::Unwired || !self.in_wired[g] {
                    return Err(Error::InvalidSpec(format!("arm {arm} of node {node} is unwired")));
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.scatter.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn arm_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn segments(&self) -> &[Segment<A>] {
        &self.segments
    }

    pub fn leads(&self) -> &[ArmRef] {
        &self.leads
    }

    pub fn scatter_matrix(&self, node: usize) -> &Matrix<A> {
        &self.scatter[node]
    }

    /// Segment leaving `arm`, if the arm is internal.
    pub fn segment_from(&self, arm: ArmRef) -> Option<usize> {
        match self.out_links[self.offsets[arm.node] + arm.arm] {
            OutLink::Segment(s) => Some(s),
            _ => None,
        }
    }

    /// Lead attached to `arm`, if any.
    pub fn lead_at(&self, arm: ArmRef) -> Option<usize> {
        match self.out_links[self.offsets[arm.node] + arm.arm] {
            OutLink::Lead(l) => Some(l),
            _ => None,
        }
    }

    fn global(&self, arm: ArmRef) -> Result<usize> {
        if arm.node >= self.scatter.len() || arm.arm >= self.degree(arm.node) {
            return Err(Error::InvalidSpec(format!("no such arm {arm:?}")));
        }
        Ok(self.offsets[arm.node] + arm.arm)
    }

    /// Start an evolution with the given lead amplitudes injected.
    pub fn evolve(&self, injection: &[(usize, A)]) -> Result<Evolution<'_, A>> {
        let mut incoming = vec![A::zero(); self.arm_count()];
        for (lead, amp) in injection {
            let arm = *self
                .leads
                .get(*lead)
                .ok_or_else(|| Error::InvalidArgument(format!("no lead {lead}")))?;
            incoming[self.offsets[arm.node] + arm.arm] += amp.clone();
        }
        Ok(Evolution { net: self, outgoing: Vec::new(), pending: Some(incoming), step: 0 })
    }
}

impl ScatteringNetwork<Complex64> {
    /// Lead-to-lead transfer matrix summed over all times, obtained from the
    /// resolvent `L·(I − S·P)⁻¹·S·E` instead of stepping (`S` scatters, `P`
    /// propagates along segments, `E` injects, `L` reads the leads).
    pub fn total_transfer(&self) -> Result<Matrix<Complex64>> {
        self.validate()?;
        let m = self.arm_count();
        let mut sp = DMatrix::<Complex64>::zeros(m, m);
        for seg in &self.segments {
            let from = self.offsets[seg.from.node] + seg.from.arm;
            let s = &self.scatter[seg.to.node];
            for j in 0..self.degree(seg.to.node) {
                sp[(self.offsets[seg.to.node] + j, from)] += s.get(j, seg.to.arm) * seg.factor;
            }
        }
        let k = self.leads.len();
        let mut rhs = DMatrix::<Complex64>::zeros(m, k);
        for (l, arm) in self.leads.iter().enumerate() {
            let s = &self.scatter[arm.node];
            for j in 0..self.degree(arm.node) {
                rhs[(self.offsets[arm.node] + j, l)] = *s.get(j, arm.arm);
            }
        }
        let lhs = DMatrix::<Complex64>::identity(m, m) - sp;
        let sol = lhs
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::NonConvergence { steps: 0, residual: f64::INFINITY })?;
        Ok(Matrix::from_fn(k, |out, inp| {
            let arm = self.leads[out];
            sol[(self.offsets[arm.node] + arm.arm, inp)]
        }))
    }
}

/// Amplitudes leaving scattering nodes after one step.
#[derive(Debug, Clone)]
pub struct StepRecord<A> {
    /// 1-based scattering count.
    pub step: usize,
    /// Amplitude that left through each lead during this step.
    pub exits: Vec<A>,
    /// Squared norm still inside the network after this step.
    pub internal_norm_sqr: A,
}

/// One run through a network; owns its mutable state vector.
pub struct Evolution<'a, A> {
    net: &'a ScatteringNetwork<A>,
    outgoing: Vec<A>,
    pending: Option<Vec<A>>,
    step: usize,
}

impl<A: Amplitude> Evolution<'_, A> {
    pub fn step_index(&self) -> usize {
        self.step
    }

    /// Amplitude currently on each segment, indexed by segment id.
    pub fn segment_amplitudes(&self) -> Vec<A> {
        self.net
            .segments
            .iter()
            .map(|s| {
                self.outgoing
                    .get(self.net.offsets[s.from.node] + s.from.arm)
                    .cloned()
                    .unwrap_or_else(A::zero)
            })
            .collect()
    }

    pub fn internal_norm_sqr(&self) -> A {
        let mut acc = A::zero();
        for a in &self.outgoing {
            acc += a.abs_sqr();
        }
        acc
    }

    pub fn advance(&mut self) -> StepRecord<A> {
        self.advance_with(None)
    }

    pub fn advance_with(&mut self, overrides: Option<&StepOverrides<A>>) -> StepRecord<A> {
        let net = self.net;
        let incoming = match self.pending.take() {
            Some(inj) => inj,
            None => {
                let mut incoming = vec![A::zero(); net.arm_count()];
                for (id, seg) in net.segments.iter().enumerate() {
                    let amp = &self.outgoing[net.offsets[seg.from.node] + seg.from.arm];
                    if amp.is_negligible() {
                        continue;
                    }
                    let factor = overrides
                        .and_then(|o| o.segments.get(&id))
                        .unwrap_or(&seg.factor);
                    incoming[net.offsets[seg.to.node] + seg.to.arm] += factor.mul(amp);
                }
                incoming
            }
        };

        let mut outgoing = vec![A::zero(); net.arm_count()];
        for node in 0..net.scatter.len() {
            let s = overrides
                .and_then(|o| o.nodes.get(&node))
                .unwrap_or(&net.scatter[node]);
            let off = net.offsets[node];
            let d = net.degree(node);
            for i in 0..d {
                let amp = &incoming[off + i];
                if amp.is_negligible() {
                    continue;
                }
                for j in 0..d {
                    let sji = s.get(j, i);
                    if !sji.is_negligible() {
                        outgoing[off + j] += sji.mul(amp);
                    }
                }
            }
        }

        let exits = net
            .leads
            .iter()
            .map(|arm| {
                let g = net.offsets[arm.node] + arm.arm;
                std::mem::replace(&mut outgoing[g], A::zero())
            })
            .collect();
        self.outgoing = outgoing;
        self.step += 1;
        StepRecord { step: self.step, exits, internal_norm_sqr: self.internal_norm_sqr() }
    }
}
