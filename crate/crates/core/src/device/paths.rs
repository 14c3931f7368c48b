use std::collections::BTreeMap;
use std::fmt;

use super::graph::{compile, is_through, DeviceGraph, ARM_EXTERNAL};
use super::spec::MultiportSpec;
use crate::amplitude::{Amplitude, PortLabel};
use crate::error::{Error, Result};
use crate::scatter::ArmRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathSymbolKind {
    /// Reflection at a beam splitter.
    R,
    /// Transmission at a beam splitter.
    T,
    /// Bounce off a mirror unit.
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathSymbol {
    pub kind: PathSymbolKind,
    pub vertex: PortLabel,
}

impl fmt::Display for PathSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            PathSymbolKind::R => 'r',
            PathSymbolKind::T => 't',
            PathSymbolKind::M => 'M',
        };
        write!(f, "{c}_{}", self.vertex)
    }
}

/// One path from an input port to an exit, in order of application.
#[derive(Debug, Clone)]
pub struct PathTrace<A> {
    pub symbols: Vec<PathSymbol>,
    pub amplitude: A,
}

impl<A: Amplitude> PathTrace<A> {
    /// Beam-splitter encounters along the path.
    pub fn encounters(&self) -> usize {
        self.symbols.iter().filter(|s| s.kind != PathSymbolKind::M).count()
    }

    pub fn mirror_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.kind == PathSymbolKind::M).count()
    }

    /// Symbol string such as `r_A r_C M_C r_C r_A`.
    pub fn symbol_string(&self) -> String {
        self.symbols.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// All paths of exactly `n` beam-splitter encounters from `input` to `exit`.
///
/// The path count grows like `2^(n/2)` for the default device.
pub fn enumerate_paths<A: Amplitude>(
    spec: &MultiportSpec,
    input: PortLabel,
    exit: PortLabel,
    n: usize,
) -> Result<Vec<PathTrace<A>>> {
    if n > spec.max_steps {
        return Err(Error::InvalidArgument(format!("N = {n} exceeds max_steps = {}", spec.max_steps)));
    }
    let graph = compile::<A>(spec)?;
    input.check(graph.ports())?;
    exit.check(graph.ports())?;
    let mut walker = Walker { graph: &graph, exit, target: n, out: Vec::new(), symbols: Vec::new() };
    if n >= 1 {
        let start = graph.embedding().external_arm(input.index());
        walker.visit(start, A::one(), 1);
    }
    Ok(walker.out)
}

/// Count of paths by number of mirror bounces.
pub fn mirror_count_distribution<A: Amplitude>(paths: &[PathTrace<A>]) -> BTreeMap<usize, usize> {
    let mut d = BTreeMap::new();
    for p in paths {
        *d.entry(p.mirror_count()).or_insert(0) += 1;
    }
    d
}

struct Walker<'g, A> {
    graph: &'g DeviceGraph<A>,
    exit: PortLabel,
    target: usize,
    out: Vec<PathTrace<A>>,
    symbols: Vec<PathSymbol>,
}

impl<A: Amplitude> Walker<'_, A> {
    // `arrival` is the incoming arm; `encounter` is the 1-based count of the
    // scattering about to happen there.
    fn visit(&mut self, arrival: ArmRef, amp: A, encounter: usize) {
        let net = self.graph.network();
        let vertex = self.graph.vertex_of(arrival.node);
        let s = net.scatter_matrix(arrival.node);
        for out_arm in 0..net.degree(arrival.node) {
            let coupling = s.get(out_arm, arrival.arm);
            if coupling.is_negligible() {
                continue;
            }
            let kind = if is_through(arrival.arm, out_arm) { PathSymbolKind::T } else { PathSymbolKind::R };
            let amp = amp.mul(coupling);
            self.symbols.push(PathSymbol { kind, vertex });
            if out_arm == ARM_EXTERNAL {
                if encounter == self.target && vertex == self.exit {
                    self.out.push(PathTrace { symbols: self.symbols.clone(), amplitude: amp });
                }
            } else if encounter < self.target {
                let from = ArmRef::new(arrival.node, out_arm);
                let seg_id = net.segment_from(from).expect("internal arm has a segment");
                let seg = &net.segments()[seg_id];
                let mirrored = self.graph.is_mirror_segment(seg_id);
                if mirrored {
                    self.symbols.push(PathSymbol { kind: PathSymbolKind::M, vertex });
                }
                self.visit(seg.to, amp.mul(&seg.factor), encounter + 1);
                if mirrored {
                    self.symbols.pop();
                }
            }
            self.symbols.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::ExactComplex;

    type E = ExactComplex;

    #[test]
    fn a_to_b_at_two_is_single_tr_path() {
        let paths = enumerate_paths::<E>(&MultiportSpec::new(3), PortLabel::A, PortLabel::B, 2).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].amplitude, E::ratio(0, 1, 2));
        assert_eq!(paths[0].symbol_string(), "t_A r_B");
    }

    #[test]
    fn no_return_path_at_two() {
        let paths = enumerate_paths::<E>(&MultiportSpec::new(3), PortLabel::A, PortLabel::A, 2).unwrap();
        assert!(paths.is_empty());
    }

    #[test]
    fn return_paths_at_four_each_bounce_once() {
        let paths = enumerate_paths::<E>(&MultiportSpec::new(3), PortLabel::A, PortLabel::A, 4).unwrap();
        assert_eq!(paths.len(), 2);
        for p in &paths {
            assert_eq!(p.amplitude, E::ratio(0, -1, 4));
            assert_eq!(p.mirror_count(), 1);
            assert_eq!(p.encounters(), 4);
        }
    }

    #[test]
    fn n_beyond_max_steps_rejected() {
        let spec = MultiportSpec::new(3).with_max_steps(10);
        assert!(enumerate_paths::<E>(&spec, PortLabel::A, PortLabel::A, 12).is_err());
    }
}
