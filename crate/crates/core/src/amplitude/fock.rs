//! Bosonic multi-photon states over `(port, polarization)` modes.
//!
//! A [`MultiPhotonState`] is stored in the orthonormal number basis. The
//! operations that act on photons one at a time (products of states, port
//! unitaries) go through the creation-operator picture, where the number
//! state `|n₁, n₂, …⟩` is the monomial `∏ a†ᵢ^nᵢ / √(nᵢ!)` applied to vacuum.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::matrix::Matrix;
use super::port::PortLabel;
use super::scalar::Amplitude;
use crate::error::{Error, Result};

/// Largest photon number any state may carry.
pub const MAX_PHOTONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn flipped(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

/// One optical mode. Ordered by port, then H before V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub port: PortLabel,
    pub pol: Polarization,
}

impl Mode {
    pub fn new(port: PortLabel, pol: Polarization) -> Self {
        Self { port, pol }
    }

    pub fn h(port: PortLabel) -> Self {
        Self::new(port, Polarization::H)
    }

    pub fn v(port: PortLabel) -> Self {
        Self::new(port, Polarization::V)
    }
}

/// Occupation vector, stored as the sorted multiset of occupied modes.
/// This sorted form is the canonical key for state maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Occupation(SmallVec<[Mode; MAX_PHOTONS]>);

impl Occupation {
    pub fn new(modes: impl IntoIterator<Item = Mode>) -> Self {
        let mut v: SmallVec<[Mode; MAX_PHOTONS]> = modes.into_iter().collect();
        v.sort_unstable();
        Self(v)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn photons(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self, mode: Mode) -> usize {
        self.0.iter().filter(|m| **m == mode).count()
    }

    pub fn count_at(&self, port: PortLabel) -> usize {
        self.0.iter().filter(|m| m.port == port).count()
    }

    /// `(mode, count)` pairs in canonical order.
    pub fn counts(&self) -> Vec<(Mode, usize)> {
        let mut out: Vec<(Mode, usize)> = Vec::new();
        for m in &self.0 {
            match out.last_mut() {
                Some((last, c)) if last == m => *c += 1,
                _ => out.push((*m, 1)),
            }
        }
        out
    }

    /// `∏ nᵢ!` over occupied modes.
    pub fn factorial_product(&self) -> u64 {
        self.counts().iter().map(|&(_, c)| (1..=c as u64).product::<u64>()).product()
    }

    pub fn merged(&self, other: &Occupation) -> Occupation {
        Occupation::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// The occupation with every photon at `port` removed.
    pub fn without_port(&self, port: PortLabel) -> Occupation {
        Occupation(self.0.iter().filter(|m| m.port != port).copied().collect())
    }

    /// The occupation restricted to `port`.
    pub fn at_port(&self, port: PortLabel) -> Occupation {
        Occupation(self.0.iter().filter(|m| m.port == port).copied().collect())
    }

    pub fn max_port(&self) -> Option<PortLabel> {
        self.0.iter().map(|m| m.port).max()
    }
}

impl fmt::Display for Occupation {
    /// Renders e.g. `|2H⟩_A|V⟩_B` or `|HV⟩_A`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "|vac⟩");
        }
        let mut port_counts: BTreeMap<PortLabel, Vec<(Polarization, usize)>> = BTreeMap::new();
        for (m, c) in self.counts() {
            port_counts.entry(m.port).or_default().push((m.pol, c));
        }
        for (port, pols) in port_counts {
            write!(f, "|")?;
            for (pol, c) in pols {
                if c > 1 {
                    write!(f, "{c}")?;
                }
                write!(f, "{pol}")?;
            }
            write!(f, "⟩_{port}")?;
        }
        Ok(())
    }
}

/// Superposition of number states with a fixed total photon number.
#[derive(Clone, PartialEq)]
pub struct MultiPhotonState<A> {
    ports: usize,
    photons: usize,
    terms: BTreeMap<Occupation, A>,
}

impl<A: Amplitude> MultiPhotonState<A> {
    /// Build a state from number-basis terms. Repeated occupations add.
    pub fn from_terms(
        ports: usize,
        terms: impl IntoIterator<Item = (Occupation, A)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Occupation, A> = BTreeMap::new();
        let mut photons = None;
        for (occ, amp) in terms {
            match photons {
                None => photons = Some(occ.photons()),
                Some(p) if p != occ.photons() => {
                    return Err(Error::InvalidArgument(format!(
                        "mixed photon numbers {p} and {} in one state",
                        occ.photons()
                    )))
                }
                _ => {}
            }
            if let Some(port) = occ.max_port() {
                port.check(ports)?;
            }
            *map.entry(occ).or_insert_with(A::zero) += amp;
        }
        let photons = photons.unwrap_or(0);
        if photons > MAX_PHOTONS {
            return Err(Error::Capacity { requested: photons, capacity: MAX_PHOTONS });
        }
        let mut s = Self { ports, photons, terms: map };
        s.prune();
        Ok(s)
    }

    /// One photon in `mode`.
    pub fn single(ports: usize, mode: Mode) -> Result<Self> {
        Self::from_terms(ports, [(Occupation::new([mode]), A::one())])
    }

    /// The zero vector in the `photons`-photon sector.
    pub fn zero(ports: usize, photons: usize) -> Self {
        Self { ports, photons, terms: BTreeMap::new() }
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn photon_number(&self) -> usize {
        self.photons
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &A)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occ: &Occupation) -> A {
        self.terms.get(occ).cloned().unwrap_or_else(A::zero)
    }

    /// Squared norm in the scalar type (exact in exact mode).
    pub fn norm_sqr(&self) -> A {
        let mut acc = A::zero();
        for a in self.terms.values() {
            acc += a.abs_sqr();
        }
        acc
    }

    pub fn norm_sqr_f64(&self) -> f64 {
        self.norm_sqr().re_f64()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> A {
        let mut acc = A::zero();
        for (occ, a) in &self.terms {
            if let Some(b) = other.terms.get(occ) {
                acc += a.conj().mul(b);
            }
        }
        acc
    }

    pub fn scaled(&self, c: &A) -> Self {
        let mut s = Self {
            ports: self.ports,
            photons: self.photons,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect(),
        };
        s.prune();
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ports != other.ports {
            return Err(Error::DimensionMismatch { expected: self.ports, found: other.ports });
        }
        if !self.is_empty() && !other.is_empty() && self.photons != other.photons {
            return Err(Error::InvalidArgument("adding states of different photon number".into()));
        }
        let mut s = self.clone();
        if s.is_empty() {
            s.photons = other.photons;
        }
        for (k, v) in &other.terms {
            *s.terms.entry(k.clone()).or_insert_with(A::zero) += v.clone();
        }
        s.prune();
        Ok(s)
    }

    /// Rescale to unit norm. Fails on the zero state, or in exact mode when
    /// the norm leaves the supported field.
    pub fn normalized(&self) -> Result<Self> {
        let inv = self
            .norm_sqr()
            .inv_sqrt_real()
            .ok_or_else(|| Error::NotRepresentable(format!("1/‖ψ‖ for ‖ψ‖² = {}", self.norm_sqr())))?;
        Ok(self.scaled(&inv))
    }

    /// Apply `f` to every occupation key, summing amplitudes that collide.
    pub fn map_occupations(&self, f: impl Fn(&Occupation) -> Occupation) -> Result<Self> {
        Self::from_terms(self.ports, self.terms.iter().map(|(k, v)| (f(k), v.clone())))
            .map(|mut s| {
                if s.is_empty() {
                    s.photons = self.photons;
                }
                s
            })
    }

    fn prune(&mut self) {
        self.terms.retain(|_, v| !v.is_negligible());
    }

    fn to_poly(&self) -> Result<BTreeMap<Occupation, A>> {
        self.terms
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.mul(&inv_sqrt_factorials::<A>(k)?))))
            .collect()
    }

    fn from_poly(ports: usize, photons: usize, poly: BTreeMap<Occupation, A>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, v) in poly {
            let amp = v.mul(&sqrt_factorials::<A>(&k)?);
            terms.insert(k, amp);
        }
        let mut s = Self { ports, photons, terms };
        s.prune();
        Ok(s)
    }
}

fn sqrt_factorials<A: Amplitude>(occ: &Occupation) -> Result<A> {
    let f = occ.factorial_product();
    A::sqrt_int(f).ok_or_else(|| Error::NotRepresentable(format!("√{f}")))
}

fn inv_sqrt_factorials<A: Amplitude>(occ: &Occupation) -> Result<A> {
    let f = occ.factorial_product();
    A::inv_sqrt_int(f).ok_or_else(|| Error::NotRepresentable(format!("1/√{f}")))
}

impl<A: fmt::Debug> fmt::Debug for MultiPhotonState<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (occ, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({amp:?}){occ}")?;
        }
        Ok(())
    }
}

/// Creation-operator product of two states with the default capacity.
pub fn bosonic_product<A: Amplitude>(
    s1: &MultiPhotonState<A>,
    s2: &MultiPhotonState<A>,
) -> Result<MultiPhotonState<A>> {
    bosonic_product_with_capacity(s1, s2, MAX_PHOTONS)
}

/// Creation-operator product `P₁(a†) P₂(a†) |0⟩` re-expanded in the number
/// basis. Shared modes pick up the bosonic `√(n!)` enhancement, so the norm
/// is multiplicative only for states on disjoint modes.
pub fn bosonic_product_with_capacity<A: Amplitude>(
    s1: &MultiPhotonState<A>,
    s2: &MultiPhotonState<A>,
    capacity: usize,
) -> Result<MultiPhotonState<A>> {
    if s1.ports != s2.ports {
        return Err(Error::DimensionMismatch { expected: s1.ports, found: s2.ports });
    }
    if s1.photons == 0 || s2.photons == 0 {
        return Err(Error::InvalidArgument("bosonic product needs at least one photon per factor".into()));
    }
    let photons = s1.photons + s2.photons;
    if photons > capacity.min(MAX_PHOTONS) {
        return Err(Error::Capacity { requested: photons, capacity: capacity.min(MAX_PHOTONS) });
    }
    let p1 = s1.to_poly()?;
    let p2 = s2.to_poly()?;
    let mut out: BTreeMap<Occupation, A> = BTreeMap::new();
    for (k1, c1) in &p1 {
        for (k2, c2) in &p2 {
            *out.entry(k1.merged(k2)).or_insert_with(A::zero) += c1.mul(c2);
        }
    }
    MultiPhotonState::from_poly(s1.ports, photons, out)
}

/// Apply the single-photon port unitary `u` to every photon: each creation
/// operator `a†(p, σ)` becomes `Σ_q u[q][p] a†(q, σ)`. Polarization is left
/// untouched.
pub fn apply_port_unitary<A: Amplitude>(
    u: &Matrix<A>,
    s: &MultiPhotonState<A>,
) -> Result<MultiPhotonState<A>> {
    if u.dim() != s.ports {
        return Err(Error::DimensionMismatch { expected: s.ports, found: u.dim() });
    }
    let n = u.dim();
    let mut out: BTreeMap<Occupation, A> = BTreeMap::new();
    for (occ, coeff) in s.to_poly()? {
        // expand ∏_j (Σ_q u[q][p_j] a†_{q,σ_j}) one photon at a time
        let mut partial: Vec<(SmallVec<[Mode; MAX_PHOTONS]>, A)> = vec![(SmallVec::new(), coeff)];
        for mode in occ.modes() {
            let mut next = Vec::with_capacity(partial.len() * n);
            for (modes, amp) in &partial {
                for q in 0..n {
                    let uq = u.get(q, mode.port.index());
                    if uq.is_negligible() {
                        continue;
                    }
                    let mut m = modes.clone();
                    m.push(Mode::new(PortLabel(q), mode.pol));
                    next.push((m, amp.mul(uq)));
                }
            }
            partial = next;
        }
        for (modes, amp) in partial {
            *out.entry(Occupation::new(modes)).or_insert_with(A::zero) += amp;
        }
    }
    MultiPhotonState::from_poly(s.ports, s.photons, out)
}

/// Keep the terms whose occupation satisfies `predicate`, without
/// renormalizing. The squared norm of the result is the probability of the
/// corresponding detection outcome.
pub fn project<A: Amplitude>(
    s: &MultiPhotonState<A>,
    predicate: impl Fn(&Occupation) -> bool,
) -> MultiPhotonState<A> {
    MultiPhotonState {
        ports: s.ports,
        photons: s.photons,
        terms: s
            .terms
            .iter()
            .filter(|(k, _)| predicate(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    }
}
