use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitude::{Amplitude, Mode, MultiPhotonState, Occupation, Polarization, PortLabel};
use crate::error::{Error, Result};

/// Overlap above which a two-photon state is identified with a Bell state.
pub const CLASSIFY_THRESHOLD: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BellFamily {
    /// Opposite polarizations on the two ports.
    Psi,
    /// Equal polarizations on the two ports.
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BellSign {
    Plus,
    Minus,
}

/// Bell state without its port pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellKind {
    pub family: BellFamily,
    pub sign: BellSign,
}

impl BellKind {
    pub const PSI_PLUS: Self = Self { family: BellFamily::Psi, sign: BellSign::Plus };
    pub const PSI_MINUS: Self = Self { family: BellFamily::Psi, sign: BellSign::Minus };
    pub const PHI_PLUS: Self = Self { family: BellFamily::Phi, sign: BellSign::Plus };
    pub const PHI_MINUS: Self = Self { family: BellFamily::Phi, sign: BellSign::Minus };
    pub const ALL: [Self; 4] = [Self::PSI_PLUS, Self::PSI_MINUS, Self::PHI_PLUS, Self::PHI_MINUS];

    /// Same sign, other family.
    pub fn family_swapped(self) -> Self {
        let family = match self.family {
            BellFamily::Psi => BellFamily::Phi,
            BellFamily::Phi => BellFamily::Psi,
        };
        Self { family, sign: self.sign }
    }

    /// Bit encoding with `+ → 0`, `− → 1`.
    pub fn sign_bit(self) -> u8 {
        match self.sign {
            BellSign::Plus => 0,
            BellSign::Minus => 1,
        }
    }

    pub fn at(self, p: PortLabel, q: PortLabel) -> Result<BellLabel> {
        BellLabel::new(self, p, q)
    }

    pub fn ascii(self) -> &'static str {
        match (self.family, self.sign) {
            (BellFamily::Psi, BellSign::Plus) => "psi+",
            (BellFamily::Psi, BellSign::Minus) => "psi-",
            (BellFamily::Phi, BellSign::Plus) => "phi+",
            (BellFamily::Phi, BellSign::Minus) => "phi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            BellFamily::Psi => 'Ψ',
            BellFamily::Phi => 'Φ',
        };
        let sign = match self.sign {
            BellSign::Plus => '+',
            BellSign::Minus => '−',
        };
        write!(f, "{fam}{sign}")
    }
}

impl Serialize for BellKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.ascii())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_lowercase().replace('−', "-");
        let (fam, sign) = t.split_at(t.len().saturating_sub(1));
        let family = match fam {
            "psi" | "ψ" => BellFamily::Psi,
            "phi" | "φ" => BellFamily::Phi,
            _ => return Err(Error::InvalidArgument(format!("unknown Bell state {s:?}"))),
        };
        let sign = match sign {
            "+" => BellSign::Plus,
            "-" => BellSign::Minus,
            _ => return Err(Error::InvalidArgument(format!("unknown Bell state {s:?}"))),
        };
        Ok(Self { family, sign })
    }
}

/// Bell state on an ordered pair of distinct ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BellLabel {
    pub kind: BellKind,
    pub pair: (PortLabel, PortLabel),
}

impl BellLabel {
    pub fn new(kind: BellKind, p: PortLabel, q: PortLabel) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidArgument(format!("Bell pair needs distinct ports, got {p}{q}")));
        }
        Ok(Self { kind, pair: (p, q) })
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}{}", self.kind, self.pair.0, self.pair.1)
    }
}

/// `(1/√2)(|H⟩_p|V⟩_q ± |V⟩_p|H⟩_q)` or `(1/√2)(|H⟩_p|H⟩_q ± |V⟩_p|V⟩_q)`.
pub fn bell_state<A: Amplitude>(label: BellLabel, ports: usize) -> Result<MultiPhotonState<A>> {
    let (p, q) = label.pair;
    p.check(ports)?;
    q.check(ports)?;
    let h = A::inv_sqrt_int(2).expect("1/√2 is representable");
    let second = match label.kind.sign {
        BellSign::Plus => h.clone(),
        BellSign::Minus => -h.clone(),
    };
    use Polarization::{H, V};
    let (a, b) = match label.kind.family {
        BellFamily::Psi => ((H, V), (V, H)),
        BellFamily::Phi => ((H, H), (V, V)),
    };
    MultiPhotonState::from_terms(
        ports,
        [
            (Occupation::new([Mode::new(p, a.0), Mode::new(q, a.1)]), h),
            (Occupation::new([Mode::new(p, b.0), Mode::new(q, b.1)]), second),
        ],
    )
}

/// Result of matching a two-photon state against the four Bell states.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Classification {
    Bell {
        label: BellLabel,
        /// `⟨Bell|s⟩ / ‖s‖`, unit modulus.
        phase: (f64, f64),
        overlap: f64,
    },
    NotBell {
        /// `|⟨Bell|s⟩| / ‖s‖` for each Bell state on the pair.
        overlaps: Vec<(BellKind, f64)>,
    },
}

impl Classification {
    pub fn label(&self) -> Option<BellLabel> {
        match self {
            Classification::Bell { label, .. } => Some(*label),
            Classification::NotBell { .. } => None,
        }
    }

    pub fn kind(&self) -> Option<BellKind> {
        self.label().map(|l| l.kind)
    }

    pub fn phase(&self) -> Option<Complex64> {
        match self {
            Classification::Bell { phase, .. } => Some(Complex64::new(phase.0, phase.1)),
            Classification::NotBell { .. } => None,
        }
    }
}

/// Identify `s` (up to norm and global phase) with a Bell state on `pair`.
pub fn classify_bell<A: Amplitude>(s: &MultiPhotonState<A>, pair: (PortLabel, PortLabel)) -> Result<Classification> {
    if s.photon_number() != 2 {
        return Err(Error::InvalidArgument(format!("expected a two-photon state, got {} photons", s.photon_number())));
    }
    let norm = s.norm_sqr_f64().sqrt();
    let mut overlaps = Vec::with_capacity(4);
    for kind in BellKind::ALL {
        let label = BellLabel::new(kind, pair.0, pair.1)?;
        let b = bell_state::<A>(label, s.ports())?;
        let ov = if norm > 0.0 { b.inner(s).to_c64() / norm } else { Complex64::new(0.0, 0.0) };
        if ov.norm() > CLASSIFY_THRESHOLD {
            let phase = ov / ov.norm();
            return Ok(Classification::Bell { label, phase: (phase.re, phase.im), overlap: ov.norm() });
        }
        overlaps.push((kind, ov.norm()));
    }
    Ok(Classification::NotBell { overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::ExactComplex;

    type E = ExactComplex;
    const BC: (PortLabel, PortLabel) = (PortLabel::B, PortLabel::C);

    #[test]
    fn all_labels_normalized() {
        for kind in BellKind::ALL {
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let s = bell_state::<E>(kind.at(PortLabel(p), PortLabel(q)).unwrap(), 3).unwrap();
                assert_eq!(s.norm_sqr(), E::one());
            }
        }
    }

    #[test]
    fn phi_minus_terms() {
        let s = bell_state::<E>(BellKind::PHI_MINUS.at(PortLabel::B, PortLabel::C).unwrap(), 3).unwrap();
        let hh = Occupation::new([Mode::h(PortLabel::B), Mode::h(PortLabel::C)]);
        let vv = Occupation::new([Mode::v(PortLabel::B), Mode::v(PortLabel::C)]);
        let h = E::inv_sqrt_int(2).unwrap();
        assert_eq!(s.amplitude(&hh), h.clone());
        assert_eq!(s.amplitude(&vv), -h);
    }

    #[test]
    fn classify_with_sign() {
        let s = bell_state::<Complex64>(BellKind::PSI_PLUS.at(PortLabel::B, PortLabel::C).unwrap(), 3).unwrap();
        let neg = s.scaled(&Complex64::new(-1.0, 0.0));
        let c = classify_bell(&neg, BC).unwrap();
        assert_eq!(c.kind(), Some(BellKind::PSI_PLUS));
        assert!((c.phase().unwrap() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn product_state_is_not_bell() {
        let s = MultiPhotonState::<Complex64>::from_terms(
            3,
            [(Occupation::new([Mode::h(PortLabel::B), Mode::v(PortLabel::C)]), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        match classify_bell(&s, BC).unwrap() {
            Classification::NotBell { overlaps } => {
                let big: Vec<_> = overlaps.iter().filter(|(_, o)| (o - 0.5f64.sqrt()).abs() < 1e-12).collect();
                assert_eq!(big.len(), 2);
            }
            other => panic!("classified as {other:?}"),
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("Psi+".parse::<BellKind>().unwrap(), BellKind::PSI_PLUS);
        assert_eq!("Φ−".parse::<BellKind>().unwrap(), BellKind::PHI_MINUS);
        assert!("chi+".parse::<BellKind>().is_err());
        assert!(BellKind::PSI_PLUS.at(PortLabel::A, PortLabel::A).is_err());
    }
}
