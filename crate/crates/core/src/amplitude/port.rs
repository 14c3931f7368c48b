use std::fmt;
use std::str::FromStr;

use super::scalar::Amplitude;
use crate::error::{Error, Result};

/// External port of a multiport, rendered `A`, `B`, `C`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortLabel(pub usize);

impl PortLabel {
    pub const A: PortLabel = PortLabel(0);
    pub const B: PortLabel = PortLabel(1);
    pub const C: PortLabel = PortLabel(2);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn check(self, ports: usize) -> Result<Self> {
        if self.0 < ports {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(format!("port {self} is not a port of a {ports}-port device")))
        }
    }
}

impl fmt::Display for PortLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 26 {
            write!(f, "{}", (b'A' + self.0 as u8) as char)
        } else {
            write!(f, "P{}", self.0)
        }
    }
}

impl FromStr for PortLabel {
    type Err = Error;

    /// Accepts a letter (`A`, `b`) or a zero-based index.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(i) = s.parse::<usize>() {
            return Ok(PortLabel(i));
        }
        match s.as_bytes() {
            [c] if c.is_ascii_alphabetic() => Ok(PortLabel((c.to_ascii_uppercase() - b'A') as usize)),
            _ => Err(Error::InvalidArgument(format!("bad port label `{s}`"))),
        }
    }
}

impl serde::Serialize for PortLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Single-photon state in port space, one amplitude per port.
#[derive(Debug, Clone, PartialEq)]
pub struct PortStateVector<A> {
    amplitudes: Vec<A>,
}

impl<A: Amplitude> PortStateVector<A> {
    pub fn new(amplitudes: Vec<A>) -> Self {
        Self { amplitudes }
    }

    pub fn basis(ports: usize, port: PortLabel) -> Self {
        let mut amplitudes = vec![A::zero(); ports];
        amplitudes[port.0] = A::one();
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[A] {
        &self.amplitudes
    }

    pub fn get(&self, port: PortLabel) -> &A {
        &self.amplitudes[port.0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.abs_sqr().re_f64()).sum()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}
