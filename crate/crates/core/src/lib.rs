//! Exact discrete-time simulation of directionally-unbiased linear-optical
//! multiports: single-photon path sums and transition matrices, four-photon
//! Bell-state gates with heralding, scattering walks on graphs of multiports,
//! and the timing arithmetic that bounds them.

pub mod amplitude;
pub mod bell;
pub mod cli;
pub mod device;
pub mod error;
pub mod feasibility;
pub mod scatter;
pub mod walk;

pub use error::{Error, Result};
