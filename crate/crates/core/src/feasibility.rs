//! Timing and coherence budget of a multiport built from free-space or
//! waveguide segments of length `d`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Clock period as a multiple of the single-edge transit time.
pub const CLOCK_FACTOR: f64 = 10.0;
/// Operational reading of "much greater than".
pub const MUCH_GREATER: f64 = 10.0;

/// Pulse characterization, one of the two transform-limited quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pulse {
    /// Temporal width Δt in seconds.
    Duration(f64),
    /// Bandwidth Δν in Hz.
    Bandwidth(f64),
    /// Monochromatic limit: infinite coherence time.
    Monochromatic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityInputs {
    /// Segment length in meters.
    pub d: f64,
    pub refractive_index: f64,
    pub pulse: Pulse,
    /// Detector dead/integration time in seconds; defaults to `T_c`.
    pub t_detector: Option<f64>,
}

impl FeasibilityInputs {
    pub fn new(d: f64) -> Self {
        Self { d, refractive_index: 1.0, pulse: Pulse::Monochromatic, t_detector: None }
    }

    pub fn with_index(mut self, n: f64) -> Self {
        self.refractive_index = n;
        self
    }

    pub fn with_pulse(mut self, pulse: Pulse) -> Self {
        self.pulse = pulse;
        self
    }

    pub fn with_detector_time(mut self, t: f64) -> Self {
        self.t_detector = Some(t);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `τ_coh ≥ 10·T_D` fails.
    CoherenceVsDetector,
    /// `T_D ≥ T_c` fails.
    DetectorVsClock,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::CoherenceVsDetector => "tau_coh >= 10 * T_D",
            Violation::DetectorVsClock => "T_D >= T_c",
        })
    }
}

/// All derived timing quantities. Infinite values stand for the
/// monochromatic limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingBudget {
    pub d: f64,
    pub refractive_index: f64,
    /// Single-edge transit time `n·d/c`.
    pub t_edge: f64,
    /// Clock period `10·T`.
    pub t_clock: f64,
    pub max_sampling_rate: f64,
    pub delta_t: Option<f64>,
    pub delta_nu: Option<f64>,
    pub tau_coh: f64,
    pub l_coh: f64,
    pub t_detector: f64,
    /// Phase spread across the pulse bandwidth over one segment.
    pub delta_phi: f64,
    pub constraints_ok: bool,
    pub violations: Vec<Violation>,
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Derive the timing budget. Gaussian transform-limited pulses satisfy
/// `Δt·Δν = 1/(4π)`; `τ_coh = 1/Δν`.
pub fn assess(inputs: &FeasibilityInputs) -> Result<TimingBudget> {
    let d = positive("d", inputs.d)?;
    let index = positive("refractive_index", inputs.refractive_index)?;
    let t_edge = index * d / SPEED_OF_LIGHT;
    let t_clock = CLOCK_FACTOR * t_edge;
    let (delta_t, delta_nu) = match inputs.pulse {
        Pulse::Duration(dt) => {
            let dt = positive("delta_t", dt)?;
            (Some(dt), Some(1.0 / (4.0 * PI * dt)))
        }
        Pulse::Bandwidth(dnu) => {
            let dnu = positive("delta_nu", dnu)?;
            (Some(1.0 / (4.0 * PI * dnu)), Some(dnu))
        }
        Pulse::Monochromatic => (None, None),
    };
    let tau_coh = delta_nu.map_or(f64::INFINITY, |nu| 1.0 / nu);
    let l_coh = SPEED_OF_LIGHT * tau_coh;
    let delta_phi = 2.0 * PI * d / (SPEED_OF_LIGHT * tau_coh);
    let t_detector = match inputs.t_detector {
        Some(t) => positive("T_D", t)?,
        None => t_clock,
    };
    let mut violations = Vec::new();
    if tau_coh < MUCH_GREATER * t_detector {
        violations.push(Violation::CoherenceVsDetector);
    }
    if t_detector < t_clock {
        violations.push(Violation::DetectorVsClock);
    }
    Ok(TimingBudget {
        d,
        refractive_index: index,
        t_edge,
        t_clock,
        max_sampling_rate: 1.0 / t_clock,
        delta_t,
        delta_nu,
        tau_coh,
        l_coh,
        t_detector,
        delta_phi,
        constraints_ok: violations.is_empty(),
        violations,
    })
}

/// How many clock periods stay mutually coherent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceBudget {
    /// `floor(τ_coh / T_c)`; `None` when unbounded.
    pub max_steps: Option<u64>,
    pub tau_coh: f64,
    pub t_clock: f64,
}

impl CoherenceBudget {
    pub fn is_unbounded(&self) -> bool {
        self.max_steps.is_none()
    }
}

pub fn coherence_budget(tau_coh: f64, t_clock: f64) -> Result<CoherenceBudget> {
    let t_clock = positive("T_c", t_clock)?;
    if !(tau_coh > 0.0) {
        return Err(Error::InvalidArgument(format!("tau_coh must be positive, got {tau_coh}")));
    }
    let max_steps = tau_coh.is_finite().then(|| (tau_coh / t_clock).floor() as u64);
    Ok(CoherenceBudget { max_steps, tau_coh, t_clock })
}

impl TimingBudget {
    pub fn coherence_budget(&self) -> CoherenceBudget {
        coherence_budget(self.tau_coh, self.t_clock).expect("budget fields are positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn tenth_millimetre_clock() {
        let b = assess(&FeasibilityInputs::new(1e-4)).unwrap();
        assert!(rel(b.t_clock, 3.3e-12) < 0.02);
        assert!(rel(b.max_sampling_rate, 0.3e12) < 0.02);
    }

    #[test]
    fn hundred_picosecond_pulse() {
        let b = assess(&FeasibilityInputs::new(1e-4).with_pulse(Pulse::Duration(100e-12))).unwrap();
        let nu = b.delta_nu.unwrap();
        assert!((nu - 7.957747e8).abs() < 1e3);
        assert!((b.tau_coh - 1.2566e-9).abs() < 1e-12);
        assert!((b.l_coh - 0.3767).abs() < 1e-3);
        assert!((b.delta_t.unwrap() * nu - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn bandwidth_and_duration_agree() {
        let a = assess(&FeasibilityInputs::new(1e-4).with_pulse(Pulse::Duration(5e-12))).unwrap();
        let b = assess(&FeasibilityInputs::new(1e-4).with_pulse(Pulse::Bandwidth(a.delta_nu.unwrap()))).unwrap();
        assert!(rel(a.tau_coh, b.tau_coh) < 1e-12);
    }

    #[test]
    fn monochromatic_limit() {
        let b = assess(&FeasibilityInputs::new(1e-4)).unwrap();
        assert_eq!(b.delta_phi, 0.0);
        assert!(b.coherence_budget().is_unbounded());
        assert!(b.constraints_ok);
    }

    #[test]
    fn violations_named() {
        let b = assess(&FeasibilityInputs::new(1e-4).with_pulse(Pulse::Duration(0.1e-12)).with_detector_time(1e-12))
            .unwrap();
        assert_eq!(b.violations, vec![Violation::CoherenceVsDetector, Violation::DetectorVsClock]);
        assert!(!b.constraints_ok);
    }

    #[test]
    fn coherence_steps() {
        assert_eq!(coherence_budget(1e-9, 3.3e-12).unwrap().max_steps, Some(303));
        assert_eq!(coherence_budget(1e-12, 3.3e-12).unwrap().max_steps, Some(0));
        assert!(coherence_budget(f64::INFINITY, 3.3e-12).unwrap().is_unbounded());
    }

    #[test]
    fn index_scales_transit() {
        let a = assess(&FeasibilityInputs::new(1e-4)).unwrap();
        let b = assess(&FeasibilityInputs::new(1e-4).with_index(3.0)).unwrap();
        assert!(rel(b.t_edge, 3.0 * a.t_edge) < 1e-15);
    }
}
