//! JSON run configuration and its resolution to natural-unit core inputs.
//!
//! Physical inputs come in exactly one style per file: an `si` block (rad/s,
//! metres, seconds) or a `dimensionless` block (σΩ/c, ΩΔτ, d/σ, σΓ with σ = 1).

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use udwf_core::{Boundary, DetectorParams, DetectorState, Normalization, PhysicalScales, Regime, SwitchingWindow, ToleranceSpec};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiInputs {
    /// Gap angular frequency, rad/s.
    pub gap_omega: f64,
    /// Smearing width, m.
    pub smearing_sigma: f64,
    /// Switching time, s.
    #[serde(default)]
    pub delta_tau: f64,
    /// Plate distance, m; absent for free space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    /// Regulator, 1/s.
    #[serde(default)]
    pub regulator_gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInputs {
    pub sigma_omega: f64,
    #[serde(default)]
    pub omega_delta_tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_over_sigma: Option<f64>,
    #[serde(default)]
    pub sigma_gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub excited_pop: f64,
    #[serde(default)]
    pub coherence: [f64; 2],
}

impl Default for StateConfig {
    fn default() -> Self {
        Self { excited_pop: 0.0, coherence: [0.0; 2] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DeltaTau,
    D,
    V,
    SigmaOmega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Sweep range in the units of the file's style: seconds/metres under `si`,
/// ΩΔτ and d/σ under `dimensionless`. `v` and `sigma_omega` are always v/c and σΩ/c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

pub const MAX_SWEEP_POINTS: usize = 100_000;

impl SweepConfig {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let bad = |reason: String| CliError::field("sweep", reason);
        if !(2..=MAX_SWEEP_POINTS).contains(&self.points) {
            return Err(bad(format!("points must lie in 2..={MAX_SWEEP_POINTS}, got {}", self.points)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start == self.stop {
            return Err(bad(format!("start and stop must be finite and distinct, got {} and {}", self.start, self.stop)));
        }
        let n = (self.points - 1) as f64;
        Ok(match self.spacing {
            Spacing::Linear => (0..self.points).map(|i| self.start + (self.stop - self.start) * i as f64 / n).collect(),
            Spacing::Log => {
                if !(self.start > 0.0 && self.stop > 0.0) {
                    return Err(bad("log spacing needs positive endpoints".into()));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..self.points).map(|i| (a + (b - a) * i as f64 / n).exp()).collect()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn one() -> f64 {
    1.0
}

fn finite_time() -> Regime {
    Regime::FiniteTime
}

fn raw() -> Normalization {
    Normalization::RawNatural
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub si: Option<SiInputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensionless: Option<GroupInputs>,
    /// v/c along x.
    #[serde(default)]
    pub velocity: f64,
    #[serde(default)]
    pub state: StateConfig,
    /// Complex reflection coefficient [re, im]; used only with a plate distance.
    #[serde(default)]
    pub reflection: [f64; 2],
    #[serde(default = "one")]
    pub coupling_lambda: f64,
    #[serde(default = "finite_time")]
    pub regime: Regime,
    #[serde(default = "raw")]
    pub normalization: Normalization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Everything a single force evaluation needs, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub params: DetectorParams,
    pub state: DetectorState,
    pub v: f64,
    pub boundary: Boundary,
    pub window: SwitchingWindow,
    pub regime: Regime,
    pub normalization: Normalization,
    pub tol: ToleranceSpec,
    pub scales: PhysicalScales,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    fn style(&self) -> Result<Style<'_>, CliError> {
        match (&self.si, &self.dimensionless) {
            (Some(s), None) => Ok(Style::Si(s)),
            (None, Some(g)) => Ok(Style::Groups(g)),
            _ => Err(CliError::field("si/dimensionless", "exactly one of the two input blocks must be present".into())),
        }
    }

    /// Validates through the core constructors; diagnostics name the offending field.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let (params, window, distance, scales) = match self.style()? {
            Style::Si(s) => {
                let sc = PhysicalScales::si();
                let p = DetectorParams::new(
                    sc.frequency_to_natural(s.gap_omega),
                    s.smearing_sigma,
                    self.coupling_lambda,
                    sc.frequency_to_natural(s.regulator_gamma),
                )
                .map_err(|e| CliError::field("si", e.to_string()))?;
                let w = SwitchingWindow::new(sc.time_to_natural(s.delta_tau)).map_err(|e| CliError::field("si.delta_tau", e.to_string()))?;
                (p, w, s.distance, sc)
            }
            Style::Groups(g) => {
                if !(g.sigma_omega > 0.0) {
                    return Err(CliError::field("dimensionless.sigma_omega", format!("must be positive, got {}", g.sigma_omega)));
                }
                let p = DetectorParams::new(g.sigma_omega, 1.0, self.coupling_lambda, g.sigma_gamma).map_err(|e| CliError::field("dimensionless", e.to_string()))?;
                let w = SwitchingWindow::new(g.omega_delta_tau / g.sigma_omega).map_err(|e| CliError::field("dimensionless.omega_delta_tau", e.to_string()))?;
                (p, w, g.d_over_sigma, PhysicalScales::natural())
            }
        };
        let state = DetectorState::new(self.state.excited_pop, Complex64::new(self.state.coherence[0], self.state.coherence[1]))
            .map_err(|e| CliError::field("state", e.to_string()))?;
        udwf_core::lorentz_gamma(self.velocity).map_err(|e| CliError::field("velocity", e.to_string()))?;
        let boundary = match distance {
            None => Boundary::Free,
            Some(d) => Boundary::plate(d, Complex64::new(self.reflection[0], self.reflection[1])).map_err(|e| CliError::field("distance/reflection", e.to_string()))?,
        };
        self.tolerances.validate().map_err(|e| CliError::field("tolerances", e.to_string()))?;
        if self.threads == Some(0) {
            return Err(CliError::field("threads", "must be at least 1".into()));
        }
        if let Some(s) = &self.sweep {
            s.grid()?;
        }
        Ok(Resolved {
            params,
            state,
            v: self.velocity,
            boundary,
            window,
            regime: self.regime,
            normalization: self.normalization,
            tol: self.tolerances,
            scales,
        })
    }

    /// The resolved inputs at one value of the swept variable.
    pub fn resolve_at(&self, var: SweepVariable, value: f64) -> Result<Resolved, CliError> {
        let mut c = self.clone();
        c.sweep = None;
        match (var, c.si.as_mut(), c.dimensionless.as_mut()) {
            (SweepVariable::V, _, _) => c.velocity = value,
            (SweepVariable::DeltaTau, Some(s), _) => s.delta_tau = value,
            (SweepVariable::DeltaTau, _, Some(g)) => g.omega_delta_tau = value,
            (SweepVariable::D, Some(s), _) => s.distance = Some(value),
            (SweepVariable::D, _, Some(g)) => g.d_over_sigma = Some(value),
            (SweepVariable::SigmaOmega, Some(s), _) => s.gap_omega = value * SPEED_OF_LIGHT / s.smearing_sigma,
            (SweepVariable::SigmaOmega, _, Some(g)) => {
                // Keep Δτ fixed in units of σ while σΩ changes.
                let dt = g.omega_delta_tau / g.sigma_omega;
                g.sigma_omega = value;
                g.omega_delta_tau = dt * value;
            }
            _ => return Err(CliError::field("si/dimensionless", "exactly one of the two input blocks must be present".into())),
        }
        c.resolve()
    }
}

const SPEED_OF_LIGHT: f64 = udwf_core::SPEED_OF_LIGHT_SI;

enum Style<'a> {
    Si(&'a SiInputs),
    Groups(&'a GroupInputs),
}
