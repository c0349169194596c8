//! Physical parameters, detector state and the dimensionless groups they reduce to.
//!
//! Everything downstream works in natural units (c = ħ = 1). Frequencies are
//! inverse lengths, times are lengths, and velocities are fractions of c.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
pub const HBAR_SI: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitMode {
    Natural,
    Si,
}

/// Values of c and ħ used to move between SI inputs and natural-unit computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScales {
    pub c: f64,
    pub hbar: f64,
    pub unit_mode: UnitMode,
}

impl PhysicalScales {
    pub fn natural() -> Self {
        Self { c: 1.0, hbar: 1.0, unit_mode: UnitMode::Natural }
    }

    pub fn si() -> Self {
        Self { c: SPEED_OF_LIGHT_SI, hbar: HBAR_SI, unit_mode: UnitMode::Si }
    }

    /// Angular frequency to inverse length.
    pub fn frequency_to_natural(&self, omega: f64) -> f64 {
        omega / self.c
    }

    /// Duration to length.
    pub fn time_to_natural(&self, t: f64) -> f64 {
        t * self.c
    }

    pub fn velocity_to_natural(&self, v: f64) -> f64 {
        v / self.c
    }

    /// A natural-unit force (per unit λ²) back to the unit system of `self`.
    pub fn force_from_natural(&self, f: f64) -> f64 {
        f * self.hbar * self.c
    }
}

/// Unruh-DeWitt detector constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub gap_omega: f64,
    pub smearing_sigma: f64,
    pub coupling_lambda: f64,
    pub regulator_gamma: f64,
}

impl DetectorParams {
    pub fn new(gap_omega: f64, smearing_sigma: f64, coupling_lambda: f64, regulator_gamma: f64) -> Result<Self> {
        let p = Self { gap_omega, smearing_sigma, coupling_lambda, regulator_gamma };
        p.validate()?;
        Ok(p)
    }

    /// Unit coupling, no regulator.
    pub fn simple(gap_omega: f64, smearing_sigma: f64) -> Result<Self> {
        Self::new(gap_omega, smearing_sigma, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.smearing_sigma > 0.0) || !self.smearing_sigma.is_finite() {
            return Err(Error::InvalidSmearing { sigma: self.smearing_sigma });
        }
        if !(self.gap_omega >= 0.0) || !self.gap_omega.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gap_omega",
                reason: format!("must be finite and >= 0, got {}", self.gap_omega),
            });
        }
        if !(self.coupling_lambda > 0.0) || !self.coupling_lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "coupling_lambda",
                reason: format!("must be finite and > 0, got {}", self.coupling_lambda),
            });
        }
        if !(self.regulator_gamma >= 0.0) || !self.regulator_gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "regulator_gamma",
                reason: format!("must be finite and >= 0, got {}", self.regulator_gamma),
            });
        }
        Ok(())
    }
}

/// Initial detector density matrix [[a, b], [b*, 1 - a]].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorState {
    pub excited_pop: f64,
    pub coherence: Complex64,
}

impl DetectorState {
    pub fn ground() -> Self {
        Self { excited_pop: 0.0, coherence: Complex64::new(0.0, 0.0) }
    }

    pub fn excited() -> Self {
        Self { excited_pop: 1.0, coherence: Complex64::new(0.0, 0.0) }
    }

    pub fn new(excited_pop: f64, coherence: Complex64) -> Result<Self> {
        validate_state(Self { excited_pop, coherence })
    }

    /// Eigenvalues of the density matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.excited_pop;
        let half_gap = ((a - 0.5).powi(2) + self.coherence.norm_sqr()).sqrt();
        [0.5 - half_gap, 0.5 + half_gap]
    }
}

/// Accepts the state iff a ∈ [0, 1] and |b|² ≤ a(1 − a).
pub fn validate_state(state: DetectorState) -> Result<DetectorState> {
    let a = state.excited_pop;
    if !a.is_finite() || !(0.0..=1.0).contains(&a) {
        return Err(Error::NotDensityMatrix {
            constraint: format!("excited population a = {a} must lie in [0, 1]"),
        });
    }
    let b2 = state.coherence.norm_sqr();
    if !b2.is_finite() {
        return Err(Error::NotDensityMatrix { constraint: "coherence b must be finite".into() });
    }
    // Relative slack so that states built on the boundary |b|² = a(1 − a) survive rounding.
    let bound = a * (1.0 - a);
    if b2 > bound + 4.0 * f64::EPSILON * bound.max(f64::MIN_POSITIVE) {
        return Err(Error::NotDensityMatrix {
            constraint: format!("positivity |b|^2 = {b2} exceeds a(1 - a) = {bound}"),
        });
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Boundary {
    Free,
    Plate { distance: f64, reflection: Complex64 },
}

impl Boundary {
    pub fn plate(distance: f64, reflection: Complex64) -> Result<Self> {
        let b = Boundary::Plate { distance, reflection };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if let Boundary::Plate { distance, reflection } = *self {
            if !(distance > 0.0) || !distance.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "distance",
                    reason: format!("plate distance must be finite and > 0, got {distance}"),
                });
            }
            if !(reflection.norm() <= 1.0 + 1e-12) {
                return Err(Error::InvalidParameter {
                    name: "reflection",
                    reason: format!("|R| must not exceed 1, got {}", reflection.norm()),
                });
            }
        }
        Ok(())
    }
}

/// Constant switching active for a proper time Δτ before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchingWindow {
    pub delta_tau: f64,
}

impl SwitchingWindow {
    pub fn new(delta_tau: f64) -> Result<Self> {
        if !(delta_tau >= 0.0) || !delta_tau.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta_tau",
                reason: format!("must be finite and >= 0, got {delta_tau}"),
            });
        }
        Ok(Self { delta_tau })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessGroups {
    /// σΩ/(√2 c)
    pub y: f64,
    /// σΩ/c
    pub x_gap: f64,
    /// ΩΔτ
    pub t_gap: f64,
    /// d/σ, infinite in free space
    pub d_ratio: f64,
    /// v/c
    pub beta_v: f64,
    pub gamma_lorentz: f64,
}

/// Lorentz factor for a speed given as a fraction of c.
pub fn lorentz_gamma(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(Error::FasterThanLight { v: beta });
    }
    // (1 - β)(1 + β) keeps full precision as β → 1.
    Ok(1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

pub fn to_dimensionless(
    params: &DetectorParams,
    boundary: &Boundary,
    v: f64,
    window: &SwitchingWindow,
) -> Result<DimensionlessGroups> {
    if !(params.smearing_sigma > 0.0) {
        return Err(Error::InvalidSmearing { sigma: params.smearing_sigma });
    }
    let gamma_lorentz = lorentz_gamma(v)?;
    params.validate()?;
    boundary.validate()?;
    let sigma = params.smearing_sigma;
    let x_gap = sigma * params.gap_omega;
    let d_ratio = match boundary {
        Boundary::Free => f64::INFINITY,
        Boundary::Plate { distance, .. } => distance / sigma,
    };
    Ok(DimensionlessGroups {
        y: x_gap / std::f64::consts::SQRT_2,
        x_gap,
        t_gap: params.gap_omega * window.delta_tau,
        d_ratio,
        beta_v: v,
        gamma_lorentz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rest_frame_groups() {
        let p = DetectorParams::simple(1.0, 1.0).unwrap();
        let g = to_dimensionless(&p, &Boundary::Free, 0.0, &SwitchingWindow::new(1.0).unwrap()).unwrap();
        assert_eq!(g.beta_v, 0.0);
        assert_eq!(g.gamma_lorentz, 1.0);
        assert_relative_eq!(g.y, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-15);
    }

    #[test]
    fn gamma_at_three_fifths() {
        assert_relative_eq!(lorentz_gamma(0.6).unwrap(), 1.25, max_relative = 1e-15);
    }

    #[test]
    fn groups_reconstruct_inputs_up_to_scale() {
        let sigma = 2.5;
        let p = DetectorParams::simple(5.0 / sigma, sigma).unwrap();
        let b = Boundary::plate(50.0 * sigma, Complex64::new(1.0, 0.0)).unwrap();
        let w = SwitchingWindow::new(10.0 / p.gap_omega).unwrap();
        let g = to_dimensionless(&p, &b, 0.3, &w).unwrap();
        assert_relative_eq!(g.x_gap, 5.0, max_relative = 1e-14);
        assert_relative_eq!(g.t_gap, 10.0, max_relative = 1e-14);
        assert_relative_eq!(g.d_ratio, 50.0, max_relative = 1e-14);
        // Rebuild with σ = 1.
        let omega = g.x_gap;
        assert_relative_eq!(g.t_gap / omega, w.delta_tau / sigma, max_relative = 1e-14);
        assert_relative_eq!(g.d_ratio, 125.0 / sigma, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = DetectorParams::simple(1.0, 1.0).unwrap();
        let w = SwitchingWindow::new(1.0).unwrap();
        assert!(matches!(
            to_dimensionless(&p, &Boundary::Free, 1.0, &w),
            Err(Error::FasterThanLight { .. })
        ));
        let bad = DetectorParams { smearing_sigma: 0.0, ..p };
        assert!(matches!(
            to_dimensionless(&bad, &Boundary::Free, 0.1, &w),
            Err(Error::InvalidSmearing { .. })
        ));
    }

    #[test]
    fn state_validation_examples() {
        assert!(DetectorState::new(0.0, Complex64::new(0.0, 0.0)).is_ok());
        assert!(DetectorState::new(0.5, Complex64::new(0.5, 0.0)).is_ok());
        let err = DetectorState::new(0.1, Complex64::new(0.5, 0.0)).unwrap_err();
        match err {
            Error::NotDensityMatrix { constraint } => assert!(constraint.contains("positivity")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(DetectorState::new(1.2, Complex64::new(0.0, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn accepted_states_are_positive(a in 0.0f64..=1.0, r in 0.0f64..=1.0, phase in 0.0f64..6.3) {
            let b = Complex64::from_polar(r * (a * (1.0 - a)).sqrt(), phase);
            let s = DetectorState::new(a, b).unwrap();
            let ev = s.eigenvalues();
            prop_assert!(ev[0] >= -1e-12);
        }

        #[test]
        fn groups_are_scale_invariant(
            sigma in 0.1f64..10.0, omega in 0.1f64..10.0, d in 0.1f64..10.0,
            dt in 0.0f64..10.0, v in -0.99f64..0.99, scale in 0.01f64..100.0,
        ) {
            let g1 = to_dimensionless(
                &DetectorParams::simple(omega, sigma).unwrap(),
                &Boundary::plate(d, Complex64::new(0.5, 0.1)).unwrap(),
                v,
                &SwitchingWindow::new(dt).unwrap(),
            ).unwrap();
            let g2 = to_dimensionless(
                &DetectorParams::simple(omega / scale, sigma * scale).unwrap(),
                &Boundary::plate(d * scale, Complex64::new(0.5, 0.1)).unwrap(),
                v,
                &SwitchingWindow::new(dt * scale).unwrap(),
            ).unwrap();
            for (a, b) in [(g1.y, g2.y), (g1.x_gap, g2.x_gap), (g1.t_gap, g2.t_gap), (g1.d_ratio, g2.d_ratio)] {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
            }
        }
    }
}
