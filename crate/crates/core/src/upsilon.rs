//! The trajectory kernel Υ(Ω, τ) for one field mode.
//!
//! Υ = f̄*(τ) e^{−iΩτ} e^{ik·x(τ)} ∫_{τ₀}^{τ} e^{iΩτ′} e^{−ik·x(τ′)} f̄(τ′) dτ′ with
//! f̄(τ) = e^{−σ²|k̃(τ)|²/4} evaluated with the comoving momentum at that
//! proper time and k·x = −|k|x⁰ + k·x.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::ModeLabel;
use crate::error::{Error, Result};
use crate::force::{beta_factor, gaussian_smearing_ft};
use crate::lorentz::{dormand_prince, tilde_momentum, tilde_momentum_with, worldline, TrajectorySpec};
use crate::params::{DetectorParams, SwitchingWindow};

const RTOL: f64 = 1e-11;
const ATOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpsilonKernel {
    pub value: Complex64,
    pub k: ModeLabel,
    pub delta_tau: f64,
}

impl UpsilonKernel {
    pub fn inertial(params: &DetectorParams, v: f64, k: &ModeLabel, window: &SwitchingWindow) -> Result<Self> {
        Ok(Self { value: upsilon_inertial(params, v, k, window)?, k: *k, delta_tau: window.delta_tau })
    }
}

/// |f̄|²·β for motion along x; the gap enters without the regulator.
pub fn upsilon_inertial(params: &DetectorParams, v: f64, k: &ModeLabel, window: &SwitchingWindow) -> Result<Complex64> {
    params.validate()?;
    let kt = tilde_momentum(k.k, v)?;
    let w = gaussian_smearing_ft(kt.spatial(), params.smearing_sigma)?;
    Ok(w * beta_factor(Complex64::new(params.gap_omega, 0.0), kt.components[0], window.delta_tau))
}

fn smearing_factor(traj: &TrajectorySpec, k: &ModeLabel, sigma: f64, tau: f64) -> Result<f64> {
    let kt = tilde_momentum_with(&traj.frame(tau)?, k.k)?;
    let k2: f64 = kt.spatial().iter().map(|c| c * c).sum();
    Ok((-0.25 * sigma * sigma * k2).exp())
}

fn k_dot_x(k: &ModeLabel, x: &[f64]) -> f64 {
    -k.norm() * x[0] + k.k[0] * x[1] + k.k[1] * x[2] + k.k[2] * x[3]
}

/// Integrates the worldline and the τ′ integral together from τ₀ to τ.
pub fn upsilon_general(traj: &TrajectorySpec, params: &DetectorParams, k: &ModeLabel, tau: f64, tau0: f64) -> Result<Complex64> {
    params.validate()?;
    if !(tau >= tau0) {
        return Err(Error::InvalidParameter { name: "tau", reason: format!("{tau} precedes the switch-on time {tau0}") });
    }
    if tau == tau0 {
        return Ok(Complex64::default());
    }
    let (om, sigma) = (params.gap_omega, params.smearing_sigma);
    let x0 = worldline(traj, tau0)?.components;
    let y0 = [x0[0], x0[1], x0[2], x0[3], 0.0, 0.0];
    let y = dormand_prince(
        |s, y: &[f64; 6]| {
            let m = traj.frame(s)?.entries;
            let phase = om * s - k_dot_x(k, &y[..4]);
            let f = smearing_factor(traj, k, sigma, s)?;
            let (sn, cs) = phase.sin_cos();
            Ok([m[(0, 0)], m[(1, 0)], m[(2, 0)], m[(3, 0)], f * cs, f * sn])
        },
        tau0,
        tau,
        y0,
        RTOL,
        ATOL,
    )?;
    let outer = smearing_factor(traj, k, sigma, tau)? * Complex64::from_polar(1.0, -om * tau + k_dot_x(k, &y[..4]));
    Ok(outer * Complex64::new(y[4], y[5]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn unit() -> DetectorParams {
        DetectorParams::simple(1.0, 1.0).unwrap()
    }

    #[test]
    fn empty_window_is_zero() {
        let traj = TrajectorySpec::inertial_x(0.5).unwrap();
        let k = ModeLabel::new([0.3, 0.2, 0.1]).unwrap();
        assert_eq!(upsilon_general(&traj, &unit(), &k, 1.0, 1.0).unwrap(), Complex64::default());
        assert_eq!(upsilon_inertial(&unit(), 0.5, &k, &SwitchingWindow::new(0.0).unwrap()).unwrap(), Complex64::default());
    }

    #[test]
    fn inertial_reference_value() {
        // k = (1, 0, 0), v = 0.6: k̃₀ = −γ(1 − v) = −0.5, |k̃|² = 0.25.
        let k = ModeLabel::new([1.0, 0.0, 0.0]).unwrap();
        let u = upsilon_inertial(&unit(), 0.6, &k, &SwitchingWindow::new(2.0).unwrap()).unwrap();
        let c: f64 = 1.5;
        let want = (-0.125f64).exp() * Complex64::new((2.0 * c).sin(), (2.0 * c).cos() - 1.0) / c;
        assert!((u - want).norm() < 1e-15);
    }

    #[test]
    fn general_matches_inertial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let v = rng.random_range(-0.9..0.9);
            let k = ModeLabel::new([rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).unwrap();
            let dt = rng.random_range(0.1..5.0);
            let tau0 = rng.random_range(-2.0..2.0);
            let traj = TrajectorySpec::inertial_x(v).unwrap();
            let g = upsilon_general(&traj, &unit(), &k, tau0 + dt, tau0).unwrap();
            let i = upsilon_inertial(&unit(), v, &k, &SwitchingWindow::new(dt).unwrap()).unwrap();
            assert!((g - i).norm() <= 1e-8 * i.norm().max(1e-12), "{g} vs {i}");
        }
    }

    #[test]
    fn general_history_with_constant_rapidity_is_inertial() {
        let zeta = 0.4f64;
        let traj = TrajectorySpec::General {
            zeta_of_t: Arc::new(move |_| [zeta, 0.0, 0.0]),
            theta_of_t: Arc::new(|_| [0.0; 3]),
            tau0: 0.0,
        };
        let k = ModeLabel::new([0.5, -0.4, 0.9]).unwrap();
        let g = upsilon_general(&traj, &unit(), &k, 2.5, 0.0).unwrap();
        let i = upsilon_inertial(&unit(), zeta.tanh(), &k, &SwitchingWindow::new(2.5).unwrap()).unwrap();
        assert!((g - i).norm() <= 1e-8 * i.norm());
    }

    #[test]
    fn azimuthal_invariance() {
        let w = SwitchingWindow::new(1.7).unwrap();
        let (kx, kp) = (0.8, 1.1);
        let base = upsilon_inertial(&unit(), 0.7, &ModeLabel::new([kx, kp, 0.0]).unwrap(), &w).unwrap();
        for phi in [0.3, 1.0, 2.5, PI] {
            let k = ModeLabel::new([kx, kp * f64::cos(phi), kp * f64::sin(phi)]).unwrap();
            let u = upsilon_inertial(&unit(), 0.7, &k, &w).unwrap();
            assert!((u - base).norm() <= 1e-12 * base.norm());
        }
    }

    #[test]
    fn large_momentum_is_suppressed() {
        let traj = TrajectorySpec::inertial_x(0.3).unwrap();
        let k = ModeLabel::new([0.0, 12.0, 0.0]).unwrap();
        let g = upsilon_general(&traj, &unit(), &k, 1.0, 0.0).unwrap();
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn rejects_reversed_window() {
        let traj = TrajectorySpec::inertial_x(0.3).unwrap();
        let k = ModeLabel::new([1.0, 0.0, 0.0]).unwrap();
        assert!(upsilon_general(&traj, &unit(), &k, 0.0, 1.0).is_err());
    }
}
