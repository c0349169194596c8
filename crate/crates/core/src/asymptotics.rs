//! Closed-form limits of the force in free space and near the plate, the special
//! functions they use, and the angular integrals behind the large-distance forms.
//!
//! All formulas are in natural units; `window` supplies Δτ for the short- and
//! long-time free-space forms and the short-time plate forms.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{lorentz_gamma, DetectorParams, SwitchingWindow};
use crate::quadrature::{integrate_1d_with_breaks, integrate_pv_with_breaks, ToleranceSpec};
use crate::special;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Ground,
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    FrictionX,
    CasimirZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRegime {
    Short,
    Long,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    SmallD,
    LargeD,
    Pointlike,
    /// No plate; used by the free-space limits.
    FreeSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityRegime {
    SmallV,
    HighV,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contribution {
    Total,
    Pv,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegimeKey {
    pub state: StateKind,
    pub component: ComponentKind,
    pub time: TimeRegime,
    pub distance: Distance,
    pub velocity: VelocityRegime,
    pub contribution: Contribution,
}

use Contribution as Ct;
use Distance as Di;
use StateKind as St;
use TimeRegime as Ti;
use VelocityRegime as Ve;

const fn key(state: St, component: ComponentKind, time: Ti, distance: Di, velocity: Ve, contribution: Ct) -> RegimeKey {
    RegimeKey { state, component, time, distance, velocity, contribution }
}

const FX: ComponentKind = ComponentKind::FrictionX;
const CZ: ComponentKind = ComponentKind::CasimirZ;

/// Every tabulated limit, in catalogue order.
pub const CATALOGUE: [RegimeKey; 34] = [
    key(St::Ground, FX, Ti::Short, Di::FreeSpace, Ve::Any, Ct::Total),
    key(St::Ground, FX, Ti::Long, Di::FreeSpace, Ve::Any, Ct::Total),
    key(St::Excited, FX, Ti::Short, Di::FreeSpace, Ve::Any, Ct::Total),
    key(St::Excited, FX, Ti::Long, Di::FreeSpace, Ve::Any, Ct::Total),
    key(St::Ground, FX, Ti::Short, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Ground, FX, Ti::Short, Di::LargeD, Ve::Any, Ct::Total),
    key(St::Ground, FX, Ti::Long, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Ground, FX, Ti::Long, Di::LargeD, Ve::Any, Ct::Total),
    key(St::Ground, CZ, Ti::Short, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Ground, CZ, Ti::Short, Di::LargeD, Ve::Any, Ct::Total),
    key(St::Ground, CZ, Ti::Long, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Ground, CZ, Ti::Long, Di::LargeD, Ve::SmallV, Ct::Total),
    key(St::Ground, CZ, Ti::Long, Di::LargeD, Ve::HighV, Ct::Total),
    key(St::Ground, CZ, Ti::Long, Di::Pointlike, Ve::SmallV, Ct::Total),
    key(St::Excited, FX, Ti::Short, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Excited, FX, Ti::Short, Di::LargeD, Ve::Any, Ct::Total),
    key(St::Excited, FX, Ti::Short, Di::SmallD, Ve::Any, Ct::Pv),
    key(St::Excited, FX, Ti::Short, Di::LargeD, Ve::Any, Ct::Pv),
    key(St::Excited, FX, Ti::Short, Di::SmallD, Ve::Any, Ct::Delta),
    key(St::Excited, FX, Ti::Short, Di::LargeD, Ve::Any, Ct::Delta),
    key(St::Excited, FX, Ti::Long, Di::SmallD, Ve::Any, Ct::Pv),
    key(St::Excited, FX, Ti::Long, Di::LargeD, Ve::Any, Ct::Pv),
    key(St::Excited, FX, Ti::Long, Di::SmallD, Ve::Any, Ct::Delta),
    key(St::Excited, FX, Ti::Long, Di::LargeD, Ve::Any, Ct::Delta),
    key(St::Excited, CZ, Ti::Short, Di::SmallD, Ve::Any, Ct::Total),
    key(St::Excited, CZ, Ti::Short, Di::LargeD, Ve::Any, Ct::Total),
    key(St::Excited, CZ, Ti::Short, Di::SmallD, Ve::Any, Ct::Pv),
    key(St::Excited, CZ, Ti::Short, Di::LargeD, Ve::Any, Ct::Pv),
    key(St::Excited, CZ, Ti::Short, Di::SmallD, Ve::Any, Ct::Delta),
    key(St::Excited, CZ, Ti::Short, Di::LargeD, Ve::Any, Ct::Delta),
    key(St::Excited, CZ, Ti::Long, Di::SmallD, Ve::Any, Ct::Pv),
    key(St::Excited, CZ, Ti::Long, Di::LargeD, Ve::Any, Ct::Pv),
    key(St::Excited, CZ, Ti::Long, Di::SmallD, Ve::Any, Ct::Delta),
    key(St::Excited, CZ, Ti::Long, Di::LargeD, Ve::Any, Ct::Delta),
];

impl RegimeKey {
    pub fn new(
        state: StateKind,
        component: ComponentKind,
        time: TimeRegime,
        distance: Distance,
        velocity: VelocityRegime,
        contribution: Contribution,
    ) -> Result<Self> {
        let k = key(state, component, time, distance, velocity, contribution);
        if CATALOGUE.contains(&k) {
            Ok(k)
        } else {
            Err(Error::UnknownRegime(k.to_string()))
        }
    }

    /// Keys describing the given state, component and time regime, in or out of
    /// free space.
    pub fn applicable(state: StateKind, component: ComponentKind, time: TimeRegime, free_space: bool) -> Vec<RegimeKey> {
        CATALOGUE
            .iter()
            .copied()
            .filter(|k| k.state == state && k.component == component && k.time == time && (k.distance == Di::FreeSpace) == free_space)
            .collect()
    }
}

/// Variant name in snake case, matching the serde names.
fn snake<T: fmt::Debug>(t: &T) -> String {
    let mut out = String::new();
    for (i, ch) in format!("{t:?}").chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.push(ch.to_ascii_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

impl fmt::Display for RegimeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}/{}/{}",
            snake(&self.state),
            snake(&self.component),
            snake(&self.time),
            snake(&self.distance),
            snake(&self.velocity),
            snake(&self.contribution)
        )
    }
}

impl FromStr for RegimeKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CATALOGUE.iter().copied().find(|k| k.to_string() == s).ok_or_else(|| Error::UnknownRegime(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFn {
    Dawson,
    ExpintEi,
    Erfi,
    Si,
    Ci,
    BesselJ0,
    BesselJ1,
    BesselJ2,
    Erf,
}

pub fn special_eval(f: SpecialFn, x: f64) -> Result<f64> {
    Ok(match f {
        SpecialFn::Dawson => special::dawson(x),
        SpecialFn::ExpintEi => special::expint_ei(x)?,
        SpecialFn::Erfi => special::erfi(x),
        SpecialFn::Si => special::si(x),
        SpecialFn::Ci => special::ci(x)?,
        SpecialFn::BesselJ0 => special::bessel_j0(x),
        SpecialFn::BesselJ1 => special::bessel_j1(x),
        SpecialFn::BesselJ2 => special::bessel_j2(x),
        SpecialFn::Erf => special::erf(x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeijerKind {
    Friction,
    Casimir,
}

/// The two Meijer-G combinations of the small-distance excited PV forces, as the
/// PV integrals they resum, with x = σΩ = √2·y:
/// friction −(1/πx²) PV∫₀^∞ s²e^{−s²/2}/(s − x) ds,
/// casimir −(1/πx³) PV∫₀^∞ s³e^{−s²/2}/(s − x) ds.
pub fn meijer_reduced(kind: MeijerKind, y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::DomainError { function: "meijer_reduced", x: y });
    }
    let x = SQRT_2 * y;
    let n = match kind {
        MeijerKind::Friction => 2,
        MeijerKind::Casimir => 3,
    };
    let tol = ToleranceSpec::new(1e-12, 0.0, 2_000_000)?;
    let f = |s: f64| s.powi(n) * (-0.5 * s * s).exp();
    // Past u = 40 + x the integrand is below 1e-300.
    let upper = x + 40.0;
    let breaks: Vec<f64> = (1..40).map(|k| k as f64).filter(|&b| b < upper && (b - x).abs() > 1e-3).collect();
    let pv = integrate_pv_with_breaks(f, x, 0.0, upper, &breaks, &tol)?.checked()?;
    Ok(-pv.value / (PI * x.powi(n)))
}

/// Contact limit of the pointlike Casimir form: −R_R λ²/(16π d²).
pub fn pointlike_contact_limit(params: &DetectorParams, d: f64, r: Complex64) -> f64 {
    -r.re * params.coupling_lambda.powi(2) / (16.0 * PI * d * d)
}

/// Pointlike Casimir form with x = 2dΩ and SI(x) = π − 2Si(x).
fn pointlike(params: &DetectorParams, d: f64, r: Complex64) -> Result<f64> {
    let x = 2.0 * d * params.gap_omega;
    let si = PI - 2.0 * special::si(x);
    let (s, c) = x.sin_cos();
    let bracket = si * (x * s + c) - 2.0 * special::ci(x)? * (x * c - s);
    Ok(-r.re * params.coupling_lambda.powi(2) / (16.0 * PI * PI * d * d) * bracket)
}

/// Closed-form value of the limit named by `key`.
pub fn asymptote(key: RegimeKey, params: &DetectorParams, v: f64, d: f64, r: Complex64, window: &SwitchingWindow) -> Result<f64> {
    let key = RegimeKey::new(key.state, key.component, key.time, key.distance, key.velocity, key.contribution)?;
    params.validate()?;
    let gamma = lorentz_gamma(v)?;
    let gv = gamma * v;
    let (om, sg, l2, dt) = (params.gap_omega, params.smearing_sigma, params.coupling_lambda.powi(2), window.delta_tau);
    let (rr, ri) = (r.re, r.im);
    let y = sg * om / SQRT_2;
    let x = sg * om;
    let gauss = (-0.5 * x * x).exp();
    let sqrt_pi = PI.sqrt();
    let two_pi_32 = (2.0 * PI).powf(1.5);

    let value = match (key.state, key.component, key.time, key.distance, key.contribution) {
        (_, FX, Ti::Short, Di::FreeSpace, _) => -gv * l2 * dt * (-dt * dt / (2.0 * sg * sg)).exp() / (2.0 * (2.0 * PI.powi(3)).sqrt() * sg.powi(3)),
        (St::Ground, FX, Ti::Long, Di::FreeSpace, _) => gv * l2 * (dt * om).cos() / (PI * PI * om * dt.powi(3)),
        (St::Excited, FX, Ti::Long, Di::FreeSpace, _) => {
            -gv * l2 / (2.0 * PI) * (om * om * gauss + 2.0 / PI * (dt * om).cos() / (om * dt.powi(3)))
        }

        (St::Ground, FX, Ti::Short, Di::SmallD, _) => {
            -gv * dt * dt * l2 * ri * (4.0 + (2.0 * PI).sqrt() * x) / (8.0 * PI * PI * sg.powi(4)) - gv * dt * l2 * rr / (two_pi_32 * sg.powi(3))
        }
        (St::Ground, FX, Ti::Short, Di::LargeD, _) => {
            gv * dt * dt * l2 * ri / (32.0 * PI * PI * d.powi(4)) - gv * dt * l2 * rr * (-2.0 * d * d / (sg * sg)).exp() / (two_pi_32 * sg.powi(3))
        }
        (St::Ground, FX, Ti::Long, Di::SmallD, _) => {
            let y2 = y * y;
            let bracket = 1.0 - sqrt_pi * y + y2 * (2.0 * sqrt_pi * special::dawson(y) - (-y2).exp() * special::expint_ei(y2)?);
            -(ri * l2 / (2.0 * PI * PI * sg * sg)) * gv * bracket
        }
        (St::Ground, FX, Ti::Long, Di::LargeD, _) => -gv * l2 * ri / (16.0 * PI * PI * om * om * d.powi(4)),

        (St::Ground, CZ, Ti::Short, Di::SmallD, _) => {
            -d * dt * dt * rr * l2 * (3.0 * (2.0 * PI).sqrt() + 4.0 * x) / (12.0 * PI * PI * sg.powi(5)) + 2.0 * d * dt * l2 * ri / (3.0 * PI * PI * sg.powi(4))
        }
        (St::Ground, CZ, Ti::Short, Di::LargeD, _) => {
            -7.0 * om * dt * dt * l2 * rr / (128.0 * PI * PI * d.powi(3)) + 7.0 * dt * l2 * ri / (64.0 * PI * PI * d.powi(3))
        }
        (St::Ground, CZ, Ti::Long, Di::SmallD, _) => {
            let y2 = y * y;
            let bracket = sqrt_pi / 2.0 - y + sqrt_pi * y2 + y.powi(3) * (-y2).exp() * (special::expint_ei(y2)? - PI * special::erfi(y));
            -(SQRT_2 * d * rr * l2 / (3.0 * PI * PI * sg.powi(3))) * bracket
        }
        (St::Ground, CZ, Ti::Long, Di::LargeD, _) if key.velocity == Ve::HighV => -rr * l2 / (16.0 * PI * PI * om * d.powi(3)),
        (St::Ground, CZ, Ti::Long, Di::LargeD, _) => -rr * l2 / (8.0 * PI * PI * om * d.powi(3)),
        (St::Ground, CZ, Ti::Long, Di::Pointlike, _) => pointlike(params, d, r)?,

        (St::Excited, _, Ti::Short, _, Ct::Delta) => 0.0,
        (St::Excited, FX, Ti::Short, Di::SmallD, _) => {
            -gv * l2 / (2.0 * PI * PI * sg.powi(3)) * (rr * dt * (PI / 2.0).sqrt() + ri * dt * dt / sg * (1.0 - (PI / 2.0).sqrt() * x / 2.0))
        }
        (St::Excited, FX, Ti::Short, Di::LargeD, _) => {
            -gv * l2 / (4.0 * PI * PI * sg.powi(3))
                * (rr * dt * (2.0 * PI).sqrt() * (-2.0 * d * d / (sg * sg)).exp() - ri * dt * dt * sg.powi(3) / (8.0 * d.powi(4)))
        }
        (St::Excited, FX, Ti::Long, Di::SmallD, Ct::Delta) => -gv * om * om * l2 * rr * gauss / (2.0 * PI),
        (St::Excited, FX, Ti::Long, Di::SmallD, _) => gv * om * om * l2 * ri * meijer_reduced(MeijerKind::Friction, y)? / (2.0 * PI),
        (St::Excited, FX, Ti::Long, Di::LargeD, Ct::Delta) => -gv * om * l2 * rr * gauss * (2.0 * d * om).sin() / (4.0 * PI * d),
        (St::Excited, FX, Ti::Long, Di::LargeD, _) => -gv * om * l2 * ri * (2.0 * d * om).cos() / (4.0 * PI * d),

        (St::Excited, CZ, Ti::Short, Di::SmallD, _) => {
            d * l2 / (3.0 * PI * PI * sg.powi(4)) * (2.0 * ri * dt - rr * dt * dt / sg * (0.75 * (2.0 * PI).sqrt() - x))
        }
        (St::Excited, CZ, Ti::Short, Di::LargeD, _) => -7.0 * l2 / (64.0 * PI * PI * d.powi(3)) * (ri * dt + rr * om * dt * dt / 2.0),
        (St::Excited, CZ, Ti::Long, Di::SmallD, Ct::Delta) => om.powi(3) * d * l2 * ri * gauss / (3.0 * PI),
        (St::Excited, CZ, Ti::Long, Di::SmallD, _) => om.powi(3) * d * l2 * rr * meijer_reduced(MeijerKind::Casimir, y)? / (3.0 * PI),
        (St::Excited, CZ, Ti::Long, Di::LargeD, Ct::Delta) => -om * ri * l2 * gauss * (2.0 * d * om).cos() / (4.0 * PI * d),
        (St::Excited, CZ, Ti::Long, Di::LargeD, _) => -om * rr * l2 * (2.0 * d * om).sin() / (4.0 * PI * d),

        _ => return Err(Error::UnknownRegime(key.to_string())),
    };
    Ok(value)
}

/// Human-readable reasons why the inputs sit outside the key's validity corner.
/// Formulas are still evaluated; callers decide what to do with the notes.
pub fn validity_warnings(key: &RegimeKey, params: &DetectorParams, v: f64, d: f64, window: &SwitchingWindow) -> Vec<String> {
    let mut w = Vec::new();
    let (om, sg) = (params.gap_omega, params.smearing_sigma);
    let t = om * window.delta_tau;
    match key.time {
        Ti::Short if t > 0.1 || window.delta_tau > 0.1 * sg => w.push(format!("short-time form used at ΩΔτ = {t}, Δτ/σ = {}", window.delta_tau / sg)),
        Ti::Long if key.distance == Di::FreeSpace && t < 10.0 => w.push(format!("long-time form used at ΩΔτ = {t}")),
        _ => {}
    }
    match key.distance {
        Di::SmallD if d > 0.1 * sg => w.push(format!("small-distance form used at d/σ = {}", d / sg)),
        Di::LargeD if d < 10.0 * sg => w.push(format!("large-distance form used at d/σ = {}", d / sg)),
        Di::Pointlike if d < 10.0 * sg => w.push(format!("pointlike form used at d/σ = {}", d / sg)),
        _ => {}
    }
    match key.velocity {
        Ve::SmallV if v.abs() > 0.1 => w.push(format!("small-velocity form used at v = {v}")),
        Ve::HighV if v.abs() < 0.9 => w.push(format!("high-velocity form used at v = {v}")),
        _ => {}
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngularKind {
    I0,
    I1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngularLimitKind {
    C0,
    C1,
}

/// I₀ = ∫₀^π sinθ cosθ (1 − v cosθ)⁻³ J₀(2dt sinθ/(γ(1 − v cosθ))) dθ and
/// I₁ = ∫₀^π sin²θ (1 − v cosθ)⁻³ J₁(same) dθ, by lab-angle quadrature with
/// breakpoints at the images of uniformly spaced comoving angles.
pub fn angular_integral(kind: AngularKind, v: f64, dt: f64, tol: &ToleranceSpec) -> Result<f64> {
    let gamma = lorentz_gamma(v)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be finite and > 0, got {dt}") });
    }
    let n = (4.0 * dt + 8.0).ceil() as usize;
    let mut breaks: Vec<f64> = (0..=n)
        .map(|j| {
            let cp = (PI * j as f64 / n as f64).cos();
            ((cp + v) / (1.0 + v * cp)).clamp(-1.0, 1.0).acos()
        })
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks[0] = 0.0;
    *breaks.last_mut().unwrap() = PI;
    let r = integrate_1d_with_breaks(
        |th: f64| {
            let (s, c) = th.sin_cos();
            let den = 1.0 - v * c;
            let a = 2.0 * dt * s / (gamma * den);
            match kind {
                AngularKind::I0 => s * c / den.powi(3) * special::bessel_j0(a),
                AngularKind::I1 => s * s / den.powi(3) * special::bessel_j1(a),
            }
        },
        &breaks,
        tol,
    )?
    .checked()?;
    Ok(r.value)
}

/// Large-argument forms C₀ = γ⁴v sin(2dt)/dt and C₁ = −γ³cos(2dt)/dt.
pub fn angular_limit_c(kind: AngularLimitKind, v: f64, dt: f64) -> Result<f64> {
    let gamma = lorentz_gamma(v)?;
    Ok(match kind {
        AngularLimitKind::C0 => gamma.powi(4) * v * (2.0 * dt).sin() / dt,
        AngularLimitKind::C1 => -gamma.powi(3) * (2.0 * dt).cos() / dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> DetectorParams {
        DetectorParams::simple(1.0, 1.0).unwrap()
    }

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-12, 0.0, 2_000_000).unwrap()
    }

    #[test]
    fn catalogue_keys_are_unique_and_parse() {
        for (i, k) in CATALOGUE.iter().enumerate() {
            assert!(!CATALOGUE[..i].contains(k), "{k}");
            assert_eq!(k.to_string().parse::<RegimeKey>().unwrap(), *k);
        }
        assert!(RegimeKey::new(St::Ground, FX, Ti::Long, Di::Pointlike, Ve::Any, Ct::Total).is_err());
        assert!(RegimeKey::new(St::Ground, CZ, Ti::Long, Di::SmallD, Ve::Any, Ct::Delta).is_err());
    }

    #[test]
    fn every_key_evaluates() {
        let w = SwitchingWindow::new(0.01).unwrap();
        for k in CATALOGUE {
            let v = asymptote(k, &unit(), 0.5, 2.0, Complex64::new(0.7, 0.4), &w).unwrap();
            assert!(v.is_finite(), "{k}");
        }
    }

    #[test]
    fn special_examples() {
        assert_eq!(special_eval(SpecialFn::Dawson, 0.0).unwrap(), 0.0);
        assert_relative_eq!(special_eval(SpecialFn::Si, 1e6).unwrap(), PI / 2.0, max_relative = 1e-5);
        assert_relative_eq!(special_eval(SpecialFn::ExpintEi, 1.0).unwrap(), 1.895_117_816_355_936_8, max_relative = 1e-14);
        assert_relative_eq!(special_eval(SpecialFn::BesselJ1, 1e-4).unwrap() / 5e-5, 1.0, max_relative = 1e-8);
        assert!(matches!(special_eval(SpecialFn::Ci, 0.0), Err(Error::DomainError { .. })));
    }

    #[test]
    fn meijer_quoted_limits() {
        let x = 1e-3;
        let f = meijer_reduced(MeijerKind::Friction, x / SQRT_2).unwrap();
        assert_relative_eq!(f / (-1.0 / (PI * x * x)), 1.0, max_relative = 0.02);
        let c = meijer_reduced(MeijerKind::Casimir, x / SQRT_2).unwrap();
        assert_relative_eq!(c / (-1.0 / ((2.0 * PI).sqrt() * x.powi(3))), 1.0, max_relative = 0.02);
        let x = 30.0;
        let f = meijer_reduced(MeijerKind::Friction, x / SQRT_2).unwrap();
        // Leading order only; the next term is O(1/x).
        assert_relative_eq!(f / (1.0 / ((2.0 * PI).sqrt() * x.powi(3))), 1.056_782_301_872_261, max_relative = 1e-9);
    }

    #[test]
    fn meijer_casimir_reference() {
        // mpmath subtraction at 30 digits; ε-excision agrees to 1e-8 at ε = 1e-8.
        assert_relative_eq!(meijer_reduced(MeijerKind::Casimir, 1.0).unwrap(), MEIJER_CASIMIR_Y1, max_relative = 1e-10);
    }

    const MEIJER_CASIMIR_Y1: f64 = -0.167_759_448_965_639_97;

    #[test]
    fn meijer_has_no_spurious_oscillation() {
        // One sign change and one extremum between the two limits.
        for kind in [MeijerKind::Friction, MeijerKind::Casimir] {
            let vals: Vec<f64> = (0..100).map(|i| 1e-3 * 30_000f64.powf(i as f64 / 99.0)).map(|y| meijer_reduced(kind, y).unwrap()).collect();
            let sign_changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
            let turns = vals.windows(3).filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0).count();
            assert_eq!(sign_changes, 1, "{kind:?}");
            assert_eq!(turns, 1, "{kind:?}");
        }
    }

    #[test]
    fn pointlike_limits() {
        let r = Complex64::new(1.0, 0.0);
        let x: f64 = 1e-3;
        let d = x / 2.0;
        let key = RegimeKey::new(St::Ground, CZ, Ti::Long, Di::Pointlike, Ve::SmallV, Ct::Total).unwrap();
        let w = SwitchingWindow::new(0.0).unwrap();
        let p = asymptote(key, &unit(), 0.001, d, r, &w).unwrap();
        assert_relative_eq!(p / pointlike_contact_limit(&unit(), d, r), 1.0, max_relative = 5e-3);
        let d = 50.0;
        let p = asymptote(key, &unit(), 0.001, d, r, &w).unwrap();
        assert_relative_eq!(p / (-1.0 / (8.0 * PI * PI * d.powi(3))), 1.0, max_relative = 0.02);
    }

    #[test]
    fn large_distance_casimir_example() {
        let key = RegimeKey::new(St::Ground, CZ, Ti::Long, Di::LargeD, Ve::SmallV, Ct::Total).unwrap();
        let p = DetectorParams::new(2.0, 1.0, 0.5, 0.0).unwrap();
        let f = asymptote(key, &p, 0.001, 40.0, Complex64::new(0.8, 0.3), &SwitchingWindow::new(0.0).unwrap()).unwrap();
        assert_relative_eq!(f, -0.8 * 0.25 / (8.0 * PI * PI * 2.0 * 64_000.0), max_relative = 1e-14);
    }

    #[test]
    fn imaginary_only_forms_vanish_for_real_r() {
        let w = SwitchingWindow::new(0.01).unwrap();
        let keys = [
            key(St::Ground, FX, Ti::Long, Di::SmallD, Ve::Any, Ct::Total),
            key(St::Ground, FX, Ti::Long, Di::LargeD, Ve::Any, Ct::Total),
            key(St::Excited, FX, Ti::Long, Di::SmallD, Ve::Any, Ct::Pv),
            key(St::Excited, FX, Ti::Long, Di::LargeD, Ve::Any, Ct::Pv),
            key(St::Excited, CZ, Ti::Long, Di::SmallD, Ve::Any, Ct::Delta),
            key(St::Excited, CZ, Ti::Long, Di::LargeD, Ve::Any, Ct::Delta),
        ];
        for k in keys {
            assert_eq!(asymptote(k, &unit(), 0.5, 2.0, Complex64::new(0.9, 0.0), &w).unwrap(), 0.0, "{k}");
        }
    }

    #[test]
    fn parity_in_velocity() {
        let w = SwitchingWindow::new(0.01).unwrap();
        for k in CATALOGUE {
            let a = asymptote(k, &unit(), 0.6, 2.0, Complex64::new(0.7, 0.4), &w).unwrap();
            let b = asymptote(k, &unit(), -0.6, 2.0, Complex64::new(0.7, 0.4), &w).unwrap();
            match k.component {
                FX => assert_eq!(a, -b, "{k}"),
                CZ => assert_eq!(a, b, "{k}"),
            }
        }
    }

    #[test]
    fn angular_small_argument_limits() {
        let (v, dt): (f64, f64) = (0.9, 1e-3);
        let g = 1.0 / ((1.0 - v) * (1.0 + v)).sqrt();
        let i0 = angular_integral(AngularKind::I0, v, dt, &tol()).unwrap();
        let i1 = angular_integral(AngularKind::I1, v, dt, &tol()).unwrap();
        assert_relative_eq!(i0 / (2.0 * v * g.powi(4)), 1.0, max_relative = 0.01);
        assert_relative_eq!(i1 / (4.0 / 3.0 * g.powi(3) * dt), 1.0, max_relative = 0.01);
    }

    #[test]
    fn angular_small_velocity() {
        let i0 = angular_integral(AngularKind::I0, 0.01, 3.0, &tol()).unwrap();
        assert_relative_eq!(i0 / (0.01 * 6.0f64.sin() / 3.0), 1.0, max_relative = 0.01);
    }

    #[test]
    fn angular_reference_values() {
        // mpmath adaptive quadrature; 10⁵-node Gauss–Legendre (scipy) agrees to 2e-11.
        assert_relative_eq!(angular_integral(AngularKind::I0, 0.5, 2.0, &tol()).unwrap(), I0_REF, max_relative = 1e-10);
        assert_relative_eq!(angular_integral(AngularKind::I1, 0.5, 2.0, &tol()).unwrap(), I1_REF, max_relative = 1e-10);
    }

    const I0_REF: f64 = -0.336_356_664_581_301_4;
    const I1_REF: f64 = 0.357_528_385_816_446_4;

    #[test]
    fn angular_large_argument() {
        let i0 = angular_integral(AngularKind::I0, 0.999, 50.0, &tol()).unwrap();
        let c0 = angular_limit_c(AngularLimitKind::C0, 0.999, 50.0).unwrap();
        assert_relative_eq!(i0 / c0, 1.0, max_relative = 1e-3);
        assert_eq!(angular_limit_c(AngularLimitKind::C0, 0.0, 5.0).unwrap(), 0.0);
        assert!(angular_limit_c(AngularLimitKind::C1, 0.3, PI / 4.0).unwrap().abs() < 1e-15);
    }
}
