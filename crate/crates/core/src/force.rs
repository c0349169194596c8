//! Four-force on an inertial detector moving along x, in free space and in front
//! of a plate at distance d.
//!
//! Momentum integrals are written in the comoving momentum k̃ (|k̃| = s) and in σ
//! units: u = σs, x = σΩ_eff, T = Δτ/σ, D = d/σ, γ̃ = σΓ. With C = Ω_eff + s the
//! integrands depend on the angles only through the lower-index unit vector
//! ê_μ = k_μ/s = (−γ(1 + v cos θ′), γ(cos θ′ + v), sin θ′ sin φ, sin θ′ cos φ),
//! angles measured from the direction of motion.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{lorentz_gamma, Boundary, DetectorParams, DetectorState, SwitchingWindow};
use crate::quadrature::{
    integrate_1d_with_breaks, integrate_pv_with_breaks, integrate_sphere, onshell_surface_integral, panel_points,
    QuadratureResult, ToleranceSpec, Vec4,
};
use crate::special::{polar_moment_j1, sinc};

/// Beyond u = 14 the weight e^{−u²/2} is below 1e-42.
const U_CUT: f64 = 14.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FiniteTime,
    LongTime,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite" | "finite_time" => Ok(Regime::FiniteTime),
            "long" | "long_time" => Ok(Regime::LongTime),
            other => Err(Error::UnknownRegime(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    RawNatural,
    /// Divided by λ²Ω²γv/(2π²).
    FrictionUnits,
    /// Divided by λ²Ω².
    CasimirUnits,
}

impl Normalization {
    pub fn divisor(self, params: &DetectorParams, v: f64) -> Result<f64> {
        let l2w2 = params.coupling_lambda.powi(2) * params.gap_omega.powi(2);
        let d = match self {
            Normalization::RawNatural => 1.0,
            Normalization::FrictionUnits => l2w2 * lorentz_gamma(v)? * v / (2.0 * PI * PI),
            Normalization::CasimirUnits => l2w2,
        };
        if d == 0.0 || !d.is_finite() {
            return Err(Error::InvalidParameter {
                name: "normalization",
                reason: format!("{self:?} divisor vanishes for Ω = {}, v = {v}", params.gap_omega),
            });
        }
        Ok(d)
    }
}

/// Components are (t, x, y, z) with lower indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceComponents {
    pub f: [f64; 4],
    pub err: [f64; 4],
    pub normalization: Normalization,
}

impl ForceComponents {
    pub fn zero() -> Self {
        Self { f: [0.0; 4], err: [0.0; 4], normalization: Normalization::RawNatural }
    }

    pub fn t(&self) -> f64 {
        self.f[0]
    }
    pub fn x(&self) -> f64 {
        self.f[1]
    }
    pub fn y(&self) -> f64 {
        self.f[2]
    }
    pub fn z(&self) -> f64 {
        self.f[3]
    }

    /// Re-expresses a raw result in another normalization.
    pub fn normalized(&self, target: Normalization, params: &DetectorParams, v: f64) -> Result<Self> {
        let from = self.normalization.divisor(params, v)?;
        let to = target.divisor(params, v)?;
        let c = from / to;
        Ok(Self { f: self.f.map(|x| x * c), err: self.err.map(|e| e * c.abs()), normalization: target })
    }

    fn from_quad(q: QuadratureResult<Vec4>, scale: f64) -> Self {
        let e = q.error_estimate * scale.abs();
        Self { f: q.value.0.map(|x| x * scale), err: [e; 4], normalization: Normalization::RawNatural }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            f: std::array::from_fn(|i| self.f[i] + o.f[i]),
            err: std::array::from_fn(|i| self.err[i].hypot(o.err[i])),
            normalization: self.normalization,
        }
    }
}

/// Only the excited population enters at leading order; the coherence drops out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateWeight {
    pub a: f64,
}

impl From<&DetectorState> for StateWeight {
    fn from(s: &DetectorState) -> Self {
        Self { a: s.excited_pop }
    }
}

/// α = α_R + iα_I for one mode. At Γ > 0 both are Lorentzian; at Γ = 0
/// `pv_weight` is the principal-value kernel 1/C (0 on shell) and
/// `delta_weight` the coefficient −π sgn(Ω) of δ(C).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSplit {
    pub pv_weight: f64,
    pub delta_weight: f64,
    pub on_shell: bool,
    pub gamma: f64,
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Splits α for gap `omega` (negative for the excited channel) with C = Ω − ck̃₀.
/// The regulator follows the gap, Ω + iΓ → −(Ω + iΓ), so α_I carries sgn(Ω).
pub fn alpha_split(omega: f64, ck0_tilde: f64, gamma: f64) -> AlphaSplit {
    let c = omega - ck0_tilde;
    let on_shell = c == 0.0;
    if gamma > 0.0 {
        let den = gamma * gamma + c * c;
        AlphaSplit { pv_weight: c / den, delta_weight: -sign(omega) * gamma / den, on_shell, gamma }
    } else {
        let pv_weight = if on_shell { 0.0 } else { 1.0 / c };
        AlphaSplit { pv_weight, delta_weight: -PI * sign(omega), on_shell, gamma: 0.0 }
    }
}

/// Gaussian smearing weight e^{−σ²|k̃|²/2}.
pub fn gaussian_smearing_ft(k_tilde: [f64; 3], sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidSmearing { sigma });
    }
    let k2: f64 = k_tilde.iter().map(|k| k * k).sum();
    Ok((-0.5 * sigma * sigma * k2).exp())
}

/// β = iα(e^{−iΔτ(ω − ck̃₀)} − 1) with α = 1/(ω − ck̃₀), written as Δτ·φ(z),
/// φ(z) = i(e^{−iz} − 1)/z, so the resonant limit is Δτ.
pub fn beta_factor(omega_eff: Complex64, ck0_tilde: f64, delta_tau: f64) -> Complex64 {
    let z = (omega_eff - ck0_tilde) * delta_tau;
    let i = Complex64::i();
    let phi = if z.norm() < 1e-3 {
        // i(e^{−iz} − 1)/z = 1 − iz/2 − z²/6 + iz³/24 + …
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..8 {
            term *= -i * z / (n as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        i * ((-i * z).exp() - 1.0) / z
    };
    phi * delta_tau
}

/// Per-mode plate integrand 2A sin²(ΔτC/2) + B sin(ΔτC), with V = e^{2idk_z}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateIntegrandPieces {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub v: Complex64,
}

/// A = −α_I P_R − α_R P_I and B = α_I P_I − α_R P_R with P = R·V.
pub fn plate_integrand_pieces(alpha_r: f64, alpha_i: f64, r: Complex64, kz: f64, d: f64, c: f64) -> PlateIntegrandPieces {
    let v = Complex64::from_polar(1.0, 2.0 * d * kz);
    let p = r * v;
    PlateIntegrandPieces { a: -alpha_i * p.re - alpha_r * p.im, b: alpha_i * p.im - alpha_r * p.re, c, v }
}

/// Both plate pieces and their sum. In the long-time regime at Γ = 0 `delta`
/// holds the on-shell channel; elsewhere the split follows α_R / α_I.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateForce {
    pub total: ForceComponents,
    pub principal: ForceComponents,
    pub delta: ForceComponents,
}

/// Weighted sum (1 − a)F_g + aF_e.
pub fn mix_force(a: f64, ground: &ForceComponents, excited: &ForceComponents) -> Result<ForceComponents> {
    if ground.normalization != excited.normalization {
        return Err(Error::NormalizationMismatch);
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter { name: "a", reason: format!("excited population must lie in [0, 1], got {a}") });
    }
    let b = 1.0 - a;
    Ok(ForceComponents {
        f: std::array::from_fn(|i| b * ground.f[i] + a * excited.f[i]),
        err: std::array::from_fn(|i| (b * ground.err[i]).hypot(a * excited.err[i])),
        normalization: ground.normalization,
    })
}

fn mix_plate(a: f64, g: &PlateForce, e: &PlateForce) -> Result<PlateForce> {
    Ok(PlateForce {
        total: mix_force(a, &g.total, &e.total)?,
        principal: mix_force(a, &g.principal, &e.principal)?,
        delta: mix_force(a, &g.delta, &e.delta)?,
    })
}

/// Scaled inputs shared by all channels.
struct Scaled {
    x: f64,
    t: f64,
    gt: f64,
    gamma: f64,
    v: f64,
    sigma: f64,
    lambda2: f64,
}

fn scaled(params: &DetectorParams, omega_eff: f64, v: f64, window: &SwitchingWindow) -> Result<Scaled> {
    params.validate()?;
    let gamma = lorentz_gamma(v)?;
    SwitchingWindow::new(window.delta_tau)?;
    let sigma = params.smearing_sigma;
    Ok(Scaled {
        x: sigma * omega_eff,
        t: window.delta_tau / sigma,
        gt: sigma * params.regulator_gamma,
        gamma,
        v,
        sigma,
        lambda2: params.coupling_lambda * params.coupling_lambda,
    })
}

fn weight(u: f64) -> f64 {
    (-0.5 * u * u).exp()
}

/// Breakpoints for a radial integral: uniform panels up to U_CUT, extra points
/// around a Lorentzian peak of width `gt` at `pole`, then +∞.
fn radial_breaks(panel: f64, pole: Option<(f64, f64)>) -> Vec<f64> {
    let mut pts = panel_points(0.0, U_CUT, panel);
    if let Some((p, gt)) = pole {
        for k in [-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0] {
            let q = p + k * gt;
            if q > 0.0 && q < U_CUT {
                pts.push(q);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.push(f64::INFINITY);
    pts
}

fn lorentz_pole(s: &Scaled) -> Option<(f64, f64)> {
    (s.gt > 0.0 && s.x < 0.0).then_some((-s.x, s.gt))
}

fn unit_vector(s: &Scaled, theta: f64, phi: f64) -> Vec4 {
    let (st, ct) = theta.sin_cos();
    Vec4([-s.gamma * (1.0 + s.v * ct), s.gamma * (ct + s.v), st * phi.sin(), st * phi.cos()])
}

/// Sign of the gap channel with sgn(0) = +1.
fn gap_sign(x: f64) -> f64 {
    sign(x)
}

/// Free-space force for a single gap channel: Ω_eff = Ω (ground) or −Ω (excited).
pub fn force_free_channel(
    params: &DetectorParams,
    omega_eff: f64,
    v: f64,
    window: &SwitchingWindow,
    regime: Regime,
    tol: &ToleranceSpec,
) -> Result<ForceComponents> {
    let s = scaled(params, omega_eff, v, window)?;
    let moments = integrate_sphere(|th, ph| unit_vector(&s, th, ph), tol)?.checked()?;
    let (x, t, gt) = (s.x, s.t, s.gt);
    let pole = lorentz_pole(&s);
    let delta_w = -gap_sign(x) * gt;
    // Re β(u) in σ units.
    let radial = match (regime, gt > 0.0) {
        (Regime::FiniteTime, false) => {
            integrate_1d_with_breaks(|u: f64| u * u * weight(u) * t * sinc(t * (x + u)), &radial_breaks(PI / (t + 1.0), None), tol)?
        }
        (Regime::FiniteTime, true) => integrate_1d_with_breaks(
            |u: f64| {
                let c = x + u;
                let den = gt * gt + c * c;
                let (s1, s2) = ((t * c).sin(), 2.0 * (0.5 * t * c).sin().powi(2));
                u * u * weight(u) * (c * s1 + delta_w * s2) / den
            },
            &radial_breaks(PI / (t + 1.0), pole),
            tol,
        )?,
        (Regime::LongTime, true) => {
            integrate_1d_with_breaks(|u: f64| u * u * weight(u) * delta_w / (gt * gt + (x + u).powi(2)), &radial_breaks(1.0, pole), tol)?
        }
        (Regime::LongTime, false) => {
            let value = if x < 0.0 { PI * x * x * weight(x) } else { 0.0 };
            QuadratureResult { value, error_estimate: 0.0, evaluations: 1, converged: true }
        }
    };
    let radial = radial.checked()?;
    let pref = -s.lambda2 / (8.0 * PI.powi(3) * s.sigma * s.sigma);
    let m = moments.value.0;
    let f = std::array::from_fn(|i| pref * m[i] * radial.value);
    let err = std::array::from_fn(|i| pref.abs() * (m[i].abs() * radial.error_estimate + moments.error_estimate * radial.value.abs()));
    Ok(ForceComponents { f, err, normalization: Normalization::RawNatural })
}

fn check_state(state: &DetectorState) -> Result<StateWeight> {
    crate::params::validate_state(*state)?;
    Ok(StateWeight::from(state))
}

/// Free-space force for a diagonal-population state, raw natural units.
pub fn force_free(
    params: &DetectorParams,
    state: &DetectorState,
    v: f64,
    window: &SwitchingWindow,
    regime: Regime,
    tol: &ToleranceSpec,
) -> Result<ForceComponents> {
    let w = check_state(state)?;
    let om = params.gap_omega;
    if w.a == 0.0 {
        return force_free_channel(params, om, v, window, regime, tol);
    }
    if w.a == 1.0 {
        return force_free_channel(params, -om, v, window, regime, tol);
    }
    let g = force_free_channel(params, om, v, window, regime, tol)?;
    let e = force_free_channel(params, -om, v, window, regime, tol)?;
    mix_force(w.a, &g, &e)
}

/// Ground-state F_x from the angle-integrated form
/// −γv(λ²/2π²)∫₀^∞ dκ e^{−σ²κ²/2} κ² sin(Δτ(κ + Ω))/(κ + Ω).
pub fn force_free_reduced_ground(params: &DetectorParams, v: f64, window: &SwitchingWindow, tol: &ToleranceSpec) -> Result<QuadratureResult<f64>> {
    params.validate()?;
    let gamma = lorentz_gamma(v)?;
    SwitchingWindow::new(window.delta_tau)?;
    let (om, sigma, dt) = (params.gap_omega, params.smearing_sigma, window.delta_tau);
    let pref = -gamma * v * params.coupling_lambda.powi(2) / (2.0 * PI * PI);
    let k_cut = U_CUT / sigma;
    let mut pts = panel_points(0.0, k_cut, PI / (dt + sigma));
    pts.push(f64::INFINITY);
    let r = integrate_1d_with_breaks(|k: f64| (-0.5 * sigma * sigma * k * k).exp() * k * k * dt * sinc(dt * (k + om)), &pts, tol)?;
    Ok(QuadratureResult { value: pref * r.value, error_estimate: pref.abs() * r.error_estimate, ..r })
}

struct PlateGeom {
    d: f64,
    r: Complex64,
}

/// Closed-form angular moments of ê_μ·[X cos(2Du n_z) + Y sin(2Du n_z)].
fn plate_moments(s: &Scaled, g: &PlateGeom, u: f64, xc: f64, ys: f64) -> Vec4 {
    let a = 2.0 * g.d * u;
    let sc = 4.0 * PI * sinc(a) * xc;
    Vec4([-s.gamma * sc, s.gamma * s.v * sc, 0.0, 2.0 * PI * polar_moment_j1(a) * ys])
}

/// Plate correction for a single gap channel.
pub fn force_plate_channel(
    params: &DetectorParams,
    omega_eff: f64,
    v: f64,
    boundary: &Boundary,
    window: &SwitchingWindow,
    regime: Regime,
    tol: &ToleranceSpec,
) -> Result<PlateForce> {
    boundary.validate()?;
    let Boundary::Plate { distance, reflection } = *boundary else {
        return Err(Error::InvalidParameter { name: "boundary", reason: "plate force needs a plate".into() });
    };
    let s = scaled(params, omega_eff, v, window)?;
    let g = PlateGeom { d: distance / s.sigma, r: reflection };
    let pref = s.lambda2 / (8.0 * PI.powi(3) * s.sigma * s.sigma);
    let (x, t, gt) = (s.x, s.t, s.gt);
    let (rr, ri) = (g.r.re, g.r.im);
    let sg = gap_sign(x);
    let zero = ForceComponents::zero();
    let pole = lorentz_pole(&s);

    match (regime, gt > 0.0) {
        (Regime::FiniteTime, false) => {
            let breaks = radial_breaks(PI / (t + 2.0 * g.d + 1.0), None);
            let q = integrate_1d_with_breaks(
                |u: f64| {
                    let c = x + u;
                    let q1 = t * sinc(t * c);
                    let q2 = t * (0.5 * t * c).sin() * sinc(0.5 * t * c);
                    plate_moments(&s, &g, u, -ri * q2 - rr * q1, -rr * q2 + ri * q1) * (u * u * weight(u))
                },
                &breaks,
                tol,
            )?;
            let total = ForceComponents::from_quad(q.checked()?, pref);
            Ok(PlateForce { total, principal: total, delta: zero })
        }
        (regime, true) => {
            let long = regime == Regime::LongTime;
            let breaks = radial_breaks(if long { PI / (2.0 * g.d + 1.0) } else { PI / (t + 2.0 * g.d + 1.0) }, pole);
            let piece = |use_r: bool, use_i: bool| {
                integrate_1d_with_breaks(
                    |u: f64| {
                        let c = x + u;
                        let den = gt * gt + c * c;
                        let ar = if use_r { c / den } else { 0.0 };
                        let ai = if use_i { -sg * gt / den } else { 0.0 };
                        let (s1, s2) = if long { (0.0, 1.0) } else { ((t * c).sin(), 2.0 * (0.5 * t * c).sin().powi(2)) };
                        let xc = s2 * (-ai * rr - ar * ri) + s1 * (ai * ri - ar * rr);
                        let ys = s2 * (ai * ri - ar * rr) + s1 * (ai * rr + ar * ri);
                        plate_moments(&s, &g, u, xc, ys) * (u * u * weight(u))
                    },
                    &breaks,
                    tol,
                )
            };
            let principal = ForceComponents::from_quad(piece(true, false)?.checked()?, pref);
            let delta = ForceComponents::from_quad(piece(false, true)?.checked()?, pref);
            Ok(PlateForce { total: principal.add(&delta), principal, delta })
        }
        (Regime::LongTime, false) => {
            let panel = PI / (2.0 * g.d + 1.0);
            let f = |u: f64| plate_moments(&s, &g, u, -ri, -rr) * (u * u * weight(u));
            if x >= 0.0 {
                // Pole at u = −x ≤ 0: no principal part on the half line, no shell.
                let q = integrate_1d_with_breaks(|u: f64| f(u) * (1.0 / (u + x)), &radial_breaks(panel, None), tol)?;
                let total = ForceComponents::from_quad(q.checked()?, pref);
                return Ok(PlateForce { total, principal: total, delta: zero });
            }
            let us = -x;
            let mut breaks = panel_points(0.0, U_CUT.max(2.0 * us + 1.0), panel);
            breaks.retain(|&p| p > 0.0);
            let pv = integrate_pv_with_breaks(f, us, 0.0, f64::INFINITY, &breaks, tol)?;
            let principal = ForceComponents::from_quad(pv.checked()?, pref);
            let a = 2.0 * g.d * us;
            let w = weight(us);
            let sh = onshell_surface_integral(
                |th: f64, ph: f64| {
                    let e = unit_vector(&s, th, ph);
                    let nz = e.0[3];
                    e * (w * (ri * (a * nz).sin() - rr * (a * nz).cos()))
                },
                us,
                tol,
            )?;
            let delta = ForceComponents::from_quad(sh.checked()?, pref * (-PI * sg));
            Ok(PlateForce { total: principal.add(&delta), principal, delta })
        }
    }
}

/// Plate correction δF for a diagonal-population state, raw natural units.
pub fn force_plate(
    params: &DetectorParams,
    state: &DetectorState,
    v: f64,
    boundary: &Boundary,
    window: &SwitchingWindow,
    regime: Regime,
    tol: &ToleranceSpec,
) -> Result<PlateForce> {
    let w = check_state(state)?;
    let om = params.gap_omega;
    if w.a == 0.0 {
        return force_plate_channel(params, om, v, boundary, window, regime, tol);
    }
    if w.a == 1.0 {
        return force_plate_channel(params, -om, v, boundary, window, regime, tol);
    }
    let g = force_plate_channel(params, om, v, boundary, window, regime, tol)?;
    let e = force_plate_channel(params, -om, v, boundary, window, regime, tol)?;
    mix_plate(w.a, &g, &e)
}
