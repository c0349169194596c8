//! Acceptance checks run by the `verify` command and the acceptance test target.
//! Each check returns a report rather than panicking so callers can print every
//! line before deciding the exit status.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    angular_integral, angular_limit_c, asymptote, meijer_reduced, pointlike_contact_limit, AngularKind, AngularLimitKind, ComponentKind,
    Contribution, Distance, MeijerKind, RegimeKey, StateKind, TimeRegime, VelocityRegime,
};
use crate::correlator::{image_wightman_k, kernel_wightman_k, ModeLabel};
use crate::error::{Error, Result};
use crate::force::{force_free, force_free_channel, force_free_reduced_ground, force_plate, ForceComponents, Regime};
use crate::lorentz::FourVector;
use crate::params::{lorentz_gamma, Boundary, DetectorParams, DetectorState, SwitchingWindow};
use crate::quadrature::ToleranceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Fast => &[1, 5, 9, 10, 12],
            Suite::Full => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: measured {:.6e}, target {:.6e}, tolerance {:.1e}; {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.target,
            self.tolerance,
            self.details
        )
    }
}

fn report(id: u8, name: &str, measured: f64, target: f64, tolerance: f64, pass: bool, details: String) -> CriterionReport {
    CriterionReport { id, name: name.to_string(), measured, target, tolerance, pass, details }
}

fn tol() -> ToleranceSpec {
    ToleranceSpec { rel_tol: 1e-10, abs_tol: 0.0, max_evals: 20_000_000 }
}

fn gap_params(sigma_omega: f64) -> Result<DetectorParams> {
    DetectorParams::simple(sigma_omega, 1.0)
}

fn unit_params() -> Result<DetectorParams> {
    gap_params(1.0)
}

fn window(t: f64) -> Result<SwitchingWindow> {
    SwitchingWindow::new(t)
}

fn plate(d: f64, r: Complex64) -> Result<Boundary> {
    Boundary::plate(d, r)
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    match id {
        1 => dual_formulation(),
        2 => free_short_time(),
        3 => free_long_time_envelope(),
        4 => excited_long_time_constant(),
        5 => relativistic_suppression(),
        6 => small_distance_casimir(),
        7 => pointlike_consistency(),
        8 => friction_factorization(),
        9 => coherence_independence(),
        10 => transverse_symmetry(),
        11 => angular_limits(),
        12 => correlator_forms(),
        13 => meijer_limits(),
        14 => large_distance_oscillations(),
        _ => Err(Error::InvalidParameter { name: "criterion", reason: format!("no criterion {id}") }),
    }
}

/// Runs the suite; a criterion that errors is reported as a failure.
pub fn run_suite(suite: Suite) -> Vec<CriterionReport> {
    suite
        .criteria()
        .iter()
        .map(|&id| run_criterion(id).unwrap_or_else(|e| report(id, "evaluation error", f64::NAN, f64::NAN, f64::NAN, false, e.to_string())))
        .collect()
}

fn dual_formulation() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for v in [0.1, 0.5, 0.9] {
        for t in [0.1, 1.0, 10.0] {
            for so in [0.5, 1.0, 5.0] {
                let p = gap_params(so)?;
                let w = window(t / so)?;
                let f = force_free(&p, &DetectorState::ground(), v, &w, Regime::FiniteTime, &tol())?;
                let r = force_free_reduced_ground(&p, v, &w, &tol())?;
                worst = worst.max(rel(f.x(), r.value));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(report(
        1,
        "free-space 3-D vs reduced integral",
        worst,
        0.0,
        1e-4,
        worst <= 1e-4 && secs <= 60.0,
        format!("27 grid points, max relative difference, {secs:.2} s"),
    ))
}

fn free_short_time() -> Result<CriterionReport> {
    let p = unit_params()?;
    let w = window(1e-3)?;
    let v = 0.5;
    let key_g = RegimeKey::new(StateKind::Ground, ComponentKind::FrictionX, TimeRegime::Short, Distance::FreeSpace, VelocityRegime::Any, Contribution::Total)?;
    let key_e = RegimeKey { state: StateKind::Excited, ..key_g };
    let g = force_free(&p, &DetectorState::ground(), v, &w, Regime::FiniteTime, &tol())?.x() / asymptote(key_g, &p, v, 0.0, Complex64::default(), &w)?;
    let e = force_free(&p, &DetectorState::excited(), v, &w, Regime::FiniteTime, &tol())?.x() / asymptote(key_e, &p, v, 0.0, Complex64::default(), &w)?;
    let worst = if (g - 1.0).abs() > (e - 1.0).abs() { g } else { e };
    Ok(report(2, "free-space short-time asymptote", worst, 1.0, 0.02, (0.98..=1.02).contains(&g) && (0.98..=1.02).contains(&e), format!("ground {g:.6}, excited {e:.6}")))
}

/// Oscillation peaks of |F_x| located on a grid and refined by a parabola
/// through the three samples around each maximum.
fn free_long_time_envelope() -> Result<CriterionReport> {
    let p = unit_params()?;
    let v = 0.5;
    let tol = ToleranceSpec { rel_tol: 1e-8, ..tol() };
    let step: f64 = 0.05;
    let n = ((300.0 - 30.0) / step).round() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| 30.0 + step * i as f64).collect();
    let fs = ts
        .iter()
        .map(|&t| Ok(force_free_channel(&p, 1.0, v, &window(t)?, Regime::FiniteTime, &tol)?.x().abs()))
        .collect::<Result<Vec<f64>>>()?;
    let mut peaks = Vec::new();
    for i in 1..fs.len() - 1 {
        if fs[i] > fs[i - 1] && fs[i] >= fs[i + 1] {
            let (a, b, c) = (fs[i - 1].ln(), fs[i].ln(), fs[i + 1].ln());
            let den = a - 2.0 * b + c;
            let off = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            let peak = b - 0.25 * (a - c) * off;
            peaks.push(((ts[i] + off * step).ln(), peak));
        }
    }
    let m = peaks.len() as f64;
    let (sx, sy) = peaks.iter().fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = peaks.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let slope = sxy / sxx;
    Ok(report(3, "free-space long-time envelope slope", slope, -3.0, 0.1, (slope + 3.0).abs() <= 0.1, format!("{} peaks over ΩΔτ ∈ [30, 300]", peaks.len())))
}

fn excited_long_time_constant() -> Result<CriterionReport> {
    let p = unit_params()?;
    let (v, w) = (0.5, window(100.0)?);
    let e = force_free(&p, &DetectorState::excited(), v, &w, Regime::FiniteTime, &tol())?.x();
    let g = force_free(&p, &DetectorState::ground(), v, &w, Regime::FiniteTime, &tol())?.x();
    let target = -lorentz_gamma(v)? * v * (-0.5f64).exp() / (2.0 * PI);
    let ratio = (e + g) / target;
    Ok(report(4, "excited long-time constant", ratio, 1.0, 0.02, (ratio - 1.0).abs() <= 0.02, format!("F_e + F_g = {:.6e}", e + g)))
}

fn relativistic_suppression() -> Result<CriterionReport> {
    let p = unit_params()?;
    let b = plate(50.0, Complex64::new(1.0, 0.0))?;
    let w = window(0.0)?;
    let fast = force_plate(&p, &DetectorState::ground(), 0.999, &b, &w, Regime::LongTime, &tol())?.total.z();
    let slow = force_plate(&p, &DetectorState::ground(), 0.001, &b, &w, Regime::LongTime, &tol())?.total.z();
    let ratio = fast / slow;
    Ok(report(
        5,
        "plate Casimir high/low velocity ratio",
        ratio,
        0.5,
        0.05,
        (ratio / 0.5 - 1.0).abs() <= 0.05,
        format!("F_z(0.999) = {fast:.6e}, F_z(0.001) = {slow:.6e}"),
    ))
}

fn small_distance_casimir() -> Result<CriterionReport> {
    let p = unit_params()?;
    let (d, v, r) = (0.01, 0.999, Complex64::new(1.0, 0.0));
    let w = window(0.0)?;
    let f = force_plate(&p, &DetectorState::ground(), v, &plate(d, r)?, &w, Regime::LongTime, &tol())?.total.z();
    let key = RegimeKey::new(StateKind::Ground, ComponentKind::CasimirZ, TimeRegime::Long, Distance::SmallD, VelocityRegime::Any, Contribution::Total)?;
    let ratio = f / asymptote(key, &p, v, d, r, &w)?;
    Ok(report(6, "plate ground small-d long-time Casimir", ratio, 1.0, 0.03, (ratio - 1.0).abs() <= 0.03, format!("F_z = {f:.6e}")))
}

fn pointlike_consistency() -> Result<CriterionReport> {
    let p = unit_params()?;
    let r = Complex64::new(1.0, 0.0);
    let w = window(0.0)?;
    let key = RegimeKey::new(StateKind::Ground, ComponentKind::CasimirZ, TimeRegime::Long, Distance::Pointlike, VelocityRegime::SmallV, Contribution::Total)?;
    let d_far = 50.0;
    let far = asymptote(key, &p, 0.001, d_far, r, &w)? / (-1.0 / (8.0 * PI * PI * d_far.powi(3)));
    let d_near = 0.5e-3;
    let near = asymptote(key, &p, 0.001, d_near, r, &w)? / pointlike_contact_limit(&p, d_near, r);
    let worst = if (far - 1.0).abs() > (near - 1.0).abs() { far } else { near };
    Ok(report(7, "pointlike closed-form limits", worst, 1.0, 0.02, (far - 1.0).abs() <= 0.02 && (near - 1.0).abs() <= 0.02, format!("x = 100: {far:.6}, x = 1e-3: {near:.6}")))
}

fn friction_factorization() -> Result<CriterionReport> {
    let p = unit_params()?;
    let vs = [0.1, 0.5, 0.9, 0.999];
    let spread = |vals: &[f64]| {
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        (hi - lo).abs() / lo.abs().max(hi.abs())
    };
    let w = window(1.0)?;
    let free: Vec<f64> = vs
        .iter()
        .map(|&v| Ok(force_free(&p, &DetectorState::ground(), v, &w, Regime::FiniteTime, &tol())?.x() / (lorentz_gamma(v)? * v)))
        .collect::<Result<_>>()?;
    let free_spread = spread(&free);
    let r = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let mut plate_spread: f64 = 0.0;
    for (dt, regime) in [(1e-3, Regime::FiniteTime), (0.0, Regime::LongTime)] {
        for d in [0.01, 50.0] {
            let vals: Vec<f64> = vs
                .iter()
                .map(|&v| Ok(force_plate(&p, &DetectorState::ground(), v, &plate(d, r)?, &window(dt)?, regime, &tol())?.total.x() / (lorentz_gamma(v)? * v)))
                .collect::<Result<_>>()?;
            plate_spread = plate_spread.max(spread(&vals));
        }
    }
    Ok(report(
        8,
        "friction factorization F_x/(γv)",
        plate_spread,
        0.0,
        0.01,
        free_spread <= 1e-12 && plate_spread <= 0.01,
        format!("free-space spread {free_spread:.2e} (limit 1e-12), plate spread over four corners {plate_spread:.2e}"),
    ))
}

fn coherence_independence() -> Result<CriterionReport> {
    let p = unit_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let a = 0.3;
    let w = window(1.0)?;
    let b = plate(2.0, Complex64::new(0.8, 0.3))?;
    let reference = |s: &DetectorState| -> Result<(ForceComponents, ForceComponents)> {
        Ok((force_free(&p, s, 0.4, &w, Regime::FiniteTime, &tol())?, force_plate(&p, s, 0.4, &b, &w, Regime::FiniteTime, &tol())?.total))
    };
    let base = reference(&DetectorState::new(a, Complex64::default())?)?;
    let bound = (a * (1.0 - a)).sqrt();
    let mut mismatches = 0;
    for _ in 0..20 {
        let c = Complex64::from_polar(rng.random_range(0.0..bound), rng.random_range(-PI..PI));
        let out = reference(&DetectorState::new(a, c)?)?;
        if out.0.f.map(f64::to_bits) != base.0.f.map(f64::to_bits) || out.1.f.map(f64::to_bits) != base.1.f.map(f64::to_bits) {
            mismatches += 1;
        }
    }
    Ok(report(9, "coherence independence", mismatches as f64, 0.0, 0.0, mismatches == 0, "20 random coherences at a = 0.3, bitwise comparison".into()))
}

fn transverse_symmetry() -> Result<CriterionReport> {
    let p = unit_params()?;
    let r = Complex64::new(0.6, 0.5);
    let mut worst: f64 = 0.0;
    let mut check = |f: &ForceComponents| worst = worst.max(f.y().abs() / (f.x().abs() + f.z().abs()).max(f64::MIN_POSITIVE));
    for st in [DetectorState::ground(), DetectorState::excited()] {
        check(&force_free(&p, &st, 0.7, &window(2.0)?, Regime::FiniteTime, &tol())?);
        for (dt, regime) in [(2.0, Regime::FiniteTime), (0.0, Regime::LongTime)] {
            for d in [0.3, 5.0] {
                let f = force_plate(&p, &st, 0.7, &plate(d, r)?, &window(dt)?, regime, &tol())?;
                check(&f.total);
                check(&f.delta);
            }
        }
    }
    Ok(report(10, "transverse component F_y", worst, 0.0, 1e-8, worst <= 1e-8, "max |F_y|/(|F_x| + |F_z|) over free and plate runs".into()))
}

fn angular_limits() -> Result<CriterionReport> {
    let t = tol();
    let (v, dt) = (0.999, 50.0);
    let r0 = angular_integral(AngularKind::I0, v, dt, &t)? / angular_limit_c(AngularLimitKind::C0, v, dt)?;
    let r1 = angular_integral(AngularKind::I1, v, dt, &t)? / angular_limit_c(AngularLimitKind::C1, v, dt)?;
    let (vs, small) = (0.9, 1e-3);
    let g = lorentz_gamma(vs)?;
    let s0 = angular_integral(AngularKind::I0, vs, small, &t)? / (2.0 * vs * g.powi(4));
    let s1 = angular_integral(AngularKind::I1, vs, small, &t)? / (4.0 / 3.0 * g.powi(3) * small);
    let pass = (r0 - 1.0).abs() <= 1e-3 && (s0 - 1.0).abs() <= 0.01 && (s1 - 1.0).abs() <= 0.01;
    Ok(report(
        11,
        "angular integrals vs large/small-argument forms",
        r0,
        1.0,
        1e-3,
        pass,
        format!("I0/C0 = {r0:.6}; small-argument I0 {s0:.6}, I1 {s1:.6}; I1/C1 = {r1:.6} (not asserted, see notes)"),
    ))
}

fn correlator_forms() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let k = ModeLabel::new([rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)])?;
        let d = rng.random_range(0.1..5.0);
        let mut point = || FourVector::upper([rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..d)]);
        let (r0, r1) = (point(), point());
        let r = Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(-PI..PI));
        let image = image_wightman_k(&k, &r0, &r1, d, r)?;
        let kernel = kernel_wightman_k(&k, &r0, &r1, d, r)?;
        worst = worst.max((image - kernel).norm() / kernel.norm().max(f64::MIN_POSITIVE));
    }
    let k = ModeLabel::new([0.4, -1.3, 0.8])?;
    let on_plate = FourVector::upper([0.7, 0.2, -0.5, 2.0]);
    let dirichlet = image_wightman_k(&k, &FourVector::upper([0.1, 0.3, 0.2, -1.0]), &on_plate, 2.0, Complex64::new(1.0, 0.0))?;
    Ok(report(
        12,
        "image vs kernel correlator forms",
        worst,
        0.0,
        1e-12,
        worst <= 1e-12 && dirichlet == Complex64::default(),
        format!("200 random samples; Dirichlet value on the plate {dirichlet}"),
    ))
}

fn meijer_limits() -> Result<CriterionReport> {
    let mut ratios = Vec::new();
    for x in [1e-3, 30.0] {
        let y = x / SQRT_2;
        let (f_lim, c_lim) = if x < 1.0 {
            (-1.0 / (PI * x * x), -1.0 / ((2.0 * PI).sqrt() * x.powi(3)))
        } else {
            (1.0 / ((2.0 * PI).sqrt() * x.powi(3)), 2.0 / (PI * x.powi(4)))
        };
        ratios.push(meijer_reduced(MeijerKind::Friction, y)? / f_lim);
        ratios.push(meijer_reduced(MeijerKind::Casimir, y)? / c_lim);
    }
    let worst = ratios.iter().copied().fold(1.0f64, |w, r| if (r - 1.0).abs() > (w - 1.0).abs() { r } else { w });
    Ok(report(
        13,
        "Meijer-G limits",
        worst,
        1.0,
        0.02,
        ratios.iter().all(|r| (r - 1.0).abs() <= 0.02),
        format!(
            "σΩ = 1e-3: friction {:.5}, casimir {:.5}; σΩ = 30: friction {:.5}, casimir {:.5}",
            ratios[0], ratios[1], ratios[2], ratios[3]
        ),
    ))
}

fn large_distance_oscillations() -> Result<CriterionReport> {
    let p = unit_params()?;
    let r = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let (v, w) = (0.5, window(0.0)?);
    let mut worst: f64 = 1.0;
    let mut lines = Vec::new();
    for phase in [PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0] {
        let d = (32.0 * PI + phase) / 2.0;
        let f = force_plate(&p, &DetectorState::excited(), v, &plate(d, r)?, &w, Regime::LongTime, &tol())?;
        for (comp, num_pv, num_delta) in [(ComponentKind::FrictionX, f.principal.x(), f.delta.x()), (ComponentKind::CasimirZ, f.principal.z(), f.delta.z())] {
            let k = |c| RegimeKey::new(StateKind::Excited, comp, TimeRegime::Long, Distance::LargeD, VelocityRegime::Any, c);
            let pv = num_pv / asymptote(k(Contribution::Pv)?, &p, v, d, r, &w)?;
            let delta = num_delta / asymptote(k(Contribution::Delta)?, &p, v, d, r, &w)?;
            for ratio in [pv, delta] {
                if (ratio - 1.0).abs() > (worst - 1.0).abs() {
                    worst = ratio;
                }
            }
            lines.push(format!("2dΩ mod 2π = {phase:.3} {comp:?}: pv {pv:.4}, delta {delta:.4}"));
        }
    }
    Ok(report(14, "excited large-d oscillations", worst, 1.0, 0.05, (worst - 1.0).abs() <= 0.05, lines.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_and_unknown_ids() {
        assert_eq!(Suite::Fast.criteria(), &[1, 5, 9, 10, 12]);
        assert_eq!(Suite::Full.criteria().len(), 14);
        assert!(run_criterion(15).is_err());
    }

    #[test]
    fn report_line_names_the_outcome() {
        let r = report(3, "slope", -3.01, -3.0, 0.1, true, "ok".into());
        let line = r.to_string();
        assert!(line.starts_with("criterion  3 [PASS] slope"));
    }
}
