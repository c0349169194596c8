//! Lorentz generators, boosts, the boosted momentum k̃, and worldlines.
//!
//! Layout: `LorentzMatrix::entries[(mu, nu)]` maps comoving components (column
//! index ν) to lab components (row index μ), so `lab = entries · comoving` and
//! column 0 is the four-velocity. Metric signature (−, +, +, +).

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::lorentz_gamma;

fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Complex generators with Λ = exp(i[K·ζ + J·θ]).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub k: [Matrix4<Complex64>; 3],
    pub j: [Matrix4<Complex64>; 3],
}

impl GeneratorSet {
    pub fn new() -> Self {
        let mut k = [Matrix4::zeros(); 3];
        let mut j = [Matrix4::zeros(); 3];
        for a in 0..3 {
            k[a][(0, a + 1)] = Complex64::new(0.0, -1.0);
            k[a][(a + 1, 0)] = Complex64::new(0.0, -1.0);
            for b in 0..3 {
                for c in 0..3 {
                    j[a][(b + 1, c + 1)] = Complex64::new(0.0, -levi_civita(a, b, c));
                }
            }
        }
        Self { k, j }
    }

    /// Real matrix i[K·ζ + J·θ].
    pub fn real_combination(&self, zeta: [f64; 3], theta: [f64; 3]) -> Matrix4<f64> {
        let mut g = Matrix4::<Complex64>::zeros();
        for a in 0..3 {
            g += self.k[a] * Complex64::new(zeta[a], 0.0) + self.j[a] * Complex64::new(theta[a], 0.0);
        }
        (g * Complex64::i()).map(|z| z.re)
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix {
    pub entries: Matrix4<f64>,
}

impl LorentzMatrix {
    pub fn identity() -> Self {
        Self { entries: Matrix4::identity() }
    }

    /// Largest elementwise deviation of Λᵀ η Λ from η.
    pub fn metric_defect(&self) -> f64 {
        let eta = metric();
        (self.entries.transpose() * eta * self.entries - eta).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn apply(&self, x: &FourVector) -> FourVector {
        let v = self.entries * Vector4::from(x.components);
        FourVector::upper(v.into())
    }

    pub fn compose(&self, other: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix { entries: self.entries * other.entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexPosition {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub components: [f64; 4],
    pub index: IndexPosition,
}

impl FourVector {
    pub fn upper(components: [f64; 4]) -> Self {
        Self { components, index: IndexPosition::Upper }
    }

    pub fn lower(components: [f64; 4]) -> Self {
        Self { components, index: IndexPosition::Lower }
    }

    /// η_{μν} x^μ x^ν; the metric is its own inverse so this holds for either index position.
    pub fn minkowski_square(&self) -> f64 {
        let [t, x, y, z] = self.components;
        -t * t + x * x + y * y + z * z
    }

    /// Flip the index position with η.
    pub fn flip_index(&self) -> Self {
        let [t, x, y, z] = self.components;
        let index = match self.index {
            IndexPosition::Upper => IndexPosition::Lower,
            IndexPosition::Lower => IndexPosition::Upper,
        };
        Self { components: [-t, x, y, z], index }
    }

    pub fn time(&self) -> f64 {
        self.components[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.components[1], self.components[2], self.components[3]]
    }
}

pub type History = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

#[derive(Clone)]
pub enum TrajectorySpec {
    Inertial { v: [f64; 3] },
    General { zeta_of_t: History, theta_of_t: History, tau0: f64 },
}

impl fmt::Debug for TrajectorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectorySpec::Inertial { v } => f.debug_struct("Inertial").field("v", v).finish(),
            TrajectorySpec::General { tau0, .. } => f.debug_struct("General").field("tau0", tau0).finish_non_exhaustive(),
        }
    }
}

impl TrajectorySpec {
    pub fn inertial_x(v: f64) -> Result<Self> {
        lorentz_gamma(v)?;
        Ok(TrajectorySpec::Inertial { v: [v, 0.0, 0.0] })
    }

    /// Λ(τ) of the comoving frame.
    pub fn frame(&self, tau: f64) -> Result<LorentzMatrix> {
        match self {
            TrajectorySpec::Inertial { v } => boost_matrix(*v),
            TrajectorySpec::General { zeta_of_t, theta_of_t, .. } => instantaneous_lorentz(zeta_of_t(tau), theta_of_t(tau)),
        }
    }
}

pub fn boost_matrix(v: [f64; 3]) -> Result<LorentzMatrix> {
    let vv = Vector3::from(v);
    let speed = vv.norm();
    if !speed.is_finite() {
        return Err(Error::InvalidParameter { name: "v", reason: "non-finite velocity".into() });
    }
    let gamma = lorentz_gamma(speed)?;
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * v[i];
        m[(i + 1, 0)] = gamma * v[i];
        for j in 0..3 {
            if speed > 0.0 {
                m[(i + 1, j + 1)] += (gamma - 1.0) * v[i] * v[j] / (speed * speed);
            }
        }
    }
    Ok(LorentzMatrix { entries: m })
}

/// Λ = exp(i[K·ζ + J·θ]) by scaling and squaring (nalgebra's Padé-based `exp`).
/// θ acts in the passive sense: θ = ẑ·π/2 maps the comoving x axis to lab −y.
pub fn instantaneous_lorentz(zeta: [f64; 3], theta: [f64; 3]) -> Result<LorentzMatrix> {
    if zeta.iter().chain(theta.iter()).any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter { name: "zeta/theta", reason: "non-finite rapidity or rotation".into() });
    }
    let g = GeneratorSet::new().real_combination(zeta, theta);
    Ok(LorentzMatrix { entries: g.exp() })
}

/// k̃_ν = k_μ Λ^μ_ν for a null lab momentum with lower components (−|k|, k).
pub fn tilde_momentum_with(lambda: &LorentzMatrix, k: [f64; 3]) -> Result<FourVector> {
    let kn = Vector3::from(k).norm();
    if !(kn > 0.0) {
        return Err(Error::ZeroMomentum);
    }
    let lower = Vector4::new(-kn, k[0], k[1], k[2]);
    let kt = lambda.entries.transpose() * lower;
    Ok(FourVector::lower(kt.into()))
}

/// Boosted momentum for motion along x with speed v (units of c).
pub fn tilde_momentum(k: [f64; 3], v: f64) -> Result<FourVector> {
    let gamma = lorentz_gamma(v)?;
    let kn = Vector3::from(k).norm();
    if !(kn > 0.0) {
        return Err(Error::ZeroMomentum);
    }
    Ok(FourVector::lower([-gamma * (kn - v * k[0]), gamma * (k[0] - v * kn), k[1], k[2]]))
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrates dy/dτ = f(τ, y) from t0 to t1 with an embedded 5(4) pair.
pub(crate) fn dormand_prince<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    rtol: f64,
    atol: f64,
) -> Result<[f64; N]> {
    const MAX_STEPS: usize = 1_000_000;
    let mut t = t0;
    let mut y = y0;
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    let mut h = dir * (span.abs() / 100.0).min(0.1);
    let mut steps = 0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y)?;
    while (t1 - t) * dir > 0.0 {
        if steps >= MAX_STEPS || h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure { tau: t, step: h, steps });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                for (r, kr) in k.iter().enumerate().take(s) {
                    *yi += h * A[s][r] * kr[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys)?;
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for i in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            let scale = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (d5 - d4)).abs() / scale);
        }
        steps += 1;
        if err <= 1.0 {
            t += h;
            y = y5;
            k[0] = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(y)
}

const WORLDLINE_RTOL: f64 = 1e-12;
const WORLDLINE_ATOL: f64 = 1e-14;

/// Lab position of the comoving origin at proper time τ.
pub fn worldline(traj: &TrajectorySpec, tau: f64) -> Result<FourVector> {
    match traj {
        TrajectorySpec::Inertial { v } => {
            let speed = Vector3::from(*v).norm();
            let gamma = lorentz_gamma(speed)?;
            Ok(FourVector::upper([gamma * tau, gamma * v[0] * tau, gamma * v[1] * tau, gamma * v[2] * tau]))
        }
        TrajectorySpec::General { tau0, .. } => {
            if tau < *tau0 {
                return Err(Error::InvalidParameter { name: "tau", reason: format!("{tau} precedes tau0 = {tau0}") });
            }
            let x = dormand_prince(
                |s, _y: &[f64; 4]| {
                    let m = traj.frame(s)?.entries;
                    Ok([m[(0, 0)], m[(1, 0)], m[(2, 0)], m[(3, 0)]])
                },
                *tau0,
                tau,
                [0.0; 4],
                WORLDLINE_RTOL,
                WORLDLINE_ATOL,
            )?;
            Ok(FourVector::upper(x))
        }
    }
}

/// x^μ = x^μ_cm(τ) + Λ^μ_j(τ) ξ^j.
pub fn comoving_to_lab(traj: &TrajectorySpec, tau: f64, xi: [f64; 3]) -> Result<FourVector> {
    let cm = worldline(traj, tau)?;
    if xi == [0.0; 3] {
        return Ok(cm);
    }
    let m = traj.frame(tau)?.entries;
    let mut x = cm.components;
    for (mu, xm) in x.iter_mut().enumerate() {
        for j in 0..3 {
            *xm += m[(mu, j + 1)] * xi[j];
        }
    }
    Ok(FourVector::upper(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_diff(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn generator_algebra() {
        let g = GeneratorSet::new();
        for a in 0..3 {
            let kr = g.k[a] * Complex64::i();
            assert!((kr - kr.transpose()).camax() < 1e-15);
            assert!((g.j[a] + g.j[a].transpose()).camax() < 1e-15);
            for b in 0..3 {
                let comm = g.j[a] * g.j[b] - g.j[b] * g.j[a];
                let mut rhs = Matrix4::<Complex64>::zeros();
                for c in 0..3 {
                    rhs += g.j[c] * Complex64::new(0.0, levi_civita(a, b, c));
                }
                assert!((comm - rhs).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn boost_examples() {
        assert!(max_diff(&boost_matrix([0.0; 3]).unwrap().entries, &Matrix4::identity()) == 0.0);
        let b = boost_matrix([0.6, 0.0, 0.0]).unwrap();
        assert_relative_eq!(b.entries[(0, 0)], 1.25, max_relative = 1e-15);
        assert_relative_eq!(b.entries[(0, 1)], 0.75, max_relative = 1e-15);
        let v = [0.3, -0.4, 0.5];
        let back = boost_matrix(v).unwrap().compose(&boost_matrix([-0.3, 0.4, -0.5]).unwrap());
        assert!(max_diff(&back.entries, &Matrix4::identity()) < 1e-12);
        assert!(matches!(boost_matrix([0.8, 0.6, 0.0]), Err(Error::FasterThanLight { .. })));
    }

    #[test]
    fn exponential_examples() {
        let id = instantaneous_lorentz([0.0; 3], [0.0; 3]).unwrap();
        assert!(max_diff(&id.entries, &Matrix4::identity()) < 1e-15);
        let z = instantaneous_lorentz([0.0, 0.0, 0.6f64.atanh()], [0.0; 3]).unwrap();
        assert!(max_diff(&z.entries, &boost_matrix([0.0, 0.0, 0.6]).unwrap().entries) < 1e-10);
        let r = instantaneous_lorentz([0.0; 3], [0.0, 0.0, PI / 2.0]).unwrap().entries;
        assert_eq!(r[(0, 0)], 1.0);
        for i in 1..4 {
            assert!(r[(0, i)].abs() < 1e-15 && r[(i, 0)].abs() < 1e-15);
        }
        assert!((r[(1, 2)] - 1.0).abs() < 1e-14 && (r[(2, 1)] + 1.0).abs() < 1e-14);
        assert!((r[(3, 3)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tilde_momentum_examples() {
        let k = [0.3, -0.2, 0.9];
        let kt = tilde_momentum(k, 0.0).unwrap();
        let kn = (0.09f64 + 0.04 + 0.81).sqrt();
        assert_eq!(kt.components, [-kn, 0.3, -0.2, 0.9]);
        let kt = tilde_momentum([1.0, 0.0, 0.0], 0.6).unwrap();
        assert_relative_eq!(kt.components[0], -0.5, max_relative = 1e-15);
        assert_relative_eq!(kt.components[1], 0.5, max_relative = 1e-15);
        assert!(matches!(tilde_momentum([0.0; 3], 0.1), Err(Error::ZeroMomentum)));
    }

    #[test]
    fn hyperbolic_worldline() {
        let a = 0.7;
        let traj = TrajectorySpec::General {
            zeta_of_t: Arc::new(move |t| [a * t, 0.0, 0.0]),
            theta_of_t: Arc::new(|_| [0.0; 3]),
            tau0: 0.0,
        };
        for tau in [0.5, 2.0, 4.0] {
            let x = worldline(&traj, tau).unwrap().components;
            assert_relative_eq!(x[0], (a * tau).sinh() / a, max_relative = 1e-8);
            assert_relative_eq!(x[1], ((a * tau).cosh() - 1.0) / a, max_relative = 1e-8);
        }
    }

    #[test]
    fn rotating_frame_stays_at_rest() {
        let traj = TrajectorySpec::General {
            zeta_of_t: Arc::new(|_| [0.0; 3]),
            theta_of_t: Arc::new(|t| [0.3 * t, (2.0 * t).sin(), t * t]),
            tau0: 1.0,
        };
        let x = worldline(&traj, 3.5).unwrap().components;
        assert_relative_eq!(x[0], 2.5, max_relative = 1e-12);
        assert!(x[1].abs() + x[2].abs() + x[3].abs() < 1e-14);
    }

    #[test]
    fn inertial_worldline_and_comoving_points() {
        let traj = TrajectorySpec::inertial_x(0.0).unwrap();
        assert_eq!(worldline(&traj, 2.0).unwrap().components, [2.0, 0.0, 0.0, 0.0]);
        let v: f64 = 0.8;
        let g = 1.0 / (1.0 - v * v).sqrt();
        let traj = TrajectorySpec::inertial_x(v).unwrap();
        let (tau, xi) = (1.5, 0.4);
        let x = comoving_to_lab(&traj, tau, [xi, 0.0, 0.0]).unwrap().components;
        assert_relative_eq!(x[0], g * (tau + v * xi), max_relative = 1e-14);
        assert_relative_eq!(x[1], g * (xi + v * tau), max_relative = 1e-14);
        assert_eq!(comoving_to_lab(&traj, tau, [0.0; 3]).unwrap(), worldline(&traj, tau).unwrap());
    }

    #[test]
    fn interval_is_frame_independent() {
        let interval = |v: f64| {
            let traj = TrajectorySpec::inertial_x(v).unwrap();
            let a = comoving_to_lab(&traj, 0.7, [0.2, -1.0, 0.5]).unwrap().components;
            let b = comoving_to_lab(&traj, 0.7, [1.1, 0.3, -0.4]).unwrap().components;
            FourVector::upper([b[0] - a[0], b[1] - a[1], b[2] - a[2], b[3] - a[3]]).minkowski_square()
        };
        assert_relative_eq!(interval(0.1), interval(0.95), max_relative = 1e-12);
        assert!(interval(0.5) > 0.0);
    }

    proptest! {
        #[test]
        fn constructed_matrices_preserve_metric(
            z in prop::array::uniform3(-1.7f64..1.7),
            t in prop::array::uniform3(-1.8f64..1.8),
        ) {
            let l = instantaneous_lorentz(z, t).unwrap();
            let scale = l.entries.amax().max(1.0);
            prop_assert!(l.metric_defect() < 1e-12 * scale * scale);
            prop_assert!((l.determinant() - 1.0).abs() < 1e-10 * scale.powi(4));
            prop_assert!(l.entries[(0, 0)] >= 1.0 - 1e-12);
        }

        #[test]
        fn collinear_rapidities_add(r1 in -2.0f64..2.0, r2 in -2.0f64..2.0, dir in prop::array::uniform3(-1.0f64..1.0)) {
            let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
            prop_assume!(n > 0.1);
            let u = [dir[0] / n, dir[1] / n, dir[2] / n];
            let l1 = instantaneous_lorentz(u.map(|c| c * r1), [0.0; 3]).unwrap();
            let l2 = instantaneous_lorentz(u.map(|c| c * r2), [0.0; 3]).unwrap();
            let l12 = instantaneous_lorentz(u.map(|c| c * (r1 + r2)), [0.0; 3]).unwrap();
            let scale = l12.entries.amax();
            prop_assert!(max_diff(&l1.compose(&l2).entries, &l12.entries) < 1e-10 * scale);
        }

        #[test]
        fn tilde_momentum_is_null_and_matches_contraction(
            k in prop::array::uniform3(-5.0f64..5.0),
            v in -0.99f64..0.99,
        ) {
            prop_assume!(k.iter().map(|c| c * c).sum::<f64>() > 1e-6);
            let kt = tilde_momentum(k, v).unwrap();
            let kn2: f64 = kt.components[0] * kt.components[0];
            prop_assert!(kt.minkowski_square().abs() < 1e-12 * kn2);
            let via = tilde_momentum_with(&boost_matrix([v, 0.0, 0.0]).unwrap(), k).unwrap();
            for i in 0..4 {
                prop_assert!((via.components[i] - kt.components[i]).abs() < 1e-12 * kn2.sqrt());
            }
            let lab = FourVector::lower([-(k[0]*k[0]+k[1]*k[1]+k[2]*k[2]).sqrt(), k[0], k[1], k[2]]).flip_index();
            let moved = boost_matrix([v, 0.0, 0.0]).unwrap().apply(&lab);
            prop_assert!(moved.minkowski_square().abs() < 1e-12 * kn2);
        }
    }
}
