//! Adaptive Gauss–Kronrod quadrature, Cauchy principal values, and product rules
//! on the unit sphere.
//!
//! All engines are deterministic: segments are refined in a fixed order and the
//! final sum is taken over segments sorted by their left endpoint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Four real components integrated together (e.g. the t, x, y, z parts of a force).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Vec4(pub [f64; 4]);

impl Add for Vec4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Vec4(self.0.map(|x| x * c))
    }
}

impl QuadValue for Vec4 {
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
    fn is_finite_value(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_evals: 2_000_000 }
    }
}

impl ToleranceSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_evals: usize) -> Result<Self> {
        let t = Self { rel_tol, abs_tol, max_evals };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter { name: "rel_tol", reason: format!("must be positive, got {}", self.rel_tol) });
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidParameter { name: "abs_tol", reason: format!("must be non-negative, got {}", self.abs_tol) });
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidParameter { name: "max_evals", reason: "must be at least 1".into() });
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> QuadratureResult<T> {
    /// Turns a non-converged result into `ToleranceNotMet`.
    pub fn checked(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::ToleranceNotMet {
                value: self.value.magnitude(),
                error_estimate: self.error_estimate,
                evaluations: self.evaluations,
            })
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> QuadratureResult<U> {
        QuadratureResult { value: f(self.value), error_estimate: self.error_estimate, evaluations: self.evaluations, converged: self.converged }
    }
}

// Kronrod 21-point abscissae; odd indices are the embedded 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_931_491_190,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_468,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    abs: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 21-point Kronrod panel on [a, b], returning (value, error estimate, ∫|f|).
fn gk21<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> Result<(T, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<T> {
        let y = f(x);
        if y.is_finite_value() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { x })
        }
    };
    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::default();
    let mut fv = [(T::default(), T::default()); 10];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[10];
    let mut abs = fc.magnitude() * WGK[10];
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
        abs += WGK[j] * (f1.magnitude() + f2.magnitude());
    }
    let h = half.abs();
    let value = kronrod * half;
    let (asc, abs) = (asc * h, abs * h);
    let mut err = (value - gauss * half).magnitude();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    Ok((value, err, abs))
}

/// Globally adaptive bisection over the given initial segments.
fn adaptive<T: QuadValue>(f: &mut impl FnMut(f64) -> T, points: &[f64], tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    tol.validate()?;
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment<T>> = Vec::new();
    let mut evals = 0usize;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, error, abs) = gk21(f, w[0], w[1])?;
        evals += 21;
        heap.push(Segment { a: w[0], b: w[1], value, error, abs });
    }
    let total = |heap: &BinaryHeap<Segment<T>>, done: &[Segment<T>]| {
        let mut segs: Vec<&Segment<T>> = heap.iter().chain(done.iter()).collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut v = T::default();
        let (mut e, mut l1) = (0.0, 0.0);
        for s in segs {
            v = v + s.value;
            e += s.error;
            l1 += s.abs;
        }
        (v, e, l1)
    };
    let mut converged;
    loop {
        let (value, error, l1) = total(&heap, &done);
        // Cancellation below the rounding level of ∫|f| cannot be refined away,
        // so that state counts as converged with its honest error estimate.
        converged = error <= tol.target(value.magnitude()) || error <= 100.0 * f64::EPSILON * l1;
        if converged || heap.is_empty() || evals + 42 > tol.max_evals {
            return Ok(QuadratureResult { value, error_estimate: error, evaluations: evals.max(1), converged });
        }
        // Bisect a batch of the worst segments before re-summing.
        let batch = (heap.len() / 4).max(1);
        for _ in 0..batch {
            let Some(seg) = heap.pop() else { break };
            let mid = 0.5 * (seg.a + seg.b);
            if !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) || (seg.b - seg.a).abs() < 1e-14 * (seg.a.abs() + seg.b.abs()) {
                done.push(seg);
                continue;
            }
            let (v1, e1, l1) = gk21(f, seg.a, mid)?;
            let (v2, e2, l2) = gk21(f, mid, seg.b)?;
            evals += 42;
            heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1, abs: l1 });
            heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2, abs: l2 });
            if evals + 42 > tol.max_evals {
                break;
            }
        }
    }
}

/// ∫_a^b f(s) ds. `b` may be +∞, handled with s = a + t/(1 − t).
pub fn integrate_1d<T: QuadValue>(f: impl FnMut(f64) -> T, a: f64, b: f64, tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    integrate_1d_with_breaks(f, &[a, b], tol)
}

/// Like [`integrate_1d`] but starting from the segments delimited by `points`
/// (sorted ascending). Only the last point may be +∞.
pub fn integrate_1d_with_breaks<T: QuadValue>(mut f: impl FnMut(f64) -> T, points: &[f64], tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter { name: "points", reason: "need at least two points".into() });
    }
    let n = points.len();
    if points[..n - 1].iter().any(|p| !p.is_finite()) || points[n - 1].is_nan() {
        return Err(Error::InvalidParameter { name: "points", reason: "only the upper limit may be infinite".into() });
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter { name: "points", reason: "must be sorted ascending".into() });
    }
    if points[n - 1] == f64::INFINITY {
        let finite = &points[..n - 1];
        let a = finite[n - 2];
        // Map [a, ∞) to [0, 1) and shift so the mapped part sits after the finite ones.
        let offset = a;
        let mut g = |x: f64| {
            if x <= offset {
                f(x)
            } else {
                let t = x - offset;
                let u = 1.0 - t;
                f(a + t / u) * (1.0 / (u * u))
            }
        };
        let mut mapped = finite.to_vec();
        mapped.push(offset + 1.0);
        adaptive(&mut g, &mapped, tol)
    } else {
        adaptive(&mut f, points, tol)
    }
}

/// Breakpoints splitting [a, b] into panels no wider than `width`.
pub fn panel_points(a: f64, b: f64, width: f64) -> Vec<f64> {
    let n = (((b - a) / width).ceil() as usize).clamp(1, 1_000_000);
    (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect()
}

/// Cauchy principal value PV ∫_a^b f(s)/(s − pole) ds by subtraction:
/// ∫ [f(s) − f(pole)]/(s − pole) ds + f(pole)·ln|(b − pole)/(pole − a)|.
/// For b = +∞ the symmetric window [a, 2·pole − a] carries the subtraction and
/// the tail is integrated directly.
pub fn integrate_pv<T: QuadValue>(f: impl FnMut(f64) -> T, pole: f64, a: f64, b: f64, tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    integrate_pv_with_breaks(f, pole, a, b, &[], tol)
}

/// [`integrate_pv`] with extra interior breakpoints (for oscillatory `f`).
pub fn integrate_pv_with_breaks<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    pole: f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: &ToleranceSpec,
) -> Result<QuadratureResult<T>> {
    if !(a < pole && pole < b) {
        return Err(Error::PoleOutsideDomain { pole, a, b });
    }
    let fp = f(pole);
    if !fp.is_finite_value() {
        return Err(Error::NonFiniteIntegrand { x: pole });
    }
    let upper = if b.is_finite() { b } else { 2.0 * pole - a };
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < upper && x != pole))
        .chain([pole, upper])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut evals = 1;
    let sub = {
        let mut g = |s: f64| {
            let ds = s - pole;
            if ds == 0.0 {
                T::default()
            } else {
                (f(s) - fp) * (1.0 / ds)
            }
        };
        adaptive(&mut g, &pts, tol)?
    };
    evals += sub.evaluations;
    let mut value = sub.value + fp * ((upper - pole) / (pole - a)).ln();
    let mut error = sub.error_estimate;
    let mut converged = sub.converged;
    if !b.is_finite() {
        let mut tail_pts: Vec<f64> = std::iter::once(upper).chain(breaks.iter().copied().filter(|&x| x > upper)).collect();
        tail_pts.push(f64::INFINITY);
        let tail = integrate_1d_with_breaks(|s| f(s) * (1.0 / (s - pole)), &tail_pts, tol)?;
        value = value + tail.value;
        error += tail.error_estimate;
        evals += tail.evaluations;
        converged &= tail.converged;
    }
    converged |= error <= tol.target(value.magnitude());
    Ok(QuadratureResult { value, error_estimate: error, evaluations: evals, converged })
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            } else {
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Product rule with `n` Gauss–Legendre nodes in cos θ and `2n` trapezoid nodes in φ.
pub fn sphere_rule<T: QuadValue>(g: &mut impl FnMut(f64, f64) -> T, n: usize) -> T {
    let (x, w) = gauss_legendre(n);
    let nphi = 2 * n;
    let dphi = 2.0 * PI / nphi as f64;
    let mut total = T::default();
    for (&c, &wc) in x.iter().zip(&w) {
        let theta = c.acos();
        let mut ring = T::default();
        for j in 0..nphi {
            ring = ring + g(theta, dphi * j as f64);
        }
        total = total + ring * (wc * dphi);
    }
    total
}

/// ∮ g(θ, φ) dΩ, doubling the product rule until successive estimates agree.
pub fn integrate_sphere<T: QuadValue>(mut g: impl FnMut(f64, f64) -> T, tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    integrate_sphere_from(&mut g, 8, tol)
}

/// [`integrate_sphere`] starting from `n0` polar nodes.
pub fn integrate_sphere_from<T: QuadValue>(g: &mut impl FnMut(f64, f64) -> T, n0: usize, tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    tol.validate()?;
    let mut n = n0.max(2);
    let mut prev = sphere_rule(g, n);
    let mut evals = 2 * n * n;
    loop {
        let next_n = 2 * n;
        if evals + 2 * next_n * next_n > tol.max_evals {
            let err = prev.magnitude().max(1e-300);
            return Ok(QuadratureResult { value: prev, error_estimate: err, evaluations: evals, converged: false });
        }
        let cur = sphere_rule(g, next_n);
        evals += 2 * next_n * next_n;
        let err = (cur - prev).magnitude();
        if err <= tol.target(cur.magnitude()) {
            return Ok(QuadratureResult { value: cur, error_estimate: err, evaluations: evals, converged: true });
        }
        prev = cur;
        n = next_n;
    }
}

/// Delta-shell integral ∫ d³k̃ δ(|k̃| − s★) g = s★² ∮ g(θ, φ) dΩ, with the angles
/// of k̃ and g evaluated on the shell. The π·sgn factor of the distributional
/// limit is applied by the caller.
pub fn onshell_surface_integral<T: QuadValue>(g: impl FnMut(f64, f64) -> T, s_star: f64, tol: &ToleranceSpec) -> Result<QuadratureResult<T>> {
    if !(s_star > 0.0) {
        return Err(Error::NonPositiveShell { s_star });
    }
    let r = integrate_sphere(g, tol)?;
    let scale = s_star * s_star;
    Ok(QuadratureResult { value: r.value * scale, error_estimate: r.error_estimate * scale, ..r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn tight() -> ToleranceSpec {
        ToleranceSpec::new(1e-12, 0.0, 1_000_000).unwrap()
    }

    #[test]
    fn kronrod_rule_is_exact_for_polynomials() {
        let total: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        assert_relative_eq!(total, 2.0, epsilon = 1e-15);
        for p in 0..=31 {
            let (v, _, _) = gk21(&mut |x: f64| x.powi(p), 0.0, 1.0).unwrap();
            assert_relative_eq!(v, 1.0 / (p + 1) as f64, max_relative = 1e-13);
        }
    }

    #[test]
    fn gaussian_half_line() {
        let r = integrate_1d(|s: f64| (-s * s / 2.0).exp(), 0.0, f64::INFINITY, &tight()).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, (PI / 2.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn rational_gaussian_moment_matches_reference() {
        // Composite Simpson with 10^6 points on [0, 40] (agrees with a 30-digit evaluation).
        let reference = 0.517_311_802_504_176_2;
        let r = integrate_1d(|s: f64| s * s * (-s * s / 2.0).exp() / (s + 1.0), 0.0, f64::INFINITY, &tight()).unwrap();
        assert_relative_eq!(r.value, reference, max_relative = 1e-12);
    }

    #[test]
    fn oscillatory_finite_interval() {
        let r = integrate_1d(|s: f64| (100.0 * s).sin(), 0.0, 1.0, &tight()).unwrap();
        assert_relative_eq!(r.value, (1.0 - 100f64.cos()) / 100.0, max_relative = 1e-11);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate_1d(|s: f64| Complex64::new(0.0, s).exp(), 0.0, PI, &tight()).unwrap();
        assert_relative_eq!(r.value.re, 0.0, epsilon = 1e-13);
        assert_relative_eq!(r.value.im, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate_1d(|s: f64| if s > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, &tight());
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let tol = ToleranceSpec::new(1e-14, 0.0, 100).unwrap();
        let r = integrate_1d(|s: f64| (1000.0 * s * s).sin(), 0.0, 3.0, &tol).unwrap();
        assert!(!r.converged);
        assert!(matches!(r.checked(), Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn pv_examples() {
        let r = integrate_pv(|_| 1.0, 0.5, 0.0, 1.0, &tight()).unwrap();
        assert!(r.value.abs() < 1e-14);
        let r = integrate_pv(|s| s, 0.0, -1.0, 1.0, &tight()).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-13);
        // PV ∫_0^∞ e^{-s²/2}/(s − 1) ds from a 50-digit evaluation.
        let r = integrate_pv(|s: f64| (-s * s / 2.0).exp(), 1.0, 0.0, f64::INFINITY, &tight()).unwrap();
        assert_relative_eq!(r.value, -1.046_124_238_370_946_7, max_relative = 1e-11);
    }

    #[test]
    fn pv_rejects_pole_outside() {
        let r = integrate_pv(|s| s, 2.0, 0.0, 1.0, &tight());
        assert!(matches!(r, Err(Error::PoleOutsideDomain { .. })));
    }

    #[test]
    fn gauss_legendre_nodes() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-13);
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            if n >= 2 {
                assert_relative_eq!(m2, 2.0 / 3.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn sphere_examples() {
        let one = integrate_sphere(|_, _| Complex64::new(1.0, 0.0), &tight()).unwrap();
        assert_relative_eq!(one.value.re, 4.0 * PI, max_relative = 1e-14);
        let odd = integrate_sphere(|t, _| Complex64::new(t.cos(), 0.0), &tight()).unwrap();
        assert!(odd.value.norm() < 1e-14);
        let sep = integrate_sphere(|t, p| Complex64::new((t.sin() * p.cos()).powi(2), 0.0), &tight()).unwrap();
        assert_relative_eq!(sep.value.re, 4.0 * PI / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn onshell_examples() {
        let zero = onshell_surface_integral(|_, _| Complex64::default(), 1.0, &tight()).unwrap();
        assert_eq!(zero.value, Complex64::default());
        assert!(matches!(onshell_surface_integral(|_, _| Complex64::new(1.0, 0.0), -1.0, &tight()), Err(Error::NonPositiveShell { .. })));
        let omega = 1.3;
        let shell = onshell_surface_integral(|_, _| Complex64::new(1.0, 0.0), omega, &tight()).unwrap();
        assert_relative_eq!(shell.value.re, 4.0 * PI * omega * omega, max_relative = 1e-13);
    }

    #[test]
    fn lorentzian_volume_integral_converges_to_shell() {
        // ∫ d³k̃ g L_Γ(|k̃| − s★) with g(s, θ) = e^{-s²/2}(1 + cos²θ): the shell value is
        // s★² e^{-s★²/2} ∮(1 + cos²θ) = s★² e^{-s★²/2}·16π/3.
        let s_star: f64 = 1.0;
        let angular = |t: f64, _p: f64| Complex64::new(1.0 + t.cos().powi(2), 0.0);
        let shell = onshell_surface_integral(angular, s_star, &tight()).unwrap().value.re * (-0.5f64).exp();
        let ang = integrate_sphere(angular, &tight()).unwrap().value.re;
        let volume = |gamma: f64| {
            let f = |s: f64| s * s * (-s * s / 2.0).exp() * gamma / (PI * (gamma * gamma + (s - s_star).powi(2)));
            let pts = [0.0, s_star - 10.0 * gamma, s_star, s_star + 10.0 * gamma, 12.0];
            integrate_1d_with_breaks(f, &pts, &tight()).unwrap().value * ang
        };
        let (v1, v2, v3) = (volume(1e-1), volume(1e-2), volume(1e-3));
        // The O(Γ) error is removed by Richardson extrapolation on the decade sequence.
        let r23 = (10.0 * v3 - v2) / 9.0;
        let r12 = (10.0 * v2 - v1) / 9.0;
        assert!((r23 - shell).abs() < 1e-4 * shell.abs());
        assert!((v3 - shell).abs() < (v1 - shell).abs());
        assert!((r23 - shell).abs() <= (r12 - shell).abs() + 1e-12);
        assert_relative_eq!(shell, 16.0 * PI / 3.0 * (-0.5f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn engines_are_deterministic() {
        let f = |s: f64| (s * 7.0).sin() * (-s).exp();
        let a = integrate_1d(f, 0.0, f64::INFINITY, &tight()).unwrap();
        let b = integrate_1d(f, 0.0, f64::INFINITY, &tight()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    fn excised_pv(f: &dyn Fn(f64) -> f64, pole: f64, a: f64, b: f64) -> f64 {
        // ε-excision at ε and ε/2 followed by linear extrapolation in ε.
        let tol = tight();
        let cut = |eps: f64| {
            integrate_1d(|s| f(s) / (s - pole), a, pole - eps, &tol).unwrap().value
                + integrate_1d(|s| f(s) / (s - pole), pole + eps, b, &tol).unwrap().value
        };
        let (e1, e2) = (1e-3, 5e-4);
        let (c1, c2) = (cut(e1), cut(e2));
        c2 + (c2 - c1) * e2 / (e1 - e2)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn pv_matches_excision(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -1.0f64..1.0, k in 0.5f64..4.0, pole in 0.2f64..0.8) {
            let f = move |s: f64| c0 + c1 * s + c2 * (k * s).cos();
            let pv = integrate_pv(f, pole, 0.0, 1.0, &tight()).unwrap().value;
            let ex = excised_pv(&f, pole, 0.0, 1.0);
            prop_assert!((pv - ex).abs() < 1e-8 * (1.0 + ex.abs()));
        }
    }
}
