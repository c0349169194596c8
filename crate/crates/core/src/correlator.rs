//! Mode-resolved two-point functions of the massless scalar field, free and in
//! front of a planar mirror at z = d.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::FourVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeLabel {
    pub k: [f64; 3],
}

impl ModeLabel {
    pub fn new(k: [f64; 3]) -> Result<Self> {
        let m = Self { k };
        if !(m.norm() > 0.0) {
            return Err(Error::ZeroMomentum);
        }
        Ok(m)
    }

    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.k;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn reflected(&self) -> Self {
        Self { k: [self.k[0], self.k[1], -self.k[2]] }
    }
}

/// The factor 1 − R e^{2 i k_z d} multiplying the free mode kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateKernel {
    pub value: Complex64,
}

fn phase(k: &ModeLabel, x: &FourVector) -> f64 {
    let [t, x1, x2, x3] = x.components;
    k.norm() * t - (k.k[0] * x1 + k.k[1] * x2 + k.k[2] * x3)
}

fn mode_norm(k: &ModeLabel) -> f64 {
    1.0 / (2.0 * (2.0 * PI).powi(3) * k.norm()).sqrt()
}

/// u_k(x) = e^{i(|k|t − k·x)}/√(2(2π)³|k|).
pub fn plane_wave_mode(k: &ModeLabel, x: &FourVector) -> Result<Complex64> {
    if !(k.norm() > 0.0) {
        return Err(Error::ZeroMomentum);
    }
    Ok(Complex64::from_polar(mode_norm(k), phase(k, x)))
}

/// u_k*(x1) u_k(x2).
pub fn free_wightman_k(k: &ModeLabel, x1: &FourVector, x2: &FourVector) -> Result<Complex64> {
    Ok(plane_wave_mode(k, x1)?.conj() * plane_wave_mode(k, x2)?)
}

pub fn plate_kernel(k: &ModeLabel, d: f64, r: Complex64) -> PlateKernel {
    PlateKernel { value: plate_kernel_continued(Complex64::new(k.k[2], 0.0), d, r) }
}

/// 1 − R e^{2 i k_z d} for complex k_z; decays to 1 as d grows when Im k_z > 0.
pub fn plate_kernel_continued(kz: Complex64, d: f64, r: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - r * (Complex64::i() * kz * (2.0 * d)).exp()
}

/// Plane-wave T-matrix element of the mirror: −(2π)³ R δ³(k − k′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMatrixElement {
    pub coefficient: Complex64,
    pub diagonal: bool,
}

pub fn tmatrix_plate(k: &ModeLabel, kp: &ModeLabel, r: Complex64) -> TMatrixElement {
    if k.k == kp.k {
        TMatrixElement { coefficient: -(2.0 * PI).powi(3) * r, diagonal: true }
    } else {
        TMatrixElement { coefficient: Complex64::default(), diagonal: false }
    }
}

fn check_side(x: &FourVector, d: f64) -> Result<()> {
    let z = x.components[3];
    if z > d {
        return Err(Error::PointBeyondPlate { z, d });
    }
    Ok(())
}

fn mirror(x: &FourVector, d: f64) -> FourVector {
    let [t, x1, x2, x3] = x.components;
    FourVector::upper([t, x1, x2, 2.0 * d - x3])
}

/// Method of images: G⁰(r0, r1) − R·G⁰(r0, mirror(r1)), mirror through z = d.
pub fn image_wightman_k(k: &ModeLabel, r0: &FourVector, r1: &FourVector, d: f64, r: Complex64) -> Result<Complex64> {
    check_side(r0, d)?;
    check_side(r1, d)?;
    Ok(free_wightman_k(k, r0, r1)? - r * free_wightman_k(k, r0, &mirror(r1, d))?)
}

/// Kernel form of the same mode: G⁰(r0, r1)·[1 − R e^{2 i k′_z (d − z1)}] with
/// k′ the mirror image of k. For z1 = 0 this is the plate kernel of k′.
pub fn kernel_wightman_k(k: &ModeLabel, r0: &FourVector, r1: &FourVector, d: f64, r: Complex64) -> Result<Complex64> {
    check_side(r0, d)?;
    check_side(r1, d)?;
    let kernel = plate_kernel(&k.reflected(), d - r1.components[3], r);
    Ok(free_wightman_k(k, r0, r1)? * kernel.value)
}

/// G = G⁰ + G⁰ T G⁰ for one plane wave. The diagonal T-matrix element is taken in
/// the mirror frame; translating the outgoing wave from r1 to the plane and back
/// as the reflected mode contributes e^{−2 i k_z (d − z1)}, and the δ³ pairing
/// cancels the (2π)³ of the mode normalization.
pub fn lippmann_schwinger_k(k: &ModeLabel, r0: &FourVector, r1: &FourVector, d: f64, r: Complex64) -> Result<Complex64> {
    check_side(r0, d)?;
    check_side(r1, d)?;
    let free = free_wightman_k(k, r0, r1)?;
    let t = tmatrix_plate(k, k, r);
    let translation = Complex64::from_polar(1.0, -2.0 * k.k[2] * (d - r1.components[3]));
    Ok(free + free * translation * t.coefficient / (2.0 * PI).powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn origin() -> FourVector {
        FourVector::upper([0.0; 4])
    }

    #[test]
    fn mode_examples() {
        let k = ModeLabel::new([0.0, 0.6, 0.8]).unwrap();
        let n = 1.0 / (2.0 * (2.0 * PI).powi(3)).sqrt();
        let u0 = plane_wave_mode(&k, &origin()).unwrap();
        assert_relative_eq!(u0.re, n, max_relative = 1e-15);
        assert_eq!(u0.im, 0.0);
        let x = FourVector::upper([0.3, 1.0, -2.0, 0.5]);
        let shifted = FourVector::upper([0.3 + 2.0 * PI, 1.0, -2.0, 0.5]);
        let (a, b) = (plane_wave_mode(&k, &x).unwrap(), plane_wave_mode(&k, &shifted).unwrap());
        assert!((a - b).norm() < 1e-14);
        assert_relative_eq!(a.norm(), n, max_relative = 1e-14);
        let u = plane_wave_mode(&k, &FourVector::upper([PI, 0.0, 0.0, 0.0])).unwrap();
        assert!(u.re < 0.0 && u.im.abs() < 1e-15);
        assert!(ModeLabel::new([0.0; 3]).is_err());
    }

    #[test]
    fn wightman_examples() {
        let k = ModeLabel::new([1.0, 0.0, 0.0]).unwrap();
        let x = FourVector::upper([0.2, 0.1, 0.4, -0.3]);
        let g = free_wightman_k(&k, &x, &x).unwrap();
        assert_relative_eq!(g.re, 1.0 / (2.0 * (2.0 * PI).powi(3)), max_relative = 1e-14);
        let y = FourVector::upper([1.7, -0.5, 0.3, 0.9]);
        let (a, b) = (free_wightman_k(&k, &x, &y).unwrap(), free_wightman_k(&k, &y, &x).unwrap());
        assert!((a - b.conj()).norm() < 1e-16);
        let g = free_wightman_k(&k, &FourVector::upper([PI, 0.0, 0.0, 0.0]), &origin()).unwrap();
        assert_relative_eq!(g.re, -1.0 / (2.0 * (2.0 * PI).powi(3)), max_relative = 1e-14);
    }

    #[test]
    fn kernel_examples() {
        let k = ModeLabel::new([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(plate_kernel(&k, 1.0, Complex64::default()).value, Complex64::new(1.0, 0.0));
        assert!(plate_kernel(&k, 1.0, Complex64::new(1.0, 0.0)).value.norm() < 1e-16);
        let k = ModeLabel::new([0.0, 0.0, PI / 2.0]).unwrap();
        let v = plate_kernel(&k, 1.0, Complex64::new(1.0, 0.0)).value;
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tmatrix_examples() {
        let k = ModeLabel::new([1.0, 2.0, 3.0]).unwrap();
        let kp = ModeLabel::new([1.0, 2.0, 3.5]).unwrap();
        assert_eq!(tmatrix_plate(&k, &k, Complex64::default()).coefficient, Complex64::default());
        let off = tmatrix_plate(&k, &kp, Complex64::new(0.5, 0.0));
        assert!(!off.diagonal && off.coefficient == Complex64::default());
        let on = tmatrix_plate(&k, &k, Complex64::new(0.5, 0.0));
        assert_relative_eq!(on.coefficient.re, -(2.0 * PI).powi(3) * 0.5, max_relative = 1e-15);
    }

    #[test]
    fn image_form_limits() {
        let k = ModeLabel::new([0.4, -0.3, 1.2]).unwrap();
        let r0 = FourVector::upper([0.5, 0.1, 0.2, 0.3]);
        let r1 = FourVector::upper([1.5, -0.7, 0.9, 0.1]);
        let d = 2.0;
        let free = free_wightman_k(&k, &r0, &r1).unwrap();
        assert_eq!(image_wightman_k(&k, &r0, &r1, d, Complex64::default()).unwrap(), free);
        let on_plate = FourVector::upper([1.5, -0.7, 0.9, d]);
        assert_eq!(image_wightman_k(&k, &r0, &on_plate, d, Complex64::new(1.0, 0.0)).unwrap(), Complex64::default());
        let beyond = FourVector::upper([0.0, 0.0, 0.0, 2.5]);
        assert!(matches!(image_wightman_k(&k, &r0, &beyond, d, Complex64::new(1.0, 0.0)), Err(Error::PointBeyondPlate { .. })));
    }

    #[test]
    fn image_kernel_and_scattering_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = ModeLabel::new([rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).unwrap();
            let d = rng.random_range(0.1..5.0);
            let point = |rng: &mut ChaCha8Rng| FourVector::upper([rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..d)]);
            let (r0, r1) = (point(&mut rng), point(&mut rng));
            let r = Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(-PI..PI));
            let image = image_wightman_k(&k, &r0, &r1, d, r).unwrap();
            let kernel = kernel_wightman_k(&k, &r0, &r1, d, r).unwrap();
            let ls = lippmann_schwinger_k(&k, &r0, &r1, d, r).unwrap();
            assert!((image - kernel).norm() <= 1e-12 * kernel.norm().max(1e-300));
            assert!((ls - kernel).norm() <= 1e-12 * kernel.norm().max(1e-300));
        }
    }

    #[test]
    fn continued_kernel_decays_to_one() {
        let kz = Complex64::new(0.7, 0.3);
        let r = Complex64::new(0.9, 0.1);
        let mut prev = f64::INFINITY;
        for d in [1.0, 10.0, 50.0, 100.0] {
            let dev = (plate_kernel_continued(kz, d, r) - 1.0).norm();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev < 1e-20);
    }
}
