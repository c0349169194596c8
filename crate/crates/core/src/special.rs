//! Special functions used by the closed-form limits.
//!
//! Power series are used where their terms stay positive (or the cancellation is
//! mild), with continued fractions or asymptotic series past a fixed threshold.

use std::f64::consts::{FRAC_2_SQRT_PI, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-17;
const MAX_TERMS: usize = 10_000;

/// erf(x) for |x| < 3 via e^{-x²}·Σ (2x²)^n / (2n+1)!!, which has positive terms.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..MAX_TERMS {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() * sum
}

/// erfc(x) for x ≥ 3 via the Laplace continued fraction (modified Lentz).
fn erfc_cf(x: f64) -> f64 {
    // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..MAX_TERMS {
        let a = n as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < 3.0 { erf_series(ax) } else { 1.0 - erfc_cf(ax) };
    v.copysign(x)
}

pub fn erfc(x: f64) -> f64 {
    if x >= 3.0 {
        erfc_cf(x)
    } else {
        1.0 - erf(x)
    }
}

/// Dawson integral D(x) = e^{-x²} ∫₀ˣ e^{t²} dt.
pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= 6.0 {
        // e^{-x²} Σ x^{2n+1} / (n! (2n+1)), positive terms
        let x2 = ax * ax;
        let mut pow = ax;
        let mut sum = ax;
        for n in 1..MAX_TERMS {
            pow *= x2 / n as f64;
            let term = pow / (2 * n + 1) as f64;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        (-x2).exp() * sum
    } else {
        // 1/(2x) Σ (2n-1)!! / (2x²)^n, truncated at the smallest term
        let inv = 1.0 / (2.0 * ax * ax);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..MAX_TERMS {
            let next = term * (2 * n - 1) as f64 * inv;
            if next > term {
                break;
            }
            term = next;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        sum / (2.0 * ax)
    };
    v.copysign(x)
}

/// Imaginary error function erfi(x) = -i erf(ix) = (2/√π) e^{x²} D(x).
pub fn erfi(x: f64) -> f64 {
    FRAC_2_SQRT_PI * (x * x).exp() * dawson(x)
}

/// E₁(z) for z > 0.
fn expint_e1(z: f64) -> f64 {
    if z <= 1.0 {
        // -γ - ln z - Σ (-z)^n / (n·n!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..MAX_TERMS {
            term *= -z / n as f64;
            let t = term / n as f64;
            sum += t;
            if t.abs() < EPS * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - z.ln() - sum
    } else {
        // Continued fraction e^{-z} / (z + 1 - 1²/(z + 3 - 2²/(z + 5 - ...)))
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_TERMS {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    }
}

/// Exponential integral Ei(x) = -PV ∫_{-x}^∞ e^{-t}/t dt, defined for x ≠ 0.
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(Error::DomainError { function: "Ei", x });
    }
    if x < 0.0 {
        return Ok(-expint_e1(-x));
    }
    if x <= 40.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..MAX_TERMS {
            term *= x / n as f64;
            let t = term / n as f64;
            sum += t;
            if t < EPS * sum {
                break;
            }
        }
        Ok(EULER_GAMMA + x.ln() + sum)
    } else {
        // e^x/x Σ k!/x^k, truncated at the smallest term
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..MAX_TERMS {
            let next = term * k as f64 / x;
            if next > term {
                break;
            }
            term = next;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        Ok(x.exp() / x * sum)
    }
}

/// Sine and cosine integrals (Si, Ci) for x > 0.
fn sici_positive(x: f64) -> (f64, f64) {
    if x < 2.0 {
        let x2 = x * x;
        // Si = Σ (-1)^k x^{2k+1} / ((2k+1)(2k+1)!), Ci = γ + ln x + Σ_{k≥1} (-1)^k x^{2k} / (2k (2k)!)
        let mut si = x;
        let mut fact_term = x; // (-1)^k x^{2k+1} / (2k+1)!
        let mut ci = 0.0;
        let mut even_term = 1.0; // (-1)^k x^{2k} / (2k)!
        for k in 1..MAX_TERMS {
            let kk = k as f64;
            even_term *= -x2 / ((2.0 * kk - 1.0) * (2.0 * kk));
            fact_term *= -x2 / ((2.0 * kk) * (2.0 * kk + 1.0));
            let tc = even_term / (2.0 * kk);
            let ts = fact_term / (2.0 * kk + 1.0);
            ci += tc;
            si += ts;
            if tc.abs() < EPS && ts.abs() < EPS * si.abs() {
                break;
            }
        }
        (si, EULER_GAMMA + x.ln() + ci)
    } else {
        // Lentz continued fraction for E₁(ix) = -Ci(x) + i(Si(x) - π/2)
        let one = Complex64::new(1.0, 0.0);
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1e300, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 1..MAX_TERMS {
            let a = -((i * i) as f64);
            b += 2.0;
            d = one / (d * a + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - one).l1_norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(x.cos(), -x.sin());
        (FRAC_PI_2 + h.im, -h.re)
    }
}

/// Sine integral, odd in x.
pub fn si(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    sici_positive(x.abs()).0.copysign(x)
}

/// Cosine integral, defined for x > 0.
pub fn ci(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError { function: "Ci", x });
    }
    Ok(sici_positive(x).1)
}

/// J₀, J₁, J₂ at x ≥ 0 by Miller's downward recurrence normalized with
/// J₀ + 2 Σ J_{2k} = 1, or the Hankel expansion for large x.
fn bessel_j012_positive(x: f64) -> [f64; 3] {
    if x == 0.0 {
        return [1.0, 0.0, 0.0];
    }
    if x > 1000.0 {
        let j0 = hankel(0, x);
        let j1 = hankel(1, x);
        return [j0, j1, 2.0 * j1 / x - j0];
    }
    let start = x + 30.0 + 12.0 * x.cbrt();
    let mut n = start.ceil() as usize;
    if n % 2 == 1 {
        n += 1;
    }
    let mut jp1 = 0.0;
    let mut j = 1e-280;
    let mut norm = 0.0;
    let mut out = [0.0; 3];
    let mut k = n;
    while k > 0 {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx <= 2 {
            out[idx] = j;
        }
        if idx.is_multiple_of(2) && idx > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for o in out.iter_mut() {
                *o *= 1e-250;
            }
        }
        k -= 1;
    }
    norm += out[0];
    [out[0] / norm, out[1] / norm, out[2] / norm]
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let z8 = 8.0 * x;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * z8);
        if term.abs() < EPS {
            break;
        }
        if k % 2 == 1 {
            q += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            p += if (k / 2) % 2 == 0 { term } else { -term };
        }
    }
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j012_positive(x.abs())[0]
}

pub fn bessel_j1(x: f64) -> f64 {
    let v = bessel_j012_positive(x.abs())[1];
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub fn bessel_j2(x: f64) -> f64 {
    bessel_j012_positive(x.abs())[2]
}

/// Smooth sin(x)/x.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// 2(sin a − a cos a)/a², the polar moment ∫₀^π sin²θ J₁(a sin θ) dθ.
pub fn polar_moment_j1(a: f64) -> f64 {
    if a.abs() < 1.0 {
        // 2 Σ (−1)^k a^{2k+1}·2(k+1)/(2k+3)!
        let a2 = a * a;
        let mut term = a / 3.0;
        let mut sum = term;
        for k in 1..20 {
            let kf = k as f64;
            term *= -a2 * (kf + 1.0) / (kf * (2.0 * kf + 2.0) * (2.0 * kf + 3.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        2.0 * sum
    } else {
        2.0 * (a.sin() - a * a.cos()) / (a * a)
    }
}
