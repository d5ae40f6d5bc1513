//! Real and complex log-gamma.
//!
//! Complex values use the principal branch of `loggamma`, i.e. the analytic
//! continuation of `ln Γ(z)` from the positive real axis with a branch cut on
//! the negative real axis. Its imaginary part is not reduced modulo `2π`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN_ABS: f64 = 10.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Principal-branch `ln Γ(z)` for complex `z`.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(crate::error::domain("log_gamma_complex", format!("{z}")));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(format!("{}", z.re)));
    }
    Ok(log_gamma_unchecked(z))
}

/// Same as [`log_gamma_complex`] without the pole check. At a pole the
/// result is infinite; callers in the contour integrator never sit on one.
#[inline]
pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        reflect(z)
    } else if z.norm_sqr() >= STIRLING_MIN_ABS * STIRLING_MIN_ABS {
        stirling(z)
    } else {
        lanczos(z)
    }
}

#[inline]
fn lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

#[inline]
fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for &c in STIRLING_COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series * inv
}

fn reflect(z: Complex64) -> Complex64 {
    // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z), with the 2πi shift that
    // keeps the result on the principal loggamma branch.
    let shift = (2.0 * PI).copysign(z.im) * (0.5 * z.re + 0.25).floor();
    let shift = if z.im == 0.0 { 0.0 } else { shift };
    Complex64::new(LN_PI, shift) - log_sin_pi(z) - log_gamma_unchecked(Complex64::new(1.0, 0.0) - z)
}

/// Principal `ln sin(πz)`, computed without overflow for large `|Im z|`.
fn log_sin_pi(z: Complex64) -> Complex64 {
    // sin(π(x + 2k)) = sin(πx)
    let x = z.re - 2.0 * (0.5 * z.re).round();
    let y = z.im;
    let raw = if y.abs() < 20.0 {
        let (s, c) = (PI * x).sin_cos();
        Complex64::new(s * (PI * y).cosh(), c * (PI * y).sinh()).ln()
    } else if y > 0.0 {
        // sin(πz) ≈ (i/2) e^{-iπz}
        Complex64::new(PI * y - std::f64::consts::LN_2, 0.5 * PI - PI * x)
    } else {
        // sin(πz) ≈ (-i/2) e^{iπz}
        Complex64::new(-PI * y - std::f64::consts::LN_2, PI * x - 0.5 * PI)
    };
    Complex64::new(raw.re, wrap_phase(raw.im))
}

fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut p = phi - two_pi * (phi / two_pi).round();
    if p <= -PI {
        p += two_pi;
    }
    p
}

/// `ln |Γ(x)|` for real `x`, together with the sign of `Γ(x)`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return Err(crate::error::domain("ln_gamma", "NaN"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("{x}")));
    }
    Ok(ln_gamma_signed_unchecked(x))
}

#[inline]
pub(crate) fn ln_gamma_signed_unchecked(x: f64) -> (f64, f64) {
    if x >= 0.5 {
        (ln_gamma_pos(x), 1.0)
    } else {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let r = x - 2.0 * (0.5 * x).round();
        let s = (PI * r).sin();
        let value = LN_PI - s.abs().ln() - ln_gamma_pos(1.0 - x);
        (value, s.signum())
    }
}

#[inline]
fn ln_gamma_pos(x: f64) -> f64 {
    if x >= STIRLING_MIN_ABS {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let mut series = 0.0;
        for &c in STIRLING_COEFFS.iter().rev() {
            series = series * inv2 + c;
        }
        (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series * inv
    } else if x == 1.0 || x == 2.0 {
        0.0
    } else {
        let xm1 = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (xm1 + i as f64);
        }
        let t = xm1 + LANCZOS_G + 0.5;
        LN_SQRT_2PI + (xm1 + 0.5) * t.ln() - t + acc.ln()
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(crate::error::domain("ln_gamma", format!("x = {x} must be positive")));
    }
    Ok(ln_gamma_pos_any(x))
}

#[inline]
pub(crate) fn ln_gamma_pos_any(x: f64) -> f64 {
    if x >= 0.5 {
        ln_gamma_pos(x)
    } else {
        ln_gamma_signed_unchecked(x).0
    }
}

/// `Γ(x)` for real `x` away from the poles.
pub fn gamma(x: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_gamma_signed(x)?;
    Ok(sign * ln_abs.exp())
}
