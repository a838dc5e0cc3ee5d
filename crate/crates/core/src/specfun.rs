//! Special functions: log-gamma, log-beta, the regularized incomplete beta
//! function and the F / Student t tail probabilities built on it.
//!
//! Everything downstream works with logarithms, so the kernel exposes
//! `ln Γ` and `ln B` rather than their linear-scale values.

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(domain("Probability", format!("{value} is not in [0, 1]")))
        }
    }

    /// Clamps tiny excursions produced by rounding back into `[0, 1]`.
    pub(crate) fn saturating(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

// Lanczos approximation, g = 671/128 with 14 terms.
const LANCZOS_G_SHIFT: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `ln Γ(z)` for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("log_gamma", format!("argument {z} must be positive and finite")));
    }
    Ok(ln_gamma_unchecked(z))
}

pub(crate) fn ln_gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        // Reflection keeps the series in its accurate region.
        return (PI / (PI * z).sin()).ln() - ln_gamma_unchecked(1.0 - z);
    }
    let mut denom = z;
    let mut series = LANCZOS_C0;
    for c in LANCZOS_COEF {
        denom += 1.0;
        series += c / denom;
    }
    let t = z + LANCZOS_G_SHIFT;
    (z + 0.5) * t.ln() - t + (SQRT_2PI * series / z).ln()
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("log_beta", format!("arguments ({a}, {b}) must be positive")));
    }
    Ok(ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b))
}

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<Probability> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("reg_inc_beta", format!("x = {x} is not in [0, 1]")));
    }
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(domain("reg_inc_beta", format!("shapes ({a}, {b}) must be positive")));
    }
    if x == 0.0 {
        return Ok(Probability(0.0));
    }
    if x == 1.0 {
        return Ok(Probability(1.0));
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - log_beta(a, b)?;
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front - a.ln()).exp() * beta_continued_fraction(x, a, b)
    } else {
        1.0 - (ln_front - b.ln()).exp() * beta_continued_fraction(1.0 - x, b, a)
    };
    Ok(Probability::saturating(value))
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let max_iter = 300 + (10.0 * a.max(b).sqrt()) as usize * 10;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=max_iter {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Upper tail `P(F_{d1,d2} > f)` of the F distribution.
pub fn f_tail_p(f: f64, d1: f64, d2: f64) -> Result<Probability> {
    if !(f >= 0.0) {
        return Err(domain("f_tail_p", format!("F = {f} must be nonnegative")));
    }
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(domain(
            "f_tail_p",
            format!("degrees of freedom ({d1}, {d2}) must be positive"),
        ));
    }
    if f.is_infinite() {
        return Ok(Probability(0.0));
    }
    reg_inc_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0)
}

/// Two-sided Student t tail `P(|T_nu| > |t|)`.
///
/// This is the two-tailed probability; `1 − F_ν(t)` alone would be half of it.
pub fn t_two_sided_p(t: f64, nu: f64) -> Result<Probability> {
    if !(nu > 0.0) {
        return Err(domain("t_two_sided_p", format!("nu = {nu} must be positive")));
    }
    f_tail_p(t * t, 1.0, nu)
}
