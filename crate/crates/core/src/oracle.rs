//! Numerical route to the random-effects ANOVA Bayes factor.
//!
//! [`gds_bf10`] integrates the Garcia-Donato–Sun representation
//!
//! ```text
//! BF₁₀ = ∫₀^∞ (1+τr)^((1−p)/2) · (1 − τr/(1+τr) · SSA/SST)^((1−n)/2) · π(τ) dτ
//! ```
//!
//! against the Pearson Type VI prior. It shares no code with the closed
//! forms in [`crate::pbf`] beyond the prior density and serves as their
//! independent check.
//!
//! The integral over `(0, ∞)` is split at `τ = 1`; the tail is mapped back to
//! `(0, 1]` by `τ = 1/s`, so both endpoint behaviours sit at zero where
//! floating point resolves them. Both pieces share one pool of globally
//! adaptive 7/15-point Gauss–Kronrod panels. The
//! integrand is supplied as a logarithm; panel sums are kept relative to a
//! running maximum of the log integrand so neither very large nor very small
//! integrands over- or underflow.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::domain::{AnovaTable, Evidence, Method, PearsonPrior};
use crate::error::{domain, Error, Result};
use crate::pbf::pearson_type6_ln_pdf;

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_PANELS: usize = 10_000;

// Kronrod abscissae on [-1, 1] (non-negative half, descending) and weights.
// Odd indices are the embedded 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: DEFAULT_REL_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Result of a quadrature, stored as `ln` of the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub log_value: f64,
    pub rel_err: f64,
    pub panels: usize,
}

impl Integral {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// One Kronrod panel on `[a, b]`, in `τ` itself or, for `tail` panels, in
/// `s = 1/τ`. `est` and `err` are scaled by `exp(-shift)` of the owning
/// integration.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    tail: bool,
    est: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

struct Integrator<F> {
    log_f: F,
    shift: f64,
}

impl<F: Fn(f64) -> f64> Integrator<F> {
    /// `ln` of the integrand after the change of variables.
    fn log_g(&self, tail: bool, u: f64) -> f64 {
        if !tail {
            return (self.log_f)(u);
        }
        if !(u > 0.0) {
            // τ = ∞, where a convergent integrand vanishes
            return f64::NEG_INFINITY;
        }
        (self.log_f)(1.0 / u) - 2.0 * u.ln()
    }

    /// Evaluates a panel; returns it along with the largest log-integrand seen.
    fn panel(&self, a: f64, b: f64, tail: bool) -> (Panel, f64) {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut logs = [0.0f64; 15];
        logs[7] = self.log_g(tail, center);
        for j in 0..7 {
            let dx = half * XGK[j];
            logs[j] = self.log_g(tail, center - dx);
            logs[14 - j] = self.log_g(tail, center + dx);
        }
        let max_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let v = |i: usize| {
            let l = logs[i];
            if l == f64::NEG_INFINITY {
                0.0
            } else {
                (l - self.shift).exp()
            }
        };
        let mut kronrod = WGK[7] * v(7);
        let mut gauss = WG[3] * v(7);
        for j in 0..7 {
            let pair = v(j) + v(14 - j);
            kronrod += WGK[j] * pair;
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        let est = kronrod * half;
        let err = ((kronrod - gauss) * half).abs();
        (Panel { a, b, tail, est, err }, max_log)
    }
}

/// Integrates `exp(log_f(τ))` over `τ ∈ (0, ∞)`.
///
/// `log_f` may return `-inf` where the integrand vanishes. Fails with
/// [`Error::NoConvergence`] when the panel budget runs out before the
/// estimated relative error reaches `opts.rel_tol`.
pub fn integrate_semi_infinite<F>(log_f: F, opts: QuadratureOptions) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if !(opts.rel_tol > 1e-13 && opts.rel_tol < 1e-2) {
        return Err(domain(
            "integrate_semi_infinite",
            format!("rel_tol = {} must lie in (1e-13, 1e-2)", opts.rel_tol),
        ));
    }
    const INITIAL: usize = 16;
    const HALF: usize = INITIAL / 2;
    let max_panels = opts.max_panels.max(INITIAL);

    let mut integ = Integrator { log_f, shift: 0.0 };
    // Coarse scan to pick the initial shift.
    let mut shift = f64::NEG_INFINITY;
    for i in 0..INITIAL {
        let u = (i % HALF) as f64 / HALF as f64 + 0.5 / HALF as f64;
        shift = shift.max(integ.log_g(i >= HALF, u));
    }
    integ.shift = if shift.is_finite() { shift } else { 0.0 };

    let mut state = Panels {
        heap: BinaryHeap::with_capacity(max_panels + 1),
        total: 0.0,
        total_err: 0.0,
    };
    for i in 0..INITIAL {
        let a = (i % HALF) as f64 / HALF as f64;
        let b = (i % HALF + 1) as f64 / HALF as f64;
        state.add(&mut integ, a, b, i >= HALF);
    }

    loop {
        if !(state.total.is_finite() && state.total_err.is_finite()) {
            return Err(domain("integrate_semi_infinite", "integrand produced a non-finite value"));
        }
        if state.total_err <= opts.rel_tol * state.total.abs() {
            break;
        }
        if state.heap.len() >= max_panels {
            return Err(Error::NoConvergence {
                panels: state.heap.len(),
                rel_err: state.total_err / state.total.abs(),
            });
        }
        let worst = state.heap.pop().expect("heap holds at least the initial panels");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // cannot split further in floating point
            return Err(Error::NoConvergence {
                panels: state.heap.len() + 1,
                rel_err: state.total_err / state.total.abs(),
            });
        }
        state.total -= worst.est;
        state.total_err -= worst.err;
        state.add(&mut integ, worst.a, mid, worst.tail);
        state.add(&mut integ, mid, worst.b, worst.tail);
        if state.heap.len().is_multiple_of(512) {
            state.resum();
        }
    }

    state.resum();
    let panels = state.heap.len();
    if !(state.total > 0.0) {
        return Ok(Integral {
            log_value: f64::NEG_INFINITY,
            rel_err: 0.0,
            panels,
        });
    }
    Ok(Integral {
        log_value: state.total.ln() + integ.shift,
        rel_err: state.total_err / state.total,
        panels,
    })
}

struct Panels {
    heap: BinaryHeap<Panel>,
    total: f64,
    total_err: f64,
}

impl Panels {
    fn add<F: Fn(f64) -> f64>(&mut self, integ: &mut Integrator<F>, a: f64, b: f64, tail: bool) {
        let (mut panel, max_log) = integ.panel(a, b, tail);
        if max_log.is_finite() && max_log > integ.shift + 1.0 {
            // Re-anchor on the new maximum.
            let factor = (integ.shift - max_log).exp();
            let rescaled: Vec<Panel> = self
                .heap
                .drain()
                .map(|p| Panel {
                    est: p.est * factor,
                    err: p.err * factor,
                    ..p
                })
                .collect();
            self.heap.extend(rescaled);
            self.total *= factor;
            self.total_err *= factor;
            integ.shift = max_log;
            panel = integ.panel(a, b, tail).0;
        }
        self.total += panel.est;
        self.total_err += panel.err;
        self.heap.push(panel);
    }

    fn resum(&mut self) {
        self.total = self.heap.iter().map(|p| p.est).sum();
        self.total_err = self.heap.iter().map(|p| p.err).sum();
    }
}

/// BF₁₀ by numerically integrating the Garcia-Donato–Sun representation.
pub fn gds_bf10(table: &AnovaTable, prior: &PearsonPrior, opts: QuadratureOptions) -> Result<Evidence> {
    let r = table.r as f64;
    let p = table.p as f64;
    let n = table.n as f64;
    // 1 − τr/(1+τr)·c = (1 + τr(1−c)) / (1 + τr)
    let unexplained = table.ssr / table.sst;
    let log_integrand = |tau: f64| {
        if !(tau > 0.0) || !tau.is_finite() {
            return f64::NEG_INFINITY;
        }
        let tr = tau * r;
        let ln_1p_tr = tr.ln_1p();
        let ln_bracket = (tr * unexplained).ln_1p() - ln_1p_tr;
        let ln_prior = pearson_type6_ln_pdf(tau, prior).unwrap_or(f64::NEG_INFINITY);
        (1.0 - p) / 2.0 * ln_1p_tr + (1.0 - n) / 2.0 * ln_bracket + ln_prior
    };
    let integral = integrate_semi_infinite(log_integrand, opts)?;
    Ok(Evidence::from_log_bf10(integral.log_value, Method::GdsQuadrature))
}
