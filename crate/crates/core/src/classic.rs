//! Reference Bayes factors the Pearson form is compared against: the BIC
//! approximation (from sums of squares or from a reported statistic), the
//! Gönen two-sample t-test factor, the Zellner g-prior factor, and the
//! Sellke upper bound on BF₁₀ implied by a p-value.

use std::f64::consts::E;

use serde::Serialize;

use crate::domain::{Evidence, Method, SummaryStat};
use crate::error::{domain, Result};
use crate::specfun::Probability;

/// `n·ln(SSR/SST) + k·ln n`.
pub fn bic_value(ssr: f64, sst: f64, n: u64, k: u32) -> Result<f64> {
    if !(ssr > 0.0) || !(ssr <= sst) {
        return Err(domain("bic_value", format!("need 0 < ssr <= sst, got ssr = {ssr}, sst = {sst}")));
    }
    if n == 0 {
        return Err(domain("bic_value", "n must be positive"));
    }
    let n = n as f64;
    Ok(n * (ssr / sst).ln() + k as f64 * n.ln())
}

/// BF from two BIC values: `ln BF₀₁ = (BIC(H₁) − BIC(H₀)) / 2`.
pub fn bic_bf01(bic_h1: f64, bic_h0: f64) -> Evidence {
    Evidence::from_log_bf01((bic_h1 - bic_h0) / 2.0, Method::Bic)
}

/// Raised when the supplied total sample size disagrees with the degrees of
/// freedom of the statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfMismatch {
    pub n: u64,
    pub implied_n: f64,
}

impl std::fmt::Display for DfMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n = {} differs from df1 + df2 + 1 = {}; BIC uses the supplied n",
            self.n, self.implied_n
        )
    }
}

/// BIC Bayes factor from a reported statistic and total sample size:
/// `ln BF₀₁ = (x·ln n − n·ln(1 + xF/y)) / 2`, with `x = 1`, `F = t²` for a t
/// statistic.
pub fn bic_bf_from_summary(stat: &SummaryStat, n: u64) -> Result<(Evidence, Option<DfMismatch>)> {
    if n < 2 {
        return Err(domain("bic_bf_from_summary", format!("n = {n} must be at least 2")));
    }
    let (x, y, f) = (stat.df1, stat.df2, stat.f_value());
    let nf = n as f64;
    let log_bf01 = (x * nf.ln() - nf * (x * f / y).ln_1p()) / 2.0;
    let implied_n = x + y + 1.0;
    let warning = ((implied_n - nf).abs() > 1e-9).then_some(DfMismatch { n, implied_n });
    Ok((Evidence::from_log_bf01(log_bf01, Method::Bic), warning))
}

/// Gönen et al. two-sample t-test BF₁₀ with a normal prior of variance
/// `sigma2_a` on the standardized effect.
pub fn gonen_bf10(t: f64, n1: u64, n2: u64, sigma2_a: f64) -> Result<Evidence> {
    if n1 < 2 || n2 < 2 {
        return Err(domain("gonen_bf10", format!("group sizes ({n1}, {n2}) must be at least 2")));
    }
    if !(sigma2_a > 0.0) || !sigma2_a.is_finite() {
        return Err(domain("gonen_bf10", format!("prior variance {sigma2_a} must be positive")));
    }
    if !t.is_finite() {
        return Err(domain("gonen_bf10", "t must be finite"));
    }
    let nu = (n1 + n2 - 2) as f64;
    let scale = effective_sample_size(n1, n2) * sigma2_a;
    let t2 = t * t;
    let log_bf10 = (nu + 1.0) / 2.0 * ((t2 / nu).ln_1p() - (t2 / (nu * (1.0 + scale))).ln_1p())
        - 0.5 * scale.ln_1p();
    Ok(Evidence::from_log_bf10(log_bf10, Method::Gonen))
}

/// `(1/n1 + 1/n2)⁻¹`.
pub fn effective_sample_size(n1: u64, n2: u64) -> f64 {
    1.0 / (1.0 / n1 as f64 + 1.0 / n2 as f64)
}

/// Limit of `ln` [`gonen_bf10`] as `|t| → ∞`: `(ν/2)·ln(1 + n_δσ²ₐ)`.
pub fn gonen_log_asymptote(n1: u64, n2: u64, sigma2_a: f64) -> f64 {
    let nu = (n1 + n2 - 2) as f64;
    let scale = effective_sample_size(n1, n2) * sigma2_a;
    ((nu + 1.0) / 2.0 - 0.5) * scale.ln_1p()
}

/// Zellner g-prior BF₁₀ for a regression with `k` predictors and
/// coefficient of determination `r2`.
pub fn zellner_bf10(r2: f64, n: u64, k: u64, g: f64) -> Result<Evidence> {
    if n <= k + 1 {
        return Err(domain("zellner_bf10", format!("need n > k + 1, got n = {n}, k = {k}")));
    }
    if k == 0 {
        return Err(domain("zellner_bf10", "k must be positive"));
    }
    if !(0.0..1.0).contains(&r2) {
        return Err(domain("zellner_bf10", format!("R² = {r2} must lie in [0, 1)")));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(domain("zellner_bf10", format!("g = {g} must be positive")));
    }
    let (n, k) = (n as f64, k as f64);
    let log_bf10 = (n - k - 1.0) / 2.0 * g.ln_1p() - (n - 1.0) / 2.0 * (g * (1.0 - r2)).ln_1p();
    Ok(Evidence::from_log_bf10(log_bf10, Method::Zellner))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SellkeBound {
    pub value: f64,
    /// The raw formula was below 1 (p ≥ 1/e) and the bound was floored at 1.
    pub clamped: bool,
}

/// Upper bound `−1 / (e·p·ln p)` on BF₁₀, floored at 1 for `p >= 1/e`.
pub fn sellke_bound(p: Probability) -> Result<SellkeBound> {
    let p = p.value();
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("sellke_bound", format!("p = {p} must lie strictly between 0 and 1")));
    }
    if p >= 1.0 / E {
        return Ok(SellkeBound {
            value: 1.0,
            clamped: true,
        });
    }
    Ok(SellkeBound {
        value: -1.0 / (E * p * p.ln()),
        clamped: false,
    })
}
