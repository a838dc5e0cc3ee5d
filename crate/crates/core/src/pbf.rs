//! Pearson Bayes factors.
//!
//! Under a Pearson Type VI prior on the variance ratio τ = σ²ₐ/σ², with the
//! one-parameter restriction `kappa = r`, `beta = (n−p)/2 − alpha − 2`, the
//! random-effects ANOVA Bayes factor has a closed form. It can be written in
//! terms of the sums of squares ([`ws_from_ss`]) or, using
//! `SST/SSR = 1 + xF/y`, in terms of a reported `F(x, y)` alone
//! ([`pbf_anova`]). With `x = 1` and `F = t²` it reduces to the t-test form
//! ([`pbf_ttest`]).
//!
//! Rounded reported statistics are used as given. Two-decimal rounding of F
//! can move the third decimal of the Bayes factor: `F(2,15)=7.16` gives
//! 10.397 where the unrounded 7.159 reproduces the sums-of-squares value
//! 10.393.

use crate::domain::{check_alpha, AnovaTable, Evidence, Method, PearsonPrior, StatKind, SummaryStat};
use crate::error::{domain, Error, Result};
use crate::specfun::{ln_gamma_unchecked as lng, log_beta};

fn check_residual_df(op: &'static str, y: f64, alpha: f64) -> Result<()> {
    if y > 2.0 + 2.0 * alpha {
        Ok(())
    } else {
        Err(domain(
            op,
            format!("residual df {y} must exceed 2 + 2 alpha = {} for a proper prior", 2.0 + 2.0 * alpha),
        ))
    }
}

/// PBF₁₀ from an ANOVA summary `F(x, y)`.
pub fn pbf_anova(stat: &SummaryStat, alpha: f64) -> Result<Evidence> {
    check_alpha("pbf_anova", alpha)?;
    let (x, y) = (stat.df1, stat.df2);
    let f = stat.f_value();
    if !(f >= 0.0) {
        return Err(domain("pbf_anova", format!("negative F ({f})")));
    }
    check_residual_df("pbf_anova", y, alpha)?;
    let ln_ratio = y.ln() - (y + x * f).ln();
    let log_bf10 = lng(x / 2.0 + alpha + 1.0) + lng(y / 2.0)
        - lng((x + y) / 2.0)
        - lng(alpha + 1.0)
        + (alpha - y / 2.0 + 1.0) * ln_ratio;
    Ok(Evidence::from_log_bf10(log_bf10, Method::Pbf))
}

/// PBF₁₀ from a t statistic with ν degrees of freedom.
pub fn pbf_ttest(stat: &SummaryStat, alpha: f64) -> Result<Evidence> {
    if stat.kind != StatKind::T {
        return Err(domain("pbf_ttest", "expected a t statistic"));
    }
    check_alpha("pbf_ttest", alpha)?;
    let (t, nu) = (stat.value, stat.df2);
    check_residual_df("pbf_ttest", nu, alpha)?;
    let log_bf10 = lng(nu / 2.0) + lng(alpha + 1.5)
        - lng((nu + 1.0) / 2.0)
        - lng(alpha + 1.0)
        + (nu - 2.0 * alpha - 2.0) / 2.0 * (t * t / nu).ln_1p();
    Ok(Evidence::from_log_bf10(log_bf10, Method::Pbf))
}

/// Dispatches on the statistic kind.
pub fn pbf(stat: &SummaryStat, alpha: f64) -> Result<Evidence> {
    match stat.kind {
        StatKind::F => pbf_anova(stat, alpha),
        StatKind::T => pbf_ttest(stat, alpha),
    }
}

/// BF₁₀ from the residual and total sums of squares of a balanced design.
pub fn ws_from_ss(table: &AnovaTable, alpha: f64) -> Result<Evidence> {
    check_alpha("ws_from_ss", alpha)?;
    let n = table.n as f64;
    let p = table.p as f64;
    check_residual_df("ws_from_ss", n - p, alpha)?;
    if table.ssr <= 0.0 {
        return Err(Error::Degenerate(
            "residual sum of squares is zero (perfect fit); evidence overflows toward H1".into(),
        ));
    }
    let log_bf10 = lng(p / 2.0 + alpha + 0.5) + lng((n - p) / 2.0)
        - lng((n - 1.0) / 2.0)
        - lng(alpha + 1.0)
        + (alpha - (n - p - 2.0) / 2.0) * (table.ssr / table.sst).ln();
    Ok(Evidence::from_log_bf10(log_bf10, Method::Ws))
}

/// Log density of the Pearson Type VI prior at `tau > 0`.
pub fn pearson_type6_ln_pdf(tau: f64, prior: &PearsonPrior) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(domain("pearson_type6_pdf", format!("tau = {tau} must be positive")));
    }
    let PearsonPrior { alpha, beta, kappa } = *prior;
    let kt = kappa * tau;
    Ok(kappa.ln() + beta * kt.ln() - (alpha + beta + 2.0) * kt.ln_1p()
        - log_beta(alpha + 1.0, beta + 1.0)?)
}

pub fn pearson_type6_pdf(tau: f64, prior: &PearsonPrior) -> Result<f64> {
    pearson_type6_ln_pdf(tau, prior).map(f64::exp)
}

/// Location of the density maximum, `beta / (kappa (alpha + 2))`; zero when
/// the density is monotone decreasing (`beta <= 0`).
pub fn pearson_type6_mode(prior: &PearsonPrior) -> f64 {
    (prior.beta / (prior.kappa * (prior.alpha + 2.0))).max(0.0)
}
