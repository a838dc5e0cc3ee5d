//! Value types shared across the crate and the Bayes-factor orientation
//! algebra.
//!
//! Bayes factors are always carried as `ln BF₁₀`; linear-scale numbers are
//! produced only when reporting.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StatKind {
    F,
    T,
}

/// A reported test result, `F(x, y) = v` or `t(ν) = v`.
///
/// For a t statistic `df1` is fixed at 1 and `df2` holds ν.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStat {
    pub kind: StatKind,
    pub value: f64,
    pub df1: f64,
    pub df2: f64,
}

impl SummaryStat {
    pub fn f(value: f64, df1: f64, df2: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(domain("SummaryStat", format!("negative F ({value})")));
        }
        if !(df1 >= 1.0) || !df1.is_finite() {
            return Err(domain("SummaryStat", format!("between-groups df {df1} must be at least 1")));
        }
        if !(df2 > 0.0) || !df2.is_finite() {
            return Err(domain("SummaryStat", format!("residual df {df2} must be positive")));
        }
        Ok(SummaryStat {
            kind: StatKind::F,
            value,
            df1,
            df2,
        })
    }

    pub fn t(value: f64, df: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(domain("SummaryStat", format!("t = {value} must be finite")));
        }
        if !(df > 0.0) || !df.is_finite() {
            return Err(domain("SummaryStat", format!("df {df} must be positive")));
        }
        Ok(SummaryStat {
            kind: StatKind::T,
            value,
            df1: 1.0,
            df2: df,
        })
    }

    /// The statistic on the F scale (`t²` for a t statistic).
    pub fn f_value(&self) -> f64 {
        match self.kind {
            StatKind::F => self.value,
            StatKind::T => self.value * self.value,
        }
    }

    /// Upper-tail p-value: one-tailed in F, two-sided in t.
    pub fn p_value(&self) -> Result<Probability> {
        match self.kind {
            StatKind::F => crate::specfun::f_tail_p(self.value, self.df1, self.df2),
            StatKind::T => crate::specfun::t_two_sided_p(self.value, self.df2),
        }
    }
}

/// Canonical rendering, `F(2,15)=7.16` or `t(38)=3`.
impl fmt::Display for SummaryStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StatKind::F => write!(f, "F({},{})={}", self.df1, self.df2, self.value),
            StatKind::T => write!(f, "t({})={}", self.df2, self.value),
        }
    }
}

const SS_REL_TOL: f64 = 1e-9;

/// Sums-of-squares decomposition of a balanced one-factor design with `p`
/// groups of `r` replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnovaTable {
    pub ssa: f64,
    pub ssr: f64,
    pub sst: f64,
    pub n: u64,
    pub p: u64,
    pub r: u64,
}

impl AnovaTable {
    /// Builds a table, checking `sst = ssa + ssr` to a relative 1e-9 and
    /// renormalizing `ssr = sst − ssa`.
    pub fn new(ssa: f64, ssr: f64, sst: f64, p: u64, r: u64) -> Result<Self> {
        if p < 2 {
            return Err(domain("AnovaTable", format!("need at least 2 groups, got {p}")));
        }
        if r < 1 {
            return Err(domain("AnovaTable", "need at least one replicate per group"));
        }
        let n = p * r;
        if n <= p {
            return Err(domain("AnovaTable", format!("n = {n} must exceed p = {p}")));
        }
        for (name, v) in [("ssa", ssa), ("ssr", ssr), ("sst", sst)] {
            if !v.is_finite() || v < 0.0 {
                return Err(domain("AnovaTable", format!("{name} = {v} must be nonnegative")));
            }
        }
        if sst == 0.0 {
            return Err(Error::Degenerate("total sum of squares is zero".into()));
        }
        if (sst - (ssa + ssr)).abs() > SS_REL_TOL * sst {
            return Err(domain(
                "AnovaTable",
                format!("sst = {sst} does not equal ssa + ssr = {}", ssa + ssr),
            ));
        }
        Ok(AnovaTable {
            ssa,
            ssr: (sst - ssa).max(0.0),
            sst,
            n,
            p,
            r,
        })
    }

    /// Table from the residual and total sums of squares alone.
    pub fn from_residual(ssr: f64, sst: f64, p: u64, r: u64) -> Result<Self> {
        Self::new(sst - ssr, ssr, sst, p, r)
    }

    pub fn df_between(&self) -> f64 {
        (self.p - 1) as f64
    }

    pub fn df_within(&self) -> f64 {
        (self.n - self.p) as f64
    }

    /// `(SSA/x) / (SSR/y)`; infinite when `ssr` is zero.
    pub fn f_stat(&self) -> f64 {
        (self.ssa / self.df_between()) / (self.ssr / self.df_within())
    }

    pub fn summary(&self) -> Result<SummaryStat> {
        SummaryStat::f(self.f_stat(), self.df_between(), self.df_within())
    }
}

pub const ALPHA_MIN: f64 = -0.5;
pub const ALPHA_MAX: f64 = 0.0;

pub(crate) fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if (ALPHA_MIN..=ALPHA_MAX).contains(&alpha) {
        Ok(())
    } else {
        Err(domain(op, format!("alpha = {alpha} is outside [-1/2, 0]")))
    }
}

/// Pearson Type VI prior on the variance ratio τ, restricted to a single
/// shape `alpha` with `kappa = r` and `beta = (n−p)/2 − alpha − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PearsonPrior {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
}

impl PearsonPrior {
    pub fn wang_sun(alpha: f64, n: u64, p: u64, r: u64) -> Result<Self> {
        check_alpha("PearsonPrior", alpha)?;
        if r == 0 || n <= p {
            return Err(domain("PearsonPrior", format!("invalid design n = {n}, p = {p}, r = {r}")));
        }
        let beta = (n - p) as f64 / 2.0 - alpha - 2.0;
        if !(beta > -1.0) {
            return Err(domain(
                "PearsonPrior",
                format!("beta = {beta} must exceed -1 (need n - p > 2 + 2 alpha)"),
            ));
        }
        Ok(PearsonPrior {
            alpha,
            beta,
            kappa: r as f64,
        })
    }

    pub fn for_table(alpha: f64, table: &AnovaTable) -> Result<Self> {
        Self::wang_sun(alpha, table.n, table.p, table.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    #[serde(rename = "PBF")]
    Pbf,
    #[serde(rename = "WS")]
    Ws,
    #[serde(rename = "BIC")]
    Bic,
    Gonen,
    Zellner,
    #[serde(rename = "GDS-quadrature")]
    GdsQuadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Pbf => "PBF",
            Method::Ws => "WS",
            Method::Bic => "BIC",
            Method::Gonen => "Gonen",
            Method::Zellner => "Zellner",
            Method::GdsQuadrature => "GDS-quadrature",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Bayes factor held as `ln BF₁₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    pub log_bf10: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    H0,
    H1,
}

impl Evidence {
    pub fn from_log_bf10(log_bf10: f64, method: Method) -> Self {
        Evidence { log_bf10, method }
    }

    pub fn from_log_bf01(log_bf01: f64, method: Method) -> Self {
        Evidence {
            log_bf10: -log_bf01,
            method,
        }
    }

    pub fn log_bf01(&self) -> f64 {
        -self.log_bf10
    }

    pub fn bf10(&self) -> f64 {
        self.log_bf10.exp()
    }

    pub fn bf01(&self) -> f64 {
        (-self.log_bf10).exp()
    }

    /// Swaps the roles of the two hypotheses.
    pub fn reciprocal(self) -> Self {
        Evidence {
            log_bf10: -self.log_bf10,
            method: self.method,
        }
    }

    /// `p(H₀ | D) = BF₀₁·π₀ / (BF₀₁·π₀ + 1 − π₀)`.
    pub fn posterior_prob_h0(&self, prior_h0: Probability) -> Result<Probability> {
        let pi0 = prior_h0.value();
        if !(pi0 > 0.0 && pi0 < 1.0) {
            return Err(domain(
                "posterior_prob_h0",
                format!("prior probability {pi0} must lie strictly between 0 and 1"),
            ));
        }
        let log_odds = self.log_bf01() + pi0.ln() - (-pi0).ln_1p();
        Ok(Probability::saturating(logistic(log_odds)))
    }

    /// H0 iff `BF₀₁ > 1`; an exact tie goes to H1.
    pub fn choose_model(&self) -> Model {
        if self.log_bf10 < 0.0 {
            Model::H0
        } else {
            Model::H1
        }
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
