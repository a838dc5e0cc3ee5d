//! Evidence reports for a single statline.

use std::fmt::Write as _;

use serde::Serialize;

use super::statline::Statline;
use crate::classic::{bic_bf_from_summary, sellke_bound};
use crate::domain::Evidence;
use crate::error::Result;
use crate::pbf::pbf;
use crate::specfun::Probability;

/// Default prior shapes: the two ends of the admissible range.
pub const DEFAULT_ALPHAS: [f64; 2] = [0.0, -0.5];

/// Linear-scale Bayes factors above this are shown as `>1e15` in text.
pub const DISPLAY_CAP: f64 = 1e15;

#[derive(Debug, Clone)]
pub struct Settings {
    pub alphas: Vec<f64>,
    pub prior_h0: Probability,
    pub n: Option<u64>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            alphas: DEFAULT_ALPHAS.to_vec(),
            prior_h0: Probability::new(0.5).expect("0.5 is a probability"),
            n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub log_bf10: f64,
    pub bf10: f64,
    pub bf01: f64,
    pub post_h0: f64,
    pub post_h1: f64,
}

impl MethodReport {
    fn new(evidence: Evidence, alpha: Option<f64>, prior_h0: Probability) -> Result<Self> {
        let post_h0 = evidence.posterior_prob_h0(prior_h0)?.value();
        let post_h1 = evidence.reciprocal().posterior_prob_h0(prior_h0.complement())?.value();
        Ok(MethodReport {
            name: evidence.method.name().to_string(),
            alpha,
            log_bf10: evidence.log_bf10,
            bf10: evidence.bf10(),
            bf01: evidence.bf01(),
            post_h0,
            post_h1,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub input: String,
    pub p_value: Option<f64>,
    pub sellke_bound: Option<f64>,
    pub methods: Vec<MethodReport>,
    pub warnings: Vec<String>,
}

/// Computes the evidence battery for one statline.
///
/// A failure in one method is recorded as a warning and the remaining
/// methods are still reported. Per-line `n` and `alpha` override `settings`.
pub fn evaluate(line: &Statline, settings: &Settings) -> Report {
    let stat = line.stat;
    let prior_h0 = settings.prior_h0;
    let mut warnings = Vec::new();
    let mut methods = Vec::new();

    let alphas: Vec<f64> = match line.alpha {
        Some(a) => vec![a],
        None => settings.alphas.clone(),
    };
    for alpha in alphas {
        match pbf(&stat, alpha).and_then(|e| MethodReport::new(e, Some(alpha), prior_h0)) {
            Ok(m) => methods.push(m),
            Err(e) => warnings.push(format!("PBF (alpha={alpha}) unavailable: {e}")),
        }
    }

    if let Some(n) = line.n.or(settings.n) {
        match bic_bf_from_summary(&stat, n) {
            Ok((e, mismatch)) => {
                if let Some(m) = mismatch {
                    warnings.push(m.to_string());
                }
                match MethodReport::new(e, None, prior_h0) {
                    Ok(m) => methods.push(m),
                    Err(e) => warnings.push(format!("BIC unavailable: {e}")),
                }
            }
            Err(e) => warnings.push(format!("BIC unavailable: {e}")),
        }
    }

    let p_value = match stat.p_value() {
        Ok(p) => Some(p),
        Err(e) => {
            warnings.push(format!("p-value unavailable: {e}"));
            None
        }
    };
    let sellke = p_value.and_then(|p| match sellke_bound(p) {
        Ok(b) => {
            if b.clamped {
                warnings.push("p >= 1/e: Sellke bound floored at 1".to_string());
            }
            Some(b.value)
        }
        Err(e) => {
            warnings.push(format!("Sellke bound unavailable: {e}"));
            None
        }
    });

    if line.value_decimals <= 2 && stat.value != 0.0 {
        warnings.push(format!(
            "statistic reported to {} decimal place(s); rounding can shift the third decimal of the Bayes factor",
            line.value_decimals
        ));
    }

    Report {
        label: line.label.clone(),
        input: line.canonical(),
        p_value: p_value.map(Probability::value),
        sellke_bound: sellke,
        methods,
        warnings,
    }
}

/// Four decimals, the precision used everywhere in text output.
pub fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt_bf(x: f64) -> String {
    if x > DISPLAY_CAP {
        ">1e15".to_string()
    } else {
        fmt4(x)
    }
}

impl Report {
    pub fn find(&self, name: &str, alpha: Option<f64>) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.name == name && m.alpha == alpha)
    }

    pub fn render_text(&self, quiet: bool) -> String {
        let mut out = String::new();
        match &self.label {
            Some(label) => {
                let _ = writeln!(out, "{label}: {}", self.input);
            }
            None => {
                let _ = writeln!(out, "{}", self.input);
            }
        }
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), fmt4);
        let _ = writeln!(out, "  p-value        {}", opt(self.p_value));
        let _ = writeln!(out, "  Sellke bound   {}", opt(self.sellke_bound));
        let _ = writeln!(
            out,
            "  {:<16} {:>12} {:>12} {:>12} {:>10} {:>10}",
            "method", "log BF10", "BF10", "BF01", "p(H0|D)", "p(H1|D)"
        );
        for m in &self.methods {
            let name = match m.alpha {
                Some(a) => format!("{} a={}", m.name, a),
                None => m.name.clone(),
            };
            let _ = writeln!(
                out,
                "  {:<16} {:>12} {:>12} {:>12} {:>10} {:>10}",
                name,
                fmt4(m.log_bf10),
                fmt_bf(m.bf10),
                fmt_bf(m.bf01),
                fmt4(m.post_h0),
                fmt4(m.post_h1)
            );
        }
        if !quiet {
            for w in &self.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }
        out
    }
}
