//! Monte Carlo study of model-choice accuracy for balanced one-factor
//! designs.
//!
//! Data follow `Y_ij = μ + a_j + ε_ij` with group effects `a_j ~ N(0, τσ²)`
//! and errors `ε_ij ~ N(0, σ²)`, so `τ` is the variance ratio the Pearson
//! prior models and `τ = 0` is the null model. Every replicate is analysed
//! with the Pearson Bayes factor and the BIC Bayes factor; a method is
//! correct when it picks H0 exactly when `τ = 0`.
//!
//! # Seeding
//!
//! Replicates are reproducible one at a time. For a cell `(r, τ, α)` and a
//! base seed `s`:
//!
//! ```text
//! cell_seed = mix(mix(mix(s ^ r) ^ bits(τ)) ^ bits(α))
//! rep_seed  = mix(cell_seed ^ mix(rep + 1))
//! ```
//!
//! where `mix` is the SplitMix64 finalizer and `bits` the IEEE-754 bit
//! pattern. Each replicate draws from `ChaCha8Rng::seed_from_u64(rep_seed)`,
//! group effects first, then the `r × p` errors in row-major order.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::classic::bic_bf_from_summary;
use crate::domain::{check_alpha, AnovaTable, Evidence, Method, Model};
use crate::error::{domain, Error, Result};
use crate::pbf::pbf_anova;
use crate::specfun::Probability;

/// Methods tallied in every cell, in output order.
pub const METHODS: [Method; 2] = [Method::Pbf, Method::Bic];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub p: u64,
    pub r_values: Vec<u64>,
    pub tau_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub reps: u64,
    pub seed: u64,
    pub mu: f64,
    pub sigma: f64,
}

impl SimConfig {
    /// The standard accuracy grid: p = 3, r ∈ {10, 30, 80}, τ ∈ {0, 0.5, 1},
    /// α ∈ {−1/2, 0}, 1000 replicates.
    pub fn standard_grid(seed: u64) -> Self {
        SimConfig {
            p: 3,
            r_values: vec![10, 30, 80],
            tau_values: vec![0.0, 0.5, 1.0],
            alpha_values: vec![-0.5, 0.0],
            reps: 1000,
            seed,
            mu: 0.0,
            sigma: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(domain("SimConfig", format!("p = {} must be at least 2", self.p)));
        }
        if self.reps < 1 {
            return Err(domain("SimConfig", "reps must be at least 1"));
        }
        if let Some(r) = self.r_values.iter().find(|&&r| r < 2) {
            return Err(domain("SimConfig", format!("r = {r} must be at least 2")));
        }
        if let Some(t) = self.tau_values.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(domain("SimConfig", format!("tau = {t} must be nonnegative")));
        }
        for &a in &self.alpha_values {
            check_alpha("SimConfig", a)?;
        }
        if !(self.sigma > 0.0) || !self.mu.is_finite() {
            return Err(domain("SimConfig", "sigma must be positive and mu finite"));
        }
        Ok(())
    }

    /// Cells ordered by τ, then r, then α.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &tau in &self.tau_values {
            for &r in &self.r_values {
                for &alpha in &self.alpha_values {
                    cells.push(Cell { r, tau, alpha });
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub r: u64,
    pub tau: f64,
    pub alpha: f64,
}

impl Cell {
    pub fn truth(&self) -> Model {
        if self.tau == 0.0 {
            Model::H0
        } else {
            Model::H1
        }
    }
}

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn cell_seed(base_seed: u64, cell: &Cell) -> u64 {
    mix(mix(mix(base_seed ^ cell.r) ^ cell.tau.to_bits()) ^ cell.alpha.to_bits())
}

pub fn rep_seed(cell_seed: u64, rep: u64) -> u64 {
    mix(cell_seed ^ mix(rep + 1))
}

/// Balanced data, `r` rows of `p` groups, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedData {
    pub p: usize,
    pub r: usize,
    pub values: Vec<f64>,
}

impl BalancedData {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != p) {
            return Err(domain("BalancedData", "rows have unequal lengths"));
        }
        Ok(BalancedData {
            p,
            r: rows.len(),
            values: rows.concat(),
        })
    }

    pub fn get(&self, row: usize, group: usize) -> f64 {
        self.values[row * self.p + group]
    }
}

/// Draws one dataset from the random-effects model.
pub fn generate_dataset<R: Rng + ?Sized>(
    p: usize,
    r: usize,
    tau: f64,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> BalancedData {
    let effect_sd = (tau.max(0.0)).sqrt() * sigma;
    let effects: Vec<f64> = (0..p)
        .map(|_| effect_sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut values = Vec::with_capacity(r * p);
    for _ in 0..r {
        for effect in &effects {
            values.push(mu + effect + sigma * rng.sample::<f64, _>(StandardNormal));
        }
    }
    BalancedData { p, r, values }
}

/// One-way ANOVA sums of squares of a balanced dataset.
pub fn decompose(data: &BalancedData) -> Result<AnovaTable> {
    let (p, r) = (data.p, data.r);
    if p < 2 || r < 2 {
        return Err(domain("decompose", format!("need p >= 2 and r >= 2, got p = {p}, r = {r}")));
    }
    let n = (p * r) as f64;
    let grand = data.values.iter().sum::<f64>() / n;
    let means: Vec<f64> = (0..p)
        .map(|j| (0..r).map(|i| data.get(i, j)).sum::<f64>() / r as f64)
        .collect();
    let ssa = r as f64 * means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ssr: f64 = (0..r)
        .flat_map(|i| (0..p).map(move |j| (i, j)))
        .map(|(i, j)| (data.get(i, j) - means[j]).powi(2))
        .sum();
    if ssa + ssr == 0.0 {
        return Err(Error::Degenerate("all observations are identical".into()));
    }
    // sst is formed from the parts so the identity holds exactly
    AnovaTable::new(ssa, ssr, ssa + ssr, p as u64, r as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodTally {
    pub method: Method,
    pub correct: u64,
    pub chose_h0: u64,
    pub chose_h1: u64,
    pub accuracy: f64,
    pub mean_post_h0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCellResult {
    pub cell: Cell,
    pub reps: u64,
    pub base_seed: u64,
    /// Replicates whose data could not be analysed.
    pub degenerate: u64,
    pub tallies: Vec<MethodTally>,
    /// Per-replicate `p(H₀ | D)` at even prior odds, one vector per method
    /// in the order of `tallies`.
    #[serde(skip)]
    pub post_h0: Vec<Vec<f64>>,
}

impl SimCellResult {
    pub fn tally(&self, method: Method) -> Option<&MethodTally> {
        self.tallies.iter().find(|t| t.method == method)
    }

    pub fn accuracy(&self, method: Method) -> Option<f64> {
        self.tally(method).map(|t| t.accuracy)
    }
}

fn analyse(table: &AnovaTable, alpha: f64) -> Result<[Evidence; 2]> {
    if table.ssr == 0.0 {
        return Err(Error::Degenerate("zero residual sum of squares".into()));
    }
    let stat = table.summary()?;
    let pbf = pbf_anova(&stat, alpha)?;
    let (bic, _) = bic_bf_from_summary(&stat, table.n)?;
    Ok([pbf, bic])
}

/// Runs every replicate of one cell.
pub fn run_cell(cell: Cell, config: &SimConfig) -> Result<SimCellResult> {
    config.validate()?;
    check_alpha("run_cell", cell.alpha)?;
    let seed = cell_seed(config.seed, &cell);
    let even = Probability::new(0.5)?;
    let truth = cell.truth();
    let mut degenerate = 0;
    let mut correct = [0u64; 2];
    let mut chose_h0 = [0u64; 2];
    let mut chose_h1 = [0u64; 2];
    let mut post_h0: Vec<Vec<f64>> = (0..2).map(|_| Vec::with_capacity(config.reps as usize)).collect();

    for rep in 0..config.reps {
        let mut rng = ChaCha8Rng::seed_from_u64(rep_seed(seed, rep));
        let data = generate_dataset(
            config.p as usize,
            cell.r as usize,
            cell.tau,
            config.mu,
            config.sigma,
            &mut rng,
        );
        let evidence = match decompose(&data).and_then(|t| analyse(&t, cell.alpha)) {
            Ok(e) => e,
            Err(Error::Degenerate(_)) => {
                degenerate += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for (m, e) in evidence.iter().enumerate() {
            let choice = e.choose_model();
            match choice {
                Model::H0 => chose_h0[m] += 1,
                Model::H1 => chose_h1[m] += 1,
            }
            if choice == truth {
                correct[m] += 1;
            }
            post_h0[m].push(e.posterior_prob_h0(even)?.value());
        }
    }

    let reps = config.reps;
    let tallies = METHODS
        .iter()
        .enumerate()
        .map(|(m, &method)| {
            let analysed = post_h0[m].len().max(1) as f64;
            MethodTally {
                method,
                correct: correct[m],
                chose_h0: chose_h0[m],
                chose_h1: chose_h1[m],
                accuracy: correct[m] as f64 / reps as f64,
                mean_post_h0: post_h0[m].iter().sum::<f64>() / analysed,
            }
        })
        .collect();
    Ok(SimCellResult {
        cell,
        reps,
        base_seed: config.seed,
        degenerate,
        tallies,
        post_h0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimGrid {
    pub config: SimConfig,
    pub cells: Vec<SimCellResult>,
}

/// Runs all cells of the grid in [`SimConfig::cells`] order.
pub fn run_grid(config: &SimConfig) -> Result<SimGrid> {
    config.validate()?;
    let cells = config
        .cells()
        .into_iter()
        .map(|cell| run_cell(cell, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimGrid {
        config: config.clone(),
        cells,
    })
}

impl SimGrid {
    pub fn find(&self, r: u64, tau: f64, alpha: f64) -> Option<&SimCellResult> {
        self.cells
            .iter()
            .find(|c| c.cell.r == r && c.cell.tau == tau && c.cell.alpha == alpha)
    }

    /// `r,tau,alpha,method,accuracy,mean_post_h0,reps,seed`, one line per
    /// cell and method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,tau,alpha,method,accuracy,mean_post_h0,reps,seed\n");
        for c in &self.cells {
            for t in &c.tallies {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    c.cell.r, c.cell.tau, c.cell.alpha, t.method, t.accuracy, t.mean_post_h0, c.reps, c.base_seed
                );
            }
        }
        out
    }

    /// Per-replicate posterior probabilities:
    /// `r,tau,alpha,method,rep,post_h0`.
    pub fn posteriors_csv(&self) -> String {
        let mut out = String::from("r,tau,alpha,method,rep,post_h0\n");
        for c in &self.cells {
            for (t, probs) in c.tallies.iter().zip(&c.post_h0) {
                for (rep, prob) in probs.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        c.cell.r, c.cell.tau, c.cell.alpha, t.method, rep, prob
                    );
                }
            }
        }
        out
    }

    /// Accuracy table: one block per τ, one row per r, and a PBF/BIC column
    /// pair for each α.
    pub fn render_table(&self) -> String {
        let cfg = &self.config;
        let mut out = String::new();
        let pair_width = 2 * 7 + 1;
        let _ = write!(out, "{:<10}", "");
        for &a in &cfg.alpha_values {
            let _ = write!(out, "  {:^pair_width$}", format!("alpha={}", fmt_alpha(a)));
        }
        out.push('\n');
        let _ = write!(out, "{:<10}", "");
        for _ in &cfg.alpha_values {
            let _ = write!(out, "  {:>7} {:>7}", "PBF", "BIC");
        }
        out.push('\n');
        for &tau in &cfg.tau_values {
            let _ = writeln!(out, "tau={tau}:");
            for &r in &cfg.r_values {
                let _ = write!(out, "{:<10}", format!("  r={r}"));
                for &a in &cfg.alpha_values {
                    match self.find(r, tau, a) {
                        Some(c) => {
                            for m in METHODS {
                                let _ = write!(out, "{}{:>7.3}", if m == Method::Pbf { "  " } else { " " }, c.accuracy(m).unwrap_or(f64::NAN));
                            }
                        }
                        None => {
                            let _ = write!(out, "  {:>7} {:>7}", "-", "-");
                        }
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

fn fmt_alpha(a: f64) -> String {
    if a == -0.5 {
        "-1/2".to_string()
    } else {
        format!("{a}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_data() -> BalancedData {
        BalancedData::from_rows(&[
            vec![2.0, 5.0, 8.0],
            vec![3.0, 9.0, 6.0],
            vec![8.0, 10.0, 12.0],
            vec![6.0, 13.0, 11.0],
            vec![5.0, 8.0, 11.0],
            vec![6.0, 9.0, 12.0],
        ])
        .unwrap()
    }

    #[test]
    fn decompose_worked_example() {
        let t = decompose(&example_data()).unwrap();
        assert!((t.ssa - 84.0).abs() < 1e-9);
        assert!((t.ssr - 88.0).abs() < 1e-9);
        assert!((t.sst - 172.0).abs() < 1e-9);
        assert_eq!((t.n, t.p, t.r), (18, 3, 6));
        assert!((t.f_stat() - 7.159).abs() < 0.01);
    }

    #[test]
    fn decompose_column_constant() {
        let data = BalancedData::from_rows(&[vec![1.0, 4.0, 9.0], vec![1.0, 4.0, 9.0], vec![1.0, 4.0, 9.0]]).unwrap();
        let t = decompose(&data).unwrap();
        assert_eq!(t.ssr, 0.0);
        assert_eq!(t.ssa, t.sst);
    }

    #[test]
    fn decompose_rejects_constant_data() {
        let data = BalancedData::from_rows(&[vec![2.0; 3], vec![2.0; 3]]).unwrap();
        assert!(matches!(decompose(&data), Err(Error::Degenerate(_))));
        let tiny = BalancedData::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(decompose(&tiny).is_err());
    }

    #[test]
    fn decompose_ignores_row_order_within_a_group() {
        let base = decompose(&example_data()).unwrap();
        let mut shuffled = example_data();
        // permute rows of group 1 only
        let col: Vec<f64> = (0..6).map(|i| shuffled.get(i, 1)).collect();
        for (i, v) in col.iter().rev().enumerate() {
            shuffled.values[i * 3 + 1] = *v;
        }
        let t = decompose(&shuffled).unwrap();
        assert!((t.ssa - base.ssa).abs() < 1e-12);
        assert!((t.ssr - base.ssr).abs() < 1e-12);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate_dataset(3, 10, 1.0, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        let b = generate_dataset(3, 10, 1.0, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let c = generate_dataset(3, 10, 1.0, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(10));
        assert_ne!(a, c);
    }

    #[test]
    fn null_generator_centres_on_mu() {
        let data = generate_dataset(3, 100_000, 0.0, 2.5, 1.0, &mut ChaCha8Rng::seed_from_u64(1));
        let mean = data.values.iter().sum::<f64>() / data.values.len() as f64;
        assert!((mean - 2.5).abs() < 0.01);
        for j in 0..3 {
            let m = (0..data.r).map(|i| data.get(i, j)).sum::<f64>() / data.r as f64;
            assert!((m - 2.5).abs() < 0.02);
        }
    }

    #[test]
    fn group_effect_variance_is_tau() {
        // averaging many draws of the between-group variance of column means
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 8000;
        let mut total = 0.0;
        for _ in 0..draws {
            let data = generate_dataset(3, 200, 1.0, 0.0, 1.0, &mut rng);
            let means: Vec<f64> = (0..3)
                .map(|j| (0..data.r).map(|i| data.get(i, j)).sum::<f64>() / data.r as f64)
                .collect();
            let g = means.iter().sum::<f64>() / 3.0;
            total += means.iter().map(|m| (m - g).powi(2)).sum::<f64>() / 2.0;
        }
        // E = tau + sigma²/r
        let avg = total / draws as f64;
        assert!((avg - (1.0 + 1.0 / 200.0)).abs() < 0.05, "avg = {avg}");
    }

    #[test]
    fn large_r_column_means_spread_like_tau() {
        let data = generate_dataset(3, 100_000, 1.0, 0.0, 1.0, &mut ChaCha8Rng::seed_from_u64(3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let effects: Vec<f64> = (0..3).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        for (j, effect) in effects.iter().enumerate() {
            let m = (0..data.r).map(|i| data.get(i, j)).sum::<f64>() / data.r as f64;
            assert!((m - effect).abs() < 0.02);
        }
    }

    #[test]
    fn seeds_differ_across_cells_and_reps() {
        let a = cell_seed(1, &Cell { r: 10, tau: 0.0, alpha: 0.0 });
        let b = cell_seed(1, &Cell { r: 10, tau: 0.0, alpha: -0.5 });
        let c = cell_seed(1, &Cell { r: 30, tau: 0.0, alpha: 0.0 });
        assert!(a != b && a != c && b != c);
        assert_ne!(rep_seed(a, 0), rep_seed(a, 1));
    }

    #[test]
    fn tiny_grid_smoke() {
        let mut cfg = SimConfig::standard_grid(5);
        cfg.reps = 1;
        let grid = run_grid(&cfg).unwrap();
        assert_eq!(grid.cells.len(), 18);
        for c in &grid.cells {
            for t in &c.tallies {
                assert!(t.accuracy == 0.0 || t.accuracy == 1.0);
                assert_eq!(t.chose_h0 + t.chose_h1 + c.degenerate, 1);
            }
        }
    }

    #[test]
    fn cell_is_reproducible_in_isolation() {
        let mut cfg = SimConfig::standard_grid(11);
        cfg.reps = 20;
        let grid = run_grid(&cfg).unwrap();
        let cell = Cell { r: 30, tau: 0.5, alpha: 0.0 };
        let alone = run_cell(cell, &cfg).unwrap();
        assert_eq!(grid.find(30, 0.5, 0.0).unwrap(), &alone);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SimConfig::standard_grid(1);
        cfg.reps = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = SimConfig::standard_grid(1);
        cfg.tau_values.push(-1.0);
        assert!(cfg.validate().is_err());
        let mut cfg = SimConfig::standard_grid(1);
        cfg.alpha_values.push(0.5);
        assert!(cfg.validate().is_err());
        let mut cfg = SimConfig::standard_grid(1);
        cfg.p = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn table_and_csv_layout() {
        let mut cfg = SimConfig::standard_grid(2);
        cfg.reps = 3;
        let grid = run_grid(&cfg).unwrap();
        let csv = grid.to_csv();
        assert_eq!(csv.lines().count(), 1 + 18 * 2);
        assert!(csv.starts_with("r,tau,alpha,method,accuracy,mean_post_h0,reps,seed\n"));
        let table = grid.render_table();
        assert!(table.contains("alpha=-1/2"));
        assert_eq!(table.lines().filter(|l| l.trim_start().starts_with("r=")).count(), 9);
        assert_eq!(grid.posteriors_csv().lines().count(), 1 + 18 * 2 * 3);
    }
}
