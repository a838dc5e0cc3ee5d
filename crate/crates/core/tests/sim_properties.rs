use pbf_core::sim::{decompose, generate_dataset, run_grid, SimConfig, SimGrid};
use pbf_core::Method;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn grid() -> &'static SimGrid {
    static GRID: OnceLock<SimGrid> = OnceLock::new();
    GRID.get_or_init(|| run_grid(&SimConfig::standard_grid(42)).unwrap())
}

fn se(acc: f64, reps: u64) -> f64 {
    (acc * (1.0 - acc) / reps as f64).sqrt()
}

#[test]
fn null_p_values_are_uniform() {
    let reps = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ps: Vec<f64> = (0..reps)
        .map(|_| {
            let data = generate_dataset(3, 10, 0.0, 0.0, 1.0, &mut rng);
            decompose(&data).unwrap().summary().unwrap().p_value().unwrap().value()
        })
        .collect();
    ps.sort_by(f64::total_cmp);
    let n = reps as f64;
    let d = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i + 1) as f64 / n - p).max(p - i as f64 / n))
        .fold(0.0, f64::max);
    // Kolmogorov critical value at the 1% level
    let critical = 1.628 / n.sqrt();
    assert!(d <= critical, "D = {d}, critical {critical}");
}

#[test]
fn accuracy_is_nondecreasing_in_r() {
    let g = grid();
    let cfg = &g.config;
    for &tau in &cfg.tau_values {
        for &alpha in &cfg.alpha_values {
            for method in [Method::Pbf, Method::Bic] {
                for pair in cfg.r_values.windows(2) {
                    let small = g.find(pair[0], tau, alpha).unwrap().accuracy(method).unwrap();
                    let large = g.find(pair[1], tau, alpha).unwrap().accuracy(method).unwrap();
                    let slack = 2.0 * (se(small, cfg.reps).powi(2) + se(large, cfg.reps).powi(2)).sqrt();
                    assert!(
                        large >= small - slack,
                        "{} tau={tau} alpha={alpha}: r={} {small} > r={} {large}",
                        method.name(),
                        pair[0],
                        pair[1]
                    );
                }
            }
        }
    }
}

#[test]
fn pbf_keeps_up_with_bic_under_the_null() {
    let g = grid();
    for &r in &g.config.r_values {
        let cell = g.find(r, 0.0, -0.5).unwrap();
        let pbf = cell.accuracy(Method::Pbf).unwrap();
        let bic = cell.accuracy(Method::Bic).unwrap();
        assert!(pbf >= bic - 2.0 * se(bic, cell.reps), "r={r}: PBF {pbf} vs BIC {bic}");
    }
}

#[test]
fn counts_are_consistent() {
    for cell in &grid().cells {
        for t in &cell.tallies {
            assert_eq!(t.chose_h0 + t.chose_h1 + cell.degenerate, cell.reps);
            assert_eq!(t.accuracy, t.correct as f64 / cell.reps as f64);
        }
    }
}
