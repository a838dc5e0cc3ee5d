use pbf_core::oracle::{gds_bf10, QuadratureOptions};
use pbf_core::pbf::ws_from_ss;
use pbf_core::{AnovaTable, PearsonPrior};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quadrature_matches_closed_form_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let alphas = [-0.5, -0.25, 0.0];
    for i in 0..100 {
        let p = rng.random_range(2..=5u64);
        let r = rng.random_range(3..=30u64);
        let alpha = alphas[i % 3];
        // F spread from well below to far above 1
        let ssr = rng.random_range(1.0..100.0);
        let ssa = ssr * 10f64.powf(rng.random_range(-2.0..1.0));
        let table = AnovaTable::new(ssa, ssr, ssa + ssr, p, r).unwrap();
        let prior = PearsonPrior::for_table(alpha, &table).unwrap();
        let quad = gds_bf10(&table, &prior, QuadratureOptions::default()).unwrap();
        let exact = ws_from_ss(&table, alpha).unwrap();
        assert!(
            (quad.log_bf10 - exact.log_bf10).abs() <= 1e-6,
            "p={p} r={r} alpha={alpha} ssa={ssa} ssr={ssr}: {} vs {}",
            quad.log_bf10,
            exact.log_bf10
        );
    }
}
