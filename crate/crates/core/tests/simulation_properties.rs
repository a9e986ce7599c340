use ridge_shrink::simulation::{run_cell, run_grid, standard_grid, SimulationCell};
use ridge_shrink::EstimatorId;

#[test]
fn ols_amse_tracks_realized_theory() {
    let cell = SimulationCell {
        rho: 0.95,
        n: 100,
        p: 4,
        sigma2: 1.0,
        replications: 5000,
        seed: 31,
    };
    let r = run_cell(&cell).unwrap();
    let ols = r.amse[&EstimatorId::OLS];
    let se = r.std_error[&EstimatorId::OLS];
    assert!(
        (ols - r.realized_mse_ols).abs() <= 3.0 * se,
        "{ols} vs {} (se {se})",
        r.realized_mse_ols
    );
}

#[test]
fn grid_results_are_finite_and_non_degenerate() {
    let results = run_grid(&standard_grid(42, 50)).unwrap();
    assert_eq!(results.len(), 36);
    for r in &results {
        assert_eq!(r.amse.len(), 16);
        for id in EstimatorId::ALL {
            assert!(r.amse[&id].is_finite() && r.amse[&id] >= 0.0);
            assert_eq!(r.degenerate_count[&id], 0);
        }
    }
}

#[test]
fn ols_improves_with_sample_size() {
    let results = run_grid(&standard_grid(42, 200)).unwrap();
    for small in results.iter().filter(|r| r.cell.n == 50) {
        let large = results
            .iter()
            .find(|r| {
                r.cell.n == 200
                    && r.cell.rho == small.cell.rho
                    && r.cell.p == small.cell.p
                    && r.cell.sigma2 == small.cell.sigma2
            })
            .unwrap();
        assert!(large.amse[&EstimatorId::OLS] < small.amse[&EstimatorId::OLS]);
    }
}

#[test]
fn rerun_is_bit_identical() {
    let cells = standard_grid(7, 30);
    assert_eq!(run_grid(&cells).unwrap(), run_grid(&cells).unwrap());
}
