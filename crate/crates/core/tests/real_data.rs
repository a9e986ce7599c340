use ridge_shrink::application::{bundled, evaluate_real, evaluate_real_with, ResponseScaling};
use ridge_shrink::linalg::{center_standardize, condition_number, sym_eig};
use ridge_shrink::regression::{mse_general, mse_ols};
use ridge_shrink::EstimatorId;

fn eig_of(id: &str) -> ridge_shrink::linalg::SymmetricEigen {
    let x = center_standardize(bundled(id).unwrap().dataset.x()).unwrap();
    let xtx = x.transpose() * &x;
    for j in 0..4 {
        assert!((xtx[(j, j)] - 1.0).abs() < 1e-12);
    }
    sym_eig(&xtx).unwrap()
}

#[test]
fn cement_eigenvalues_and_condition_number() {
    let e = eig_of("cement");
    for (got, want) in e.eigenvalues.iter().zip([2.2357, 1.5761, 0.1866, 0.0016]) {
        assert!((got - want).abs() <= 5e-4, "{got} vs {want}");
    }
    let kappa = condition_number(&e).unwrap();
    assert!((kappa - 1376.880).abs() <= 25.0, "{kappa}");
}

#[test]
fn gruber_condition_number() {
    let e = eig_of("gruber");
    let kappa = condition_number(&e).unwrap();
    assert!((kappa - 146.4222).abs() <= 1.0, "{kappa}");
    // the three smaller eigenvalues match the published ones
    for (got, want) in e.eigenvalues.iter().skip(1).zip([0.9122, 0.1098, 0.0202]) {
        assert!((got - want).abs() <= 5e-4, "{got} vs {want}");
    }
    assert!((e.eigenvalues.sum() - 4.0).abs() < 1e-12);
}

#[test]
fn y8_entry_through_mse_general() {
    let r = evaluate_real(&bundled("gruber").unwrap()).unwrap();
    let k = r.k[&EstimatorId::Y8];
    let mse = mse_general(&[k; 4], &r.eigenvalues, &r.alpha_ols, r.sigma2_hat).unwrap();
    assert!((mse - 0.2100).abs() <= 5e-3);
    assert!((mse_ols(&r.eigenvalues, r.sigma2_hat).unwrap() - 0.2833).abs() <= 5e-3);
}

#[test]
fn cement_ordering() {
    let r = evaluate_real(&bundled("cement").unwrap()).unwrap();
    let ols = r.mse[&EstimatorId::OLS];
    assert!((ols - 1.3710).abs() <= 2e-2);
    assert!((r.mse[&EstimatorId::Y8] - 0.1753).abs() <= 5e-3);
    assert!(EstimatorId::Y_FAMILY.iter().all(|id| r.mse[id] < ols));
}

#[test]
fn centered_only_response_scales_variance() {
    // scaling Y by c scales sigma2_hat and alpha^2 by c^2; k_Y is scale-free
    let nd = bundled("cement").unwrap();
    let unit = evaluate_real_with(&nd, ResponseScaling::UnitLength).unwrap();
    let centered = evaluate_real_with(&nd, ResponseScaling::CenteredOnly).unwrap();
    let y = nd.dataset.y();
    let mean = y.mean();
    let ss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    assert!((centered.sigma2_hat / unit.sigma2_hat - ss).abs() <= 1e-8 * ss);
    for id in EstimatorId::Y_FAMILY {
        assert!((centered.k[&id] - unit.k[&id]).abs() <= 1e-10 * unit.k[&id]);
        assert!((centered.mse[&id] / unit.mse[&id] - ss).abs() <= 1e-8 * ss);
    }
}
