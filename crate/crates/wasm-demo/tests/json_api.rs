use ridge_shrink_wasm::{mse_curve_json, real_data_json, simulate_cell_json};
use serde_json::Value;

#[test]
fn real_data_report() {
    let v: Value = serde_json::from_str(&real_data_json("cement").unwrap()).unwrap();
    let y8 = v["mse"]["Y8"].as_f64().unwrap();
    assert!((y8 - 0.1753).abs() < 5e-3);
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 4);
    assert!(real_data_json("nosuch").unwrap_err().contains("gruber"));
}

#[test]
fn curve_markers_lie_on_curve() {
    let v: Value =
        serde_json::from_str(&mse_curve_json("gruber", 1e-3, 100.0, 200).unwrap()).unwrap();
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 200);
    assert!((pts[0]["k"].as_f64().unwrap() - 1e-3).abs() < 1e-15);
    assert!((pts[199]["k"].as_f64().unwrap() - 100.0).abs() < 1e-9);
    for p in pts {
        let (var, bias, mse) = (
            p["variance"].as_f64().unwrap(),
            p["bias_sq"].as_f64().unwrap(),
            p["mse"].as_f64().unwrap(),
        );
        assert!((var + bias - mse).abs() < 1e-15);
    }
    let markers = v["markers"].as_array().unwrap();
    assert_eq!(markers.len(), 15);
    let y2 = markers.iter().find(|m| m["estimator"] == "Y2").unwrap();
    assert!((y2["mse"].as_f64().unwrap() - 0.2691).abs() < 5e-3);
    assert!((v["mse_ols"].as_f64().unwrap() - 0.2833).abs() < 5e-3);
    assert!(mse_curve_json("gruber", 1.0, 0.5, 10).is_err());
}

#[test]
fn simulated_cell() {
    let v: Value =
        serde_json::from_str(&simulate_cell_json(0.9, 50, 4, 1.0, 200, 3).unwrap()).unwrap();
    assert_eq!(v["amse"].as_object().unwrap().len(), 16);
    assert!(v["amse"]["OLS"].as_f64().unwrap() > 0.0);
    assert!(simulate_cell_json(0.9, 50, 4, 1.0, 1_000_000, 3).is_err());
    assert!(simulate_cell_json(1.5, 50, 4, 1.0, 10, 3).is_err());
}
