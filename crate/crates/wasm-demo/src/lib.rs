//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every exported function returns a JSON string; the page parses it and
//! draws on a canvas. The `*_json` functions are plain Rust so they can be
//! tested natively.

use ridge_shrink::application::{
    bundled, evaluate_real, standardized_model, ResponseScaling, BUNDLED_IDS,
};
use ridge_shrink::estimators::{estimate, EstimatorId};
use ridge_shrink::regression::{mse_components, mse_ols};
use ridge_shrink::simulation::{run_cell, SimulationCell};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_DEMO_REPLICATIONS: usize = 20_000;

fn dataset(id: &str) -> Result<ridge_shrink::application::NamedDataset, String> {
    bundled(id).ok_or_else(|| {
        format!(
            "unknown dataset '{id}'; valid ids: {}",
            BUNDLED_IDS.join(", ")
        )
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn real_data_json(id: &str) -> Result<String, String> {
    let report = evaluate_real(&dataset(id)?).map_err(|e| e.to_string())?;
    to_json(&report)
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub k: f64,
    pub variance: f64,
    pub bias_sq: f64,
    pub mse: f64,
}

#[derive(Debug, Serialize)]
pub struct Marker {
    pub estimator: EstimatorId,
    pub k: f64,
    pub mse: f64,
}

#[derive(Debug, Serialize)]
pub struct MseCurve {
    pub dataset: String,
    pub mse_ols: f64,
    pub points: Vec<CurvePoint>,
    pub markers: Vec<Marker>,
}

/// Estimated MSE of scalar ridge on a log-spaced k grid from `k_min` to
/// `k_max`, with the k chosen by each estimator marked on the curve.
pub fn mse_curve_json(id: &str, k_min: f64, k_max: f64, points: usize) -> Result<String, String> {
    if !(k_min > 0.0 && k_max > k_min) || points < 2 {
        return Err("need 0 < k_min < k_max and at least 2 points".into());
    }
    let nd = dataset(id)?;
    let m =
        standardized_model(&nd.dataset, ResponseScaling::UnitLength).map_err(|e| e.to_string())?;
    let (lambdas, alpha, s2) = (m.lambdas(), m.alpha_ols().as_slice(), m.sigma2_hat());
    let eval = |k: f64| {
        mse_components(&vec![k; lambdas.len()], lambdas, alpha, s2).map_err(|e| e.to_string())
    };

    let ratio = (k_max / k_min).ln() / (points - 1) as f64;
    let curve = (0..points)
        .map(|i| {
            let k = k_min * (ratio * i as f64).exp();
            eval(k).map(|parts| CurvePoint {
                k,
                variance: parts.variance,
                bias_sq: parts.bias_sq,
                mse: parts.total(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let markers = EstimatorId::ALL
        .iter()
        .filter(|&&id| id != EstimatorId::OLS)
        .map(|&id| {
            let k = estimate(id, &m).map_err(|e| e.to_string())?.k;
            Ok(Marker {
                estimator: id,
                k,
                mse: eval(k)?.total(),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&MseCurve {
        dataset: nd.id,
        mse_ols: mse_ols(lambdas, s2).map_err(|e| e.to_string())?,
        points: curve,
        markers,
    })
}

pub fn simulate_cell_json(
    rho: f64,
    n: usize,
    p: usize,
    sigma2: f64,
    replications: usize,
    seed: u64,
) -> Result<String, String> {
    if replications > MAX_DEMO_REPLICATIONS {
        return Err(format!(
            "at most {MAX_DEMO_REPLICATIONS} replications in the demo"
        ));
    }
    let cell = SimulationCell {
        rho,
        n,
        p,
        sigma2,
        replications,
        seed,
    };
    let result = run_cell(&cell).map_err(|e| e.to_string())?;
    to_json(&result)
}

#[wasm_bindgen]
pub fn real_data(id: &str) -> Result<String, JsError> {
    real_data_json(id).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mse_curve(id: &str, k_min: f64, k_max: f64, points: usize) -> Result<String, JsError> {
    mse_curve_json(id, k_min, k_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate_cell(
    rho: f64,
    n: usize,
    p: usize,
    sigma2: f64,
    replications: usize,
    seed: u64,
) -> Result<String, JsError> {
    simulate_cell_json(rho, n, p, sigma2, replications, seed).map_err(|e| JsError::new(&e))
}
