//! Real-data evaluation: the bundled Gruber R&D-spending and Portland cement
//! datasets (or any user CSV), standardized to correlation form, with the
//! estimated theoretical MSE of every estimator.
//!
//! X is centered and scaled to unit column length so X'X is the correlation
//! matrix; Y is centered and (by default) scaled to unit length. Centering
//! removes an intercept, so σ̂² is computed on n − p − 1 degrees of freedom.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{estimate_from, EstimatorId, EstimatorInputs};
use crate::linalg::{center_scale_vector, center_standardize, center_vector};
use crate::regression::{mse_ols, mse_scalar, CanonicalDesign, CanonicalModel, Dataset};

pub const BUNDLED_IDS: [&str; 2] = ["gruber", "cement"];

const GRUBER_CSV: &str = include_str!("../data/gruber.csv");
const CEMENT_CSV: &str = include_str!("../data/cement.csv");

const GRUBER_NOTE: &str = "Gruber (1998): R&D expenditure as percent of GNP; response United States, \
                           regressors France, West Germany, Japan, Soviet Union (10 years, 1972-1986)";
const CEMENT_NOTE: &str =
    "Woods, Steinour and Starke (1932), via Hald (1952): heat evolved (cal/g) of 13 \
                           Portland cement mixtures against four clinker compound percentages";

#[derive(Debug, Clone)]
pub struct NamedDataset {
    pub id: String,
    pub dataset: Dataset,
    pub source_note: String,
}

/// Parses a CSV with a header row; column 1 is the response, the rest are
/// regressors. Line numbers in errors are 1-based and count the header.
pub fn parse_dataset_csv(text: &str, source_name: &str) -> Result<Dataset> {
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, 1, e.to_string()))?
        .clone();
    let width = headers.len();
    if width < 2 {
        return Err(parse_err(
            1,
            width.max(1),
            "need a response column and at least one regressor".into(),
        ));
    }

    let mut y = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, 1, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != width {
            return Err(parse_err(
                line,
                record.len().min(width) + 1,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, col + 1, format!("not a number: '{field}'")))?;
            if !v.is_finite() {
                return Err(parse_err(
                    line,
                    col + 1,
                    format!("non-finite value '{field}'"),
                ));
            }
            if col == 0 {
                y.push(v);
            } else {
                rows.push(v);
            }
        }
    }
    let n = y.len();
    let p = width - 1;
    if n == 0 {
        return Err(Error::InvalidDataset(format!(
            "{source_name}: no data rows"
        )));
    }
    let x = DMatrix::from_row_slice(n, p, &rows);
    let labels = headers.iter().skip(1).map(str::to_string).collect();
    Dataset::new(DVector::from_vec(y), x, labels)
        .map_err(|e| Error::InvalidDataset(format!("{source_name}: {e}")))
}

/// One of the bundled datasets, by case-insensitive id.
pub fn bundled(id: &str) -> Option<NamedDataset> {
    let (key, text, note, expected_n) = match id.trim().to_ascii_lowercase().as_str() {
        "gruber" => ("gruber", GRUBER_CSV, GRUBER_NOTE, 10),
        "cement" => ("cement", CEMENT_CSV, CEMENT_NOTE, 13),
        _ => return None,
    };
    let dataset = parse_dataset_csv(text, key).expect("bundled dataset parses");
    assert_eq!(
        (dataset.n(), dataset.p()),
        (expected_n, 4),
        "bundled {key} shape"
    );
    Some(NamedDataset {
        id: key.to_string(),
        dataset,
        source_note: note.to_string(),
    })
}

/// A bundled id, or else a path to a CSV file.
pub fn load_dataset(id_or_path: &str) -> Result<NamedDataset> {
    if let Some(nd) = bundled(id_or_path) {
        return Ok(nd);
    }
    let path = Path::new(id_or_path);
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: id_or_path.to_string(),
        source,
    })?;
    let dataset = parse_dataset_csv(&text, id_or_path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| id_or_path.to_string());
    Ok(NamedDataset {
        id,
        dataset,
        source_note: format!("user file {id_or_path}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ResponseScaling {
    /// Centered and scaled to unit length, like the regressors.
    #[default]
    UnitLength,
    CenteredOnly,
}

/// Standardizes `d` and fits the canonical model on n − p − 1 residual df.
pub fn standardized_model(d: &Dataset, scaling: ResponseScaling) -> Result<CanonicalModel> {
    let x = center_standardize(d.x())?;
    let y = match scaling {
        ResponseScaling::UnitLength => center_scale_vector(d.y())?,
        ResponseScaling::CenteredOnly => center_vector(d.y()),
    };
    let df = d
        .n()
        .checked_sub(d.p() + 1)
        .filter(|&df| df > 0)
        .ok_or_else(|| {
            Error::InvalidDataset(format!(
                "need n > p + 1 after centering, got n = {}, p = {}",
                d.n(),
                d.p()
            ))
        })?;
    Arc::new(CanonicalDesign::new(x)?).fit(&y, df)
}

#[derive(Debug, Clone, Serialize)]
pub struct RealDataReport {
    pub id: String,
    pub n: usize,
    pub p: usize,
    pub scaling: ResponseScaling,
    pub eigenvalues: Vec<f64>,
    pub condition_number: f64,
    pub sigma2_hat: f64,
    pub alpha_ols: Vec<f64>,
    pub k: BTreeMap<EstimatorId, f64>,
    /// Estimated theoretical MSE with (σ̂², α̂) in place of (σ², α).
    pub mse: BTreeMap<EstimatorId, f64>,
}

pub fn evaluate_real(nd: &NamedDataset) -> Result<RealDataReport> {
    evaluate_real_with(nd, ResponseScaling::UnitLength)
}

pub fn evaluate_real_with(nd: &NamedDataset, scaling: ResponseScaling) -> Result<RealDataReport> {
    let m = standardized_model(&nd.dataset, scaling)?;
    let inputs = EstimatorInputs::from_model(&m);
    let mut k = BTreeMap::new();
    let mut mse = BTreeMap::new();
    for id in EstimatorId::ALL {
        let est = estimate_from(id, &inputs)?;
        let value = if id == EstimatorId::OLS {
            mse_ols(inputs.lambdas, inputs.sigma2)?
        } else {
            mse_scalar(est.k, inputs.lambdas, inputs.alpha, inputs.sigma2)?
        };
        k.insert(id, est.k);
        mse.insert(id, value);
    }
    Ok(RealDataReport {
        id: nd.id.clone(),
        n: m.n(),
        p: m.p(),
        scaling,
        eigenvalues: m.lambdas().to_vec(),
        condition_number: m.eig().condition_number()?,
        sigma2_hat: m.sigma2_hat(),
        alpha_ols: m.alpha_ols().as_slice().to_vec(),
        k,
        mse,
    })
}
