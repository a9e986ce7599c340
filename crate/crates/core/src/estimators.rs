//! The ridge-parameter estimators.
//!
//! Five established rules (HK, HKB, LW, AD, and the KM8/KM12 pair) and nine
//! estimators Y1..Y9 built from the per-coordinate quantities
//!
//! ```text
//! k_Y,j = sqrt( σ̂² / (λ_j α̂_j²) )
//! ```
//!
//! by taking arithmetic, geometric and harmonic means, medians and maxima of
//! k_Y,j or of 1/k_Y,j. OLS is carried as the k = 0 baseline.
//!
//! Conventions:
//! * HK uses the largest *squared* canonical coefficient, so k stays positive
//!   whatever the signs of α̂.
//! * Medians of an even number of values are the midpoint of the two central
//!   order statistics.
//! * KM8/KM12 use max/median over j of 1 / sqrt(λ_max σ̂² / ((n − p)σ̂² + λ_max α̂_j²)).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regression::CanonicalModel;

/// Registry of estimators, declared in the row order of the result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorId {
    Y1,
    Y2,
    Y3,
    Y4,
    Y5,
    Y6,
    Y7,
    Y8,
    Y9,
    LW,
    HK,
    HKB,
    AD,
    KM8,
    KM12,
    OLS,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 16] = [
        EstimatorId::Y1,
        EstimatorId::Y2,
        EstimatorId::Y3,
        EstimatorId::Y4,
        EstimatorId::Y5,
        EstimatorId::Y6,
        EstimatorId::Y7,
        EstimatorId::Y8,
        EstimatorId::Y9,
        EstimatorId::LW,
        EstimatorId::HK,
        EstimatorId::HKB,
        EstimatorId::AD,
        EstimatorId::KM8,
        EstimatorId::KM12,
        EstimatorId::OLS,
    ];

    /// The nine square-root Lawless–Wang modifications.
    pub const Y_FAMILY: [EstimatorId; 9] = [
        EstimatorId::Y1,
        EstimatorId::Y2,
        EstimatorId::Y3,
        EstimatorId::Y4,
        EstimatorId::Y5,
        EstimatorId::Y6,
        EstimatorId::Y7,
        EstimatorId::Y8,
        EstimatorId::Y9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorId::Y1 => "Y1",
            EstimatorId::Y2 => "Y2",
            EstimatorId::Y3 => "Y3",
            EstimatorId::Y4 => "Y4",
            EstimatorId::Y5 => "Y5",
            EstimatorId::Y6 => "Y6",
            EstimatorId::Y7 => "Y7",
            EstimatorId::Y8 => "Y8",
            EstimatorId::Y9 => "Y9",
            EstimatorId::LW => "LW",
            EstimatorId::HK => "HK",
            EstimatorId::HKB => "HKB",
            EstimatorId::AD => "AD",
            EstimatorId::KM8 => "KM8",
            EstimatorId::KM12 => "KM12",
            EstimatorId::OLS => "OLS",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_y_family(self) -> bool {
        self.index() < 9
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        EstimatorId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(trimmed))
            .ok_or_else(|| Error::UnknownEstimator(s.to_string()))
    }
}

/// A ridge parameter chosen by one estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KEstimate {
    pub estimator: EstimatorId,
    pub k: f64,
}

/// Everything an estimator looks at: Λ, α̂, σ̂² and the model dimensions.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorInputs<'a> {
    pub lambdas: &'a [f64],
    pub alpha: &'a [f64],
    pub sigma2: f64,
    pub n: usize,
    pub p: usize,
}

impl<'a> EstimatorInputs<'a> {
    pub fn from_model(m: &'a CanonicalModel) -> Self {
        Self {
            lambdas: m.lambdas(),
            alpha: m.alpha_ols().as_slice(),
            sigma2: m.sigma2_hat(),
            n: m.n(),
            p: m.p(),
        }
    }

    fn lambda_max(&self) -> f64 {
        self.lambdas
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// k_Y,j = sqrt(σ̂² / (λ_j α̂_j²)) for every coordinate.
pub fn k_y_vector(inputs: &EstimatorInputs<'_>) -> Result<Vec<f64>> {
    k_y_for(EstimatorId::Y1, inputs)
}

fn k_y_for(id: EstimatorId, inputs: &EstimatorInputs<'_>) -> Result<Vec<f64>> {
    let sigma = inputs.sigma2.sqrt();
    inputs
        .lambdas
        .iter()
        .zip(inputs.alpha)
        .enumerate()
        .map(|(index, (&l, &a))| {
            if a == 0.0 {
                Err(Error::DegenerateCoefficient {
                    estimator: id,
                    index,
                })
            } else {
                Ok(sigma / (l.sqrt() * a.abs()))
            }
        })
        .collect()
}

fn check_inputs(id: EstimatorId, inputs: &EstimatorInputs<'_>) -> Result<()> {
    let p = inputs.lambdas.len();
    if p == 0 {
        return Err(Error::InvalidArgument("estimator inputs are empty".into()));
    }
    if inputs.alpha.len() != p {
        return Err(Error::DimensionMismatch {
            what: "alpha",
            expected: p,
            found: inputs.alpha.len(),
        });
    }
    if inputs.lambdas.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::InvalidArgument(
            "eigenvalues must be positive".into(),
        ));
    }
    if id != EstimatorId::OLS && !(inputs.sigma2 > 0.0 && inputs.sigma2.is_finite()) {
        return Err(Error::NonPositiveVariance {
            estimator: id,
            sigma2: inputs.sigma2,
        });
    }
    Ok(())
}

/// Evaluates one estimator on raw canonical quantities.
pub fn estimate_from(id: EstimatorId, inputs: &EstimatorInputs<'_>) -> Result<KEstimate> {
    check_inputs(id, inputs)?;
    let s2 = inputs.sigma2;
    let p = inputs.p as f64;
    let alpha = inputs.alpha;
    let lambdas = inputs.lambdas;
    let sum_alpha_sq: f64 = alpha.iter().map(|a| a * a).sum();
    let all_zero = || Error::DegenerateCoefficient {
        estimator: id,
        index: 0,
    };

    let k = match id {
        EstimatorId::OLS => 0.0,
        EstimatorId::HK => {
            let max_sq = alpha.iter().map(|a| a * a).fold(0.0, f64::max);
            if max_sq == 0.0 {
                return Err(all_zero());
            }
            s2 / max_sq
        }
        EstimatorId::HKB => {
            if sum_alpha_sq == 0.0 {
                return Err(all_zero());
            }
            p * s2 / sum_alpha_sq
        }
        EstimatorId::LW => {
            let weighted: f64 = lambdas.iter().zip(alpha).map(|(l, a)| l * a * a).sum();
            if weighted == 0.0 {
                return Err(all_zero());
            }
            p * s2 / weighted
        }
        EstimatorId::AD => {
            if sum_alpha_sq == 0.0 {
                return Err(all_zero());
            }
            2.0 * p * s2 / (inputs.lambda_max() * sum_alpha_sq)
        }
        EstimatorId::KM8 | EstimatorId::KM12 => {
            let lmax = inputs.lambda_max();
            let df = inputs.n as f64 - p;
            let mut terms: Vec<f64> = alpha
                .iter()
                .map(|a| 1.0 / (lmax * s2 / (df * s2 + lmax * a * a)).sqrt())
                .collect();
            if id == EstimatorId::KM8 {
                max_of(&terms)
            } else {
                median(&mut terms)
            }
        }
        y => {
            let ky = k_y_for(y, inputs)?;
            let mut inv: Vec<f64> = ky.iter().map(|k| 1.0 / k).collect();
            match y {
                EstimatorId::Y1 => mean_of(&ky),
                EstimatorId::Y2 => (ky.iter().map(|k| k.ln()).sum::<f64>() / p).exp(),
                EstimatorId::Y3 => median(&mut ky.clone()),
                EstimatorId::Y4 => max_of(&ky),
                EstimatorId::Y5 => median(&mut inv),
                EstimatorId::Y6 => max_of(&inv),
                EstimatorId::Y7 => mean_of(&inv),
                EstimatorId::Y8 => p / inv.iter().sum::<f64>(),
                EstimatorId::Y9 => p / ky.iter().sum::<f64>(),
                _ => unreachable!("non-Y estimators handled above"),
            }
        }
    };
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "estimator {id} produced k = {k}"
        )));
    }
    Ok(KEstimate { estimator: id, k })
}

pub fn estimate(id: EstimatorId, m: &CanonicalModel) -> Result<KEstimate> {
    estimate_from(id, &EstimatorInputs::from_model(m))
}

/// Every registry estimator on the same model.
pub fn estimate_all(m: &CanonicalModel) -> Result<BTreeMap<EstimatorId, KEstimate>> {
    let inputs = EstimatorInputs::from_model(m);
    EstimatorId::ALL
        .iter()
        .map(|&id| estimate_from(id, &inputs).map(|k| (id, k)))
        .collect()
}
