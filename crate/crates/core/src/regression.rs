//! Linear model in canonical form, scalar and generalized ridge fits, and the
//! closed-form mean squared error of the ridge estimator.
//!
//! With X'X = D Λ D' the model Y = Xβ + ε becomes Y = Zα + ε with Z = XD and
//! α = D'β. Z'Z = Λ is diagonal, so every ridge fit is a componentwise rescaling
//! of the OLS coefficients: α̂_R,j = λ_j α̂_j / (λ_j + k_j).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, SymmetricEigen};

/// λ_min / λ_max below this is treated as rank deficiency.
const RANK_TOL: f64 = 1e-13;

/// Observations of a no-intercept linear model Y = Xβ + ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: DVector<f64>,
    x: DMatrix<f64>,
    labels: Vec<String>,
}

impl Dataset {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let (n, p) = x.shape();
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                what: "response length",
                expected: n,
                found: y.len(),
            });
        }
        if labels.len() != p {
            return Err(Error::DimensionMismatch {
                what: "column labels",
                expected: p,
                found: labels.len(),
            });
        }
        if p == 0 || n <= p {
            return Err(Error::InvalidDataset(format!(
                "need n > p >= 1, got n = {n}, p = {p}"
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite value".into()));
        }
        Ok(Self { y, x, labels })
    }

    /// Dataset with generated labels `x1..xp`.
    pub fn unlabeled(y: DVector<f64>, x: DMatrix<f64>) -> Result<Self> {
        let labels = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(y, x, labels)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// The response-independent part of the canonical form: Λ, D and Z = XD.
#[derive(Debug, Clone)]
pub struct CanonicalDesign {
    x: DMatrix<f64>,
    eig: SymmetricEigen,
    z: DMatrix<f64>,
}

impl CanonicalDesign {
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        let xtx = x.transpose() * &x;
        let eig = sym_eig(&xtx)?;
        let lambda_min = eig.lambda_min();
        if lambda_min.is_nan() || lambda_min <= RANK_TOL * eig.lambda_max() {
            return Err(Error::Singular { lambda_min });
        }
        let z = &x * &eig.eigenvectors;
        Ok(Self { x, eig, z })
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn eig(&self) -> &SymmetricEigen {
        &self.eig
    }

    pub fn lambdas(&self) -> &[f64] {
        self.eig.eigenvalues.as_slice()
    }

    /// The orthogonal matrix D.
    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.eig.eigenvectors
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// α̂_OLS = Λ⁻¹Z'Y and σ̂² = RSS / `residual_df`.
    ///
    /// RSS is computed as ‖Y − Zα̂‖², algebraically equal to Y'Y − α̂'Z'Y but
    /// free of the cancellation that form suffers when the fit is near exact.
    pub fn fit(self: &Arc<Self>, y: &DVector<f64>, residual_df: usize) -> Result<CanonicalModel> {
        let n = self.n();
        if y.len() != n {
            return Err(Error::DimensionMismatch {
                what: "response length",
                expected: n,
                found: y.len(),
            });
        }
        if residual_df == 0 {
            return Err(Error::InvalidArgument(
                "residual degrees of freedom must be positive".into(),
            ));
        }
        let zty = self.z.tr_mul(y);
        let alpha_ols = DVector::from_fn(self.p(), |j, _| zty[j] / self.lambdas()[j]);
        let resid = y - &self.z * &alpha_ols;
        let sigma2_hat = (resid.norm_squared() / residual_df as f64).max(0.0);
        Ok(CanonicalModel {
            design: Arc::clone(self),
            alpha_ols,
            sigma2_hat,
            residual_df,
        })
    }
}

/// A fitted canonical model: design plus α̂_OLS and σ̂².
#[derive(Debug, Clone)]
pub struct CanonicalModel {
    design: Arc<CanonicalDesign>,
    alpha_ols: DVector<f64>,
    sigma2_hat: f64,
    residual_df: usize,
}

impl CanonicalModel {
    pub fn design(&self) -> &CanonicalDesign {
        &self.design
    }

    pub fn eig(&self) -> &SymmetricEigen {
        self.design.eig()
    }

    pub fn lambdas(&self) -> &[f64] {
        self.design.lambdas()
    }

    pub fn z(&self) -> &DMatrix<f64> {
        self.design.z()
    }

    pub fn alpha_ols(&self) -> &DVector<f64> {
        &self.alpha_ols
    }

    pub fn sigma2_hat(&self) -> f64 {
        self.sigma2_hat
    }

    pub fn n(&self) -> usize {
        self.design.n()
    }

    pub fn p(&self) -> usize {
        self.design.p()
    }

    pub fn residual_df(&self) -> usize {
        self.residual_df
    }

    /// Maps canonical coefficients back to the original coordinates: β = Dα.
    pub fn to_original(&self, alpha: &DVector<f64>) -> DVector<f64> {
        self.design.rotation() * alpha
    }
}

/// Canonical form of `d` with σ̂² on n − p degrees of freedom.
pub fn canonicalize(d: &Dataset) -> Result<CanonicalModel> {
    canonicalize_with_df(d, d.n() - d.p())
}

pub fn canonicalize_with_df(d: &Dataset, residual_df: usize) -> Result<CanonicalModel> {
    let design = Arc::new(CanonicalDesign::new(d.x().clone())?);
    design.fit(d.y(), residual_df)
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ridge parameter must be finite and non-negative, got {k}"
        )))
    }
}

/// Ordinary ridge estimate α̂_R = (Λ + kI)⁻¹Z'Y.
pub fn ridge_fit(m: &CanonicalModel, k: f64) -> Result<DVector<f64>> {
    check_k(k)?;
    Ok(shrink(m.lambdas(), m.alpha_ols().as_slice(), |_| k))
}

/// Generalized ridge estimate with K = diag(ks).
pub fn generalized_ridge_fit(m: &CanonicalModel, ks: &[f64]) -> Result<DVector<f64>> {
    if ks.len() != m.p() {
        return Err(Error::DimensionMismatch {
            what: "ridge parameter vector",
            expected: m.p(),
            found: ks.len(),
        });
    }
    ks.iter().try_for_each(|&k| check_k(k))?;
    Ok(shrink(m.lambdas(), m.alpha_ols().as_slice(), |j| ks[j]))
}

pub(crate) fn shrink(lambdas: &[f64], alpha: &[f64], k: impl Fn(usize) -> f64) -> DVector<f64> {
    DVector::from_fn(lambdas.len(), |j, _| {
        lambdas[j] * alpha[j] / (lambdas[j] + k(j))
    })
}

/// Per-coordinate MSE-minimizing ridge parameters k_j = σ²/α_j².
pub fn optimal_k(sigma2: f64, alpha: &[f64]) -> Result<Vec<f64>> {
    alpha
        .iter()
        .enumerate()
        .map(|(index, &a)| {
            if a == 0.0 {
                Err(Error::ZeroCoefficient { index })
            } else {
                Ok(sigma2 / (a * a))
            }
        })
        .collect()
}

/// Variance and squared-bias parts of the generalized ridge MSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseParts {
    pub variance: f64,
    pub bias_sq: f64,
}

impl MseParts {
    pub fn total(&self) -> f64 {
        self.variance + self.bias_sq
    }
}

pub fn mse_components(ks: &[f64], lambdas: &[f64], alpha: &[f64], sigma2: f64) -> Result<MseParts> {
    let p = lambdas.len();
    for (what, len) in [("ridge parameter vector", ks.len()), ("alpha", alpha.len())] {
        if len != p {
            return Err(Error::DimensionMismatch {
                what,
                expected: p,
                found: len,
            });
        }
    }
    if lambdas.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::InvalidArgument(
            "eigenvalues must be positive".into(),
        ));
    }
    let mut parts = MseParts {
        variance: 0.0,
        bias_sq: 0.0,
    };
    for j in 0..p {
        let denom = (lambdas[j] + ks[j]).powi(2);
        parts.variance += sigma2 * lambdas[j] / denom;
        parts.bias_sq += ks[j] * ks[j] * alpha[j] * alpha[j] / denom;
    }
    Ok(parts)
}

/// MSE(α̂_R) = Σ σ²λ_j/(λ_j+k_j)² + Σ k_j²α_j²/(λ_j+k_j)².
pub fn mse_general(ks: &[f64], lambdas: &[f64], alpha: &[f64], sigma2: f64) -> Result<f64> {
    mse_components(ks, lambdas, alpha, sigma2).map(|m| m.total())
}

/// [`mse_general`] with the same k on every coordinate.
pub fn mse_scalar(k: f64, lambdas: &[f64], alpha: &[f64], sigma2: f64) -> Result<f64> {
    mse_general(&vec![k; lambdas.len()], lambdas, alpha, sigma2)
}

/// MSE(α̂_OLS) = σ² Σ 1/λ_j.
pub fn mse_ols(lambdas: &[f64], sigma2: f64) -> Result<f64> {
    if lambdas.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::InvalidArgument(
            "eigenvalues must be positive".into(),
        ));
    }
    Ok(sigma2 * lambdas.iter().map(|l| 1.0 / l).sum::<f64>())
}
