//! Dense symmetric linear algebra: cyclic Jacobi eigensolver, correlation-form
//! standardization, condition number and an SPD solve.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 50;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to ‖A‖_F.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Components below this magnitude are skipped when fixing eigenvector signs.
const SIGN_EPS: f64 = 1e-12;

/// Eigenpairs of a symmetric matrix, eigenvalues descending; column `j` of
/// `eigenvectors` belongs to `eigenvalues[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn condition_number(&self) -> Result<f64> {
        condition_number(self)
    }
}

fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized as (A + A')/2 after checking that its largest
/// asymmetry is within [`SYMMETRY_TOL`] (scaled by max(1, max |a_ij|)).
/// Each eigenvector's first component above 1e-12 in magnitude is made positive.
pub fn sym_eig(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let (rows, cols) = a.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let n = rows;
    let scale = a.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let asym = max_asymmetry(a);
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }

    let mut m = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = m.norm();
    let target = OFF_DIAGONAL_TOL * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&m);
        if off_norm > target {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let mut eigenvectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).clone_owned();
        if let Some(first) = col.iter().find(|x| x.abs() > SIGN_EPS) {
            if *first < 0.0 {
                col.neg_mut();
            }
        }
        eigenvectors.set_column(dst, &col);
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Centers every column and scales it to unit sum of squares, so that X'X of
/// the result is the sample correlation matrix of the input.
pub fn center_standardize(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (n, p) = x.shape();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "center_standardize needs at least 2 rows, got {n}"
        )));
    }
    let mut out = x.clone();
    for j in 0..p {
        let col = center_scale(x.column(j).iter().copied())
            .ok_or(Error::DegenerateColumn { column: j })?;
        out.set_column(j, &DVector::from_vec(col));
    }
    Ok(out)
}

/// Centers a vector and scales it to unit length.
pub fn center_scale_vector(y: &DVector<f64>) -> Result<DVector<f64>> {
    if y.len() < 2 {
        return Err(Error::InvalidArgument(
            "center_scale_vector needs at least 2 entries".into(),
        ));
    }
    center_scale(y.iter().copied())
        .map(DVector::from_vec)
        .ok_or(Error::DegenerateColumn { column: 0 })
}

pub fn center_vector(y: &DVector<f64>) -> DVector<f64> {
    let mean = y.mean();
    y.map(|v| v - mean)
}

fn center_scale(values: impl Iterator<Item = f64> + Clone) -> Option<Vec<f64>> {
    let n = values.clone().count();
    let mean = values.clone().sum::<f64>() / n as f64;
    let dev: Vec<f64> = values.clone().map(|v| v - mean).collect();
    let ss: f64 = dev.iter().map(|d| d * d).sum();
    let max_abs = values.fold(0.0_f64, |m, v| m.max(v.abs()));
    // a constant column leaves only rounding noise in the deviations
    let floor = n as f64 * (1e-12 * max_abs).powi(2);
    if !ss.is_finite() || ss <= floor || ss == 0.0 {
        return None;
    }
    let norm = ss.sqrt();
    Some(dev.into_iter().map(|d| d / norm).collect())
}

/// λ_max / λ_min.
pub fn condition_number(eig: &SymmetricEigen) -> Result<f64> {
    let lambda_min = eig.lambda_min();
    if lambda_min <= 0.0 {
        return Err(Error::Singular { lambda_min });
    }
    Ok(eig.lambda_max() / lambda_min)
}

/// Solves A x = b for symmetric positive definite A via Cholesky.
pub fn solve_spd(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if b.len() != rows {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: rows,
            found: b.len(),
        });
    }
    let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    Ok(chol.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn random_symmetric(p: usize, entries: &[f64]) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(p, p);
        let mut it = entries.iter().cycle();
        for i in 0..p {
            for j in i..p {
                let v = *it.next().unwrap();
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    }

    #[test]
    fn diagonal_input() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let e = sym_eig(&a).unwrap();
        assert_eq!(e.eigenvalues.as_slice(), &[2.0, 1.0]);
        assert_eq!(e.eigenvectors, DMatrix::identity(2, 2));
    }

    #[test]
    fn diagonal_input_unsorted() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let e = sym_eig(&a).unwrap();
        assert_eq!(e.eigenvalues.as_slice(), &[2.0, 1.0]);
        assert_eq!(
            e.eigenvectors,
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
    }

    #[test]
    fn equicorrelation_two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.9, 0.9, 1.0]);
        let e = sym_eig(&a).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.9, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 0.1, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(e.eigenvectors[(0, 0)], h, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvectors[(1, 0)], h, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvectors[(0, 1)], h, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvectors[(1, 1)], -h, epsilon = 1e-14);
    }

    #[test]
    fn rejects_asymmetric_and_non_square() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(sym_eig(&a), Err(Error::NotSymmetric { .. })));
        let b = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(sym_eig(&b), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5 + 1e-13, 1.0]);
        assert!(sym_eig(&a).is_ok());
    }

    #[test]
    fn one_by_one() {
        let e = sym_eig(&DMatrix::from_element(1, 1, 3.5)).unwrap();
        assert_eq!(e.eigenvalues[0], 3.5);
        assert_eq!(e.eigenvectors[(0, 0)], 1.0);
    }

    #[test]
    fn three_by_three_determinant() {
        // det = 2*(6-1) - 1*(2-0) = 8; eigenvalues 4, 2, 1
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0]);
        let e = sym_eig(&a).unwrap();
        assert_abs_diff_eq!(e.eigenvalues.iter().product::<f64>(), 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues.sum(), 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn center_standardize_simple_column() {
        let x = DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]);
        let s = center_standardize(&x).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s[(0, 0)], -h, epsilon = 1e-15);
        assert_abs_diff_eq!(s[(1, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[(2, 0)], h, epsilon = 1e-15);
    }

    #[test]
    fn center_standardize_constant_column_named() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.1, 2.0, 0.1, 3.0, 0.1]);
        match center_standardize(&x) {
            Err(Error::DegenerateColumn { column }) => assert_eq!(column, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn center_standardize_idempotent() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 4.0, 2.0, -1.0, 7.0, 0.5, 3.0, 2.0]);
        let once = center_standardize(&x).unwrap();
        let twice = center_standardize(&once).unwrap();
        assert!((once - twice).amax() <= 1e-12);
    }

    #[test]
    fn condition_number_cases() {
        let e = sym_eig(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(condition_number(&e).unwrap(), 1.0);
        let singular = SymmetricEigen {
            eigenvalues: DVector::from_vec(vec![1.0, 0.0]),
            eigenvectors: DMatrix::identity(2, 2),
        };
        assert!(matches!(
            condition_number(&singular),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn solve_spd_small_cases() {
        let b = DVector::from_vec(vec![3.0, -1.0, 2.5]);
        assert_eq!(solve_spd(&DMatrix::identity(3, 3), &b).unwrap(), b);
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0]));
        let x = solve_spd(&a, &DVector::from_vec(vec![2.0, 8.0])).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 2.0, epsilon = 1e-15);
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            solve_spd(&indefinite, &DVector::from_vec(vec![1.0, 1.0])),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn solve_spd_matches_eigen_route() {
        // A = B'B + I for a fixed pseudo-random B
        let p = 8;
        let b = DMatrix::from_fn(p, p, |i, j| ((i * 7 + j * 13) % 11) as f64 / 5.0 - 1.0);
        let a = b.transpose() * &b + DMatrix::identity(p, p);
        let rhs = DVector::from_fn(p, |i, _| (i as f64 - 3.5) * 0.7);
        let x = solve_spd(&a, &rhs).unwrap();
        let e = sym_eig(&a).unwrap();
        let d = &e.eigenvectors;
        let coords = d.transpose() * &rhs;
        let scaled = DVector::from_fn(p, |i, _| coords[i] / e.eigenvalues[i]);
        let via_eig = d * scaled;
        assert!((&x - &via_eig).amax() <= 1e-8);
        assert!((&a * &x - &rhs).amax() <= 1e-8 * rhs.amax());
    }

    proptest! {
        #[test]
        fn eigen_invariants(p in 2usize..=16, entries in prop::collection::vec(-10.0f64..10.0, 136)) {
            let a = random_symmetric(p, &entries);
            let e = sym_eig(&a).unwrap();
            let d = &e.eigenvectors;
            let ortho = d.transpose() * d - DMatrix::identity(p, p);
            prop_assert!(ortho.amax() <= 1e-10);
            let recon = d.transpose() * &a * d;
            let scale = e.eigenvalues.amax().max(1.0);
            for i in 0..p {
                for j in 0..p {
                    let target = if i == j { e.eigenvalues[i] } else { 0.0 };
                    prop_assert!((recon[(i, j)] - target).abs() <= 1e-8 * scale);
                }
            }
            for w in e.eigenvalues.as_slice().windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            let trace = a.trace();
            prop_assert!((e.eigenvalues.sum() - trace).abs() <= 1e-8 * scale * p as f64);
        }

        #[test]
        fn standardized_columns(n in 3usize..40, p in 1usize..6, seed in any::<u64>()) {
            let mut s = crate::stochastics::RandomStream::new(seed, 0);
            let x = DMatrix::from_fn(n, p, |_, _| 5.0 + 3.0 * s.next_normal());
            let z = center_standardize(&x).unwrap();
            let g = z.transpose() * &z;
            for j in 0..p {
                prop_assert!(z.column(j).sum().abs() / n as f64 <= 1e-12);
                prop_assert!((g[(j, j)] - 1.0).abs() <= 1e-12);
            }
        }
    }
}
