use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::types::{GaussianFit, MetricName, MetricReport, PointSet, PSD_RELATIVE_TOL};

/// Fréchet results in `(-FRECHET_NEGATIVE_TOL, 0)` are rounding noise and
/// clamp to zero; anything lower is reported as a numerical failure.
pub const FRECHET_NEGATIVE_TOL: f64 = 1e-6;

const SQRT_SYMMETRY_TOL: f64 = 1e-10;

/// Column mean and unbiased (`n − 1`) covariance, symmetrized as `(C + Cᵀ)/2`.
pub fn fit_gaussian(x: &PointSet) -> Result<GaussianFit> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientSamples(format!(
            "a covariance estimate needs at least 2 points, got {n}"
        )));
    }
    let d = x.dim();
    let data = DMatrix::from_row_slice(n, d, x.as_slice());
    let mean: DVector<f64> = data.row_mean().transpose();
    let mut centered = data;
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = centered.tr_mul(&centered) / (n as f64 - 1.0);
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianFit::from_trusted(mean, cov, n))
}

/// Principal square root of a symmetric positive semi-definite matrix.
///
/// Uses a symmetric eigendecomposition; eigenvalues within
/// `-1e-10 · max|λ|` of zero are clamped to zero, anything more negative is
/// rejected.
pub fn matrix_sqrt_psd(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !c.is_square() || c.nrows() == 0 {
        return Err(Error::invalid(
            "matrix square root",
            format!("expected a non-empty square matrix, got {:?}", c.shape()),
        ));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix square root", "non-finite entry"));
    }
    let scale = c.amax().max(1.0);
    let d = c.nrows();
    for i in 0..d {
        for j in 0..i {
            let gap = (c[(i, j)] - c[(j, i)]).abs();
            if gap > SQRT_SYMMETRY_TOL * scale {
                return Err(Error::invalid(
                    "matrix square root",
                    format!("input asymmetric at ({i},{j}) by {gap:e}"),
                ));
            }
        }
    }
    let sym = (c + c.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let largest = eig.eigenvalues.amax();
    let tol = PSD_RELATIVE_TOL * largest;
    let mut roots = eig.eigenvalues.clone();
    for v in roots.iter_mut() {
        if *v < -tol {
            return Err(Error::NotPsd {
                eigenvalue: *v,
                tolerance: tol,
            });
        }
        *v = v.max(0.0).sqrt();
    }
    let vecs = &eig.eigenvectors;
    let s = vecs * DMatrix::from_diagonal(&roots) * vecs.transpose();
    Ok((&s + s.transpose()) * 0.5)
}

/// Squared Fréchet (2-Wasserstein) distance between two Gaussians:
/// `‖μa − μb‖² + Tr(Ca + Cb − 2 (Ca^½ Cb Ca^½)^½)`.
pub fn frechet_distance(a: &GaussianFit, b: &GaussianFit) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left_name: "first fit".into(),
            left: a.dim(),
            right_name: "second fit".into(),
            right: b.dim(),
        });
    }
    let mean_term = (a.mean() - b.mean()).norm_squared();
    let root_a = matrix_sqrt_psd(a.covariance())?;
    let inner = &root_a * b.covariance() * &root_a;
    let inner = (&inner + inner.transpose()) * 0.5;
    let cross = matrix_sqrt_psd(&inner)?.trace();
    let value = mean_term + a.covariance().trace() + b.covariance().trace() - 2.0 * cross;
    if value < -FRECHET_NEGATIVE_TOL {
        return Err(Error::Numerical(format!(
            "Fréchet distance evaluated to {value:e}, below the rounding tolerance"
        )));
    }
    Ok(value.max(0.0))
}

/// Fréchet distance between Gaussian fits of two point sets, as a report.
pub fn fid_from_pointsets(x_data: &PointSet, x_model: &PointSet) -> Result<MetricReport> {
    if x_data.dim() != x_model.dim() {
        return Err(Error::DimensionMismatch {
            left_name: "real set".into(),
            left: x_data.dim(),
            right_name: "generated set".into(),
            right: x_model.dim(),
        });
    }
    let value = frechet_distance(&fit_gaussian(x_data)?, &fit_gaussian(x_model)?)?;
    Ok(MetricReport::new(MetricName::Fid, value)?
        .with_aux("covariance_estimator", "unbiased")
        .with_aux("n_data", x_data.len())
        .with_aux("n_model", x_model.len())
        .with_aux("dim", x_data.dim()))
}
