use crate::error::{Error, Result};
use crate::ring::{det_laplace, minor, Ring};
use crate::scalar::{ComplexFloat, ExactScalar};

use super::{PlaneCurve, PolyMatrix};

/// Classical adjoint: `adj[i][j] = (-1)^{i+j} det(A without row j, column i)`.
pub fn adjugate<R: Ring>(a: &[Vec<R>], one: &R) -> Vec<Vec<R>> {
    let m = a.len();
    if m == 1 {
        return vec![vec![one.clone()]];
    }
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let d = det_laplace(&minor(a, j, i), one);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        d.neg()
                    }
                })
                .collect()
        })
        .collect()
}

fn shifted<R: Ring>(mat: Vec<Vec<R>>, mu: &R) -> Vec<Vec<R>> {
    mat.into_iter()
        .enumerate()
        .map(|(i, row)| row.into_iter().enumerate().map(|(j, x)| if i == j { mu.sub(&x) } else { x.neg() }).collect())
        .collect()
}

/// Eigenvector `χ` of `M(λ)` for eigenvalue `μ` with `χ_1 = 1`, exactly.
///
/// Columns of `adj(μ - M(λ))` are scanned in index order and the first with a
/// nonzero first entry is normalized.
#[allow(clippy::needless_range_loop)]
pub fn normalized_eigenvector(
    mat: &PolyMatrix<ExactScalar>,
    curve: &PlaneCurve,
    lambda: &ExactScalar,
    mu: &ExactScalar,
) -> Result<Vec<ExactScalar>> {
    if !curve.f.eval(lambda, mu).is_zero() {
        let r = curve.f.eval(lambda, mu).to_complex().norm();
        return Err(Error::OffCurve { residual: r });
    }
    let adj = adjugate(&shifted(mat.eval(lambda), mu), &ExactScalar::one());
    let m = adj.len();
    for c in 0..m {
        if !adj[0][c].is_zero() {
            let inv = adj[0][c].inv()?;
            return Ok((0..m).map(|i| &adj[i][c] * &inv).collect());
        }
    }
    Err(Error::NormalizationImpossible)
}

/// Floating-point eigenvector with its residual `‖Mχ - μχ‖`.
#[derive(Clone, Debug)]
pub struct EigenPoint {
    pub chi: Vec<ComplexFloat>,
    pub column: usize,
    pub residual: f64,
}

/// Floating-point variant of [`normalized_eigenvector`].
///
/// The point must satisfy `|f(λ, μ)| ≤ tol_curve · Σ|terms|`. A first entry
/// counts as zero when it is below `1e-10` times the largest adjugate entry.
#[allow(clippy::needless_range_loop)]
pub fn normalized_eigenvector_numeric(
    mat: &PolyMatrix<ExactScalar>,
    curve: &PlaneCurve,
    lambda: ComplexFloat,
    mu: ComplexFloat,
    tol_curve: f64,
) -> Result<EigenPoint> {
    let scale = curve.f.eval_abs_scale(lambda, mu).max(1.0);
    let res = curve.f.eval_complex(lambda, mu).norm();
    if res > tol_curve * scale {
        return Err(Error::OffCurve { residual: res / scale });
    }
    let mm = mat.eval_complex(lambda);
    let adj = adjugate(&shifted(mm.clone(), &mu), &ComplexFloat::new(1.0, 0.0));
    let m = adj.len();
    let big = adj.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    for c in 0..m {
        if adj[0][c].norm() > 1e-10 * big {
            let chi: Vec<ComplexFloat> = (0..m).map(|i| adj[i][c] / adj[0][c]).collect();
            let residual = (0..m)
                .map(|i| {
                    let mi: ComplexFloat = (0..m).map(|j| mm[i][j] * chi[j]).sum();
                    (mi - mu * chi[i]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            return Ok(EigenPoint { chi, column: c, residual });
        }
    }
    Err(Error::NormalizationImpossible)
}
