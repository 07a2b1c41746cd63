use crate::bivar::BivarPoly;
use crate::error::Result;
use crate::ring::Ring;
use crate::scalar::{ComplexFloat, ExactScalar};
use crate::upoly::{det_bareiss, UPoly};

use super::PlaneCurve;

/// Resultant in `μ` of two polynomials given by their `μ`-coefficients
/// (ascending, each a polynomial in `λ`), from the Sylvester matrix.
pub fn resultant_mu(f: &[UPoly<ExactScalar>], g: &[UPoly<ExactScalar>]) -> UPoly<ExactScalar> {
    let trim = |p: &[UPoly<ExactScalar>]| {
        let mut v = p.to_vec();
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        v
    };
    let (f, g) = (trim(f), trim(g));
    if f.is_empty() || g.is_empty() {
        return UPoly::zero();
    }
    let (d, e) = (f.len() - 1, g.len() - 1);
    let size = d + e;
    if size == 0 {
        return UPoly::constant(ExactScalar::one());
    }
    let mut rows = Vec::with_capacity(size);
    for (src, shifts) in [(&f, e), (&g, d)] {
        let deg = src.len() - 1;
        for s in 0..shifts {
            let mut row = vec![UPoly::zero(); size];
            for (k, c) in src.iter().enumerate() {
                row[s + deg - k] = c.clone();
            }
            rows.push(row);
        }
    }
    det_bareiss(&rows)
}

/// Discriminant of `f` in `μ` with its distinct roots.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub poly: UPoly<ExactScalar>,
    pub roots: Vec<ComplexFloat>,
}

/// `(-1)^{m(m-1)/2} Res_μ(f, ∂f/∂μ)` for `f` monic of degree `m` in `μ`.
pub fn discriminant_mu(curve: &PlaneCurve) -> Result<Discriminant> {
    let f = curve.f.as_mu_poly();
    let m = f.len().saturating_sub(1);
    let df: BivarPoly = curve.f.d_mu();
    let mut poly = resultant_mu(&f, &df.as_mu_poly());
    if (m * m.saturating_sub(1) / 2) % 2 == 1 {
        poly = poly.neg();
    }
    let roots = if poly.degree().unwrap_or(0) == 0 { Vec::new() } else { poly.distinct_roots()? };
    Ok(Discriminant { poly, roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(terms: &[(u32, u32, i64)], m: u32, n: u32) -> PlaneCurve {
        PlaneCurve::new(BivarPoly::from_int_terms((m, n), terms), m, n)
    }

    fn l(c: &[i64]) -> UPoly<ExactScalar> {
        UPoly::from_coeffs(c.iter().map(|&x| x.into()).collect())
    }

    #[test]
    fn cusp_discriminant() {
        let d = discriminant_mu(&curve(&[(0, 2, 1), (3, 0, -1)], 2, 3)).unwrap();
        assert_eq!(d.poly, l(&[0, 0, 0, 4]));
        assert_eq!(d.roots.len(), 1);
        assert!(d.roots[0].norm() < 1e-12);
    }

    #[test]
    fn node_discriminant() {
        // μ² - λ(λ+2)² = μ² - λ³ - 4λ² - 4λ; disc = 4λ(λ+2)²
        let d = discriminant_mu(&curve(&[(0, 2, 1), (3, 0, -1), (2, 0, -4), (1, 0, -4)], 2, 3)).unwrap();
        assert_eq!(d.poly, l(&[0, 16, 16, 4]));
        let mut r: Vec<f64> = d.roots.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 2.0).abs() < 1e-12 && r[1].abs() < 1e-12);
    }

    #[test]
    fn linear_in_mu() {
        let d = discriminant_mu(&curve(&[(0, 1, 1), (1, 0, -1)], 1, 1)).unwrap();
        assert_eq!(d.poly, l(&[1]));
        assert!(d.roots.is_empty());
    }
}
