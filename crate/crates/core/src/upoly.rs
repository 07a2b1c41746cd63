//! Dense univariate polynomials over a [`Ring`], with field operations and
//! numeric root finding when the coefficients are exact scalars.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{ComplexFloat, ExactScalar};

/// `Σ c_k x^k`, trailing zero coefficients removed.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<C: Ring> {
    c: Vec<C>,
}

impl<C: Ring> UPoly<C> {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(c: C, k: usize, zero: &C) -> Self {
        let mut v = vec![zero.clone(); k];
        v.push(c);
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Option<&C> {
        self.c.get(k)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.c.last()
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::from_coeffs(self.c.iter().map(f).collect())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(s)).collect())
    }
}

impl<C: Ring> Ring for UPoly<C> {
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|k| match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(v)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero();
        }
        let mut out: Vec<Option<C>> = vec![None; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => acc.add(&p),
                    None => p,
                });
            }
        }
        // zero slots: any coefficient times zero keeps the ring's zero shape
        let zero = self.c[0].sub(&self.c[0]);
        Self::from_coeffs(out.into_iter().map(|x| x.unwrap_or_else(|| zero.clone())).collect())
    }

    fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(Ring::neg).collect() }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl UPoly<ExactScalar> {
    pub fn x() -> Self {
        Self::from_coeffs(vec![ExactScalar::zero(), ExactScalar::one()])
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.c.iter().rev().fold(ExactScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: ComplexFloat) -> ComplexFloat {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.c.iter().enumerate().skip(1).map(|(k, c)| c.mul_int(k as i64)).collect())
    }

    pub fn is_real(&self) -> bool {
        self.c.iter().all(ExactScalar::is_real)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.leading().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![ExactScalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &dl;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &(&coef * dc);
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Division known to be exact.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Invalid("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("b is nonzero").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Numeric roots of the square-free part (each distinct root once).
    pub fn distinct_roots(&self) -> Result<Vec<ComplexFloat>> {
        let sf = self.squarefree_part();
        let c: Vec<ComplexFloat> = sf.c.iter().map(ExactScalar::to_complex).collect();
        complex_roots(&c)
    }
}

/// All roots of `Σ c_k x^k` (complex coefficients) by Aberth–Ehrlich
/// iteration followed by Newton polishing.
pub fn complex_roots(c: &[ComplexFloat]) -> Result<Vec<ComplexFloat>> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = match c.len() {
        0 => return Err(Error::RootFinding("zero polynomial".into())),
        k => k - 1,
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let monic: Vec<ComplexFloat> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut worst_seen = f64::INFINITY;
    for offset in [0.25, 0.4, 0.1, 0.33] {
        let (z, worst) = aberth(&monic, radius, offset);
        if worst <= 1e-8 {
            return Ok(z);
        }
        worst_seen = worst_seen.min(worst);
    }
    Err(Error::RootFinding(format!("Aberth iteration did not converge (residual {worst_seen:e})")))
}

fn horner(monic: &[ComplexFloat], z: ComplexFloat) -> (ComplexFloat, ComplexFloat, f64) {
    let n = monic.len() - 1;
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 1.0;
    for k in (0..n).rev() {
        dp = dp * z + p;
        p = p * z + monic[k];
        scale = scale * z.norm() + monic[k].norm();
    }
    (p, dp, scale)
}

/// One Aberth run from a rotated circle of starting points; returns the
/// roots and the worst relative residual.
fn aberth(monic: &[ComplexFloat], radius: f64, offset: f64) -> (Vec<ComplexFloat>, f64) {
    let n = monic.len() - 1;
    let mut z: Vec<ComplexFloat> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + offset) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp, _) = horner(monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: ComplexFloat = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = horner(monic, *zi);
            if dp.norm() > 0.0 {
                let next = *zi - p / dp;
                if next.is_finite() {
                    *zi = next;
                }
            }
        }
    }
    let worst = z
        .iter()
        .map(|&zi| {
            let (p, _, scale) = horner(monic, zi);
            if zi.norm() > 2.0 * radius {
                f64::INFINITY
            } else {
                p.norm() / scale
            }
        })
        .fold(0.0, f64::max);
    (z, worst)
}

/// Fraction-free (Bareiss) determinant over `Q(i)[x]`.
pub fn det_bareiss(mat: &[Vec<UPoly<ExactScalar>>]) -> UPoly<ExactScalar> {
    let n = mat.len();
    if n == 0 {
        return UPoly::constant(ExactScalar::one());
    }
    let mut a: Vec<Vec<UPoly<ExactScalar>>> = mat.to_vec();
    let mut prev = UPoly::constant(ExactScalar::one());
    let mut sign_flip = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = UPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly<ExactScalar> {
        UPoly::from_coeffs(c.iter().map(|&x| x.into()).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        assert_eq!(f.squarefree_part(), p(&[-2, 1, 1]));
    }

    #[test]
    fn roots_of_cubic() {
        let f = p(&[-6, 11, -6, 1]);
        let mut r: Vec<f64> = f.distinct_roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn bareiss_matches_laplace() {
        let m = vec![
            vec![p(&[1, 1]), p(&[2]), p(&[0, 0, 1])],
            vec![p(&[0]), p(&[3, -1]), p(&[1])],
            vec![p(&[5]), p(&[0, 1]), p(&[2, 2])],
        ];
        let one = p(&[1]);
        assert_eq!(det_bareiss(&m), crate::ring::det_laplace(&m, &one));
    }
}
