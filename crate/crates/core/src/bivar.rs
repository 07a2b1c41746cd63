//! Sparse bivariate polynomials `f(λ, μ)` with exact coefficients and
//! weights `(m, n)` for `(λ, μ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::ring::Ring;
use crate::scalar::{ComplexFloat, ExactScalar};
use crate::upoly::UPoly;

#[derive(Clone, PartialEq)]
pub struct BivarPoly {
    /// `(i, j) ↦ c` for the term `c λ^i μ^j`; zero coefficients are never stored.
    terms: BTreeMap<(u32, u32), ExactScalar>,
    weights: (u32, u32),
}

impl BivarPoly {
    pub fn zero(weights: (u32, u32)) -> Self {
        BivarPoly { terms: BTreeMap::new(), weights }
    }

    pub fn from_terms<I>(weights: (u32, u32), terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), ExactScalar)>,
    {
        let mut p = Self::zero(weights);
        for (k, c) in terms {
            p.add_term(k.0, k.1, &c);
        }
        p
    }

    /// `μ^m - λ^n`-style builder from integer coefficients.
    pub fn from_int_terms(weights: (u32, u32), terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(weights, terms.iter().map(|&(i, j, c)| ((i, j), ExactScalar::from(c))))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &ExactScalar) {
        let e = self.terms.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn weights(&self) -> (u32, u32) {
        self.weights
    }

    pub fn with_weights(mut self, w: (u32, u32)) -> Self {
        self.weights = w;
        self
    }

    pub fn coeff(&self, i: u32, j: u32) -> ExactScalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_weight(&self, i: u32, j: u32) -> u64 {
        i as u64 * self.weights.0 as u64 + j as u64 * self.weights.1 as u64
    }

    /// Maximum weighted degree over stored terms; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u64> {
        self.terms.keys().map(|&(i, j)| self.term_weight(i, j)).max()
    }

    pub fn degree_mu(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn degree_lambda(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(ExactScalar::is_real)
    }

    pub fn eval(&self, lambda: &ExactScalar, mu: &ExactScalar) -> ExactScalar {
        self.terms.iter().fold(ExactScalar::zero(), |acc, (&(i, j), c)| {
            acc + c * &lambda.pow(i) * mu.pow(j)
        })
    }

    pub fn eval_complex(&self, lambda: ComplexFloat, mu: ComplexFloat) -> ComplexFloat {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (&(i, j), c)| {
            acc + c.to_complex() * lambda.powu(i) * mu.powu(j)
        })
    }

    /// Sum of absolute values of the terms at a point, used to scale residuals.
    pub fn eval_abs_scale(&self, lambda: ComplexFloat, mu: ComplexFloat) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (c.to_complex() * lambda.powu(i) * mu.powu(j)).norm())
            .sum()
    }

    pub fn d_mu(&self) -> Self {
        Self::from_terms(
            self.weights,
            self.terms.iter().filter(|(k, _)| k.1 > 0).map(|(&(i, j), c)| ((i, j - 1), c.mul_int(j as i64))),
        )
    }

    pub fn d_lambda(&self) -> Self {
        Self::from_terms(
            self.weights,
            self.terms.iter().filter(|(k, _)| k.0 > 0).map(|(&(i, j), c)| ((i - 1, j), c.mul_int(i as i64))),
        )
    }

    /// Coefficients of `μ^j` as polynomials in `λ`, ascending in `j`.
    pub fn as_mu_poly(&self) -> Vec<UPoly<ExactScalar>> {
        let dm = self.degree_mu().map_or(0, |d| d as usize + 1);
        let mut out: Vec<Vec<ExactScalar>> = vec![Vec::new(); dm];
        for (&(i, j), c) in &self.terms {
            let row = &mut out[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, ExactScalar::zero());
            }
            row[i as usize] = c.clone();
        }
        out.into_iter().map(UPoly::from_coeffs).collect()
    }

    /// `f(λ0, μ)` as a univariate polynomial in `μ` (numeric).
    pub fn mu_poly_at(&self, lambda: ComplexFloat) -> Vec<ComplexFloat> {
        let dm = self.degree_mu().map_or(0, |d| d as usize + 1);
        let mut out = vec![Complex64::new(0.0, 0.0); dm];
        for (&(i, j), c) in &self.terms {
            out[j as usize] += c.to_complex() * lambda.powu(i);
        }
        out
    }

    pub fn from_mu_poly(weights: (u32, u32), coeffs: &[UPoly<ExactScalar>]) -> Self {
        let mut p = Self::zero(weights);
        for (j, cj) in coeffs.iter().enumerate() {
            for (i, c) in cj.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, c);
            }
        }
        p
    }
}

impl Ring for BivarPoly {
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c);
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.weights);
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term(i + k, j + l, &(a * b));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), weights: self.weights }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest weighted terms first
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (std::cmp::Reverse(self.term_weight(i, j)), std::cmp::Reverse(j)));
        for (n, (i, j)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let (neg, mag) = if c.is_real() && c.re < num_rational::BigRational::from_integer(0.into()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let sep = match (n, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}")?;
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = Vec::new();
                    match i {
                        0 => {}
                        1 => s.push("lambda".to_string()),
                        _ => s.push(format!("lambda^{i}")),
                    }
                    match j {
                        0 => {}
                        1 => s.push("mu".to_string()),
                        _ => s.push(format!("mu^{j}")),
                    }
                    s.join("*")
                }
            };
            let coef = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
            match (mag.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{coef}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [weights {:?}]", self.weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = BivarPoly::from_int_terms((2, 3), &[(3, 0, -1), (0, 2, 1)]);
        p.add_term(3, 0, &1.into());
        assert_eq!(p.len(), 1);
        assert_eq!(p.weighted_degree(), Some(6));
    }

    #[test]
    fn display_reads_naturally() {
        let p = BivarPoly::from_int_terms((2, 3), &[(3, 0, -1), (0, 2, 1), (2, 0, -2), (1, 0, -1)]);
        assert_eq!(p.to_string(), "mu^2 - lambda^3 - 2*lambda^2 - lambda");
    }

    #[test]
    fn mu_poly_roundtrip() {
        let p = BivarPoly::from_int_terms((2, 3), &[(3, 0, -1), (0, 2, 1), (1, 1, 4)]);
        assert_eq!(BivarPoly::from_mu_poly((2, 3), &p.as_mu_poly()), p);
    }
}
