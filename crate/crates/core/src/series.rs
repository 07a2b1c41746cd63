//! Truncated power series in `s = t - t0` over [`ExactScalar`].
//!
//! A series carries its base point `t0` and a validity order `N`: the stored
//! coefficients `c_0..=c_N` are exact and the value is only known up to
//! `O(s^{N+1})`. Every operation reports the validity of its result:
//! binary operations take the minimum, differentiation loses one order,
//! integration gains one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{ComplexFloat, ExactScalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TaylorSeries {
    base: ExactScalar,
    coeffs: Vec<ExactScalar>,
}

/// Elementary functions that can be composed with a series.
///
/// Values at a nonzero constant term are transcendental in general, so the
/// caller supplies them exactly when the inner series does not vanish at the
/// base point.
#[derive(Clone, Debug, PartialEq)]
pub enum Elementary {
    Exp { at_constant: Option<ExactScalar> },
    /// `at_constant = (sin c0, cos c0)`.
    Sin { at_constant: Option<(ExactScalar, ExactScalar)> },
    /// `at_constant = (sin c0, cos c0)`.
    Cos { at_constant: Option<(ExactScalar, ExactScalar)> },
    /// Principal branch of the `m`-th root fixed by the supplied root of `c0`.
    Root { m: u32, root: ExactScalar },
}

impl TaylorSeries {
    /// Builds a series from its coefficients; `valid_to = coeffs.len() - 1`.
    pub fn from_coeffs(base: ExactScalar, mut coeffs: Vec<ExactScalar>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ExactScalar::zero());
        }
        TaylorSeries { base, coeffs }
    }

    /// Builds a series from coefficients, padding with zeros to `valid_to`.
    pub fn from_coeffs_padded(base: ExactScalar, coeffs: Vec<ExactScalar>, valid_to: usize) -> Self {
        let mut c = coeffs;
        c.resize(valid_to + 1, ExactScalar::zero());
        c.truncate(valid_to + 1);
        TaylorSeries { base, coeffs: c }
    }

    pub fn constant(c: ExactScalar, base: ExactScalar, valid_to: usize) -> Self {
        Self::from_coeffs_padded(base, vec![c], valid_to)
    }

    pub fn zero(base: ExactScalar, valid_to: usize) -> Self {
        Self::constant(ExactScalar::zero(), base, valid_to)
    }

    pub fn one(base: ExactScalar, valid_to: usize) -> Self {
        Self::constant(ExactScalar::one(), base, valid_to)
    }

    /// The coordinate function `t = t0 + s`.
    pub fn t(base: ExactScalar, valid_to: usize) -> Self {
        Self::from_coeffs_padded(base.clone(), vec![base, ExactScalar::one()], valid_to)
    }

    /// The shifted coordinate `s = t - t0`.
    pub fn shifted_var(base: ExactScalar, valid_to: usize) -> Self {
        Self::from_coeffs_padded(base, vec![ExactScalar::zero(), ExactScalar::one()], valid_to)
    }

    /// Expands a polynomial `Σ p_k t^k` around the base point.
    pub fn polynomial_in_t(p: &[ExactScalar], base: ExactScalar, valid_to: usize) -> Self {
        let t = Self::t(base.clone(), valid_to);
        let mut acc = Self::zero(base, valid_to);
        for c in p.iter().rev() {
            acc = acc.mul_unchecked(&t).add_scalar(c);
        }
        acc
    }

    pub fn base(&self) -> &ExactScalar {
        &self.base
    }

    pub fn valid_to(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> &ExactScalar {
        &self.coeffs[0]
    }

    pub fn truncate(&self, valid_to: usize) -> Self {
        let n = valid_to.min(self.valid_to());
        TaylorSeries { base: self.base.clone(), coeffs: self.coeffs[..=n].to_vec() }
    }

    /// True when every stored coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactScalar::is_zero)
    }

    /// True when all non-constant coefficients vanish.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(ExactScalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(ExactScalar::is_real)
    }

    /// Same base and validity, coefficients replaced by a constant.
    pub fn constant_like(&self, c: ExactScalar) -> Self {
        Self::constant(c, self.base.clone(), self.valid_to())
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::BasePointMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let n = self.valid_to().min(other.valid_to());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(TaylorSeries { base: self.base.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let n = self.valid_to().min(other.valid_to());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(TaylorSeries { base: self.base.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.valid_to().min(other.valid_to());
        let a: Vec<usize> = nonzero_indices(&self.coeffs, n);
        let b: Vec<usize> = nonzero_indices(&other.coeffs, n);
        let mut coeffs = vec![ExactScalar::zero(); n + 1];
        for &i in &a {
            for &j in &b {
                if i + j > n {
                    break;
                }
                coeffs[i + j] += &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        TaylorSeries { base: self.base.clone(), coeffs }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        TaylorSeries { base: self.base.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add_scalar(&self, c: &ExactScalar) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Termwise derivative; validity drops by one.
    pub fn derivative(&self) -> Result<Self> {
        let n = self.valid_to();
        if n == 0 {
            return Err(Error::ValidityExhausted { needed: 1, available: 0 });
        }
        let coeffs = (1..=n).map(|k| self.coeffs[k].mul_int(k as i64)).collect();
        Ok(TaylorSeries { base: self.base.clone(), coeffs })
    }

    pub fn nth_derivative(&self, k: usize) -> Result<Self> {
        if k > self.valid_to() {
            return Err(Error::ValidityExhausted { needed: k, available: self.valid_to() });
        }
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative()?;
        }
        Ok(out)
    }

    /// Antiderivative vanishing at the base point; validity grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ExactScalar::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.div_int(k as i64 + 1));
        }
        TaylorSeries { base: self.base.clone(), coeffs }
    }

    /// Multiplicative inverse, requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let a0_inv = self.coeffs[0].inv().map_err(|_| Error::NotInvertible)?;
        let n = self.valid_to();
        let mut b: Vec<ExactScalar> = Vec::with_capacity(n + 1);
        b.push(a0_inv.clone());
        for k in 1..=n {
            let mut acc = ExactScalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &b[k - j]);
                }
            }
            b.push(-(&acc * &a0_inv));
        }
        Ok(TaylorSeries { base: self.base.clone(), coeffs: b })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.invert()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.constant_like(ExactScalar::one());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `self ∘ inner`, where `inner` vanishes at its base point.
    ///
    /// The result lives at `inner`'s base point.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.valid_to().min(inner.valid_to());
        let g = inner.truncate(n);
        let mut acc = TaylorSeries::constant(self.coeffs[n].clone(), g.base.clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul_unchecked(&g).add_scalar(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion:
    /// `h_k = (1/k) [s^{k-1}] (s / g(s))^k`.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.valid_to();
        if n == 0 {
            return Err(Error::ValidityExhausted { needed: 1, available: 0 });
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::NonUnitLinearTerm);
        }
        // g(s)/s is valid to order n-1
        let quotient = TaylorSeries { base: self.base.clone(), coeffs: self.coeffs[1..].to_vec() };
        let phi = quotient.invert()?;
        let mut h = vec![ExactScalar::zero(); n + 1];
        let mut power = phi.constant_like(ExactScalar::one());
        for (k, hk) in h.iter_mut().enumerate().skip(1) {
            power = power.mul_unchecked(&phi);
            *hk = power.coeff(k - 1).div_int(k as i64);
        }
        Ok(TaylorSeries { base: self.base.clone(), coeffs: h })
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.valid_to();
        let mut e = Vec::with_capacity(n + 1);
        e.push(ExactScalar::one());
        for k in 1..=n {
            let mut acc = ExactScalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j].mul_int(j as i64) * &e[k - j]);
                }
            }
            e.push(acc.div_int(k as i64));
        }
        Ok(TaylorSeries { base: self.base.clone(), coeffs: e })
    }

    /// `log` of a series with constant term 1.
    pub fn ln_unit(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        if self.valid_to() == 0 {
            return Ok(self.constant_like(ExactScalar::zero()));
        }
        let q = self.derivative()?.checked_mul(&self.invert()?)?;
        Ok(q.antiderivative())
    }

    /// `(sin x, cos x)` for a series with zero constant term.
    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.valid_to();
        let mut sin_c = vec![ExactScalar::zero(); n + 1];
        let mut cos_c = vec![ExactScalar::zero(); n + 1];
        let mut fact = BigInt::from(1);
        for k in 0..=n {
            if k > 0 {
                fact *= k;
            }
            let sign: i64 = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let v = ExactScalar::real(BigRational::new(BigInt::from(sign), fact.clone()));
            if k % 2 == 0 {
                cos_c[k] = v;
            } else {
                sin_c[k] = v;
            }
        }
        let sin_f = TaylorSeries { base: self.base.clone(), coeffs: sin_c };
        let cos_f = TaylorSeries { base: self.base.clone(), coeffs: cos_c };
        Ok((sin_f.compose(self)?, cos_f.compose(self)?))
    }

    /// Composes one of the [`Elementary`] functions with `self`.
    pub fn elementary(&self, kind: &Elementary) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        let rest = self.add_scalar(&-&c0);
        let needs_value = !c0.is_zero();
        match kind {
            Elementary::Exp { at_constant } => {
                let e = rest.exp()?;
                match (needs_value, at_constant) {
                    (false, _) => Ok(e),
                    (true, Some(v)) => Ok(e.scale(v)),
                    (true, None) => Err(Error::TranscendentalConstant(format!("exp({c0})"))),
                }
            }
            Elementary::Sin { at_constant } | Elementary::Cos { at_constant } => {
                let (s, c) = rest.sin_cos()?;
                let (sv, cv) = match (needs_value, at_constant) {
                    (false, _) => (ExactScalar::zero(), ExactScalar::one()),
                    (true, Some(pair)) => pair.clone(),
                    (true, None) => {
                        return Err(Error::TranscendentalConstant(format!("sin/cos({c0})")))
                    }
                };
                match kind {
                    // sin(a + x) = sin a cos x + cos a sin x
                    Elementary::Sin { .. } => c.scale(&sv).checked_add(&s.scale(&cv)),
                    // cos(a + x) = cos a cos x - sin a sin x
                    _ => c.scale(&cv).checked_sub(&s.scale(&sv)),
                }
            }
            Elementary::Root { m, root } => {
                if *m == 0 {
                    return Err(Error::Invalid("zeroth root".into()));
                }
                if root.pow(*m) != c0 || c0.is_zero() {
                    return Err(Error::WrongRoot);
                }
                let unit = self.scale(&c0.inv()?);
                let log = unit.ln_unit()?;
                let r = log.scale(&ExactScalar::ratio(1, *m as i64)).exp()?;
                Ok(r.scale(root))
            }
        }
    }

    /// Numeric evaluation of the truncated polynomial at `s = t - t0`.
    pub fn eval_shifted(&self, s: ComplexFloat) -> ComplexFloat {
        self.coeffs.iter().rev().fold(ComplexFloat::new(0.0, 0.0), |acc, c| acc * s + c.to_complex())
    }
}

fn nonzero_indices(c: &[ExactScalar], n: usize) -> Vec<usize> {
    (0..=n.min(c.len() - 1)).filter(|&k| !c[k].is_zero()).collect()
}

impl fmt::Debug for TaylorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TaylorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})s")?,
                _ => write!(f, "({c})s^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(s^{})", self.valid_to() + 1)
    }
}

macro_rules! series_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&TaylorSeries> for &TaylorSeries {
            type Output = TaylorSeries;
            /// Panics when base points differ; use the `checked_*` form to recover.
            fn $m(self, rhs: &TaylorSeries) -> TaylorSeries {
                self.$checked(rhs).expect("series base points differ")
            }
        }
        impl $tr<TaylorSeries> for TaylorSeries {
            type Output = TaylorSeries;
            fn $m(self, rhs: TaylorSeries) -> TaylorSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
series_op!(Add, add, checked_add);
series_op!(Sub, sub, checked_sub);
series_op!(Mul, mul, checked_mul);

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;
    fn neg(self) -> TaylorSeries {
        TaylorSeries { base: self.base.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
