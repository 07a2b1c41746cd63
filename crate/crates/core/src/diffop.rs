//! Ordinary differential operators `Σ a_k(t) D^k` with truncated-series
//! coefficients.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `D^k`.
//! Products expand `D^i f = Σ_k C(i,k) f^{(k)} D^{i-k}`, so every product
//! consumes up to `order(left)` orders of series validity.

use std::fmt;

use crate::bivar::BivarPoly;
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series::{Elementary, TaylorSeries};

#[derive(Clone, PartialEq)]
pub struct DiffOp {
    base: ExactScalar,
    /// All coefficients share the operator's validity order.
    coeffs: Vec<TaylorSeries>,
    /// Minimum validity over every coefficient, including trimmed ones.
    valid_to: usize,
}

/// Reparametrization and gauge factor produced by [`DiffOp::standard_form`].
///
/// The new coordinate is `u = t0 + reparam(t - t0)`; the operator in the new
/// coordinate is conjugated as `gauge⁻¹ · P · gauge`, with `gauge` a series
/// in `u - t0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeData {
    pub reparam: TaylorSeries,
    pub gauge: TaylorSeries,
}

/// Order of an operator and whether its two highest coefficients are constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderInfo {
    pub order: usize,
    pub constant_leading: bool,
}

/// Result of a commutativity test, with the validity it was checked to.
#[derive(Clone, Debug, PartialEq)]
pub struct CommuteVerdict {
    pub commutes: bool,
    pub n_eff: usize,
    /// Lowest `D`-power with a nonzero commutator coefficient.
    pub offending: Option<usize>,
}

fn binomial(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl DiffOp {
    /// Builds an operator from ascending coefficients at a common base point.
    pub fn new(base: ExactScalar, coeffs: Vec<TaylorSeries>, valid_to: usize) -> Result<Self> {
        if coeffs.iter().any(|c| c.base() != &base) {
            return Err(Error::BasePointMismatch);
        }
        let v = coeffs.iter().map(TaylorSeries::valid_to).min().unwrap_or(valid_to).min(valid_to);
        let coeffs = coeffs.into_iter().map(|c| if c.valid_to() > v { c.truncate(v) } else { c }).collect();
        let mut op = DiffOp { base, coeffs, valid_to: v };
        op.trim();
        Ok(op)
    }

    /// Builds an operator from nonempty coefficients.
    pub fn from_coeffs(coeffs: Vec<TaylorSeries>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Invalid("empty coefficient list".into()))?;
        let (base, v) = (first.base().clone(), first.valid_to());
        Self::new(base, coeffs, v)
    }

    /// Operator with constant coefficients `Σ c_k D^k`.
    pub fn constant_coeffs(c: &[ExactScalar], base: ExactScalar, valid_to: usize) -> Self {
        let coeffs = c.iter().map(|x| TaylorSeries::constant(x.clone(), base.clone(), valid_to)).collect();
        Self::new(base, coeffs, valid_to).expect("bases agree")
    }

    /// `D^k`.
    pub fn d_power(k: usize, base: ExactScalar, valid_to: usize) -> Self {
        let mut c = vec![ExactScalar::zero(); k + 1];
        c[k] = ExactScalar::one();
        Self::constant_coeffs(&c, base, valid_to)
    }

    /// Multiplication by a function.
    pub fn function(f: TaylorSeries) -> Self {
        let (base, v) = (f.base().clone(), f.valid_to());
        Self::new(base, vec![f], v).expect("single coefficient")
    }

    pub fn scalar(c: ExactScalar, base: ExactScalar, valid_to: usize) -> Self {
        Self::constant_coeffs(&[c], base, valid_to)
    }

    pub fn zero(base: ExactScalar, valid_to: usize) -> Self {
        DiffOp { base, coeffs: Vec::new(), valid_to }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(TaylorSeries::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn base(&self) -> &ExactScalar {
        &self.base
    }

    pub fn valid_to(&self) -> usize {
        self.valid_to
    }

    pub fn coeffs(&self) -> &[TaylorSeries] {
        &self.coeffs
    }

    /// Coefficient of `D^k` (the zero series beyond the order).
    pub fn coeff(&self, k: usize) -> TaylorSeries {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| TaylorSeries::zero(self.base.clone(), self.valid_to))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Result<usize> {
        self.coeffs.len().checked_sub(1).ok_or(Error::ZeroOperator)
    }

    pub fn leading(&self) -> Result<&TaylorSeries> {
        self.coeffs.last().ok_or(Error::ZeroOperator)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(TaylorSeries::is_real)
    }

    /// Order, and whether the two highest coefficients are constant series.
    pub fn order_info(&self) -> Result<OrderInfo> {
        let order = self.order()?;
        let constant_leading = self.coeffs[order].is_constant()
            && (order == 0 || self.coeffs[order - 1].is_constant());
        Ok(OrderInfo { order, constant_leading })
    }

    fn check_base(&self, o: &Self) -> Result<()> {
        if self.base == o.base {
            Ok(())
        } else {
            Err(Error::BasePointMismatch)
        }
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&TaylorSeries, &TaylorSeries) -> TaylorSeries) -> Result<Self> {
        self.check_base(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|k| f(&self.coeff(k), &o.coeff(k))).collect();
        Self::new(self.base.clone(), coeffs, self.valid_to.min(o.valid_to))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        DiffOp { base: self.base.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect(), valid_to: self.valid_to }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Self::new(self.base.clone(), coeffs, self.valid_to).expect("same base")
    }

    /// Composition `self · o`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_base(o)?;
        let p_order = self.coeffs.len().saturating_sub(1);
        // derivative tables of o's coefficients
        let mut derivs: Vec<Vec<TaylorSeries>> = Vec::with_capacity(o.coeffs.len());
        for b in &o.coeffs {
            let mut row = vec![b.clone()];
            for k in 1..=p_order {
                let next = row[k - 1].derivative().map_err(|_| Error::ValidityExhausted {
                    needed: p_order,
                    available: b.valid_to(),
                })?;
                row.push(next);
            }
            derivs.push(row);
        }
        let out_len = (self.coeffs.len() + o.coeffs.len()).saturating_sub(1);
        let mut out: Vec<Option<TaylorSeries>> = vec![None; out_len];
        let mut valid = self.valid_to.min(o.valid_to.saturating_sub(p_order));
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, row) in derivs.iter().enumerate() {
                for (k, bk) in row.iter().enumerate().take(i + 1) {
                    let term = (a * bk).scale(&ExactScalar::from(binomial(i, k)));
                    valid = valid.min(term.valid_to());
                    let slot = &mut out[i - k + j];
                    *slot = Some(match slot.take() {
                        Some(acc) => &acc + &term,
                        None => term,
                    });
                }
            }
        }
        let coeffs = out
            .into_iter()
            .map(|c| c.unwrap_or_else(|| TaylorSeries::zero(self.base.clone(), valid)))
            .collect();
        Self::new(self.base.clone(), coeffs, valid)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = DiffOp::scalar(ExactScalar::one(), self.base.clone(), self.valid_to);
        for _ in 0..e {
            acc = self.mul(&acc)?;
        }
        Ok(acc)
    }

    /// `[self, o] = self·o - o·self`.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// Commutativity to the effective validity of the commutator.
    pub fn commutes_with(&self, o: &Self) -> Result<CommuteVerdict> {
        let c = self.commutator(o)?;
        let offending = c.coeffs.iter().position(|x| !x.is_zero());
        Ok(CommuteVerdict { commutes: offending.is_none(), n_eff: c.valid_to, offending })
    }

    /// Applies the operator to a function: `Σ a_k s^{(k)}`.
    pub fn apply(&self, s: &TaylorSeries) -> Result<TaylorSeries> {
        if s.base() != &self.base {
            return Err(Error::BasePointMismatch);
        }
        let order = self.coeffs.len().saturating_sub(1);
        if s.valid_to() < order {
            return Err(Error::ValidityExhausted { needed: order, available: s.valid_to() });
        }
        let mut acc = TaylorSeries::zero(self.base.clone(), s.valid_to().saturating_sub(order).min(self.valid_to));
        let mut d = s.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                d = d.derivative()?;
            }
            acc = &acc + &(a * &d);
        }
        Ok(acc)
    }

    /// Replaces `D` by `D + ζ`: `P(e^{ζt} R) = e^{ζt} · shift(P, ζ)(R)`.
    pub fn gauge_shift(&self, zeta: &ExactScalar) -> Result<Self> {
        let shifted_d = DiffOp::constant_coeffs(&[zeta.clone(), ExactScalar::one()], self.base.clone(), self.valid_to);
        let mut acc = DiffOp::zero(self.base.clone(), self.valid_to);
        let mut power = DiffOp::scalar(ExactScalar::one(), self.base.clone(), self.valid_to);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul(&shifted_d)?;
            }
            acc = acc.add(&DiffOp::function(a.clone()).mul(&power)?)?;
        }
        Ok(acc)
    }

    /// Normalizes to leading coefficient 1 and vanishing second-highest
    /// coefficient.
    ///
    /// `root` must be an exact `m`-th root of the leading coefficient at the
    /// base point; it fixes the branch of `χ = a_m^{1/m}`. The reparametrization
    /// solves `ξ' = χ⁻¹`, the gauge is `ζ = exp(-∫ a'_{m-1}/m)` computed in the
    /// new coordinate.
    pub fn standard_form(&self, root: &ExactScalar) -> Result<(DiffOp, GaugeData)> {
        let m = self.order()?;
        if m == 0 {
            return Err(Error::Invalid("standard form needs positive order".into()));
        }
        let lead = self.leading()?;
        if lead.constant_term().is_zero() {
            return Err(Error::NotInvertible);
        }
        let chi = lead.elementary(&Elementary::Root { m: m as u32, root: root.clone() })?;
        let xi = chi.invert()?.antiderivative().truncate(chi.valid_to());
        let identity_gauge = TaylorSeries::one(self.base.clone(), xi.valid_to());
        let reparam = GaugeData { reparam: xi, gauge: identity_gauge };
        let p1 = self.transport(&reparam)?;
        let eta = p1.coeff(m - 1).scale(&ExactScalar::ratio(1, m as i64));
        let zeta = (-&eta.antiderivative()).truncate(eta.valid_to()).exp()?;
        let g = GaugeData { reparam: reparam.reparam, gauge: zeta };
        let out = self.transport(&g)?;
        Ok((out, g))
    }

    /// Rewrites the operator in the coordinate and gauge described by `g`.
    pub fn transport(&self, g: &GaugeData) -> Result<DiffOp> {
        let xi = &g.reparam;
        if !xi.constant_term().is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let h = xi.reverse()?;
        // D_t = ξ'(h(u)) D_u
        let dt_factor = xi.derivative()?.compose(&h)?;
        let d_t = DiffOp::new(
            self.base.clone(),
            vec![TaylorSeries::zero(self.base.clone(), dt_factor.valid_to()), dt_factor],
            self.valid_to,
        )?;
        let mut acc = DiffOp::zero(self.base.clone(), self.valid_to);
        let mut power = DiffOp::scalar(ExactScalar::one(), self.base.clone(), self.valid_to);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = d_t.mul(&power)?;
            }
            let ak = a.compose(&h)?;
            acc = acc.add(&DiffOp::function(ak).mul(&power)?)?;
        }
        let zeta = &g.gauge;
        if zeta.constant_term().is_zero() {
            return Err(Error::NotInvertible);
        }
        if zeta.is_constant() && zeta.constant_term().is_one() {
            return Ok(acc);
        }
        DiffOp::function(zeta.invert()?).mul(&acc)?.mul(&DiffOp::function(zeta.clone()))
    }

    /// Drops every coefficient to validity `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.truncate(n)).collect();
        Self::new(self.base.clone(), coeffs, self.valid_to.min(n)).expect("same base")
    }
}

impl GaugeData {
    pub fn identity(base: ExactScalar, valid_to: usize) -> Self {
        GaugeData {
            reparam: TaylorSeries::shifted_var(base.clone(), valid_to),
            gauge: TaylorSeries::one(base, valid_to),
        }
    }

    /// Data whose transport undoes `self`.
    pub fn inverse(&self) -> Result<Self> {
        let h = self.reparam.reverse()?;
        let gauge = self.gauge.compose(&self.reparam)?.invert()?;
        Ok(GaugeData { reparam: h, gauge })
    }
}

/// Outcome of evaluating `f(P, Q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyEval {
    pub op: DiffOp,
    pub n_eff: usize,
}

/// `Σ c_ij P^i Q^j` for a commuting pair; non-commuting inputs are rejected.
pub fn poly_eval(f: &BivarPoly, p: &DiffOp, q: &DiffOp) -> Result<PolyEval> {
    let verdict = p.commutes_with(q)?;
    if !verdict.commutes {
        return Err(Error::NonCommuting { index: verdict.offending.unwrap_or(0), n_eff: verdict.n_eff });
    }
    let max_i = f.degree_lambda().unwrap_or(0);
    let max_j = f.degree_mu().unwrap_or(0);
    let one = DiffOp::scalar(ExactScalar::one(), p.base().clone(), p.valid_to().min(q.valid_to()));
    let mut p_pows = vec![one.clone()];
    for _ in 0..max_i {
        let next = p.mul(p_pows.last().expect("nonempty"))?;
        p_pows.push(next);
    }
    let mut q_pows = vec![one.clone()];
    for _ in 0..max_j {
        let next = q.mul(q_pows.last().expect("nonempty"))?;
        q_pows.push(next);
    }
    let mut acc = DiffOp::zero(p.base().clone(), one.valid_to());
    for (&(i, j), c) in f.terms() {
        let term = p_pows[i as usize].mul(&q_pows[j as usize])?.scale(c);
        acc = acc.add(&term)?;
    }
    let n_eff = acc.valid_to();
    Ok(PolyEval { op: acc, n_eff })
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if c.is_constant() { format!("{}", c.constant_term()) } else { format!("[{c}]") };
            match k {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}*D")?,
                _ => write!(f, "{coef}*D^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (valid to {})", self.valid_to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 16;

    fn z() -> ExactScalar {
        ExactScalar::zero()
    }

    fn series(c: &[i64]) -> TaylorSeries {
        TaylorSeries::from_coeffs_padded(z(), c.iter().map(|&x| x.into()).collect(), N)
    }

    fn d(k: usize) -> DiffOp {
        DiffOp::d_power(k, z(), N)
    }

    fn func(c: &[i64]) -> DiffOp {
        DiffOp::function(series(c))
    }

    #[test]
    fn d_times_t() {
        let lhs = d(1).mul(&func(&[0, 1])).unwrap();
        let rhs = DiffOp::new(z(), vec![series(&[1]), series(&[0, 1])], N).unwrap();
        assert_eq!(lhs.coeffs(), rhs.truncate(N - 1).coeffs());
    }

    #[test]
    fn constant_powers_compose() {
        assert_eq!(d(2).mul(&d(3)).unwrap().coeffs(), d(5).truncate(N - 2).coeffs());
    }

    #[test]
    fn d2_times_t2() {
        let lhs = d(2).mul(&func(&[0, 0, 1])).unwrap();
        let expect = [series(&[2]), series(&[0, 4]), series(&[0, 0, 1])];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(lhs.coeff(k), e.truncate(N - 2));
        }
        assert_eq!(lhs.order().unwrap(), 2);
        assert_eq!(lhs.valid_to(), N - 2);
    }

    #[test]
    fn commutators() {
        let c = d(1).commutator(&func(&[0, 1])).unwrap();
        assert_eq!(c.order().unwrap(), 0);
        assert_eq!(c.coeff(0), series(&[1]).truncate(N - 1));
        let p = DiffOp::new(z(), vec![series(&[1, 2, 3]), series(&[0]), series(&[1, 1])], N).unwrap();
        assert!(p.commutator(&p).unwrap().is_zero());
    }

    #[test]
    fn apply_examples() {
        assert_eq!(d(1).apply(&series(&[0, 0, 1])).unwrap(), series(&[0, 2]).truncate(N - 1));
    }

    #[test]
    fn order_info() {
        let p = DiffOp::new(z(), vec![series(&[0]), series(&[0, 1]), series(&[0]), series(&[1])], N).unwrap();
        assert_eq!(p.order_info().unwrap(), OrderInfo { order: 3, constant_leading: true });
        let q = DiffOp::new(z(), vec![series(&[0]), series(&[0]), series(&[0, 1])], N).unwrap();
        assert_eq!(q.order_info().unwrap(), OrderInfo { order: 2, constant_leading: false });
        assert_eq!(DiffOp::zero(z(), N).order_info(), Err(Error::ZeroOperator));
    }

    #[test]
    fn gauge_shift_binomial_and_inverse() {
        let zeta = ExactScalar::from(3);
        let s = d(2).gauge_shift(&zeta).unwrap();
        let expect = DiffOp::constant_coeffs(&[9.into(), 6.into(), 1.into()], z(), N);
        assert_eq!(s.coeffs(), expect.truncate(s.valid_to()).coeffs());
        let p = DiffOp::new(z(), vec![series(&[1, 2]), series(&[0, 0, 1]), series(&[1])], N).unwrap();
        let back = p.gauge_shift(&zeta).unwrap().gauge_shift(&-&zeta).unwrap();
        assert_eq!(back.coeffs(), p.truncate(back.valid_to()).coeffs());
    }

    #[test]
    fn standard_form_constant_rescaling() {
        let p = DiffOp::constant_coeffs(&[0.into(), 0.into(), 4.into()], z(), N);
        let (q, g) = p.standard_form(&2.into()).unwrap();
        assert_eq!(q.order().unwrap(), 2);
        assert!(q.coeff(2).is_constant() && q.coeff(2).constant_term().is_one());
        assert!(q.coeff(1).is_zero() && q.coeff(0).is_zero());
        assert_eq!(g.reparam.coeff(1), ExactScalar::ratio(1, 2));
        assert!(g.reparam.coeffs()[2..].iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn standard_form_completing_the_square() {
        let a = ExactScalar::from(3);
        let p = DiffOp::constant_coeffs(&[a.pow(2), a.mul_int(2), 1.into()], z(), N);
        let (q, g) = p.standard_form(&1.into()).unwrap();
        assert!(q.coeff(1).is_zero() && q.coeff(0).is_zero());
        // ζ = exp(-3 s)
        let expect = TaylorSeries::from_coeffs_padded(z(), vec![0.into(), (-3).into()], g.gauge.valid_to()).exp().unwrap();
        assert_eq!(g.gauge, expect);
    }

    #[test]
    fn wrong_root_is_rejected() {
        let p = DiffOp::constant_coeffs(&[0.into(), 0.into(), 4.into()], z(), N);
        assert_eq!(p.standard_form(&3.into()).map(|_| ()), Err(Error::WrongRoot));
        let q = DiffOp::new(z(), vec![series(&[1]), series(&[0, 1])], N).unwrap();
        assert_eq!(q.standard_form(&1.into()).map(|_| ()), Err(Error::NotInvertible));
    }

    #[test]
    fn linear_chain_rule() {
        // u = 2t: D_t = 2 D_u
        let g = GaugeData { reparam: series(&[0, 2]), gauge: series(&[1]) };
        let out = d(1).transport(&g).unwrap();
        assert_eq!(out.order().unwrap(), 1);
        assert_eq!(out.coeff(1).constant_term(), &ExactScalar::from(2));
        assert!(out.coeff(1).is_constant() && out.coeff(0).is_zero());
    }

    #[test]
    fn identity_transport() {
        let p = DiffOp::new(z(), vec![series(&[1, 2]), series(&[0, 0, 1]), series(&[1])], N).unwrap();
        let out = p.transport(&GaugeData::identity(z(), N)).unwrap();
        assert_eq!(out.coeffs(), p.truncate(out.valid_to()).coeffs());
    }

    #[test]
    fn poly_eval_rejects_non_commuting() {
        let f = BivarPoly::from_int_terms((1, 1), &[(1, 0, 1)]);
        let err = poly_eval(&f, &d(1), &func(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::NonCommuting { .. }));
    }
}
