//! Inverse problem for the rational curves `μ² = λ(λ + b1)²`.
//!
//! With `k = z^{-1}` the curve is parametrized by `λ = k²`, `μ = k³ + b1·k`.
//! The Baker–Akhiezer function is `ψ = e^{kt}(k + d(t))/(k - w)` with
//! `w = z0^{-1}`; for the node `d` is fixed by gluing `k = ±c`, and the cusp
//! is its `c → 0` limit. Time is measured in units where the exponential
//! factor is `e^{kt}` (the factor `2πi` is absorbed into `t`).

use num_complex::Complex64;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::scalar::{ComplexFloat, ExactScalar};
use crate::series::TaylorSeries;
use crate::spectral::{
    bc_polynomial, action_matrix, divisor_points, monodromy_free_matrix, DivisorTolerances, PlaneCurve,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Smooth,
    Node,
    Cusp,
}

/// Spectral data for one of the three genus-zero models.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusZeroSpec {
    pub b1: ExactScalar,
    pub z0_inv: Option<ExactScalar>,
    pub kind: CurveKind,
    /// `c` with `c² = -b1`, node only.
    pub c: Option<ExactScalar>,
}

impl GenusZeroSpec {
    pub fn smooth(b1: ExactScalar) -> Self {
        GenusZeroSpec { b1, z0_inv: None, kind: CurveKind::Smooth, c: None }
    }

    pub fn cusp(z0_inv: ExactScalar) -> Result<Self> {
        let s = GenusZeroSpec { b1: ExactScalar::zero(), z0_inv: Some(z0_inv), kind: CurveKind::Cusp, c: None };
        s.validate()?;
        Ok(s)
    }

    pub fn node(c: ExactScalar, z0_inv: ExactScalar) -> Result<Self> {
        let s = GenusZeroSpec { b1: -(&c * &c), z0_inv: Some(z0_inv), kind: CurveKind::Node, c: Some(c) };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.into()));
        match self.kind {
            CurveKind::Smooth => {
                if self.z0_inv.is_some() || self.c.is_some() {
                    return bad("smooth kind carries no z0 or c");
                }
            }
            CurveKind::Cusp => {
                if !self.b1.is_zero() {
                    return bad("cusp requires b1 = 0");
                }
                if self.z0_inv.as_ref().is_none_or(ExactScalar::is_zero) {
                    return bad("cusp requires a nonzero z0^-1");
                }
            }
            CurveKind::Node => {
                let Some(c) = &self.c else { return bad("node requires c") };
                if self.b1.is_zero() {
                    return bad("node requires b1 != 0");
                }
                if c * c != -&self.b1 {
                    return bad("c^2 must equal -b1");
                }
                if self.z0_inv.as_ref().is_none_or(ExactScalar::is_zero) {
                    return bad("node requires a nonzero z0^-1");
                }
            }
        }
        Ok(())
    }

    /// `μ² - λ(λ + b1)²`.
    pub fn expected_curve(&self) -> PlaneCurve {
        let mut f = crate::bivar::BivarPoly::zero((2, 3));
        f.add_term(0, 2, &ExactScalar::one());
        f.add_term(3, 0, &ExactScalar::from(-1));
        f.add_term(2, 0, &-self.b1.mul_int(2));
        f.add_term(1, 0, &-(&self.b1 * &self.b1));
        PlaneCurve::new(f, 2, 3)
    }

    pub fn lambda(k: &ExactScalar) -> ExactScalar {
        k * k
    }

    pub fn mu(&self, k: &ExactScalar) -> ExactScalar {
        &(&(k * k) * k) + &(&self.b1 * k)
    }

    fn w(&self) -> &ExactScalar {
        self.z0_inv.as_ref().expect("validated")
    }
}

/// `ψ(k, t) = e^{kt}·(k + d(t))/(k - w)`; for the smooth kind `ψ = e^{kt}`.
#[derive(Clone, Debug)]
pub struct BAFunction {
    pub spec: GenusZeroSpec,
    /// `d(t)` expanded at the base point (absent for the smooth kind).
    pub d: Option<TaylorSeries>,
    base: ExactScalar,
    valid_to: usize,
}

pub fn ba_function(spec: &GenusZeroSpec, t0: &ExactScalar, valid_to: usize) -> Result<BAFunction> {
    spec.validate()?;
    let d = match spec.kind {
        CurveKind::Smooth => None,
        CurveKind::Cusp => {
            let w = spec.w();
            let den = TaylorSeries::t(t0.clone(), valid_to).scale(w).add_scalar(&ExactScalar::one());
            if den.constant_term().is_zero() {
                return Err(Error::BadBasePoint(format!("1 + t0/z0 vanishes at t0 = {t0}")));
            }
            Some(den.invert()?.scale(&-w))
        }
        CurveKind::Node => {
            if !t0.is_zero() {
                return Err(Error::BadBasePoint("node data has exact expansions only at t0 = 0".into()));
            }
            let (c, w) = (spec.c.as_ref().expect("validated"), spec.w());
            let (ch, sh) = cosh_sinh(c, valid_to)?;
            let tau = &ch.scale(c) + &sh.scale(w);
            if tau.constant_term().is_zero() {
                return Err(Error::BadBasePoint("tau(t0) = 0".into()));
            }
            let nu = &ch.scale(w) + &sh.scale(c);
            Some((&nu * &tau.invert()?).scale(&-c))
        }
    };
    Ok(BAFunction { spec: spec.clone(), d, base: t0.clone(), valid_to })
}

/// `cosh(ct)` and `sinh(ct)` at `t0 = 0`.
fn cosh_sinh(c: &ExactScalar, valid_to: usize) -> Result<(TaylorSeries, TaylorSeries)> {
    let s = TaylorSeries::shifted_var(ExactScalar::zero(), valid_to).scale(c);
    let e = s.exp()?;
    let f = (-&s).exp()?;
    let half = ExactScalar::ratio(1, 2);
    Ok(((&e + &f).scale(&half), (&e - &f).scale(&half)))
}

impl BAFunction {
    pub fn base(&self) -> &ExactScalar {
        &self.base
    }

    /// `(k - w)·e^{-kt}ψ = k + d(t)`, or `1` for the smooth kind.
    pub fn numerator(&self, k: &ExactScalar) -> TaylorSeries {
        match &self.d {
            Some(d) => d.add_scalar(k),
            None => TaylorSeries::one(self.base.clone(), self.valid_to),
        }
    }

    /// Closed-form `d(t)` in floating point.
    pub fn d_value(&self, t: ComplexFloat) -> ComplexFloat {
        match self.spec.kind {
            CurveKind::Smooth => Complex64::new(0.0, 0.0),
            CurveKind::Cusp => {
                let w = self.spec.w().to_complex();
                -w / (1.0 + w * t)
            }
            CurveKind::Node => {
                let c = self.spec.c.as_ref().expect("validated").to_complex();
                let w = self.spec.w().to_complex();
                let (ch, sh) = ((c * t).cosh(), (c * t).sinh());
                -c * (w * ch + c * sh) / (c * ch + w * sh)
            }
        }
    }

    /// `e^{-kt}ψ(k, t)` in floating point.
    pub fn rational_part(&self, k: ComplexFloat, t: ComplexFloat) -> ComplexFloat {
        match self.spec.kind {
            CurveKind::Smooth => Complex64::new(1.0, 0.0),
            _ => (k + self.d_value(t)) / (k - self.spec.w().to_complex()),
        }
    }

    /// `ψ(k, t)` in floating point.
    pub fn eval(&self, k: ComplexFloat, t: ComplexFloat) -> ComplexFloat {
        (k * t).exp() * self.rational_part(k, t)
    }

    /// Node gluing `ψ(c, t) = ψ(-c, t)` as a series identity.
    pub fn glue_holds(&self) -> Result<bool> {
        if self.spec.kind != CurveKind::Node {
            return Ok(true);
        }
        let c = self.spec.c.as_ref().expect("validated");
        let w = self.spec.w();
        let s = TaylorSeries::shifted_var(self.base.clone(), self.valid_to).scale(c);
        let plus = (&s.exp()? * &self.numerator(c)).scale(&(c - w).inv()?);
        let minus = (&(-&s).exp()? * &self.numerator(&-c)).scale(&(&-c - w).inv()?);
        Ok((&plus - &minus).is_zero())
    }

    /// `e^{-kt}ψ → 1` as `k → ∞`, checked on the rational part at large `k`.
    pub fn normalized_at_infinity(&self) -> bool {
        let t = ComplexFloat::new(0.25, 0.0);
        [1e6, 1e8].iter().all(|&k| {
            let k = ComplexFloat::new(k, 0.0);
            (self.rational_part(k, t) - 1.0).norm() < 1e-4
        })
    }

    /// `(op - value(k))ψ = 0` at `k`, tested as a series identity through
    /// `op(e^{kt}R) = e^{kt}·(op shifted by k)R`.
    pub fn eigen_identity(&self, op: &DiffOp, k: &ExactScalar, value: &ExactScalar) -> Result<bool> {
        let shifted = op.gauge_shift(k)?;
        let n = self.numerator(k);
        let lhs = shifted.apply(&n)?;
        Ok(lhs.checked_sub(&n.scale(value))?.is_zero())
    }
}

/// `P` with `Pψ = k²ψ`.
pub fn reconstruct_p(ba: &BAFunction) -> Result<DiffOp> {
    let base = ba.base.clone();
    let n = ba.valid_to;
    let d2 = DiffOp::d_power(2, base.clone(), n);
    let potential = match ba.spec.kind {
        CurveKind::Smooth => return Ok(d2),
        // -2w²/(1+wt)² = -2d²
        CurveKind::Cusp => {
            let d = ba.d.as_ref().expect("cusp has d");
            (d * d).scale(&ExactScalar::from(-2))
        }
        // 2c²(c² - w²)/τ²
        CurveKind::Node => {
            let c = ba.spec.c.as_ref().expect("validated");
            let w = ba.spec.w();
            let (ch, sh) = cosh_sinh(c, n)?;
            let tau = &ch.scale(c) + &sh.scale(w);
            let inv = tau.invert()?;
            let k = (&(c * c) * &(&(c * c) - &(w * w))).mul_int(2);
            (&inv * &inv).scale(&k)
        }
    };
    d2.add(&DiffOp::function(potential))
}

/// `Q = D³ + q1·D + q0` with `Qψ = μψ`, solved from the identity at two
/// sample points and checked at a third.
pub fn reconstruct_q(ba: &BAFunction) -> Result<DiffOp> {
    let samples: Vec<ExactScalar> =
        [2, 3, 5, 7, 11, 13, -2, -3].iter().map(|&x| ExactScalar::from(x)).chain([ExactScalar::ratio(1, 2)]).collect();
    let d3 = DiffOp::d_power(3, ba.base.clone(), ba.valid_to);
    // A q1 + B q0 = R at each sample
    let row = |k: &ExactScalar| -> Result<(TaylorSeries, TaylorSeries, TaylorSeries)> {
        let nk = ba.numerator(k);
        let a = nk.derivative()?.checked_add(&nk.scale(k))?;
        let r = nk.scale(&ba.spec.mu(k)).checked_sub(&d3.gauge_shift(k)?.apply(&nk)?)?;
        Ok((a, nk, r))
    };
    for (i, k1) in samples.iter().enumerate() {
        for k2 in &samples[i + 1..] {
            let (a1, b1, r1) = row(k1)?;
            let (a2, b2, r2) = row(k2)?;
            let det = (&a1 * &b2).checked_sub(&(&a2 * &b1))?;
            if det.constant_term().is_zero() {
                continue;
            }
            let inv = det.invert()?;
            let q1 = &(&r1 * &b2).checked_sub(&(&r2 * &b1))? * &inv;
            let q0 = &(&a1 * &r2).checked_sub(&(&a2 * &r1))? * &inv;
            let q = d3.add(&DiffOp::new(ba.base.clone(), vec![q0.clone(), q1.clone()], q0.valid_to().min(q1.valid_to()))?)?;
            let check = samples.iter().find(|k| *k != k1 && *k != k2).expect("three samples");
            if !ba.eigen_identity(&q, check, &ba.spec.mu(check))? {
                return Err(Error::Invalid("Q fails the eigen-identity at the check point".into()));
            }
            return Ok(q);
        }
    }
    Err(Error::SingularSystem)
}

/// Outcome of the inverse → direct round trip.
#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub p: DiffOp,
    pub q: DiffOp,
    pub curve: PlaneCurve,
    pub curve_ok: bool,
    pub commutes: bool,
    pub n_eff: usize,
    /// Divisor degree on the model curve: the normalization for the smooth
    /// kind, the plane curve otherwise.
    pub divisor_degree: usize,
    pub model_genus: u64,
    pub eigen_ok: bool,
    pub glue_ok: bool,
}

impl Roundtrip {
    pub fn passed(&self) -> bool {
        self.curve_ok && self.commutes && self.divisor_degree as u64 == self.model_genus && self.eigen_ok && self.glue_ok
    }
}

pub fn roundtrip(spec: &GenusZeroSpec, t0: &ExactScalar, valid_to: usize, tol: DivisorTolerances) -> Result<Roundtrip> {
    let ba = ba_function(spec, t0, valid_to).map_err(|e| e.at("BA function"))?;
    let p = reconstruct_p(&ba).map_err(|e| e.at("reconstruct P"))?;
    let q = reconstruct_q(&ba).map_err(|e| e.at("reconstruct Q"))?;
    let mut eigen_ok = true;
    for k in [3, 5, 7].map(ExactScalar::from) {
        eigen_ok &= ba.eigen_identity(&p, &k, &GenusZeroSpec::lambda(&k))?;
        eigen_ok &= ba.eigen_identity(&q, &k, &spec.mu(&k))?;
    }
    let verdict = p.commutes_with(&q).map_err(|e| e.at("commutator"))?;
    let am = action_matrix(&p, &q).map_err(|e| e.at("action matrix"))?;
    let cr = bc_polynomial(&am).map_err(|e| e.at("characteristic polynomial"))?;
    let m = monodromy_free_matrix(&am.v);
    let div = divisor_points(&m, &cr.curve, tol).map_err(|e| e.at("divisor"))?;
    let (divisor_degree, model_genus) = match spec.kind {
        CurveKind::Smooth => (div.normalization_degree(), 0),
        _ => (div.degree, 1),
    };
    Ok(Roundtrip {
        curve_ok: cr.curve == spec.expected_curve(),
        curve: cr.curve,
        commutes: verdict.commutes,
        n_eff: cr.n_eff.min(verdict.n_eff),
        divisor_degree,
        model_genus,
        eigen_ok,
        glue_ok: ba.glue_holds()?,
        p,
        q,
    })
}
