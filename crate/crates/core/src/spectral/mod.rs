//! The direct problem: from a commuting pair `(P, Q)` to the action matrix
//! `V(t, λ)`, its value `M(λ)` at the base point, and the Burchnall–Chaundy
//! curve `det(μ - V(t, λ)) = 0`.
//!
//! Matrices act on the column vector `ψ̂ = (ψ, ψ', …, ψ^{(m-1)})` of a
//! solution of `Pψ = λψ`: `ψ̂' = U ψ̂` and `(Qψ)^ = V ψ̂`. Row `k` of `V`
//! expresses `(Qψ)^{(k)}` in the basis `ψ̂`.

mod discriminant;
mod divisor;
mod eigen;
mod reality;

pub use discriminant::{discriminant_mu, resultant_mu, Discriminant};
pub use divisor::{divisor_points, BranchInfo, DivisorPoint, DivisorReport, DivisorTolerances};
pub use eigen::{adjugate, normalized_eigenvector, normalized_eigenvector_numeric, EigenPoint};
pub use reality::{reality_check, RealityReport};

use crate::bivar::BivarPoly;
use crate::diffop::{poly_eval, DiffOp};
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{ComplexFloat, ExactScalar};
use crate::series::TaylorSeries;
use crate::upoly::UPoly;

/// Polynomial in `λ` whose coefficients are either exact scalars (values at
/// the base point) or series in `t - t0`.
pub type LambdaPoly<C> = UPoly<C>;

/// Square matrix of [`LambdaPoly`] entries.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C: Ring> {
    entries: Vec<Vec<LambdaPoly<C>>>,
}

impl<C: Ring> PolyMatrix<C> {
    pub fn from_entries(entries: Vec<Vec<LambdaPoly<C>>>) -> Result<Self> {
        let m = entries.len();
        if entries.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid("matrix is not square".into()));
        }
        Ok(PolyMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, k: usize, l: usize) -> &LambdaPoly<C> {
        &self.entries[k][l]
    }

    pub fn rows(&self) -> &[Vec<LambdaPoly<C>>] {
        &self.entries
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.size();
        let entries = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).fold(UPoly::zero(), |acc, k| acc.add(&self.entries[i][k].mul(&o.entries[k][j]))))
                    .collect()
            })
            .collect();
        PolyMatrix { entries }
    }

    /// Characteristic polynomial `det(μ - A)` as coefficients of `μ^k`
    /// (ascending, monic), by Berkowitz's division-free recursion.
    pub fn char_poly(&self, one: &C) -> Vec<LambdaPoly<C>> {
        let n = self.size();
        let one_p = UPoly::constant(one.clone());
        let mut p: Vec<LambdaPoly<C>> = vec![one_p.clone()];
        for k in 1..=n {
            let d = k - 1;
            let a = &self.entries[d][d];
            let col: Vec<LambdaPoly<C>> = (0..d).map(|i| self.entries[i][d].clone()).collect();
            let row: Vec<LambdaPoly<C>> = (0..d).map(|j| self.entries[d][j].clone()).collect();
            // s_l = row · B^l · col
            let mut s = Vec::with_capacity(d);
            let mut v = col;
            for _ in 0..d {
                s.push(dot(&row, &v));
                v = (0..d).map(|i| dot(&self.entries[i][..d], &v)).collect();
            }
            let mut next = vec![UPoly::zero(); k + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&a.mul(c));
            }
            for i in 0..d {
                let mut acc = UPoly::zero();
                for j in i + 1..=d {
                    acc = acc.add(&p[j].mul(&s[j - i - 1]));
                }
                next[i] = next[i].sub(&acc);
            }
            p = next;
        }
        p
    }
}

fn dot<C: Ring>(a: &[LambdaPoly<C>], b: &[LambdaPoly<C>]) -> LambdaPoly<C> {
    a.iter().zip(b).fold(UPoly::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl PolyMatrix<ExactScalar> {
    pub fn eval(&self, lambda: &ExactScalar) -> Vec<Vec<ExactScalar>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.eval(lambda)).collect()).collect()
    }

    pub fn eval_complex(&self, lambda: ComplexFloat) -> Vec<Vec<ComplexFloat>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.eval_complex(lambda)).collect()).collect()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().flatten().all(UPoly::is_real)
    }
}

/// `U(t, λ)` together with the validity of its entries.
#[derive(Clone, Debug)]
pub struct Companion {
    pub u: PolyMatrix<TaylorSeries>,
    pub valid_to: usize,
}

/// `V(t, λ)` of a commuting pair.
#[derive(Clone, Debug)]
pub struct ActionMatrix {
    pub v: PolyMatrix<TaylorSeries>,
    /// Orders of `P` and `Q`.
    pub m: usize,
    pub n: usize,
    /// Validity order shared by all entries.
    pub valid_to: usize,
    base: ExactScalar,
}

impl ActionMatrix {
    pub fn base(&self) -> &ExactScalar {
        &self.base
    }

    /// Entries `(k, l, deg_λ)` that violate `m·deg_λ(V_kl) ≤ n + k - l`.
    pub fn weight_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, row) in self.v.rows().iter().enumerate() {
            for (l, e) in row.iter().enumerate() {
                if let Some(d) = e.degree() {
                    let bound = self.n as i64 + k as i64 - l as i64;
                    if (self.m * d) as i64 > bound || bound < 0 {
                        out.push((k, l, d));
                    }
                }
            }
        }
        out
    }
}

fn one_series(base: &ExactScalar, valid_to: usize) -> TaylorSeries {
    TaylorSeries::one(base.clone(), valid_to)
}

fn poly_derivative(p: &LambdaPoly<TaylorSeries>) -> Result<LambdaPoly<TaylorSeries>> {
    Ok(UPoly::from_coeffs(p.coeffs().iter().map(TaylorSeries::derivative).collect::<Result<Vec<_>>>()?))
}

fn poly_truncate(p: &LambdaPoly<TaylorSeries>, n: usize) -> LambdaPoly<TaylorSeries> {
    UPoly::from_coeffs(p.coeffs().iter().map(|c| c.truncate(n)).collect())
}

/// Companion matrix of `Pψ = λψ`: shift rows, last row
/// `((λ - a_0)/a_m, -a_1/a_m, …, -a_{m-1}/a_m)`.
pub fn companion_matrix(p: &DiffOp) -> Result<Companion> {
    let m = p.order()?;
    if m == 0 {
        return Err(Error::Invalid("companion matrix needs positive order".into()));
    }
    let lead_inv = p.leading()?.invert()?;
    let base = p.base().clone();
    let v = p.valid_to();
    let mut entries = vec![vec![UPoly::zero(); m]; m];
    for (k, row) in entries.iter_mut().enumerate().take(m - 1) {
        row[k + 1] = UPoly::constant(one_series(&base, v));
    }
    let last = &mut entries[m - 1];
    last[0] = UPoly::from_coeffs(vec![-&(&p.coeff(0) * &lead_inv), lead_inv.clone()]);
    for (l, e) in last.iter_mut().enumerate().skip(1) {
        *e = UPoly::constant(-&(&p.coeff(l) * &lead_inv));
    }
    Ok(Companion { u: PolyMatrix { entries }, valid_to: v })
}

/// The matrix `V(t, λ)` with `V ψ̂ = (Qψ)^` on `ker(P - λ)`.
///
/// Rows `r_k` with `ψ^{(k)} = r_k · ψ̂` start as unit rows and follow
/// `r_{k+1} = r_k' + r_k U`; row 0 of `V` is `Σ_l b_l r_l` and each further
/// row is the derivative of the previous one plus its product with `U`.
pub fn action_matrix(p: &DiffOp, q: &DiffOp) -> Result<ActionMatrix> {
    let verdict = p.commutes_with(q)?;
    if !verdict.commutes {
        return Err(Error::NonCommuting { index: verdict.offending.unwrap_or(0), n_eff: verdict.n_eff });
    }
    if p.base() != q.base() {
        return Err(Error::BasePointMismatch);
    }
    let comp = companion_matrix(p)?;
    let m = comp.u.size();
    let n = q.order()?;
    let base = p.base().clone();
    let mut valid = p.valid_to().min(q.valid_to());
    let one = one_series(&base, valid);
    let row_times_u = |r: &[LambdaPoly<TaylorSeries>]| -> Vec<LambdaPoly<TaylorSeries>> {
        (0..m).map(|l| (0..m).fold(UPoly::zero(), |acc, k| acc.add(&r[k].mul(comp.u.entry(k, l))))).collect()
    };
    let step = |r: &[LambdaPoly<TaylorSeries>]| -> Result<Vec<LambdaPoly<TaylorSeries>>> {
        let d: Vec<_> = r.iter().map(poly_derivative).collect::<Result<_>>()?;
        let ru = row_times_u(r);
        Ok(d.iter().zip(&ru).map(|(a, b)| a.add(b)).collect())
    };
    let mut rows: Vec<Vec<LambdaPoly<TaylorSeries>>> = (0..m)
        .map(|k| (0..m).map(|l| if k == l { UPoly::constant(one.clone()) } else { UPoly::zero() }).collect())
        .collect();
    let mut row_valid: Vec<usize> = vec![valid; m];
    while rows.len() <= n {
        let prev = rows.last().expect("m ≥ 1");
        let pv = *row_valid.last().expect("m ≥ 1");
        if pv == 0 {
            return Err(Error::ValidityExhausted { needed: n + m, available: p.valid_to().min(q.valid_to()) });
        }
        rows.push(step(prev).map_err(|e| e.at("derivative rows"))?);
        row_valid.push(pv - 1);
    }
    let mut v_rows: Vec<Vec<LambdaPoly<TaylorSeries>>> = Vec::with_capacity(m);
    let mut row0 = vec![UPoly::zero(); m];
    for (l, b) in q.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        valid = valid.min(row_valid[l]);
        let scaled: Vec<_> = rows[l].iter().map(|e| e.scale(b)).collect();
        row0 = row0.iter().zip(&scaled).map(|(a, c)| a.add(c)).collect();
    }
    v_rows.push(row0);
    for _ in 1..m {
        if valid == 0 {
            return Err(Error::ValidityExhausted { needed: n + m, available: p.valid_to().min(q.valid_to()) });
        }
        let next = step(v_rows.last().expect("nonempty"))?;
        valid -= 1;
        v_rows.push(next);
    }
    let entries = v_rows.iter().map(|r| r.iter().map(|e| poly_truncate(e, valid)).collect()).collect();
    Ok(ActionMatrix { v: PolyMatrix { entries }, m, n, valid_to: valid, base })
}

/// `M(λ) = V(t0, λ)`: constant terms of every series coefficient.
pub fn monodromy_free_matrix(v: &PolyMatrix<TaylorSeries>) -> PolyMatrix<ExactScalar> {
    let entries = v
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.map(|c| c.constant_term().clone())).collect())
        .collect();
    PolyMatrix { entries }
}

/// The spectral curve `f(λ, μ) = 0` with weights `(m, n)` for `(λ, μ)`.
///
/// The local parameter at the smooth point at infinity is normalized with
/// `κ = 1`: `λ = z^{-m}`, `μ = β0 z^{-n}(1 + O(z))`, which corresponds to
/// measuring time in units of `2πi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    pub f: BivarPoly,
    pub m: u32,
    pub n: u32,
    pub kappa: i64,
}

impl PlaneCurve {
    pub fn new(f: BivarPoly, m: u32, n: u32) -> Self {
        PlaneCurve { f: f.with_weights((m, n)), m, n, kappa: 1 }
    }

    /// `det(μ - M(λ))` for an exact matrix.
    pub fn from_matrix(mat: &PolyMatrix<ExactScalar>, n: u32) -> Self {
        let cp = mat.char_poly(&ExactScalar::one());
        let m = mat.size() as u32;
        PlaneCurve::new(BivarPoly::from_mu_poly((m, n), &cp), m, n)
    }

    /// Arithmetic genus `(m-1)(n-1)/2` of the weighted `(m, n)` plane curve.
    pub fn arithmetic_genus(&self) -> u64 {
        (self.m as u64 - 1) * (self.n as u64 - 1) / 2
    }

    /// `μ^m - β0^m λ^n + lower-weight terms` for the given lower terms.
    pub fn free(m: u32, n: u32, beta0: &ExactScalar) -> Self {
        let mut f = BivarPoly::zero((m, n));
        f.add_term(0, m, &ExactScalar::one());
        f.add_term(n, 0, &-beta0.pow(m));
        PlaneCurve::new(f, m, n)
    }
}

/// Curve computed from the series-valued action matrix.
#[derive(Clone, Debug)]
pub struct CurveResult {
    pub curve: PlaneCurve,
    pub n_eff: usize,
}

/// Characteristic polynomial of `V(t, λ)`; every coefficient must be
/// independent of `t` to the validity of `V`.
pub fn bc_polynomial(am: &ActionMatrix) -> Result<CurveResult> {
    let one = one_series(&am.base, am.valid_to);
    let cp = am.v.char_poly(&one);
    let mut f = BivarPoly::zero((am.m as u32, am.n as u32));
    for (j, cj) in cp.iter().enumerate() {
        for (i, c) in cj.coeffs().iter().enumerate() {
            if !c.is_constant() {
                return Err(Error::TDependent { i, j });
            }
            f.add_term(i as u32, j as u32, c.constant_term());
        }
    }
    Ok(CurveResult { curve: PlaneCurve::new(f, am.m as u32, am.n as u32), n_eff: am.valid_to })
}

/// Outcome of the weighted-degree test.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightReport {
    pub ok: bool,
    pub weighted_degree: Option<u64>,
    pub monic_in_mu: bool,
    pub top_part_ok: bool,
    /// Coefficient of `λ^n`.
    pub c: ExactScalar,
    /// Terms of excessive weight or wrong top coefficient.
    pub offending: Vec<(u32, u32)>,
}

/// Checks weighted degree `mn`, monicity in `μ^m`, and top part
/// `μ^m - β0^m λ^n`.
pub fn weighted_degree_check(curve: &PlaneCurve, beta0: &ExactScalar) -> WeightReport {
    let (m, n) = (curve.m, curve.n);
    let target = m as u64 * n as u64;
    let f = &curve.f;
    let mut offending = Vec::new();
    let expected_top = |i: u32, j: u32| -> ExactScalar {
        if (i, j) == (0, m) {
            ExactScalar::one()
        } else if (i, j) == (n, 0) {
            -beta0.pow(m)
        } else {
            ExactScalar::zero()
        }
    };
    for (&(i, j), c) in f.terms() {
        let w = f.term_weight(i, j);
        if w > target || (w == target && *c != expected_top(i, j)) {
            offending.push((i, j));
        }
    }
    let mut top_part_ok = offending.is_empty();
    for (i, j) in [(0, m), (n, 0)] {
        if f.coeff(i, j) != expected_top(i, j) {
            top_part_ok = false;
            if !offending.contains(&(i, j)) {
                offending.push((i, j));
            }
        }
    }
    let monic_in_mu = f.degree_mu() == Some(m) && f.coeff(0, m).is_one();
    let weighted_degree = f.weighted_degree();
    let ok = top_part_ok && monic_in_mu && weighted_degree == Some(target);
    WeightReport { ok, weighted_degree, monic_in_mu, top_part_ok, c: f.coeff(n, 0), offending }
}

/// `f(P, Q)` must be the zero operator.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingReport {
    pub zero: bool,
    pub n_eff: usize,
    /// Lowest `D`-power with a nonzero coefficient.
    pub offending: Option<usize>,
}

pub fn verify_bc_vanishing(curve: &PlaneCurve, p: &DiffOp, q: &DiffOp) -> Result<VanishingReport> {
    let ev = poly_eval(&curve.f, p, q)?;
    let offending = ev.op.coeffs().iter().position(|c| !c.is_zero());
    Ok(VanishingReport { zero: offending.is_none(), n_eff: ev.n_eff, offending })
}

/// Behaviour of the curve near the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsReport {
    /// `|λ|` of each sample and the worst `|(μ/β0)^m λ^{-n} - 1|` there.
    pub samples: Vec<(f64, f64)>,
    pub ok: bool,
}

/// Checks `λ = z^{-m}(1 + O(z))`, `μ = β0 z^{-n}(1 + O(z))` on large-`|λ|`
/// samples: the deviation must shrink like `|λ|^{-1/m}`.
pub fn asymptotics_check(curve: &PlaneCurve, beta0: &ExactScalar) -> Result<AsymptoticsReport> {
    let b = beta0.to_complex();
    let (m, n) = (curve.m as i32, curve.n as i32);
    let mut samples = Vec::new();
    for (k, mag) in [1e3, 1e4, 1e5].into_iter().enumerate() {
        let lam = ComplexFloat::from_polar(mag, 0.3 + k as f64);
        let roots = crate::upoly::complex_roots(&curve.f.mu_poly_at(lam))?;
        let worst = roots
            .iter()
            .map(|mu| ((mu / b).powi(m) / lam.powi(n) - 1.0).norm())
            .fold(0.0, f64::max);
        samples.push((mag, worst));
    }
    let ok = samples.iter().all(|&(mag, dev)| dev <= 10.0 * curve.f.len() as f64 * mag.powf(-1.0 / m as f64))
        && samples.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9);
    Ok(AsymptoticsReport { samples, ok })
}

/// Full direct pipeline result.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub action: ActionMatrix,
    pub m_matrix: PolyMatrix<ExactScalar>,
    pub curve: PlaneCurve,
    pub n_eff: usize,
}

/// Runs `action_matrix → monodromy_free_matrix → bc_polynomial`.
pub fn spectrum(p: &DiffOp, q: &DiffOp) -> Result<Spectrum> {
    let action = action_matrix(p, q).map_err(|e| e.at("action matrix"))?;
    let res = bc_polynomial(&action).map_err(|e| e.at("characteristic polynomial"))?;
    let m_matrix = monodromy_free_matrix(&action.v);
    Ok(Spectrum { n_eff: res.n_eff, curve: res.curve, m_matrix, action })
}
