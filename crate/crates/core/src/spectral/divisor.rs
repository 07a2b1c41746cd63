//! Numeric support of the spectral divisor.
//!
//! The sheaf generated by the entries of the normalized eigenvector `χ`
//! contains the structure sheaf because `χ_1 = 1`, so its degree is
//! `Σ_q dim(S_q / O_q)`. Each local length is computed on the branches of the
//! curve through `q`: functions are expanded in the branch parameter `s`
//! (sampled on a small circle and transformed by a discrete Fourier sum) and
//! `dim(S_q / O_q)` becomes a difference of numerical ranks modulo `s^K`,
//! with `K` beyond the conductor.

use nalgebra::DMatrix;

use crate::bivar::BivarPoly;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{ComplexFloat, ExactScalar};
use crate::upoly::{complex_roots, UPoly};

use super::discriminant::{discriminant_mu, resultant_mu};
use super::eigen::adjugate;
use super::{PlaneCurve, PolyMatrix};

type C = ComplexFloat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivisorTolerances {
    /// Relative residual `|f| / Σ|terms|` accepted for a curve point.
    pub curve: f64,
    /// Radius within which numeric roots are identified.
    pub cluster: f64,
}

impl Default for DivisorTolerances {
    fn default() -> Self {
        DivisorTolerances { curve: 1e-9, cluster: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchInfo {
    pub ramification: usize,
    pub pole_order: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorPoint {
    pub lambda: ComplexFloat,
    pub mu: ComplexFloat,
    /// Local length `dim(S_q / O_q)`.
    pub multiplicity: usize,
    /// `dim(Õ_q / O_q)`; zero at smooth points.
    pub delta: usize,
    pub branches: Vec<BranchInfo>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorReport {
    /// Points of positive multiplicity.
    pub points: Vec<DivisorPoint>,
    /// Singular points of the affine curve (any multiplicity).
    pub singular: Vec<DivisorPoint>,
    pub degree: usize,
    pub genus: u64,
    pub delta_total: usize,
}

impl DivisorReport {
    pub fn matches_genus(&self) -> bool {
        self.degree as u64 == self.genus
    }

    /// Degree of the divisor pulled back to the normalization: the sum of
    /// branch pole orders.
    pub fn normalization_degree(&self) -> usize {
        self.points.iter().flat_map(|p| &p.branches).map(|b| b.pole_order).sum()
    }
}

const STEPS: usize = 1024;
const RANK_TOL: f64 = 1e-7;

/// Divisor of the normalized eigenvector of `M(λ)` on the affine curve.
pub fn divisor_points(mat: &PolyMatrix<ExactScalar>, curve: &PlaneCurve, tol: DivisorTolerances) -> Result<DivisorReport> {
    let m = mat.size();
    let genus = curve.arithmetic_genus();
    let mut report = DivisorReport { points: Vec::new(), singular: Vec::new(), degree: 0, genus, delta_total: 0 };
    if m <= 1 {
        return Ok(report);
    }
    let fmu = curve.f.as_mu_poly();
    if fmu.len() != m + 1 || !fmu[m].coeffs().iter().eq([ExactScalar::one()].iter()) {
        return Err(Error::Invalid("curve must be monic of degree m in mu".into()));
    }
    let a = symbolic_shift(mat, curve.f.weights());
    let one = BivarPoly::from_int_terms(curve.f.weights(), &[(0, 0, 1)]);
    let adj = adjugate(&a, &one);

    let mut lambdas: Vec<C> = Vec::new();
    let mut usable = false;
    for entry in &adj[0] {
        let g = reduce_mod(entry.as_mu_poly(), &fmu);
        if g.iter().all(UPoly::is_zero) {
            continue;
        }
        let r = resultant_mu(&fmu, &g);
        if r.is_zero() {
            continue;
        }
        usable = true;
        if r.degree().unwrap_or(0) > 0 {
            lambdas.extend(r.distinct_roots()?);
        }
        break;
    }
    if !usable {
        return Err(Error::NormalizationImpossible);
    }
    let disc = discriminant_mu(curve)?;
    if disc.poly.is_zero() {
        return Err(Error::Invalid("curve has a repeated component".into()));
    }
    lambdas.extend(disc.roots);
    let mut cands: Vec<C> = Vec::new();
    for l in lambdas {
        if !cands.iter().any(|c| (c - l).norm() <= tol.cluster * (1.0 + l.norm())) {
            cands.push(l);
        }
    }

    let k_window = 2 * genus.max(1) as usize + 2;
    for (i, &l0) in cands.iter().enumerate() {
        let dist = cands
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| (c - l0).norm())
            .fold(f64::INFINITY, f64::min);
        let r = (0.4 * dist).min(1.0);
        for pt in analyze_fiber(mat, curve, l0, r, k_window, tol)? {
            if pt.delta > 0 {
                report.delta_total += pt.delta;
                report.singular.push(pt.clone());
            }
            if pt.multiplicity > 0 {
                report.degree += pt.multiplicity;
                report.points.push(pt);
            }
        }
    }
    Ok(report)
}

/// `μ·1 - M(λ)` with bivariate entries.
fn symbolic_shift(mat: &PolyMatrix<ExactScalar>, w: (u32, u32)) -> Vec<Vec<BivarPoly>> {
    let m = mat.size();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut p = BivarPoly::zero(w);
                    for (k, c) in mat.entry(i, j).coeffs().iter().enumerate() {
                        p.add_term(k as u32, 0, &-c);
                    }
                    if i == j {
                        p.add_term(0, 1, &ExactScalar::one());
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Remainder of `g` modulo the monic-in-`μ` polynomial `f`.
fn reduce_mod(mut g: Vec<UPoly<ExactScalar>>, f: &[UPoly<ExactScalar>]) -> Vec<UPoly<ExactScalar>> {
    let m = f.len() - 1;
    while g.len() > m {
        let top = g.pop().expect("nonempty");
        let k = g.len() - m;
        for (i, fi) in f.iter().enumerate().take(m) {
            g[k + i] = g[k + i].sub(&top.mul(fi));
        }
    }
    g
}

/// Truncated Laurent series `Σ_{k ≥ lo} c_k s^k` on one branch.
#[derive(Clone, Debug)]
struct Laurent {
    lo: i64,
    c: Vec<C>,
}

impl Laurent {
    fn get(&self, k: i64) -> C {
        if k < self.lo {
            return C::new(0.0, 0.0);
        }
        self.c.get((k - self.lo) as usize).copied().unwrap_or_default()
    }

    /// Product with coefficients for exponents below `hi` only.
    fn mul(&self, o: &Laurent, hi: i64) -> Laurent {
        let lo = self.lo + o.lo;
        let len = (hi - lo).max(0) as usize;
        let mut c = vec![C::new(0.0, 0.0); len];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                if i + j < len {
                    c[i + j] += a * b;
                }
            }
        }
        Laurent { lo, c }
    }

    /// Lowest exponent with a coefficient above `thr`.
    fn order(&self, thr: f64) -> Option<i64> {
        self.c.iter().position(|z| z.norm() > thr).map(|p| self.lo + p as i64)
    }
}

struct Branch {
    e: usize,
    mu: Laurent,
    chi: Vec<Laurent>,
}

fn numeric_chi(mat: &PolyMatrix<ExactScalar>, lambda: C, mu: C) -> Vec<C> {
    let mm = mat.eval_complex(lambda);
    let a: Vec<Vec<C>> = mm
        .into_iter()
        .enumerate()
        .map(|(i, row)| row.into_iter().enumerate().map(|(j, x)| if i == j { mu - x } else { -x }).collect())
        .collect();
    let adj = adjugate(&a, &C::new(1.0, 0.0));
    let c = (0..adj.len())
        .max_by(|&x, &y| adj[0][x].norm().total_cmp(&adj[0][y].norm()))
        .expect("m ≥ 1");
    (0..adj.len()).map(|i| adj[i][c] / adj[0][c]).collect()
}

/// Coefficients `k ∈ [lo, hi)` of a function sampled at `ω^j`, `ω = e^{2πi/L}`.
fn fourier(samples: &[C], lo: i64, hi: i64) -> Laurent {
    let len = samples.len() as f64;
    let c = (lo..hi)
        .map(|k| {
            samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * C::from_polar(1.0, -2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / len))
                .sum::<C>()
                / len
        })
        .collect();
    Laurent { lo, c }
}

fn match_roots(prev: &[C], next: Vec<C>) -> Vec<C> {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![None; n];
    let mut used = vec![false; n];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(next[j]);
            used[j] = true;
        }
    }
    out.into_iter().map(|x| x.expect("complete matching")).collect()
}

fn analyze_fiber(
    mat: &PolyMatrix<ExactScalar>,
    curve: &PlaneCurve,
    l0: C,
    r: f64,
    k_window: usize,
    tol: DivisorTolerances,
) -> Result<Vec<DivisorPoint>> {
    let m = mat.size();
    let at = |j: usize| l0 + C::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / STEPS as f64);
    let mut traj: Vec<Vec<C>> = Vec::with_capacity(STEPS + 1);
    traj.push(complex_roots(&curve.f.mu_poly_at(at(0)))?);
    for j in 1..=STEPS {
        let next = complex_roots(&curve.f.mu_poly_at(at(j)))?;
        let matched = match_roots(&traj[j - 1], next);
        traj.push(matched);
    }
    // where each root ends after one loop
    let perm: Vec<usize> = (0..m)
        .map(|i| {
            let end = traj[STEPS][i];
            (0..m).min_by(|&a, &b| (traj[0][a] - end).norm().total_cmp(&(traj[0][b] - end).norm())).expect("m ≥ 1")
        })
        .collect();
    let span = k_window as i64 + k_window as i64 + 4;
    let mut seen = vec![false; m];
    let mut branches: Vec<Branch> = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            if seen[cur] {
                return Err(Error::RootFinding("inconsistent branch tracking".into()));
            }
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        let e = cycle.len();
        let mut mus = Vec::with_capacity(e * STEPS);
        let mut chis: Vec<Vec<C>> = vec![Vec::with_capacity(e * STEPS); m];
        for &idx in &cycle {
            for (j, row) in traj.iter().enumerate().take(STEPS) {
                let mu = row[idx];
                mus.push(mu);
                for (comp, v) in numeric_chi(mat, at(j), mu).into_iter().enumerate() {
                    chis[comp].push(v);
                }
            }
        }
        let mu = fourier(&mus, 0, span);
        let chi = chis.iter().map(|s| fourier(s, -span, span)).collect();
        branches.push(Branch { e, mu, chi });
    }

    // group branches by their centre
    let mut groups: Vec<Vec<Branch>> = Vec::new();
    for b in branches {
        let c = b.mu.get(0);
        match groups.iter_mut().find(|g| (g[0].mu.get(0) - c).norm() <= tol.cluster * (1.0 + c.norm())) {
            Some(g) => g.push(b),
            None => groups.push(vec![b]),
        }
    }
    groups.into_iter().map(|g| local_lengths(curve, l0, g, k_window)).collect()
}

fn local_lengths(curve: &PlaneCurve, l0: C, branches: Vec<Branch>, k: usize) -> Result<DivisorPoint> {
    let mu0 = branches[0].mu.get(0);
    let k = k as i64;
    let scale = curve.f.eval_abs_scale(l0, mu0).max(1.0);
    let residual = curve.f.eval_complex(l0, mu0).norm() / scale;

    let mut infos = Vec::new();
    let mut poles = 0i64;
    for b in &branches {
        let mut p = 0;
        for x in &b.chi {
            let thr = 1e-9 * x.c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if let Some(o) = x.order(thr) {
                p = p.max(-o);
            }
        }
        poles = poles.max(p);
        infos.push(BranchInfo { ramification: b.e, pole_order: p.max(0) as usize });
    }
    let hi = k;
    let lo = -poles;
    let width = (hi - lo) as usize;
    let nb = branches.len();

    // (μ - μ0) on each branch, and its order
    let dmu: Vec<Laurent> = branches
        .iter()
        .map(|b| {
            let mut s = b.mu.clone();
            s.c[0] -= mu0;
            s
        })
        .collect();
    let v_mu = dmu
        .iter()
        .map(|s| {
            let thr = 1e-9 * s.c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            s.order(thr).unwrap_or(hi)
        })
        .min()
        .unwrap_or(1)
        .max(1);
    let e_min = branches.iter().map(|b| b.e as i64).min().unwrap_or(1);

    let embed = |series: &[Laurent]| -> Vec<C> {
        let mut row = vec![C::new(0.0, 0.0); nb * width];
        for (bi, s) in series.iter().enumerate() {
            for x in lo..hi {
                row[bi * width + (x - lo) as usize] = s.get(x);
            }
        }
        row
    };
    let mut o_rows = Vec::new();
    let mut s_rows = Vec::new();
    let reach = hi - lo;
    let mut a = 0i64;
    while a * e_min < reach {
        let mut c = 0i64;
        while a * e_min + c * v_mu < reach {
            let mono: Vec<Laurent> = branches
                .iter()
                .zip(&dmu)
                .map(|(b, d)| {
                    let mut p = Laurent { lo: a * b.e as i64, c: vec![C::new(1.0, 0.0)] };
                    for _ in 0..c {
                        p = p.mul(d, hi - lo);
                    }
                    p
                })
                .collect();
            if a * e_min + c * v_mu < hi {
                o_rows.push(embed(&mono));
            }
            for j in 1..branches[0].chi.len() {
                let prod: Vec<Laurent> = mono.iter().zip(&branches).map(|(p, b)| p.mul(&b.chi[j], hi)).collect();
                s_rows.push(embed(&prod));
            }
            c += 1;
        }
        a += 1;
    }
    let rank_o = rank(&o_rows, nb * width);
    let mut all = o_rows;
    all.extend(s_rows);
    let rank_s = rank(&all, nb * width);
    let delta = (nb as i64 * hi) as usize - rank_o.min((nb as i64 * hi) as usize);
    Ok(DivisorPoint {
        lambda: l0,
        mu: mu0,
        multiplicity: rank_s - rank_o,
        delta,
        branches: infos,
        residual,
    })
}

fn rank(rows: &[Vec<C>], cols: usize) -> usize {
    let rows: Vec<Vec<C>> = rows
        .iter()
        .filter_map(|r| {
            let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (n > 1e-300).then(|| r.iter().map(|z| z / n).collect())
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    let mat = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let sv = mat.svd(false, false).singular_values;
    sv.iter().filter(|&&s| s > RANK_TOL).count()
}
