//! Acceptance criteria 1–11. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any fails.

use std::process::ExitCode;
use std::time::Instant;

use bcurve_cli::commands::{self, G0Args};
use bcurve_cli::RunConfig;
use bcurve_core::semigroup::degree_via_codim;
use bcurve_core::spectral::{
    action_matrix, bc_polynomial, divisor_points, spectrum, verify_bc_vanishing, weighted_degree_check, PlaneCurve,
};
use bcurve_core::{
    BivarPoly, CurveKind, DiffOp, DivisorTolerances, ExactScalar, Gaps, NumericalSemigroup, TaylorSeries,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Truncation order used throughout.
const N: usize = 48;
/// Minimal effective order for the vanishing check.
const N_EFF_MIN: usize = 24;
/// `|f(λ, μ)|` bound for divisor points.
const RESIDUAL_TOL: f64 = 1e-9;
/// Largest semigroup member checked against the codimension formula.
const CODIM_MAX: u64 = 20;
const SEED: u64 = 0x005e_edbc;
const GAUGE_TRIALS: usize = 6;
const LEIBNIZ_TRIALS: usize = 100;

type Outcome = Result<String, String>;

fn z() -> ExactScalar {
    ExactScalar::zero()
}

fn s(n: i64) -> ExactScalar {
    ExactScalar::from(n)
}

fn free_pair(m: usize, n: usize, beta0: i64) -> (DiffOp, DiffOp) {
    (DiffOp::d_power(m, z(), N), DiffOp::d_power(n, z(), N).scale(&s(beta0)))
}

fn example_pair(b1: i64) -> (DiffOp, DiffOp) {
    (DiffOp::d_power(2, z(), N), DiffOp::constant_coeffs(&[z(), s(b1), z(), s(1)], z(), N))
}

/// The cusp pair with `z0 = 1/w`, lowered from its source text.
fn cusp_pair(w: i64) -> Result<(DiffOp, DiffOp), String> {
    let cfg = RunConfig { order: N, ..RunConfig::default() };
    let z0 = format!("1/{w}");
    let p = format!("D^2 - 2/(t + {z0})^2");
    let q = format!("D^3 - 3/(t + {z0})^2*D + 3/(t + {z0})^3");
    commands::load_pair(&p, &q, &cfg).map_err(|e| e.to_string())
}

fn free_cases() -> Vec<(usize, usize, i64)> {
    let mut v = Vec::new();
    for (m, n) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
        for beta0 in [1, 2] {
            v.push((m, n, beta0));
        }
    }
    v
}

const EXAMPLE_B1: [i64; 4] = [0, 1, -1, 7];

/// `μ^m - β0^m λ^n`.
fn free_curve(m: usize, n: usize, beta0: i64) -> BivarPoly {
    BivarPoly::from_int_terms((m as u32, n as u32), &[(0, m as u32, 1), (n as u32, 0, -beta0.pow(m as u32))])
}

/// `μ² - λ(λ + b1)² = μ² - λ³ - 2b1 λ² - b1² λ`.
fn example_curve(b1: i64) -> BivarPoly {
    BivarPoly::from_int_terms((2, 3), &[(0, 2, 1), (3, 0, -1), (2, 0, -2 * b1), (1, 0, -b1 * b1)])
}

/// Every pair of criteria 1–3 with its top coefficient `β0`.
fn all_pairs() -> Result<Vec<(String, DiffOp, DiffOp, i64)>, String> {
    let mut v = Vec::new();
    for (m, n, b) in free_cases() {
        let (p, q) = free_pair(m, n, b);
        v.push((format!("(D^{m}, {b}D^{n})"), p, q, b));
    }
    for b1 in EXAMPLE_B1 {
        let (p, q) = example_pair(b1);
        v.push((format!("(D^2, D^3 + {b1}D)"), p, q, 1));
    }
    for w in [1, 2] {
        let (p, q) = cusp_pair(w)?;
        v.push((format!("cusp z0^-1 = {w}"), p, q, 1));
    }
    Ok(v)
}

fn curve_of(p: &DiffOp, q: &DiffOp) -> Result<PlaneCurve, String> {
    let am = action_matrix(p, q).map_err(|e| e.to_string())?;
    Ok(bc_polynomial(&am).map_err(|e| e.to_string())?.curve)
}

fn c1_free_curves() -> Outcome {
    for (m, n, b) in free_cases() {
        let (p, q) = free_pair(m, n, b);
        let f = curve_of(&p, &q)?.f;
        if f != free_curve(m, n, b) {
            return Err(format!("(m, n, β0) = ({m}, {n}, {b}): got {f}"));
        }
    }
    Ok("8 pairs give μ^m - β0^m λ^n".into())
}

fn c2_example_curves() -> Outcome {
    for b1 in EXAMPLE_B1 {
        let (p, q) = example_pair(b1);
        let f = curve_of(&p, &q)?.f;
        if f != example_curve(b1) {
            return Err(format!("b1 = {b1}: got {f}"));
        }
    }
    Ok("b1 ∈ {0, 1, -1, 7} give μ² - λ(λ + b1)²".into())
}

fn c3_vanishing() -> Outcome {
    let mut min_eff = usize::MAX;
    for (name, p, q, _) in all_pairs()? {
        let curve = curve_of(&p, &q)?;
        let r = verify_bc_vanishing(&curve, &p, &q).map_err(|e| format!("{name}: {e}"))?;
        if !r.zero {
            return Err(format!("{name}: f(P, Q) ≠ 0 at D^{:?}", r.offending));
        }
        if r.n_eff < N_EFF_MIN {
            return Err(format!("{name}: N_eff = {} < {N_EFF_MIN}", r.n_eff));
        }
        min_eff = min_eff.min(r.n_eff);
    }
    Ok(format!("f(P, Q) = 0 exactly, smallest N_eff = {min_eff}"))
}

fn c4_t_independence() -> Outcome {
    let mut checked = 0;
    for (name, p, q, _) in all_pairs()? {
        let am = action_matrix(&p, &q).map_err(|e| format!("{name}: {e}"))?;
        let one = TaylorSeries::one(z(), am.valid_to);
        for (j, c) in am.v.char_poly(&one).iter().enumerate() {
            for (i, series) in c.coeffs().iter().enumerate() {
                if !series.truncate(am.valid_to).is_constant() {
                    return Err(format!("{name}: coefficient of λ^{i} μ^{j} depends on t"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} series coefficients are constant to validity"))
}

fn c5_weights() -> Outcome {
    for (name, p, q, b) in all_pairs()? {
        let am = action_matrix(&p, &q).map_err(|e| format!("{name}: {e}"))?;
        let bad = am.weight_violations();
        if !bad.is_empty() {
            return Err(format!("{name}: V entries {bad:?} exceed weight n + k - l"));
        }
        let curve = bc_polynomial(&am).map_err(|e| e.to_string())?.curve;
        let r = weighted_degree_check(&curve, &s(b));
        let mn = curve.m as u64 * curve.n as u64;
        if !r.ok || r.weighted_degree != Some(mn) {
            return Err(format!("{name}: weighted check {r:?}"));
        }
    }
    Ok("V weights and common degree mn hold for all pairs".into())
}

fn c6_divisor() -> Outcome {
    let mut seen = Vec::new();
    let mut problems = Vec::new();
    for b1 in [1, -1, 7] {
        let (p, q) = example_pair(b1);
        let sp = spectrum(&p, &q).map_err(|e| e.to_string())?;
        let d = divisor_points(&sp.m_matrix, &sp.curve, DivisorTolerances::default()).map_err(|e| e.to_string())?;
        let [pt] = d.points.as_slice() else {
            problems.push(format!("b1 = {b1}: {} points", d.points.len()));
            continue;
        };
        seen.push(format!("b1 = {b1}: λ = {:.3}, μ = {:.3}", pt.lambda, pt.mu));
        if pt.residual >= RESIDUAL_TOL {
            problems.push(format!("b1 = {b1}: residual {:e}", pt.residual));
        }
        if d.degree != 1 || d.genus != 1 {
            problems.push(format!("b1 = {b1}: degree {} vs genus {}", d.degree, d.genus));
        }
        if pt.lambda.norm() > 1e-6 || pt.mu.norm() > 1e-6 {
            problems.push(format!("b1 = {b1}: point is not (0, 0)"));
        }
    }
    let found = format!("one point each ({})", seen.join("; "));
    if problems.is_empty() {
        Ok(found)
    } else {
        Err(format!("{}; found {found}", problems.join("; ")))
    }
}

fn c7_inverse() -> Outcome {
    let cfg = RunConfig { order: N, ..RunConfig::default() };
    let cusp = |w: i64| G0Args { kind: Some(CurveKind::Cusp), z0_inv: Some(s(w)), ..Default::default() };
    let cases = [
        ("smooth b1 = 0", G0Args { kind: Some(CurveKind::Smooth), b1: Some(s(0)), ..Default::default() }, example_curve(0)),
        ("smooth b1 = 7", G0Args { kind: Some(CurveKind::Smooth), b1: Some(s(7)), ..Default::default() }, example_curve(7)),
        ("node c = 1, z0^-1 = 2", G0Args { kind: Some(CurveKind::Node), c: Some(s(1)), z0_inv: Some(s(2)), ..Default::default() }, example_curve(-1)),
        ("node c = 2, z0^-1 = 1", G0Args { kind: Some(CurveKind::Node), c: Some(s(2)), z0_inv: Some(s(1)), ..Default::default() }, example_curve(-4)),
        ("cusp z0^-1 = 1", cusp(1), free_curve(2, 3, 1)),
        ("cusp z0^-1 = 2", cusp(2), free_curve(2, 3, 1)),
    ];
    for (name, args, want) in cases {
        let r = commands::inverse_g0(&args, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let v = &r.json;
        let terms: Vec<(u32, u32, ExactScalar)> = v["terms"]
            .as_array()
            .ok_or("terms missing")?
            .iter()
            .map(|t| {
                let re: num_rational::BigRational = t[2].as_str().unwrap().parse().unwrap();
                let im: num_rational::BigRational = t[3].as_str().unwrap().parse().unwrap();
                (t[0].as_u64().unwrap() as u32, t[1].as_u64().unwrap() as u32, ExactScalar::new(re, im))
            })
            .collect();
        let got = BivarPoly::from_terms((2, 3), terms.into_iter().map(|(i, j, c)| ((i, j), c)));
        if got != want {
            return Err(format!("{name}: curve {got}, expected {want}"));
        }
        if v["commutator_zero"] != true {
            return Err(format!("{name}: commutator not zero"));
        }
        // (P - z^{-2})ψ = 0 and (Q - μ)ψ = 0 at k = 3, 5, 7 via gauge_shift
        if v["eigen_ok"] != true {
            return Err(format!("{name}: eigenfunction identity fails"));
        }
    }
    Ok("smooth, node and cusp reproduce their curves with [P, Q] = 0".into())
}

fn c8_semigroups() -> Outcome {
    for (gens, n_gaps, cond) in [([2u64, 3], 1usize, 2u64), ([3, 4], 3, 6)] {
        let sg = NumericalSemigroup::new(&gens);
        let Gaps::Finite(g) = sg.gaps().map_err(|e| e.to_string())? else {
            return Err(format!("{gens:?}: infinite gaps"));
        };
        if g.len() != n_gaps || sg.conductor().map_err(|e| e.to_string())? != Some(cond) {
            return Err(format!("{gens:?}: gaps {g:?}"));
        }
        for d in sg.elements().into_iter().filter(|&d| d <= CODIM_MAX) {
            let c = degree_via_codim(&sg, d).map_err(|e| format!("{gens:?}, d = {d}: {e}"))?;
            if c.count != d {
                return Err(format!("{gens:?}: codim(S + {d}) = {}", c.count));
            }
        }
    }
    Ok("⟨2,3⟩ and ⟨3,4⟩: gaps 1 and 3, conductors 2 and 6, codim = d to 20".into())
}

fn c9_reality() -> Outcome {
    for b1 in EXAMPLE_B1 {
        let (p, q) = example_pair(b1);
        let f = curve_of(&p, &q)?.f;
        let complex = f.terms().find(|(_, c)| !c.is_real()).map(|(&(i, j), c)| format!("λ^{i} μ^{j} has coefficient {c}"));
        if let Some(msg) = complex {
            return Err(format!("b1 = {b1}: {msg}"));
        }
    }
    Ok("all coefficients real".into())
}

fn c10_gauge(rng: &mut StdRng) -> Outcome {
    let conj = |o: &DiffOp, zeta: &TaylorSeries| -> Result<DiffOp, String> {
        let inv = zeta.invert().map_err(|e| e.to_string())?;
        DiffOp::function(inv).mul(o).and_then(|x| x.mul(&DiffOp::function(zeta.clone()))).map_err(|e| e.to_string())
    };
    for trial in 0..GAUGE_TRIALS {
        let b1 = EXAMPLE_B1[trial % EXAMPLE_B1.len()];
        let (p, q) = example_pair(b1);
        let mut r = || ExactScalar::ratio(rng.random_range(-6..=6), rng.random_range(1..=4));
        let (a1, a2) = (r(), r());
        let poly = TaylorSeries::polynomial_in_t(&[z(), a1.clone(), a2.clone()], z(), N);
        let zeta = poly.exp().map_err(|e| e.to_string())?;
        let before = curve_of(&p, &q)?.f.to_string();
        let after = curve_of(&conj(&p, &zeta)?, &conj(&q, &zeta)?)?.f.to_string();
        if before != after {
            return Err(format!("ζ = exp({a1}t + {a2}t²), b1 = {b1}: {before} vs {after}"));
        }
    }
    Ok(format!("{GAUGE_TRIALS} random exp-gauges leave the curve byte-identical"))
}

fn c11_leibniz(rng: &mut StdRng) -> Outcome {
    for trial in 0..LEIBNIZ_TRIALS {
        let n = rng.random_range(0..=5usize);
        let order = rng.random_range(0..=2usize);
        let mut coeffs = Vec::new();
        for _ in 0..=order {
            let deg = rng.random_range(0..=3usize);
            let c: Vec<ExactScalar> =
                (0..=deg).map(|_| ExactScalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=5))).collect();
            coeffs.push(TaylorSeries::polynomial_in_t(&c, z(), 16));
        }
        let a = DiffOp::new(z(), coeffs, 16).map_err(|e| e.to_string())?;
        let closed = DiffOp::d_power(n, z(), 16).mul(&a).map_err(|e| e.to_string())?;
        let d = DiffOp::d_power(1, z(), 16);
        let mut repeated = a.clone();
        for _ in 0..n {
            repeated = d.mul(&repeated).map_err(|e| e.to_string())?;
        }
        let k = closed.valid_to().min(repeated.valid_to());
        if closed.truncate(k) != repeated.truncate(k) {
            return Err(format!("trial {trial}: D^{n}·({a}) differs"));
        }
    }
    Ok(format!("{LEIBNIZ_TRIALS} random instances agree exactly"))
}

type Criterion<'a> = (&'a str, Box<dyn FnOnce(&mut StdRng) -> Outcome>);

fn main() -> ExitCode {
    let mut rng = StdRng::seed_from_u64(SEED);
    let criteria: Vec<Criterion> = vec![
        ("free-case curve", Box::new(|_| c1_free_curves())),
        ("example curve", Box::new(|_| c2_example_curves())),
        ("BC vanishing", Box::new(|_| c3_vanishing())),
        ("t-independence", Box::new(|_| c4_t_independence())),
        ("weighted structure", Box::new(|_| c5_weights())),
        ("divisor degree", Box::new(|_| c6_divisor())),
        ("genus-zero round trip", Box::new(|_| c7_inverse())),
        ("semigroup identities", Box::new(|_| c8_semigroups())),
        ("reality", Box::new(|_| c9_reality())),
        ("gauge invariance", Box::new(c10_gauge)),
        ("oracle equivalence", Box::new(c11_leibniz)),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = f(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.1} s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1} s): {msg}", k + 1);
            }
        }
    }
    println!("{} of {total} criteria passed (seed {SEED:#x})", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
