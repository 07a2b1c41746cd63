//! One function per subcommand. Each returns a [`Report`] or a classified
//! [`CliError`]; printing and exit codes are left to the binary.

use std::fmt::Write as _;

use bcurve_core::semigroup::{degree_via_codim, rank1_check};
use bcurve_core::spectral::{divisor_points, spectrum, verify_bc_vanishing, weighted_degree_check, PlaneCurve};
use bcurve_core::{inverse, CurveKind, DiffOp, ExactScalar, Gaps, GenusZeroSpec, NumericalSemigroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::expr::{lower, parse_operator};
use crate::json::{self, SCHEMA};

/// Output of a command. `failure` is set when a check ran to completion
/// but did not pass; the record is still emitted.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub failure: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json::to_pretty(&self.json),
            Format::Text => self.text.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            5
        } else {
            0
        }
    }
}

fn record(command: &str, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    body
}

/// Parses and lowers one operator; `label` prefixes diagnostics.
pub fn load_operator(label: &str, src: &str, cfg: &RunConfig) -> Result<DiffOp, CliError> {
    let e = parse_operator(src).map_err(|d| CliError::Parse(format!("{label}: {}", d.render(src))))?;
    lower(src, &e, &cfg.t0, cfg.order).map_err(|d| CliError::Parse(format!("{label}: {}", d.render(src))))
}

/// Loads a pair and applies the gates in order: orders, coprimality,
/// truncation order, commutativity.
pub fn load_pair(p_src: &str, q_src: &str, cfg: &RunConfig) -> Result<(DiffOp, DiffOp), CliError> {
    let p = load_operator("P", p_src, cfg)?;
    let q = load_operator("Q", q_src, cfg)?;
    let order = |op: &DiffOp, label: &str| match op.order() {
        Ok(0) | Err(_) => Err(CliError::Config(format!("{label} must have positive order"))),
        Ok(k) => Ok(k),
    };
    let (m, n) = (order(&p, "P")?, order(&q, "Q")?);
    if m.gcd(&n) != 1 {
        return Err(CliError::NonCoprime(format!("orders {m} and {n} are not coprime")));
    }
    cfg.check_order(m, n)?;
    let v = p.commutes_with(&q)?;
    if !v.commutes {
        return Err(CliError::NonCommuting(format!(
            "[P, Q] has a nonzero coefficient at D^{} (checked to order {})",
            v.offending.unwrap_or(0),
            v.n_eff
        )));
    }
    Ok((p, q))
}

/// `μ^m - (b^m / a^n) λ^n` as top part, with `a`, `b` the leading
/// coefficients at the base point.
fn weighted_ok(curve: &PlaneCurve, p: &DiffOp, q: &DiffOp) -> Result<bool, CliError> {
    let a = p.leading()?.constant_term().clone();
    let b = q.leading()?.constant_term().clone();
    let c = b.pow(curve.m).checked_div(&a.pow(curve.n))?;
    let r = weighted_degree_check(curve, &ExactScalar::one());
    let only_top = r.offending.iter().all(|&ij| ij == (curve.n, 0));
    Ok(r.monic_in_mu && r.weighted_degree == Some(curve.m as u64 * curve.n as u64) && only_top && r.c == -c)
}

fn curve_fields(curve: &PlaneCurve) -> Value {
    json!({ "m": curve.m, "n": curve.n, "terms": json::terms(curve), "curve": curve.f.to_string() })
}

fn merge(mut a: Value, b: Value) -> Value {
    let obj = a.as_object_mut().expect("object");
    for (k, v) in b.as_object().expect("object") {
        obj.insert(k.clone(), v.clone());
    }
    a
}

pub fn curve(p_src: &str, q_src: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let (p, q) = load_pair(p_src, q_src, cfg)?;
    let s = spectrum(&p, &q)?;
    let wok = weighted_ok(&s.curve, &p, &q)?;
    let body = merge(
        curve_fields(&s.curve),
        json!({ "weighted_degree_ok": wok, "t_independent": true, "N_eff": s.n_eff }),
    );
    let text = format!(
        "curve: {}\norders: m = {}, n = {}\nweighted degree ok: {wok}\nt-independent: true\nN_eff: {}\n",
        s.curve.f, s.curve.m, s.curve.n, s.n_eff
    );
    let failure = (!wok).then(|| "curve fails the weighted degree check".to_string());
    Ok(Report { json: record("curve", body), text, failure })
}

pub fn verify(p_src: &str, q_src: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let (p, q) = load_pair(p_src, q_src, cfg)?;
    let s = spectrum(&p, &q)?;
    let r = verify_bc_vanishing(&s.curve, &p, &q)?;
    let body = merge(
        curve_fields(&s.curve),
        json!({ "zero": r.zero, "N_eff": r.n_eff, "offending": r.offending }),
    );
    let text = format!("curve: {}\nf(P, Q) = 0: {}\nN_eff: {}\n", s.curve.f, r.zero, r.n_eff);
    let failure = (!r.zero).then(|| format!("f(P, Q) has a nonzero coefficient at D^{}", r.offending.unwrap_or(0)));
    Ok(Report { json: record("verify", body), text, failure })
}

pub fn divisor(p_src: &str, q_src: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let (p, q) = load_pair(p_src, q_src, cfg)?;
    let s = spectrum(&p, &q)?;
    let d = divisor_points(&s.m_matrix, &s.curve, cfg.tol)?;
    let body = merge(
        curve_fields(&s.curve),
        json!({
            "genus": d.genus,
            "degree": d.degree,
            "delta_total": d.delta_total,
            "matches_genus": d.matches_genus(),
            "points": d.points.iter().map(json::point).collect::<Vec<_>>(),
            "singular": d.singular.iter().map(json::point).collect::<Vec<_>>(),
            "N_eff": s.n_eff,
        }),
    );
    let mut text = format!("curve: {}\narithmetic genus: {}\ndivisor degree: {}\n", s.curve.f, d.genus, d.degree);
    for pt in &d.points {
        let _ = writeln!(
            text,
            "  point lambda = {:.6}, mu = {:.6}: multiplicity {}, delta {}, residual {:.1e}",
            pt.lambda, pt.mu, pt.multiplicity, pt.delta, pt.residual
        );
    }
    let failure = (!d.matches_genus()).then(|| format!("divisor degree {} differs from genus {}", d.degree, d.genus));
    Ok(Report { json: record("divisor", body), text, failure })
}

/// Parameters of `inverse-g0` as given on the command line.
#[derive(Clone, Debug, Default)]
pub struct G0Args {
    pub kind: Option<CurveKind>,
    pub b1: Option<ExactScalar>,
    pub z0_inv: Option<ExactScalar>,
    pub c: Option<ExactScalar>,
}

fn g0_spec(a: &G0Args) -> Result<GenusZeroSpec, CliError> {
    let need = |v: &Option<ExactScalar>, name: &str| {
        v.clone().ok_or_else(|| CliError::Config(format!("--{name} is required for this kind")))
    };
    let spec = match a.kind.unwrap_or(CurveKind::Smooth) {
        CurveKind::Smooth => {
            if a.z0_inv.is_some() || a.c.is_some() {
                return Err(CliError::Config("smooth kind takes only --b1".into()));
            }
            GenusZeroSpec::smooth(a.b1.clone().unwrap_or_default())
        }
        CurveKind::Cusp => {
            if a.b1.as_ref().is_some_and(|b| !b.is_zero()) || a.c.is_some() {
                return Err(CliError::Config("cusp kind has b1 = 0 and no c".into()));
            }
            GenusZeroSpec::cusp(need(&a.z0_inv, "z0-inv")?)?
        }
        CurveKind::Node => {
            let s = GenusZeroSpec::node(need(&a.c, "c")?, need(&a.z0_inv, "z0-inv")?)?;
            if a.b1.as_ref().is_some_and(|b| *b != s.b1) {
                return Err(CliError::Config(format!("node needs b1 = -c^2 = {}", s.b1)));
            }
            s
        }
    };
    Ok(spec)
}

fn kind_name(k: CurveKind) -> &'static str {
    match k {
        CurveKind::Smooth => "smooth",
        CurveKind::Node => "node",
        CurveKind::Cusp => "cusp",
    }
}

pub fn inverse_g0(args: &G0Args, cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = g0_spec(args)?;
    let r = inverse::roundtrip(&spec, &cfg.t0, cfg.order, cfg.tol)?;
    let opt = |v: &Option<ExactScalar>| v.as_ref().map(json::scalar);
    let expected = spec.expected_curve();
    let body = merge(
        curve_fields(&r.curve),
        json!({
            "kind": kind_name(spec.kind),
            "b1": json::scalar(&spec.b1),
            "z0_inv": opt(&spec.z0_inv),
            "c": opt(&spec.c),
            "P": json::operator(&r.p, cfg.show_terms),
            "Q": json::operator(&r.q, cfg.show_terms),
            "expected_curve": expected.f.to_string(),
            "curve_ok": r.curve_ok,
            "commutator_zero": r.commutes,
            "eigen_ok": r.eigen_ok,
            "glue_ok": r.glue_ok,
            "divisor_degree": r.divisor_degree,
            "model_genus": r.model_genus,
            "N_eff": r.n_eff,
            "passed": r.passed(),
        }),
    );
    let text = format!(
        "kind: {}\nP = {}\nQ = {}\ncurve: {} (expected {})\n[P, Q] = 0: {}\neigenfunction identities: {}\ndivisor degree {} on a model of genus {}\nround trip: {}\n",
        kind_name(spec.kind),
        r.p.truncate(r.p.valid_to().min(3)),
        r.q.truncate(r.q.valid_to().min(3)),
        r.curve.f,
        expected.f,
        r.commutes,
        r.eigen_ok,
        r.divisor_degree,
        r.model_genus,
        if r.passed() { "passed" } else { "FAILED" },
    );
    let failure = (!r.passed()).then(|| "round trip failed".to_string());
    Ok(Report { json: record("inverse-g0", body), text, failure })
}

/// Members `d ≤ CODIM_MAX` are checked against `#(S ∖ (S + d)) = d`.
pub const CODIM_MAX: u64 = 20;

pub fn semigroup(orders: &[u64], bound: Option<u64>) -> Result<Report, CliError> {
    if orders.iter().all(|&o| o == 0) {
        return Err(CliError::Config("at least one positive order is required".into()));
    }
    let sg = match bound {
        Some(b) => NumericalSemigroup::with_bound(orders, b),
        None => NumericalSemigroup::new(orders),
    };
    let (gaps, conductor) = match sg.gaps()? {
        Gaps::Finite(g) => (json!(g), sg.conductor()?),
        Gaps::Infinite { gcd } => (json!({ "infinite": true, "gcd": gcd }), None),
    };
    let mut codim = Vec::new();
    let mut all_equal = true;
    for d in sg.elements().into_iter().filter(|&d| d <= CODIM_MAX) {
        match degree_via_codim(&sg, d) {
            Ok(c) => {
                all_equal &= c.equals_d;
                codim.push(json!([d, c.count]));
            }
            // the table cannot certify larger members
            Err(bcurve_core::Error::InsufficientBound { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    let body = json!({
        "generators": sg.generators(),
        "rank1": rank1_check(orders),
        "gcd": sg.gcd(),
        "numerical": sg.is_numerical(),
        "bound": sg.bound(),
        "gaps": gaps,
        "conductor": conductor,
        "codim": codim,
        "codim_equals_d": sg.is_numerical().then_some(all_equal),
    });
    let mut text = format!("generators: {:?}\nrank 1: {}\n", sg.generators(), rank1_check(orders));
    match conductor {
        Some(c) => {
            let Gaps::Finite(g) = sg.gaps()? else { unreachable!("conductor implies finite gaps") };
            let _ = writeln!(text, "gaps: {g:?} ({} gaps)\nconductor: {c}", g.len());
        }
        None => {
            let _ = writeln!(text, "gaps: infinite (all integers prime to {})", sg.gcd());
        }
    }
    // only a numerical semigroup has #(S ∖ (S + d)) = d
    let failure = if sg.is_numerical() {
        let _ = writeln!(text, "codim(S + d) = d for members d <= {CODIM_MAX}: {all_equal}");
        (!all_equal).then(|| "codimension differs from d".to_string())
    } else {
        None
    };
    Ok(Report { json: record("semigroup", body), text, failure })
}

// exact m-th root of a nonnegative rational, if there is one
fn rational_root(r: &BigRational, m: u32) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let root = |x: &BigInt| {
        let y = x.nth_root(m);
        (y.pow(m) == *x).then_some(y)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// Standard form of a single operator.
pub fn normalize(p_src: &str, root: Option<ExactScalar>, cfg: &RunConfig) -> Result<Report, CliError> {
    let p = load_operator("P", p_src, cfg)?;
    let m = p.order()?;
    if m == 0 {
        return Err(CliError::Config("P must have positive order".into()));
    }
    let lead = p.leading()?.constant_term().clone();
    let root = match root {
        Some(r) => r,
        None if lead.is_one() => ExactScalar::one(),
        None => lead
            .is_real()
            .then(|| rational_root(&lead.re, m as u32))
            .flatten()
            .map(ExactScalar::real)
            .ok_or_else(|| {
                CliError::Config(format!("no exact {m}-th root of the leading coefficient {lead}; pass --root"))
            })?,
    };
    let (out, g) = p.standard_form(&root)?;
    let n = out.valid_to();
    let lead_one = out.coeff(m).add_scalar(&-ExactScalar::one()).truncate(n).is_zero();
    let sub_zero = out.coeff(m - 1).truncate(n).is_zero();
    let body = json!({
        "order": m,
        "root": json::scalar(&root),
        "operator": json::operator(&out, cfg.show_terms),
        "reparam": json::series(&g.reparam, cfg.show_terms),
        "gauge": json::series(&g.gauge, cfg.show_terms),
        "leading_one": lead_one,
        "subleading_zero": sub_zero,
    });
    let text = format!(
        "standard form: {}\nreparametrization: {}\ngauge: {}\n",
        out.truncate(n.min(cfg.show_terms.saturating_sub(1))),
        g.reparam.truncate(g.reparam.valid_to().min(cfg.show_terms.saturating_sub(1))),
        g.gauge.truncate(g.gauge.valid_to().min(cfg.show_terms.saturating_sub(1))),
    );
    let failure = (!(lead_one && sub_zero)).then(|| "normalization left a nonstandard top".to_string());
    Ok(Report { json: record("normalize", body), text, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn terms(r: &Report) -> Vec<(u64, u64, String)> {
        r.json["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| (t[0].as_u64().unwrap(), t[1].as_u64().unwrap(), t[2].as_str().unwrap().to_string()))
            .collect()
    }

    #[test]
    fn example_curve() {
        let r = curve("D^2", "D^3 + D", &cfg()).unwrap();
        // μ² - λ(λ+1)² = μ² - λ³ - 2λ² - λ
        let want = [(0, 2, "1"), (1, 0, "-1"), (2, 0, "-2"), (3, 0, "-1")].map(|(i, j, c)| (i, j, c.to_string()));
        assert_eq!(terms(&r), want);
        assert_eq!(r.json["weighted_degree_ok"], true);
        assert!(r.failure.is_none());
    }

    #[test]
    fn gates() {
        assert!(matches!(curve("D^2", "D^2", &cfg()), Err(CliError::NonCoprime(_))));
        assert!(matches!(curve("D^2", "D^3 + t", &cfg()), Err(CliError::NonCommuting(_))));
        assert!(matches!(curve("D^2 +", "D^3", &cfg()), Err(CliError::Parse(_))));
        assert!(matches!(curve("D^3", "D^5", &cfg()), Err(CliError::Config(_))));
        let big = RunConfig { order: 60, ..cfg() };
        assert!(curve("D^3", "D^5", &big).is_ok());
    }

    #[test]
    fn cusp_pipeline() {
        let r = curve("D^2 - 2/(t+1)^2", "D^3 - 3/(t+1)^2*D + 3/(t+1)^3", &cfg()).unwrap();
        let want = [(0, 2, "1"), (3, 0, "-1")].map(|(i, j, c)| (i, j, c.to_string()));
        assert_eq!(terms(&r), want);
        let v = verify("D^2 - 2/(t+1)^2", "D^3 - 3/(t+1)^2*D + 3/(t+1)^3", &cfg()).unwrap();
        assert_eq!(v.json["zero"], true);
        assert!(v.json["N_eff"].as_u64().unwrap() >= 24);
    }

    #[test]
    fn lowering_matches_inverse() {
        let a = G0Args { kind: Some(CurveKind::Cusp), z0_inv: Some(1.into()), ..Default::default() };
        let c = RunConfig { order: 24, ..cfg() };
        let r = inverse_g0(&a, &c).unwrap();
        assert_eq!(r.json["passed"], true);
        let spec = GenusZeroSpec::cusp(1.into()).unwrap();
        let rt = inverse::roundtrip(&spec, &ExactScalar::zero(), 24, c.tol).unwrap();
        let p = load_operator("P", "D^2 - 2/(t+1)^2", &c).unwrap();
        let q = load_operator("Q", "D^3 - 3/(t+1)^2*D + 3/(t+1)^3", &c).unwrap();
        let n = rt.p.valid_to().min(p.valid_to());
        assert_eq!(p.truncate(n), rt.p.truncate(n));
        let n = rt.q.valid_to().min(q.valid_to());
        assert_eq!(q.truncate(n), rt.q.truncate(n));
    }

    #[test]
    fn inverse_argument_checks() {
        let node = G0Args { kind: Some(CurveKind::Node), c: Some(1.into()), ..Default::default() };
        assert!(matches!(inverse_g0(&node, &cfg()), Err(CliError::Config(_))));
        let node = G0Args { z0_inv: Some(2.into()), b1: Some(3.into()), ..node };
        assert!(matches!(inverse_g0(&node, &cfg()), Err(CliError::Config(_))));
        let off = RunConfig { t0: ExactScalar::ratio(1, 2), order: 24, ..cfg() };
        let node = G0Args { b1: None, ..node };
        assert!(matches!(inverse_g0(&node, &off), Err(CliError::Config(_))));
    }

    #[test]
    fn semigroups() {
        let r = semigroup(&[2, 3], None).unwrap();
        assert_eq!(r.json["gaps"], json!([1]));
        assert_eq!(r.json["conductor"], 2);
        assert_eq!(r.json["codim_equals_d"], true);
        let r = semigroup(&[3, 4], None).unwrap();
        assert_eq!(r.json["gaps"], json!([1, 2, 5]));
        assert_eq!(r.json["conductor"], 6);
        let r = semigroup(&[2, 4], None).unwrap();
        assert_eq!(r.json["gaps"]["infinite"], true);
        assert_eq!(r.json["rank1"], false);
    }

    #[test]
    fn normalize_rescaling() {
        let r = normalize("4D^2", None, &RunConfig { order: 12, ..cfg() }).unwrap();
        assert_eq!(r.json["root"], json!(["2", "0"]));
        assert_eq!(r.json["reparam"][1], json!(["1/2", "0"]));
        assert!(r.failure.is_none());
        assert!(normalize("2D^2", None, &cfg()).is_err());
        assert!(normalize("2D^2", Some(ExactScalar::from(2)), &cfg()).is_err());
    }

    #[test]
    fn byte_identical() {
        let a = divisor("D^2", "D^3 + 2D", &cfg()).unwrap().render(Format::Json);
        let b = divisor("D^2", "D^3 + 2D", &cfg()).unwrap().render(Format::Json);
        assert_eq!(a, b);
    }

    #[test]
    fn roots() {
        let r = |a, b| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(rational_root(&r(9, 4), 2), Some(r(3, 2)));
        assert_eq!(rational_root(&r(2, 1), 2), None);
        assert_eq!(rational_root(&r(-8, 1), 3), None);
        assert_eq!(rational_root(&BigRational::one(), 5), Some(BigRational::one()));
    }
}
