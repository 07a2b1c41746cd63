use bcurve_cli::expr::{lower, parse_operator, Expr, ExprKind, Func};
use bcurve_core::ExactScalar;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..50).prop_map(|n| Expr::new(ExprKind::Int(n.into()))),
        Just(Expr::new(ExprKind::I)),
        Just(Expr::new(ExprKind::T)),
        Just(Expr::new(ExprKind::D)),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::new(ExprKind::Neg(b(a)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Add(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Sub(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Mul(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::new(ExprKind::Div(b(x), b(y)))),
            (inner.clone(), 0u32..4).prop_map(move |(x, k)| Expr::new(ExprKind::Pow(b(x), k))),
            (inner, prop_oneof![Just(Func::Exp), Just(Func::Sin), Just(Func::Cos)])
                .prop_map(move |(x, f)| Expr::new(ExprKind::Call(f, b(x)))),
        ]
    })
}

proptest! {
    #[test]
    fn parse_print_parse_is_identity(e in tree()) {
        let printed = e.to_string();
        let back = parse_operator(&printed).map_err(|d| TestCaseError::fail(format!("{printed}: {d}")))?;
        prop_assert_eq!(&back, &e, "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn printing_preserves_the_operator(e in tree()) {
        let src = e.to_string();
        let z = ExactScalar::zero();
        let direct = lower(&src, &e, &z, 6);
        let reparsed = lower(&src, &parse_operator(&src).unwrap(), &z, 6);
        prop_assert_eq!(direct.is_ok(), reparsed.is_ok());
        if let (Ok(a), Ok(b)) = (direct, reparsed) {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn implicit_products_match_explicit_ones() {
    let z = ExactScalar::zero();
    let op = |s: &str| lower(s, &parse_operator(s).unwrap(), &z, 10).unwrap();
    assert_eq!(op("3tD^2 + 2(t+1)D"), op("3*t*D^2 + 2*(t+1)*D"));
    assert_eq!(op("D t"), op("t*D + 1"));
    assert_eq!(op("2 · t − 1"), op("2*t - 1"));
}
