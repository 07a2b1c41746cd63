//! Workloads shared by the benchmarks.

use bcurve_core::{pairs, DiffOp, ExactScalar, TaylorSeries};

/// Named commuting pairs at base point 0 with validity `n`.
pub fn pairs(n: usize) -> Vec<(&'static str, DiffOp, DiffOp)> {
    let z = ExactScalar::zero();
    let one = ExactScalar::one();
    let (p, q) = pairs::free(3, 4, &one, &z, n);
    let mut v = vec![("free_3_4", p, q)];
    let (p, q) = pairs::example(&ExactScalar::from(2), &z, n);
    v.push(("example_b1_2", p, q));
    let (p, q) = pairs::cusp(&one, &z, n).expect("cusp data is valid");
    v.push(("cusp", p, q));
    v
}

/// `exp(t + t²/2)` and `1/(1 + t)` expanded to order `n`.
pub fn series(n: usize) -> (TaylorSeries, TaylorSeries) {
    let z = ExactScalar::zero();
    let arg = TaylorSeries::polynomial_in_t(&[z.clone(), 1.into(), ExactScalar::ratio(1, 2)], z.clone(), n);
    let e = arg.exp().expect("zero constant term");
    let g = TaylorSeries::polynomial_in_t(&[1.into(), 1.into()], z, n).invert().expect("unit");
    (e, g)
}
