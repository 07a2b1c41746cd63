//! Numerical semigroups of operator orders.

use num_integer::{ExtendedGcd, Integer};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};

/// True iff some pair of the given orders is coprime.
pub fn rank1_check(orders: &[u64]) -> bool {
    orders.iter().enumerate().any(|(i, &a)| orders[i + 1..].iter().any(|&b| a.gcd(&b) == 1))
}

/// Gap set of a semigroup; infinite when the generators share a factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gaps {
    Finite(Vec<u64>),
    /// Every integer not divisible by `gcd` is a gap.
    Infinite { gcd: u64 },
}

/// `⟨g_1, …, g_k⟩ ⊂ N`, with membership tabulated on `[0, bound]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    bound: u64,
    member: Vec<bool>,
    gcd: u64,
}

impl NumericalSemigroup {
    /// Table bound `4·a·b` for the two smallest positive generators.
    pub fn default_bound(gens: &[u64]) -> u64 {
        let mut g: Vec<u64> = gens.iter().copied().filter(|&x| x > 0).collect();
        g.sort_unstable();
        match g.as_slice() {
            [] => 0,
            [a] => 4 * a,
            [a, b, ..] => 4 * a * b,
        }
    }

    pub fn new(gens: &[u64]) -> Self {
        Self::with_bound(gens, Self::default_bound(gens))
    }

    pub fn with_bound(gens: &[u64], bound: u64) -> Self {
        let mut generators: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
        generators.sort_unstable();
        generators.dedup();
        let gcd = generators.iter().fold(0, |a, &b| a.gcd(&b));
        let mut member = vec![false; bound as usize + 1];
        member[0] = true;
        for x in 1..=bound as usize {
            member[x] = generators.iter().any(|&g| g as usize <= x && member[x - g as usize]);
        }
        NumericalSemigroup { generators, bound, member, gcd }
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn contains(&self, x: u64) -> Result<bool> {
        if x > self.bound {
            return Err(Error::InsufficientBound { bound: self.bound, needed: x });
        }
        Ok(self.member[x as usize])
    }

    /// Members in `[0, bound]`.
    pub fn elements(&self) -> Vec<u64> {
        (0..=self.bound).filter(|&x| self.member[x as usize]).collect()
    }

    /// Least `d0` with every `d ≥ d0` a member. The table must contain a run
    /// of members of the smallest generator's length to certify it.
    pub fn conductor(&self) -> Result<Option<u64>> {
        if self.gcd != 1 {
            return Ok(None);
        }
        let g = self.generators[0];
        let last_gap = (0..=self.bound).rev().find(|&x| !self.member[x as usize]);
        let c = last_gap.map_or(0, |x| x + 1);
        if c + g > self.bound + 1 {
            return Err(Error::InsufficientBound { bound: self.bound, needed: c + g - 1 });
        }
        Ok(Some(c))
    }

    pub fn gaps(&self) -> Result<Gaps> {
        match self.conductor()? {
            None => Ok(Gaps::Infinite { gcd: self.gcd }),
            Some(c) => Ok(Gaps::Finite((0..c).filter(|&x| !self.member[x as usize]).collect())),
        }
    }

    pub fn is_numerical(&self) -> bool {
        self.gcd == 1
    }
}

/// `#(N ∖ (N + d))` and whether it equals `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codim {
    pub count: u64,
    pub equals_d: bool,
}

/// Counts `N ∖ (N + d)` for a member `d`.
pub fn degree_via_codim(sg: &NumericalSemigroup, d: u64) -> Result<Codim> {
    if !sg.contains(d)? {
        return Err(Error::NotRepresentable(d));
    }
    // beyond c + d every member x has x - d in N
    let horizon = match sg.conductor()? {
        Some(c) => c + d,
        None => {
            // the semigroup is g·S' with S' numerical
            let g = sg.gcd;
            let reduced: Vec<u64> = sg.generators.iter().map(|x| x / g).collect();
            let inner = NumericalSemigroup::with_bound(&reduced, sg.bound / g);
            let c = inner.conductor()?.expect("reduced generators are coprime");
            g * c + d
        }
    };
    if horizon > sg.bound + 1 {
        return Err(Error::InsufficientBound { bound: sg.bound, needed: horizon });
    }
    let count = (0..horizon)
        .filter(|&x| sg.member[x as usize] && (x < d || !sg.member[(x - d) as usize]))
        .count() as u64;
    Ok(Codim { count, equals_d: count == d })
}

/// `P^a Q^b` with `a·ord P + b·ord Q = d`.
#[derive(Clone, Debug)]
pub struct OrderElement {
    pub op: DiffOp,
    pub a: u64,
    pub b: u64,
}

/// Builds an element of order `d` from Bézout coefficients `xm + yn = 1`:
/// the exponents are `(dx - ln, dy + lm)` for the first `l` making both
/// nonnegative.
pub fn element_of_order(p: &DiffOp, q: &DiffOp, d: u64) -> Result<OrderElement> {
    let m = p.order()? as i64;
    let n = q.order()? as i64;
    let ExtendedGcd { gcd, x, y } = m.extended_gcd(&n);
    if gcd != 1 {
        return Err(Error::Invalid(format!("orders {m} and {n} are not coprime")));
    }
    let d = d as i64;
    // dx - ln ≥ 0 and dy + lm ≥ 0 ⇔ -dy/m ≤ l ≤ dx/n
    let lo = Integer::div_ceil(&(-d * y), &m);
    let hi = Integer::div_floor(&(d * x), &n);
    if lo > hi {
        return Err(Error::NotRepresentable(d as u64));
    }
    let (a, b) = ((d * x - hi * n) as u64, (d * y + hi * m) as u64);
    let op = p.pow(a as u32)?.mul(&q.pow(b as u32)?)?;
    if op.order()? as i64 != d {
        return Err(Error::Invalid("leading coefficients cancel".into()));
    }
    Ok(OrderElement { op, a, b })
}
