//! Built-in commuting pairs.

use crate::diffop::DiffOp;
use crate::error::Result;
use crate::inverse::{ba_function, reconstruct_p, reconstruct_q, GenusZeroSpec};
use crate::scalar::ExactScalar;

/// `(D^m, β0·D^n)`.
pub fn free(m: usize, n: usize, beta0: &ExactScalar, t0: &ExactScalar, valid_to: usize) -> (DiffOp, DiffOp) {
    let p = DiffOp::d_power(m, t0.clone(), valid_to);
    let q = DiffOp::d_power(n, t0.clone(), valid_to).scale(beta0);
    (p, q)
}

/// `(D², D³ + b1·D)`.
pub fn example(b1: &ExactScalar, t0: &ExactScalar, valid_to: usize) -> (DiffOp, DiffOp) {
    let z = ExactScalar::zero();
    let p = DiffOp::d_power(2, t0.clone(), valid_to);
    let q = DiffOp::constant_coeffs(&[z.clone(), b1.clone(), z, ExactScalar::one()], t0.clone(), valid_to);
    (p, q)
}

/// `(D² - 2/(t+z0)², D³ - 3/(t+z0)²·D + 3/(t+z0)³)`.
pub fn cusp(z0_inv: &ExactScalar, t0: &ExactScalar, valid_to: usize) -> Result<(DiffOp, DiffOp)> {
    from_spec(&GenusZeroSpec::cusp(z0_inv.clone())?, t0, valid_to)
}

/// The node pair for `c² = -b1` (base point `t0 = 0`).
pub fn node(c: &ExactScalar, z0_inv: &ExactScalar, valid_to: usize) -> Result<(DiffOp, DiffOp)> {
    from_spec(&GenusZeroSpec::node(c.clone(), z0_inv.clone())?, &ExactScalar::zero(), valid_to)
}

pub fn from_spec(spec: &GenusZeroSpec, t0: &ExactScalar, valid_to: usize) -> Result<(DiffOp, DiffOp)> {
    let ba = ba_function(spec, t0, valid_to)?;
    Ok((reconstruct_p(&ba)?, reconstruct_q(&ba)?))
}
