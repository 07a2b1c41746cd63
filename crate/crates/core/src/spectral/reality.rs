use crate::diffop::DiffOp;
use crate::scalar::ComplexFloat;

use super::{PlaneCurve, PolyMatrix};
use crate::scalar::ExactScalar;

/// Outcome of [`reality_check`]. The curve and matrix checks only run for
/// real operators.
#[derive(Clone, Debug, PartialEq)]
pub struct RealityReport {
    pub operators_real: bool,
    pub curve_real: Option<bool>,
    pub conjugation_symmetric: Option<bool>,
}

impl RealityReport {
    pub fn passed(&self) -> bool {
        !self.operators_real || (self.curve_real == Some(true) && self.conjugation_symmetric == Some(true))
    }
}

const SAMPLES: [(f64, f64); 5] = [(0.7, 0.0), (-1.3, 0.0), (0.4, 1.1), (-2.0, 0.5), (3.0, -2.5)];

pub fn reality_check(p: &DiffOp, q: &DiffOp, curve: &PlaneCurve, m: &PolyMatrix<ExactScalar>) -> RealityReport {
    let operators_real = p.is_real() && q.is_real();
    if !operators_real {
        return RealityReport { operators_real, curve_real: None, conjugation_symmetric: None };
    }
    let symmetric = SAMPLES.iter().all(|&(re, im)| {
        let l = ComplexFloat::new(re, im);
        let a = m.eval_complex(l.conj());
        let b = m.eval_complex(l);
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y.conj()).norm() <= 1e-12 * (1.0 + x.norm()))
    });
    RealityReport {
        operators_real,
        curve_real: Some(curve.f.is_real()),
        conjugation_symmetric: Some(symmetric && m.is_real()),
    }
}
