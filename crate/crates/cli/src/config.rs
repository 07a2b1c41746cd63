use std::str::FromStr;

use bcurve_core::{DivisorTolerances, ExactScalar};
use num_rational::BigRational;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Truncation order of every series.
    pub order: usize,
    pub t0: ExactScalar,
    pub tol: DivisorTolerances,
    pub format: Format,
    /// Series coefficients shown per operator coefficient.
    pub show_terms: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 48,
            t0: ExactScalar::zero(),
            tol: DivisorTolerances::default(),
            format: Format::Json,
            show_terms: 8,
        }
    }
}

impl RunConfig {
    /// Orders `(m, n)` need `N ≥ 4mn`.
    pub fn check_order(&self, m: usize, n: usize) -> Result<(), CliError> {
        if self.order < 4 * m * n {
            return Err(CliError::Config(format!(
                "truncation order {} is below 4*m*n = {} for orders ({m}, {n}); pass --order {}",
                self.order,
                4 * m * n,
                4 * m * n
            )));
        }
        Ok(())
    }
}

/// `p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let bad = || CliError::Config(format!("'{s}' is not a rational number"));
    if s.ends_with("/0") || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    BigRational::from_str(s).map_err(|_| bad())
}

/// `RE` or `RE,IM` with rational parts.
pub fn parse_point(s: &str) -> Result<ExactScalar, CliError> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (parse_rational(a)?, parse_rational(b)?),
        None => (parse_rational(s)?, BigRational::default()),
    };
    Ok(ExactScalar::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        assert_eq!(parse_point("1/2,-3").unwrap(), ExactScalar::complex((1, 2), (-3, 1)));
        assert_eq!(parse_point("0").unwrap(), ExactScalar::zero());
        assert!(parse_point("1/0").is_err());
        assert!(parse_point("x").is_err());
    }

    #[test]
    fn order_gate() {
        let c = RunConfig::default();
        assert!(c.check_order(3, 4).is_ok());
        assert!(c.check_order(3, 5).is_err());
    }
}
