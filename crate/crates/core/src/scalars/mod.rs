//! Exact scalar expressions and their multiprecision evaluation.

mod expr;
mod real;

pub use expr::ScalarExpr;
pub use real::{BigComplex, Real};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Maximum distance from an integer for a value to snap to it.
    pub snap_eps: f64,
    /// Maximum residual for an axiom or identity check to pass.
    pub validation_eps: f64,
    /// Working precision in bits.
    pub precision: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            snap_eps: 1e-24,
            validation_eps: 1e-20,
            precision: 192,
        }
    }
}

impl ToleranceConfig {
    pub const MIN_PRECISION: usize = 64;

    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = precision;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.precision < Self::MIN_PRECISION {
            return Err(Error::Config(format!(
                "precision {} is below the minimum of {} bits",
                self.precision,
                Self::MIN_PRECISION
            )));
        }
        let ok = self.snap_eps > 0.0
            && self.snap_eps < self.validation_eps
            && self.validation_eps < 1.0;
        if !ok {
            return Err(Error::Config(format!(
                "need 0 < snap_eps ({:e}) < validation_eps ({:e}) < 1",
                self.snap_eps, self.validation_eps
            )));
        }
        Ok(())
    }
}

/// The integer within `eps` of `z`, if any.
pub fn snap_to_integer(z: &BigComplex, eps: f64) -> Option<i64> {
    let n = z.re.round_i64()?;
    let p = z.precision();
    let d = (z - &BigComplex::from_i64(n, p)).abs();
    (d <= Real::from_f64(eps, p)).then_some(n)
}

/// Like [`snap_to_integer`], reporting the offending value on failure.
pub fn snap_or_err(z: &BigComplex, eps: f64, what: impl FnOnce() -> String) -> Result<i64> {
    snap_to_integer(z, eps).ok_or_else(|| {
        Error::NotIntegral(format!("{} = {:.6e}{:+.6e}i is not an integer", what(), z.re.to_f64(), z.im.to_f64()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_tolerances_are_consistent() {
        ToleranceConfig::default().check().unwrap();
        assert!(ToleranceConfig::default().with_precision(32).check().is_err());
        let bad = ToleranceConfig {
            snap_eps: 1e-10,
            validation_eps: 1e-20,
            precision: 192,
        };
        assert!(bad.check().is_err());
    }

    #[test]
    fn snapping() {
        let p = 192;
        let z = BigComplex::new(
            Real::from_i64(5, p) + Real::from_f64(1e-30, p),
            Real::from_f64(-1e-30, p),
        );
        assert_eq!(snap_to_integer(&z, 1e-24), Some(5));
        let z = BigComplex::from_f64(4.9, 0.0, p);
        assert_eq!(snap_to_integer(&z, 1e-24), None);
        let z = BigComplex::from_f64(3.0, 1e-10, p);
        assert_eq!(snap_to_integer(&z, 1e-24), None);
        assert_eq!(snap_to_integer(&BigComplex::from_i64(-7, p), 1e-24), Some(-7));
    }

    proptest! {
        #[test]
        fn snaps_exactly_near_integers(n in -1_000_000i64..1_000_000, off in -1e-3f64..1e-3) {
            let p = 192;
            let tiny = Real::from_f64(off, p) * Real::from_f64(1e-25, p);
            let z = BigComplex::new(Real::from_i64(n, p) + tiny, Real::zero(p));
            prop_assert_eq!(snap_to_integer(&z, 1e-24), Some(n));
            let far = BigComplex::from_f64(n as f64 + 0.25, 0.0, p);
            prop_assert_eq!(snap_to_integer(&far, 1e-24), None);
        }
    }
}
