use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A continuous coefficient `a_i(t)` on `[0, T]`.
///
/// Serialized as `{"constant": v}`, `{"poly": [c0, c1, ...]}` (low-to-high
/// degree) or `{"table": [[t, v], ...]}` (linear interpolation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSpec {
    Constant(f64),
    Poly(Vec<f64>),
    Table(Vec<(f64, f64)>),
}

impl CoefficientSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientSpec::Constant(v) if !v.is_finite() => Err(Error::Validation(
                "constant coefficient is not finite".into(),
            )),
            CoefficientSpec::Constant(_) => Ok(()),
            CoefficientSpec::Poly(c) if c.is_empty() => Err(Error::Validation(
                "poly coefficients must be nonempty".into(),
            )),
            CoefficientSpec::Poly(c) if c.iter().any(|x| !x.is_finite()) => {
                Err(Error::Validation("poly coefficients must be finite".into()))
            }
            CoefficientSpec::Poly(_) => Ok(()),
            CoefficientSpec::Table(points) => {
                if points.len() < 2 {
                    return Err(Error::Validation("table needs at least two points".into()));
                }
                if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                    return Err(Error::Validation("table entries must be finite".into()));
                }
                if let Some(k) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
                    return Err(Error::Validation(format!(
                        "table abscissae not strictly increasing at point {}",
                        k + 1
                    )));
                }
                Ok(())
            }
        }
    }

    /// Fails with a coverage error when a table does not span `[0, t_end]`.
    pub fn check_coverage(&self, t_end: f64) -> Result<()> {
        if let CoefficientSpec::Table(points) = self {
            let first = points.first().map_or(f64::NAN, |p| p.0);
            let last = points.last().map_or(f64::NAN, |p| p.0);
            if !(first <= 0.0 && last >= t_end) {
                return Err(Error::Coverage { first, last, t_end });
            }
        }
        Ok(())
    }

    /// Value at `t`. Tables are clamped outside their span; call
    /// [`check_coverage`](Self::check_coverage) first when that matters.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            CoefficientSpec::Constant(v) => *v,
            CoefficientSpec::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
            CoefficientSpec::Table(points) => interpolate(points, t),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            CoefficientSpec::Constant(v) => *v == 0.0,
            CoefficientSpec::Poly(c) => c.iter().all(|&x| x == 0.0),
            CoefficientSpec::Table(p) => p.iter().all(|&(_, v)| v == 0.0),
        }
    }
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let (t0, v0) = points[0];
    if t <= t0 {
        return v0;
    }
    let (tn, vn) = points[points.len() - 1];
    if t >= tn {
        return vn;
    }
    // first index with abscissa > t; t lies in [points[k-1].0, points[k].0)
    let k = points.partition_point(|p| p.0 <= t);
    let (ta, va) = points[k - 1];
    let (tb, vb) = points[k];
    if t == ta {
        return va;
    }
    let s = (t - ta) / (tb - ta);
    va + s * (vb - va)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_uses_horner_low_to_high() {
        let p = CoefficientSpec::Poly(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(CoefficientSpec::Poly(vec![0.0, 1.0]).eval(0.5), 0.5);
    }

    #[test]
    fn table_interpolates_linearly() {
        let t = CoefficientSpec::Table(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)]);
        assert_eq!(t.eval(0.25), 0.5);
        assert_eq!(t.eval(1.0), 2.0);
        assert_eq!(t.eval(2.0), 1.0);
        assert_eq!(t.eval(3.0), 0.0);
    }

    #[test]
    fn validation_errors() {
        assert!(CoefficientSpec::Poly(vec![]).validate().is_err());
        assert!(CoefficientSpec::Constant(f64::INFINITY).validate().is_err());
        assert!(CoefficientSpec::Table(vec![(0.0, 1.0), (0.0, 2.0)])
            .validate()
            .is_err());
        assert!(CoefficientSpec::Table(vec![(0.0, 1.0)]).validate().is_err());
        assert!(CoefficientSpec::Table(vec![(0.0, 1.0), (1.0, 2.0)])
            .validate()
            .is_ok());
    }

    #[test]
    fn coverage() {
        let t = CoefficientSpec::Table(vec![(0.0, 1.0), (1.0, 2.0)]);
        assert!(t.check_coverage(1.0).is_ok());
        assert!(matches!(t.check_coverage(1.5), Err(Error::Coverage { .. })));
        let late = CoefficientSpec::Table(vec![(0.1, 1.0), (1.0, 2.0)]);
        assert!(late.check_coverage(1.0).is_err());
        assert!(CoefficientSpec::Constant(3.0).check_coverage(100.0).is_ok());
    }
}
