use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};
use statrs::function::beta::beta_reg;

use crate::dataset::{DatasetItem, FrequencyBin};
use crate::error::{Error, Result};
use crate::morpho::Shape;

/// `|H_a|`: distinct derivative types of frequency 1 per label of `shape`.
/// Labels that occur only in higher bins are reported with 0.
pub fn hapax_counts(items: &[DatasetItem], shape: Shape) -> BTreeMap<String, usize> {
    let mut types: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for it in items.iter().filter(|it| it.shape == shape) {
        let entry = types.entry(it.label()).or_default();
        if it.bin == FrequencyBin::B1 {
            if let Some(s) = it.surface() {
                entry.insert(s);
            }
        }
    }
    types.into_iter().map(|(a, s)| (a, s.len())).collect()
}

fn finite_or_string<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Infinite for a perfect fit (serialized as `"inf"`).
    #[serde(serialize_with = "finite_or_string")]
    pub f: f64,
    pub p: f64,
    pub df: (usize, usize),
    pub n: usize,
}

/// `F = R^2 (n - 2) / (1 - R^2)` for a single regressor.
pub fn f_from_r2(r2: f64, n: usize) -> f64 {
    if r2 >= 1.0 {
        return f64::INFINITY;
    }
    r2 * (n as f64 - 2.0) / (1.0 - r2)
}

/// Upper tail `P(X > f)` for `X ~ F(d1, d2)` through the regularized
/// incomplete beta function.
pub fn f_survival(f: f64, d1: usize, d2: usize) -> f64 {
    if f.is_nan() {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let (d1, d2) = (d1 as f64, d2 as f64);
    beta_reg(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}

/// Simple least squares of `y` on `x` with the F test of the slope.
pub fn ols_regression(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "regression inputs must be finite".into(),
        ));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0).powi(2) * n as f64 {
        return Err(Error::ConstantRegressor);
    }
    if syy == 0.0 {
        return Err(Error::InvalidInput(
            "response is constant; R^2 is undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let r2 = (sxy * sxy / (sxx * syy)).min(1.0);
    let f = f_from_r2(r2, n);
    Ok(RegressionResult {
        slope,
        intercept: my - slope * mx,
        r2,
        f,
        p: f_survival(f, 1, n - 2),
        df: (1, n - 2),
        n,
    })
}
