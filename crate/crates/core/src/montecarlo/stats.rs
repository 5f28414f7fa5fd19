//! Replication summaries and log-log regression.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{GeoError, Result};

/// Mean, unbiased variance, stderr of the mean and jackknife stderr of the variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub stderr_mean: f64,
    pub stderr_variance: f64,
}

/// Moments of `values`, accumulated in slice order. The variance stderr is the
/// delete-one jackknife, evaluated in closed form; it is NaN below 3 values.
pub fn moments(values: &[f64]) -> Moments {
    let r = values.len();
    let rf = r as f64;
    if r == 0 {
        return Moments {
            mean: f64::NAN,
            variance: f64::NAN,
            stderr_mean: f64::NAN,
            stderr_variance: f64::NAN,
        };
    }
    let mean = values.iter().sum::<f64>() / rf;
    if r == 1 {
        return Moments {
            mean,
            variance: f64::NAN,
            stderr_mean: f64::NAN,
            stderr_variance: f64::NAN,
        };
    }
    // centered sums keep the leave-one-out formulas stable
    let s2: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    let variance = s2 / (rf - 1.0);
    let stderr_mean = (variance / rf).sqrt();
    let stderr_variance = if r < 3 {
        f64::NAN
    } else {
        // with y = x - mean: sum of the others is -y, sum of squares is s2 - y^2
        let loo: Vec<f64> = values
            .iter()
            .map(|x| {
                let y = x - mean;
                ((s2 - y * y) - y * y / (rf - 1.0)) / (rf - 2.0)
            })
            .collect();
        let bar = loo.iter().sum::<f64>() / rf;
        ((rf - 1.0) / rf * loo.iter().map(|v| (v - bar).powi(2)).sum::<f64>()).sqrt()
    };
    Moments {
        mean,
        variance: variance.max(0.0),
        stderr_mean,
        stderr_variance,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval of the slope.
    pub ci95: f64,
    pub residual_rms: f64,
    pub points: usize,
}

/// Ordinary least squares of `log value` on `log n`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(GeoError::InvalidInput(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(n, v) in points {
        if !(n > 0.0) || !(v > 0.0) {
            return Err(GeoError::InvalidInput(format!("scaling fit needs positive data, got ({n}, {v})")));
        }
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(GeoError::InvalidInput("scaling fit needs distinct sample sizes".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let dof = k - 2.0;
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| GeoError::Numerical(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(ScalingFit {
        slope,
        intercept,
        ci95: t * (sse / dof / sxx).sqrt(),
        residual_rms: (sse / k).sqrt(),
        points: points.len(),
    })
}
