//! Straight-line least squares.

use serde::{Deserialize, Serialize};

/// `y ≈ intercept + slope * x` with the residuals of the fitted points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the weights (or the residual spread
    /// when unweighted).
    pub slope_stderr: f64,
    pub residuals: Vec<f64>,
}

/// Weighted least squares; `weights` are inverse variances. `None` if fewer
/// than two distinct abscissae carry weight.
pub fn weighted_line(x: &[f64], y: &[f64], weights: &[f64]) -> Option<LineFit> {
    assert!(x.len() == y.len() && x.len() == weights.len());
    let sw: f64 = weights.iter().sum();
    if !(sw > 0.0) {
        return None;
    }
    let mx = x.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() / sw;
    let my = y.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(weights).map(|(a, w)| w * (a - mx) * (a - mx)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).zip(weights).map(|((a, b), w)| w * (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - intercept - slope * a).collect();
    Some(LineFit { slope, intercept, slope_stderr: (1.0 / sxx).sqrt(), residuals })
}

/// Ordinary least squares.
pub fn ordinary_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let mut fit = weighted_line(x, y, &vec![1.0; x.len()])?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let rss: f64 = fit.residuals.iter().map(|r| r * r).sum();
    fit.slope_stderr = if n > 2.0 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    Some(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|a| 2.0 - 0.5 * a).collect();
        let f = ordinary_line(&x, &y).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.intercept - 2.0).abs() < 1e-12);
        assert!(ordinary_line(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn weights_pull_towards_precise_points() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 5.0];
        let heavy = weighted_line(&x, &y, &[1e6, 1e6, 1e-6]).unwrap();
        assert!((heavy.slope - 1.0).abs() < 1e-3);
    }
}
