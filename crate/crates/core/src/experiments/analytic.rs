//! Small analytic checks.

use serde::{Deserialize, Serialize};

use super::ExpError;

/// Result of comparing weighted prefix sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbelOutcome {
    Holds,
    /// First prefix length at which `sum a_k b_k > sum c_k b_k`.
    FailsAt(usize),
}

/// Given nonnegative `a`, `c` with `a_1 + ... + a_m <= c_1 + ... + c_m` for
/// every `m`, and `b` nonnegative and nonincreasing, checks that
/// `sum_{k<=m} a_k b_k <= sum_{k<=m} c_k b_k` for every `m <= n`.
/// Comparisons allow a relative rounding slack of `1e-12`.
pub fn abel_compare(a: &[f64], b: &[f64], c: &[f64], n: usize) -> Result<AbelOutcome, ExpError> {
    if a.len() < n || b.len() < n || c.len() < n {
        return Err(ExpError::InvalidParameter(format!("sequences shorter than n = {n}")));
    }
    let le = |x: f64, y: f64, scale: f64| x <= y + 1e-12 * scale.max(1e-300);
    let (mut sa, mut sc, mut scale) = (0.0, 0.0, 0.0);
    for k in 0..n {
        if a[k] < 0.0 || b[k] < 0.0 || c[k] < 0.0 || !(a[k].is_finite() && b[k].is_finite() && c[k].is_finite()) {
            return Err(ExpError::InvalidParameter(format!("negative or non-finite term at {k}")));
        }
        if k > 0 && b[k] > b[k - 1] {
            return Err(ExpError::InvalidParameter(format!("b increases at {k}")));
        }
        sa += a[k];
        sc += c[k];
        scale += a[k] + c[k];
        if !le(sa, sc, scale) {
            return Err(ExpError::InvalidParameter(format!("partial sums of a exceed those of c at {k}")));
        }
    }
    let (mut lhs, mut rhs, mut scale) = (0.0, 0.0, 0.0);
    for k in 0..n {
        lhs += a[k] * b[k];
        rhs += c[k] * b[k];
        scale += (a[k] + c[k]) * b[k];
        if !le(lhs, rhs, scale) {
            return Ok(AbelOutcome::FailsAt(k + 1));
        }
    }
    Ok(AbelOutcome::Holds)
}

/// `I(x, p) = x log(x/p) + (1-x) log((1-x)/(1-p))`, with `0 log 0 = 0` at
/// `x = 0` or `x = 1`.
pub fn bernoulli_rate(x: f64, p: f64) -> Result<f64, ExpError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ExpError::InvalidParameter(format!("p = {p} is not in (0, 1)")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(ExpError::InvalidParameter(format!("x = {x} is not in [0, 1]")));
    }
    let term = |u: f64, q: f64| if u == 0.0 { 0.0 } else { u * (u / q).ln() };
    Ok(term(x, p) + term(1.0 - x, 1.0 - p))
}
