use serde::{Deserialize, Serialize};

use super::DistError;

/// A nonnegative nonincreasing sequence `(a_k)_{k >= 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AkSequence {
    Constant { c: f64 },
    /// `a_k = c * k^(-beta) * ln(k+1)^(-gamma)`.
    PowerLog { c: f64, beta: f64, gamma: f64 },
    /// `a_k = c * r^k`.
    Geometric { c: f64, r: f64 },
    /// `a_2, a_3, ...` listed, then `tail` (or the last listed value repeated).
    Explicit { head: Vec<f64>, tail: Option<Box<AkSequence>> },
}

impl AkSequence {
    pub fn value(&self, k: u32) -> f64 {
        let kf = k as f64;
        match self {
            AkSequence::Constant { c } => *c,
            AkSequence::PowerLog { c, beta, gamma } => {
                if *c == 0.0 {
                    0.0
                } else {
                    c * kf.powf(-beta) * (kf + 1.0).ln().powf(-gamma)
                }
            }
            AkSequence::Geometric { c, r } => c * r.powf(kf),
            AkSequence::Explicit { head, tail } => {
                let i = k.saturating_sub(2) as usize;
                if i < head.len() {
                    head[i]
                } else if let Some(t) = tail {
                    t.value(k)
                } else {
                    head.last().copied().unwrap_or(0.0)
                }
            }
        }
    }

    /// Multiply every term by `s`.
    pub fn scaled(&self, s: f64) -> AkSequence {
        match self {
            AkSequence::Constant { c } => AkSequence::Constant { c: c * s },
            AkSequence::PowerLog { c, beta, gamma } => AkSequence::PowerLog { c: c * s, beta: *beta, gamma: *gamma },
            AkSequence::Geometric { c, r } => AkSequence::Geometric { c: c * s, r: *r },
            AkSequence::Explicit { head, tail } => AkSequence::Explicit {
                head: head.iter().map(|v| v * s).collect(),
                tail: tail.as_ref().map(|t| Box::new(t.scaled(s))),
            },
        }
    }

    pub fn validate(&self) -> Result<(), DistError> {
        let bad = |why: String| Err(DistError::InvalidSequence(why));
        match self {
            AkSequence::Constant { c } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return bad(format!("constant {c} must be finite and nonnegative"));
                }
            }
            AkSequence::PowerLog { c, beta, gamma } => {
                if !(c.is_finite() && *c >= 0.0 && beta.is_finite() && gamma.is_finite()) {
                    return bad("powerlog parameters must be finite with c >= 0".into());
                }
                if *c > 0.0 {
                    // eventual monotonicity needs beta > 0, or beta = 0 with gamma >= 0
                    if *beta < 0.0 || (*beta == 0.0 && *gamma < 0.0) {
                        return bad(format!("powerlog with beta={beta}, gamma={gamma} is not nonincreasing"));
                    }
                    // d/dk log a_k = -beta/k - gamma/((k+1) ln(k+1)) must be <= 0 from k = 2 on;
                    // for gamma < 0 the worst case is k = 2.
                    if *gamma < 0.0 {
                        let k = 2.0f64;
                        let slope = -beta / k - gamma / ((k + 1.0) * (k + 1.0).ln());
                        if slope > 0.0 {
                            return bad(format!("powerlog with beta={beta}, gamma={gamma} increases at k=2"));
                        }
                    }
                }
            }
            AkSequence::Geometric { c, r } => {
                if !(c.is_finite() && *c >= 0.0 && (0.0..=1.0).contains(r)) {
                    return bad("geometric needs c >= 0 and 0 <= r <= 1".into());
                }
            }
            AkSequence::Explicit { head, tail } => {
                if head.is_empty() {
                    return bad("explicit sequence needs at least one listed value".into());
                }
                if head.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("explicit values must be finite and nonnegative".into());
                }
                if head.windows(2).any(|w| w[1] > w[0]) {
                    return Err(DistError::NonMonotone);
                }
                if let Some(t) = tail {
                    t.validate()?;
                    let k = head.len() as u32 + 2;
                    if t.value(k) > head[head.len() - 1] {
                        return Err(DistError::NonMonotone);
                    }
                }
            }
        }
        Ok(())
    }
}
