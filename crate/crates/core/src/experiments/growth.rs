//! Growth of point-to-box passage times and tails of annulus passage times.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distributions::Cdf;
use crate::fpp::{count_contributing_vertices, radial_sweep, rect_crossing_time, s_rect, tn, CrossingRect, LazyWeights, Search, WeightField};
use crate::labels::{LabelField, LabelSource};
use crate::lattice::{Region, VertexIndex};

use super::{check_prob, check_samples, replicate, replicate_with, EstimatorResult, ExpError};

/// Mean `T(0, ∂B(n))` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: i32,
    pub mean: EstimatorResult,
    /// `a_2 + ... + a_{floor(log2 n)}`.
    pub ak_sum: f64,
    /// `mean / ak_sum` (NaN when the sum is empty).
    pub ratio: f64,
    /// Mean of `T(0, ∂B(n)) - T(0, ∂B(previous n))` on the same fields.
    pub increment: Option<EstimatorResult>,
}

/// `T(0, ∂B(n))` for every radius of an increasing grid, one search per field.
pub fn growth_curve(cdf: &Cdf, radii: &[i32], samples: u64, seed: u64) -> Result<Vec<GrowthRow>, ExpError> {
    check_samples(samples)?;
    if radii.is_empty() || radii[0] < 1 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExpError::InvalidParameter("radii must be positive and increasing".into()));
    }
    let src = LabelSource::new(seed);
    let runs: Result<Vec<Vec<f64>>, _> =
        replicate_with(&src, 0..samples, Search::new, |s, r| radial_sweep(s, &LazyWeights { src: r, cdf }, radii)).into_iter().collect();
    let runs = runs?;
    let mut out = Vec::with_capacity(radii.len());
    for (i, &n) in radii.iter().enumerate() {
        let vals: Vec<f64> = runs.iter().map(|r| r[i]).collect();
        let mean = EstimatorResult::from_values(&vals);
        let top = 31 - (n as u32).leading_zeros();
        let ak_sum: f64 = (2..=top).map(|k| cdf.ak(k)).sum();
        let increment = (i > 0).then(|| EstimatorResult::from_values(&runs.iter().map(|r| r[i] - r[i - 1]).collect::<Vec<_>>()));
        out.push(GrowthRow { n, mean, ak_sum, ratio: if top >= 2 { mean.estimate / ak_sum } else { f64::NAN }, increment });
    }
    Ok(out)
}

/// Empirical survival at one normalized level `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub u: f64,
    /// `P(T_annulus(n) >= u * scale)`.
    pub annulus: f64,
    /// `P(T_rect(n) >= u * scale)` for the left-right crossing of `R(n)`.
    pub rect: f64,
    /// `exp(-u^(1/eta))`, the stretched-exponential shape.
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProfile {
    pub n: u32,
    /// `F^{-1}(p)`, or 1 when that is zero.
    pub scale: f64,
    pub eta: f64,
    pub annulus: EstimatorResult,
    pub rect: EstimatorResult,
    pub rows: Vec<TailRow>,
}

/// Tail shape of the annulus passage time `tn(n)` and of the rectangle
/// crossing time of `R(n)`, both in units of `F^{-1}(p)`.
pub fn tail_profile(cdf: &Cdf, n: u32, p: f64, eta: f64, samples: u64, seed: u64) -> Result<TailProfile, ExpError> {
    check_samples(samples)?;
    check_prob("p", p)?;
    if !(eta > 0.0) {
        return Err(ExpError::InvalidParameter(format!("eta = {eta} must be positive")));
    }
    if n > 8 {
        return Err(ExpError::Budget { needed: (2u64 << (n + 2)).pow(2), limit: (2u64 << 10).pow(2) });
    }
    let region = Region::square(1 << (n + 2))?;
    let index = Arc::new(VertexIndex::new(region)?);
    let src = LabelSource::new(seed);
    let vals: Result<Vec<(f64, f64)>, ExpError> = replicate(&src, 0..samples, |r| {
        let field = WeightField::from_labels(LabelField::generate(index.clone(), &r), cdf);
        Ok((tn(&field, n)?, rect_crossing_time(&field, n, CrossingRect::R, false)?.value))
    })
    .into_iter()
    .collect();
    let vals = vals?;
    let q = cdf.quantile(p)?;
    let scale = if q > 0.0 { q } else { 1.0 };
    let a: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let b: Vec<f64> = vals.iter().map(|v| v.1).collect();
    let top = a.iter().chain(&b).copied().fold(0.0, f64::max) / scale;
    let steps = 20;
    let rows = (0..=steps)
        .map(|i| {
            let u = top * i as f64 / steps as f64;
            let surv = |xs: &[f64]| xs.iter().filter(|&&x| x >= u * scale).count() as f64 / xs.len() as f64;
            TailRow { u, annulus: surv(&a), rect: surv(&b), reference: (-u.powf(1.0 / eta)).exp() }
        })
        .collect();
    Ok(TailProfile { n, scale, eta, annulus: EstimatorResult::from_values(&a), rect: EstimatorResult::from_values(&b), rows })
}

/// Mean of `#V_n(p)` over independent label fields on `S(n)`.
pub fn vn_survey(n: u32, p: f64, lhat: i32, samples: u64, seed: u64) -> Result<EstimatorResult, ExpError> {
    check_samples(samples)?;
    check_prob("p", p)?;
    let index = Arc::new(VertexIndex::new(s_rect(n)?)?);
    let src = LabelSource::new(seed);
    let counts: Result<Vec<f64>, ExpError> = replicate(&src, 0..samples, |r| {
        let labels = LabelField::generate(index.clone(), &r);
        Ok(count_contributing_vertices(&labels, n, p, lhat)? as f64)
    })
    .into_iter()
    .collect();
    Ok(EstimatorResult::from_values(&counts?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{from_ak, AkSequence};
    use crate::fpp::point_to_box;

    #[test]
    fn growth_matches_stored_fields() {
        let cdf = from_ak(&AkSequence::Geometric { c: 1.0, r: 0.5 }, 64).unwrap();
        let rows = growth_curve(&cdf, &[2, 4, 8], 20, 5).unwrap();
        let src = LabelSource::new(5);
        let mut sum = 0.0;
        for r in 0..20 {
            let f = WeightField::generate(Region::Box { radius: 8 }, &cdf, &src.replica(r)).unwrap();
            sum += point_to_box(&f, 8).unwrap();
        }
        assert_eq!(rows[2].mean.estimate, sum / 20.0);
        assert_eq!(rows[2].ak_sum, 0.25 + 0.125);
        assert!(rows[0].ratio.is_nan() && rows[1].increment.unwrap().estimate >= 0.0);
    }

    #[test]
    fn zero_field_has_zero_growth() {
        let zero = Cdf::atoms(vec![(0.0, 1.0)]).unwrap();
        let rows = growth_curve(&zero, &[4, 16], 5, 1).unwrap();
        assert!(rows.iter().all(|r| r.mean.estimate == 0.0));
    }

    #[test]
    fn tail_profile_is_a_survival_function() {
        let cdf = Cdf::bernoulli(0.5).unwrap();
        let t = tail_profile(&cdf, 1, 0.75, 11.0 / 6.0, 30, 2).unwrap();
        assert_eq!(t.rows[0].annulus, 1.0);
        assert!(t.rows.windows(2).all(|w| w[0].annulus >= w[1].annulus && w[0].rect >= w[1].rect));
    }

    #[test]
    fn vn_empty_interval() {
        assert_eq!(vn_survey(1, 0.5, 1, 5, 1).unwrap().estimate, 0.0);
    }
}
