//! Experiments on the dynamical model: covering numbers of exceptional
//! sets, interval counts, the Hausdorff covering events and noise decay.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::distributions::Cdf;
use crate::dynamics::{covering_number, exceptional_set, scan_statistic, DynamicalField, PointToBox};
use crate::fit::{ordinary_line, LineFit};
use crate::grid::Marks;
use crate::labels::LabelSource;
use crate::lattice::{neighbors, Bounds, Region, Vertex};
use crate::percolation::{innermost_circuit_with, ArmDetector, ArmSpec, Coloring};

use super::{arm_probability, box_rect, check_prob, check_samples, crossing_probability, replicate, stream, EstimatorResult, ExpError};

/// Level used to read off the correlation length in regime checks.
const EPS0: f64 = 0.05;

/// Whether the cluster of the origin in `zero` (the origin itself counts
/// regardless) reaches sup-norm `radius`: `T(0, ∂B(radius)) = 0`.
pub fn zero_cluster_reaches(zero: impl Fn(Vertex) -> bool, radius: i32, marks: &mut Marks, stack: &mut Vec<Vertex>) -> bool {
    if radius == 0 {
        return true;
    }
    marks.reset_to(Bounds::around(radius));
    stack.clear();
    marks.mark(Vertex::ORIGIN);
    stack.push(Vertex::ORIGIN);
    while let Some(v) = stack.pop() {
        for w in neighbors(v) {
            if w.sup_norm() <= radius && zero(w) && marks.mark(w) {
                if w.sup_norm() == radius {
                    return true;
                }
                stack.push(w);
            }
        }
    }
    false
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Covering numbers at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverRow {
    pub eps: f64,
    pub count: EstimatorResult,
    /// `min(floor(x / F^{-1}(1/2 + eps)), n)`.
    pub y: u32,
    /// `ceil(s/eps) * binom(n, y) * pi_1(2^n)`.
    pub shape: f64,
    /// Whether `2^n` is below the estimated correlation length at
    /// `1 - e^{-eps}(1/2 - eps)`; `None` when not checked.
    pub in_regime: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringSurvey {
    pub n: u32,
    pub x: f64,
    pub horizon: f64,
    pub rows: Vec<CoverRow>,
    /// Lebesgue measure of `{t : T_t(0, ∂B(2^n)) <= x}`.
    pub measure: EstimatorResult,
    /// `1{T_0(0, ∂B(2^n)) <= x}`.
    pub static_prob: EstimatorResult,
    /// Paired differences `measure / horizon - 1{T_0 <= x}`; mean zero.
    pub fubini_gap: EstimatorResult,
    pub pi1: Option<EstimatorResult>,
    /// Smallest `C` with `E N <= C^{y+1} shape` on every row with a shape.
    pub fitted_c: Option<f64>,
}

/// Covering numbers of `{t in [0, s] : T_t(0, ∂B(2^n)) <= x}` at each scale,
/// compared with `C^{y+1} ceil(s/eps) binom(n, y) pi_1(2^n)`. `aux_samples`
/// sets the size of the `pi_1` and regime estimates (0 skips them).
#[allow(clippy::too_many_arguments)]
pub fn covering_survey(
    cdf: &Cdf,
    n: u32,
    x: f64,
    s: f64,
    eps_grid: &[f64],
    samples: u64,
    seed: u64,
    aux_samples: u64,
) -> Result<CoveringSurvey, ExpError> {
    check_samples(samples)?;
    if eps_grid.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
        return Err(ExpError::InvalidParameter("scales must lie in (0, 1/2)".into()));
    }
    if n > 10 {
        return Err(ExpError::Budget { needed: (2u64 << n).pow(2), limit: (2u64 << 10).pow(2) });
    }
    let radius = 1i32 << n;
    let src = stream(seed, 0);
    let per: Result<Vec<(Vec<u64>, f64, bool)>, ExpError> = replicate(&src, 0..samples, |r| {
        let d = DynamicalField::generate(Region::Box { radius }, s, cdf.clone(), r)?;
        let mut stat = PointToBox::new(radius)?;
        let traj = scan_statistic(&d, &mut stat)?;
        let set = exceptional_set(&traj, x);
        let counts = eps_grid.iter().map(|&e| covering_number(&set, e, (0.0, s))).collect::<Result<Vec<_>, _>>()?;
        Ok((counts, set.measure(), traj.values[0] <= x))
    })
    .into_iter()
    .collect();
    let per = per?;
    let pi1 = if aux_samples > 0 {
        Some(arm_probability(&ArmSpec::one_arm(), 0, radius, 0.5, aux_samples, stream(seed, 1).seed())?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, &eps) in eps_grid.iter().enumerate() {
        let counts: Vec<f64> = per.iter().map(|p| p.0[i] as f64).collect();
        let q = cdf.quantile(0.5 + eps)?;
        let y = if q > 0.0 { ((x / q).floor().max(0.0) as u32).min(n) } else { n };
        let shape = (s / eps).ceil() * binomial(n, y) * pi1.map_or(f64::NAN, |p| p.estimate);
        let in_regime = if aux_samples > 0 {
            let p = 1.0 - (-eps).exp() * (0.5 - eps);
            let c = crossing_probability(p, &box_rect(radius), aux_samples, stream(seed, 2).seed())?;
            Some(c.estimate <= 1.0 - EPS0)
        } else {
            None
        };
        rows.push(CoverRow { eps, count: EstimatorResult::from_values(&counts), y, shape, in_regime });
    }
    let fitted_c = rows
        .iter()
        .filter(|r| r.shape > 0.0 && r.count.estimate > 0.0)
        .map(|r| (r.count.estimate / r.shape).powf(1.0 / (r.y + 1) as f64))
        .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))));
    let measure: Vec<f64> = per.iter().map(|p| p.1).collect();
    let stat: Vec<f64> = per.iter().map(|p| p.2 as u8 as f64).collect();
    let gap: Vec<f64> = per.iter().map(|p| p.1 / s - p.2 as u8 as f64).collect();
    Ok(CoveringSurvey {
        n,
        x,
        horizon: s,
        rows,
        measure: EstimatorResult::from_values(&measure),
        static_prob: EstimatorResult::from_values(&stat),
        fubini_gap: EstimatorResult::from_values(&gap),
        pi1,
        fitted_c,
    })
}

/// Distribution of the number of grid times `i/M` with a zero-weight circuit
/// around the origin in `Ann(2^n, 2^{n+1})`, joined to the origin by a
/// zero-weight path inside it, none of whose vertices rings during
/// `[i/M, (i+1)/M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCount {
    pub n: u32,
    pub m: u32,
    /// `P(count >= c M pi_1(2^{n+1}))` for each `c`.
    pub rows: Vec<(f64, EstimatorResult)>,
    pub mean_count: EstimatorResult,
    /// `M * P(event at time 0)` estimated from the same replicas.
    pub m_times_p0: EstimatorResult,
    pub pi1: EstimatorResult,
    /// `M pi_1(2^{n+1}) >= 1`.
    pub count_condition: bool,
    /// Estimated correlation length at `e^{-1/M}/2` is at least `2^{n+1}`.
    pub length_condition: bool,
    pub histogram: Vec<u64>,
}

/// Whether the event holds when `good` marks the usable vertices (the origin
/// is exempt from the weight condition but not from the ring condition, which
/// the caller folds into `good_origin`).
fn circuit_event<C: Coloring>(good: &C, good_origin: bool, m: i32, n: i32, marks: &mut Marks, stack: &mut Vec<Vertex>) -> bool {
    if !good_origin {
        return false;
    }
    let Some(circ) = innermost_circuit_with(good, m, n, marks, stack) else {
        return false;
    };
    let on: HashSet<Vertex> = circ.vertices().iter().copied().collect();
    marks.reset_to(Bounds::around(n));
    stack.clear();
    marks.mark(Vertex::ORIGIN);
    stack.push(Vertex::ORIGIN);
    while let Some(v) = stack.pop() {
        for w in neighbors(v) {
            if w.sup_norm() <= n && good.is_open(w) && marks.mark(w) {
                if on.contains(&w) {
                    return true;
                }
                stack.push(w);
            }
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
pub fn interval_count_statistic(
    cdf: &Cdf,
    n: u32,
    m: u32,
    c_grid: &[f64],
    samples: u64,
    seed: u64,
    aux_samples: u64,
) -> Result<IntervalCount, ExpError> {
    check_samples(samples)?;
    check_samples(aux_samples)?;
    if m == 0 || n > 9 {
        return Err(ExpError::InvalidParameter(format!("need M >= 1 and n <= 9, got M = {m}, n = {n}")));
    }
    let (lo, hi) = (1i32 << n, 1i32 << (n + 1));
    let dt = 1.0 / m as f64;
    let src = stream(seed, 0);
    let per: Result<Vec<(u64, bool)>, ExpError> = replicate(&src, 0..samples, |r| {
        let d = DynamicalField::generate(Region::Box { radius: hi }, 1.0, cdf.clone(), r)?;
        let mut marks = Marks::new(Bounds::around(hi));
        let mut stack = Vec::new();
        let mut count = 0;
        let mut first = false;
        for i in 0..m {
            let t = i as f64 * dt;
            let quiet = |v: Vertex| !d.event_times(v).iter().any(|&e| e >= t && e < t + dt);
            let good = |v: Vertex| d.index().contains(v) && quiet(v) && cdf.sample_weight(d.label_at(v, t)) == 0.0;
            let hit = circuit_event(&good, quiet(Vertex::ORIGIN), lo, hi, &mut marks, &mut stack);
            count += hit as u64;
            if i == 0 {
                first = hit;
            }
        }
        Ok((count, first))
    })
    .into_iter()
    .collect();
    let per = per?;
    let pi1 = arm_probability(&ArmSpec::one_arm(), 0, hi, 0.5, aux_samples, stream(seed, 1).seed())?;
    let level = m as f64 * pi1.estimate;
    let rows = c_grid
        .iter()
        .map(|&c| (c, EstimatorResult::from_count(per.iter().filter(|p| p.0 as f64 >= c * level).count() as u64, samples)))
        .collect();
    let counts: Vec<f64> = per.iter().map(|p| p.0 as f64).collect();
    let firsts: Vec<f64> = per.iter().map(|p| m as f64 * p.1 as u8 as f64).collect();
    let mut histogram = vec![0u64; m as usize + 1];
    for p in &per {
        histogram[p.0 as usize] += 1;
    }
    let p_len = 0.5 * (-dt).exp();
    let cross = crossing_probability(p_len, &box_rect(hi), aux_samples, stream(seed, 2).seed())?;
    Ok(IntervalCount {
        n,
        m,
        rows,
        mean_count: EstimatorResult::from_values(&counts),
        m_times_p0: EstimatorResult::from_values(&firsts),
        pi1,
        count_condition: level >= 1.0,
        length_condition: cross.estimate >= EPS0,
        histogram,
    })
}

/// `B_k`: a path of `sigma_zero` vertices crossing `Ann(l^{k-1}, l^k)`.
pub fn b_k_event<C: Coloring + ?Sized>(det: &mut ArmDetector, sigma_zero: &C, l: i32, k: u32) -> bool {
    let inner = l.pow(k - 1);
    det.detect(sigma_zero, inner, inner * l, &ArmSpec::one_arm())
}

/// Per-scale quantities of the Hausdorff covering construction at time 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffRow {
    pub k: u32,
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    /// Length of the time cells, `1 / ceil(1/delta)`.
    pub h: f64,
    pub p_b: EstimatorResult,
    /// `pi_1(l^{k-1}, l^k)` at `p = 1/2`.
    pub pi1: EstimatorResult,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HausdorffSurvey {
    pub l: i32,
    pub x: f64,
    pub rows: Vec<HausdorffRow>,
    pub fitted_c: f64,
    /// `W_K(0)`, the fraction of scales `k <= K` at which `B_k` occurs.
    pub wbar: EstimatorResult,
    pub p_wbar_at_least_x: EstimatorResult,
    /// Replicas with `W_K(0) = j / K`, for `j = 0..=K`.
    pub histogram: Vec<u64>,
}

/// `p_hat[k-1]` is the parameter `p_{l^k}` for scale `k`.
pub fn hausdorff_cover_survey(l: i32, p_hat: &[f64], x: f64, samples: u64, seed: u64, aux_samples: u64) -> Result<HausdorffSurvey, ExpError> {
    check_samples(samples)?;
    check_samples(aux_samples)?;
    if l < 2 || p_hat.is_empty() {
        return Err(ExpError::InvalidParameter("need l >= 2 and at least one scale".into()));
    }
    let kmax = p_hat.len() as u32;
    if (l as f64).powi(kmax as i32) > 4096.0 {
        return Err(ExpError::Budget { needed: ((2 * l.pow(kmax) + 1) as u64).pow(2), limit: 8193u64.pow(2) });
    }
    for &p in p_hat {
        check_prob("p", p)?;
        if p <= 0.5 {
            return Err(ExpError::InvalidParameter(format!("p = {p} must exceed 1/2")));
        }
    }
    let scales: Vec<(f64, f64, f64, f64)> = p_hat
        .iter()
        .map(|&p| {
            let delta = (p - 0.5) / 2.0;
            (p, 0.5 + delta, delta, 1.0 / (1.0 / delta).ceil())
        })
        .collect();
    let src = stream(seed, 0);
    let per: Vec<Vec<bool>> = replicate(&src, 0..samples, |r| {
        let mut det = ArmDetector::new();
        scales
            .iter()
            .enumerate()
            .map(|(i, &(_, q, _, h))| {
                let sigma_zero = |v: Vertex| !(r.label(v, 0) >= q && r.first_event(v) >= h);
                b_k_event(&mut det, &sigma_zero, l, i as u32 + 1)
            })
            .collect()
    });
    let mut rows = Vec::new();
    for (i, &(p, q, delta, h)) in scales.iter().enumerate() {
        let k = i as u32 + 1;
        let p_b = EstimatorResult::from_count(per.iter().filter(|b| b[i]).count() as u64, samples);
        let pi1 = arm_probability(&ArmSpec::one_arm(), l.pow(k - 1), l.pow(k), 0.5, aux_samples, stream(seed, k as u64).seed())?;
        rows.push(HausdorffRow { k, p, q, delta, h, p_b, pi1, ratio: p_b.estimate / pi1.estimate });
    }
    let fitted_c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let w: Vec<f64> = per.iter().map(|b| b.iter().filter(|&&x| x).count() as f64 / kmax as f64).collect();
    let mut histogram = vec![0u64; kmax as usize + 1];
    for b in &per {
        histogram[b.iter().filter(|&&x| x).count()] += 1;
    }
    Ok(HausdorffSurvey {
        l,
        x,
        rows,
        fitted_c,
        wbar: EstimatorResult::from_values(&w),
        p_wbar_at_least_x: EstimatorResult::from_count(w.iter().filter(|&&v| v >= x).count() as u64, samples),
        histogram,
    })
}

/// Joint probability of zero passage time from the origin to `∂B(2^n)` at
/// times 0 and `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub t: f64,
    pub joint: EstimatorResult,
    /// `P(W_0 ∩ W_t) / P(W_0)^2`.
    pub ratio: f64,
    pub ratio_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseDecay {
    pub n: u32,
    pub p_w0: EstimatorResult,
    pub rows: Vec<NoiseRow>,
    /// Fit of `log ratio` against `log t` over the rows with `t > 0`.
    pub slope: Option<LineFit>,
}

pub fn noise_decay(cdf: &Cdf, n: u32, t_grid: &[f64], samples: u64, seed: u64) -> Result<NoiseDecay, ExpError> {
    check_samples(samples)?;
    if t_grid.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(ExpError::InvalidParameter("times must be nonnegative".into()));
    }
    if n > 12 {
        return Err(ExpError::Budget { needed: (2u64 << n).pow(2), limit: (2u64 << 12).pow(2) });
    }
    let radius = 1i32 << n;
    let src = LabelSource::new(seed);
    let per: Vec<(bool, Vec<bool>)> = replicate(&src, 0..samples, |r| {
        let mut marks = Marks::new(Bounds::around(radius));
        let mut stack = Vec::new();
        let zero_at = |t: f64| move |v: Vertex| cdf.sample_weight(r.label_at(v, t)) == 0.0;
        let w0 = zero_cluster_reaches(zero_at(0.0), radius, &mut marks, &mut stack);
        let joint = t_grid.iter().map(|&t| w0 && zero_cluster_reaches(zero_at(t), radius, &mut marks, &mut stack)).collect();
        (w0, joint)
    });
    let p_w0 = EstimatorResult::from_count(per.iter().filter(|p| p.0).count() as u64, samples);
    let mut rows = Vec::new();
    for (i, &t) in t_grid.iter().enumerate() {
        let joint = EstimatorResult::from_count(per.iter().filter(|p| p.1[i]).count() as u64, samples);
        let w = p_w0.estimate;
        let ratio = joint.estimate / (w * w);
        let rel = ((joint.stderr / joint.estimate).powi(2) + 4.0 * (p_w0.stderr / w).powi(2)).sqrt();
        rows.push(NoiseRow { t, joint, ratio, ratio_stderr: ratio * rel });
    }
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.t > 0.0 && r.ratio > 0.0).map(|r| (r.t.ln(), r.ratio.ln())).collect();
    let slope = if pts.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        ordinary_line(&x, &y)
    } else {
        None
    };
    Ok(NoiseDecay { n, p_w0, rows, slope })
}
