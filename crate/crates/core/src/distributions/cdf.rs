use serde::{Deserialize, Serialize};

use super::{AkSequence, DistError};

/// Atoms `(value, cumulative probability)`, values strictly increasing,
/// cumulative probabilities nondecreasing and ending at exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomList {
    atoms: Vec<(f64, f64)>,
}

/// Shape of `F^{-1}` on one segment, as a function of the excess
/// `e = u - F(0)` over the zero mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Constant(f64),
    /// `scale * e^exponent`, exponent > 0.
    Power { scale: f64, exponent: f64 },
}

impl Shape {
    #[inline]
    fn eval(&self, e: f64) -> f64 {
        match *self {
            Shape::Constant(v) => v,
            Shape::Power { scale, exponent } => scale * e.powf(exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Inclusive upper end of the segment, measured as excess over `F(0)`.
    pub upper: f64,
    pub shape: Shape,
}

/// `F^{-1}(u) = 0` for `u <= zero_mass`; above it, consecutive segments in
/// the excess `u - zero_mass` cover `(0, 1 - zero_mass]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseInverse {
    zero_mass: f64,
    segments: Vec<Segment>,
}

/// A distribution function on `[0, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cdf {
    Atoms(AtomList),
    Inverse(PiecewiseInverse),
}

impl AtomList {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, DistError> {
        let bad = |why: &str| Err(DistError::InvalidCdf(why.to_string()));
        if atoms.is_empty() {
            return bad("no atoms");
        }
        let mut prev_v = f64::NEG_INFINITY;
        let mut prev_c = 0.0;
        for &(v, c) in &atoms {
            if !(v.is_finite() && c.is_finite()) {
                return bad("non-finite atom");
            }
            if v < 0.0 {
                return bad("mass on negative values");
            }
            if v <= prev_v {
                return bad("atom values must be strictly increasing");
            }
            if c < prev_c || c > 1.0 {
                return bad("cumulative probabilities must be nondecreasing in [0, 1]");
            }
            prev_v = v;
            prev_c = c;
        }
        if prev_c != 1.0 {
            return bad("last cumulative probability must be 1");
        }
        Ok(AtomList { atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }
}

impl PiecewiseInverse {
    pub fn new(zero_mass: f64, segments: Vec<Segment>) -> Result<Self, DistError> {
        let bad = |why: &str| Err(DistError::InvalidCdf(why.to_string()));
        if !(0.0..1.0).contains(&zero_mass) {
            return bad("zero mass must lie in [0, 1)");
        }
        if segments.is_empty() {
            return bad("no segments");
        }
        let mut lo = 0.0;
        let mut prev_top = 0.0f64;
        for s in &segments {
            if !(s.upper > lo) {
                return bad("segment ends must be strictly increasing");
            }
            let (bottom, top) = match s.shape {
                Shape::Constant(v) => (v, v),
                Shape::Power { scale, exponent } => {
                    if !(scale > 0.0 && exponent > 0.0) {
                        return bad("power segments need positive scale and exponent");
                    }
                    (scale * lo.powf(exponent), s.shape.eval(s.upper))
                }
            };
            if !(bottom.is_finite() && top.is_finite()) || bottom < prev_top {
                return bad("inverse must be finite and nondecreasing");
            }
            prev_top = top;
            lo = s.upper;
        }
        if lo < 1.0 - zero_mass {
            return bad("segments must reach u = 1");
        }
        Ok(PiecewiseInverse { zero_mass, segments })
    }

    pub fn zero_mass(&self) -> f64 {
        self.zero_mass
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    #[inline]
    fn quantile_excess(&self, e: f64) -> f64 {
        if e <= 0.0 {
            return 0.0;
        }
        let i = self.segments.partition_point(|s| s.upper < e).min(self.segments.len() - 1);
        self.segments[i].shape.eval(e)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let mut sup = 0.0;
        let mut lo = 0.0;
        for s in &self.segments {
            let top = s.shape.eval(s.upper);
            if top <= x {
                sup = s.upper;
                lo = s.upper;
                continue;
            }
            if let Shape::Power { scale, exponent } = s.shape {
                let e = (x / scale).powf(1.0 / exponent);
                if e > lo {
                    sup = e.min(s.upper);
                }
            }
            break;
        }
        (self.zero_mass + sup).min(1.0)
    }
}

impl Cdf {
    /// Bernoulli weights: 0 with probability `zero_prob`, 1 otherwise.
    pub fn bernoulli(zero_prob: f64) -> Result<Self, DistError> {
        if !(zero_prob > 0.0 && zero_prob < 1.0) {
            return Err(DistError::InvalidCdf(format!("bernoulli zero probability {zero_prob} outside (0, 1)")));
        }
        Ok(Cdf::Atoms(AtomList::new(vec![(0.0, zero_prob), (1.0, 1.0)])?))
    }

    pub fn atoms(atoms: Vec<(f64, f64)>) -> Result<Self, DistError> {
        Ok(Cdf::Atoms(AtomList::new(atoms)?))
    }

    pub fn inverse(zero_mass: f64, segments: Vec<Segment>) -> Result<Self, DistError> {
        Ok(Cdf::Inverse(PiecewiseInverse::new(zero_mass, segments)?))
    }

    /// `F(x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Cdf::Atoms(a) => a.atoms.iter().take_while(|(v, _)| *v <= x).last().map_or(0.0, |&(_, c)| c),
            Cdf::Inverse(p) => p.cdf(x),
        }
    }

    /// `F(0)`.
    pub fn zero_mass(&self) -> f64 {
        self.cdf(0.0)
    }

    /// Generalized inverse `inf{y : F(y) >= t}` for `t` in `(0, 1)`.
    pub fn quantile(&self, t: f64) -> Result<f64, DistError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(DistError::ProbabilityOutOfRange(t));
        }
        Ok(self.quantile_unchecked(t))
    }

    /// [`Cdf::quantile`] without the range check; used on labels, which
    /// always lie strictly inside `(0, 1)`.
    #[inline]
    pub fn quantile_unchecked(&self, t: f64) -> f64 {
        match self {
            Cdf::Atoms(a) => {
                let i = a.atoms.partition_point(|&(_, c)| c < t).min(a.atoms.len() - 1);
                a.atoms[i].0
            }
            Cdf::Inverse(p) => {
                if t <= p.zero_mass {
                    0.0
                } else {
                    p.quantile_excess(t - p.zero_mass)
                }
            }
        }
    }

    /// `F^{-1}(1/2 + e)`, evaluated without rounding `1/2 + e`.
    pub fn quantile_above_half(&self, e: f64) -> f64 {
        match self {
            Cdf::Atoms(a) => {
                let i = a
                    .atoms
                    .iter()
                    .position(|&(_, c)| c >= 0.5 && c - 0.5 >= e)
                    .unwrap_or(a.atoms.len() - 1);
                a.atoms[i].0
            }
            Cdf::Inverse(p) => p.quantile_excess((0.5 - p.zero_mass) + e),
        }
    }

    /// `a_k = F^{-1}(1/2 + 2^{-k})`, `k >= 2`.
    pub fn ak(&self, k: u32) -> f64 {
        assert!(k >= 2, "a_k is defined for k >= 2");
        self.quantile_above_half((-(k as f64)).exp2())
    }

    /// The weight `F^{-1}(u)` attached to uniform label `u`.
    #[inline]
    pub fn sample_weight(&self, u: f64) -> f64 {
        self.quantile_unchecked(u)
    }
}

/// Zhang's family: `F_a(x) = 1/2 + x^a` on `[0, 2^{-1/a}]`.
pub fn zhang(a: f64) -> Result<Cdf, DistError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(DistError::NonPositiveShape(a));
    }
    Cdf::inverse(0.5, vec![Segment { upper: 0.5, shape: Shape::Power { scale: 1.0, exponent: 1.0 / a } }])
}

/// The distribution with `F(0) = 1/2` whose dyadic quantiles are the given
/// sequence: `F^{-1}(1/2 + u) = a_k` for `u` in `(2^{-(k+1)}, 2^{-k}]`,
/// `2 <= k <= k_max`, `a_2` above `1/4` and `a_{k_max}` below `2^{-(k_max+1)}`.
pub fn from_ak(seq: &AkSequence, k_max: u32) -> Result<Cdf, DistError> {
    if k_max < 2 {
        return Err(DistError::InvalidSequence(format!("k_max must be at least 2, got {k_max}")));
    }
    seq.validate()?;
    let values: Vec<f64> = (2..=k_max).map(|k| seq.value(k)).collect();
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(DistError::NonMonotone);
    }
    let mut segments = Vec::with_capacity(values.len() + 1);
    let at = |k: u32| (-(k as f64)).exp2();
    segments.push(Segment { upper: at(k_max + 1), shape: Shape::Constant(values[values.len() - 1]) });
    for k in (2..=k_max).rev() {
        segments.push(Segment { upper: at(k), shape: Shape::Constant(values[(k - 2) as usize]) });
    }
    segments.push(Segment { upper: 0.5, shape: Shape::Constant(values[0]) });
    Cdf::inverse(0.5, segments)
}
