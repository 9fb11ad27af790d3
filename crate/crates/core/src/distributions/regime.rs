use serde::{Deserialize, Serialize};

use super::AkSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PercolationRegime {
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesVerdict {
    Converges,
    Diverges,
    Unknown,
}

/// Asymptotics of `k * a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KakBehavior {
    ToInfinity,
    LiminfZero,
    /// `0 < liminf k a_k < inf`.
    LiminfPositive { limsup_infinite: bool },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConclusionTag {
    /// Hausdorff dimension of the exceptional set is 31/36.
    HausdorffDimension,
    /// Upper Minkowski dimension equals 31/36 when `k a_k -> inf`.
    MinkowskiMatchesHausdorff,
    /// Upper Minkowski dimension of the exceptional set in `[0, x]` is 1.
    MinkowskiFull,
    /// Intermediate regime, `limsup k a_k = inf`: lower Minkowski dimension 31/36.
    IntermediateLowerMinkowski,
    /// Intermediate regime, `liminf k a_k > 0`: upper Minkowski dimension 31/36 for small x.
    IntermediateUpperSmallX,
    /// Intermediate regime, `liminf k a_k < inf`: upper Minkowski dimension 1 for large x.
    IntermediateUpperLargeX,
    /// No exceptional times when the weighted sum converges.
    NoExceptionalTimes,
    /// Fixed-time dichotomy: `rho < inf` a.s.
    FixedTimeFinite,
    /// Fixed-time dichotomy: `rho = inf` a.s.
    FixedTimeInfinite,
    /// The weighted-sum criterion does not apply; dynamical behaviour is open.
    DynamicsUndecided,
}

impl ConclusionTag {
    /// Whether the tag reports a proved dynamical statement (as opposed to
    /// the fixed-time dichotomy or an explicit "undecided").
    pub fn is_theorem(&self) -> bool {
        !matches!(self, ConclusionTag::FixedTimeFinite | ConclusionTag::FixedTimeInfinite | ConclusionTag::DynamicsUndecided)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub tag: ConclusionTag,
    pub statement: String,
}

/// Heuristic partial sums `sum_{k=2}^{K} a_k` and `sum_{k=2}^{K} k^{7/8} a_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSums {
    pub k: u64,
    pub sum_ak: f64,
    pub sum_k78_ak: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: PercolationRegime,
    pub sum_ak: SeriesVerdict,
    pub sum_k78_ak: SeriesVerdict,
    pub kak_behavior: KakBehavior,
    pub conclusions: Vec<Conclusion>,
    pub notes: Vec<String>,
    /// Present only when some verdict is unknown; labeled heuristic.
    pub heuristic_partial_sums: Vec<PartialSums>,
}

impl RegimeReport {
    pub fn has(&self, tag: ConclusionTag) -> bool {
        self.conclusions.iter().any(|c| c.tag == tag)
    }

    pub fn tags(&self) -> Vec<ConclusionTag> {
        self.conclusions.iter().map(|c| c.tag).collect()
    }
}

const K78: f64 = 7.0 / 8.0;

/// Verdict for `sum_k k^s a_k` (`s >= 0`).
fn weighted_series(seq: &AkSequence, s: f64) -> SeriesVerdict {
    match seq {
        AkSequence::Constant { c } => {
            if *c == 0.0 {
                SeriesVerdict::Converges
            } else {
                SeriesVerdict::Diverges
            }
        }
        AkSequence::PowerLog { c, beta, gamma } => {
            if *c == 0.0 {
                return SeriesVerdict::Converges;
            }
            // sum k^{-p} (log k)^{-gamma} converges iff p > 1, or p = 1 and gamma > 1
            let threshold = 1.0 + s;
            if *beta > threshold || (*beta == threshold && *gamma > 1.0) {
                SeriesVerdict::Converges
            } else {
                SeriesVerdict::Diverges
            }
        }
        AkSequence::Geometric { c, r } => {
            if *c == 0.0 || *r < 1.0 {
                SeriesVerdict::Converges
            } else {
                SeriesVerdict::Diverges
            }
        }
        AkSequence::Explicit { tail, .. } => match tail {
            Some(t) => weighted_series(t, s),
            None => SeriesVerdict::Unknown,
        },
    }
}

fn kak(seq: &AkSequence) -> KakBehavior {
    match seq {
        AkSequence::Constant { c } => {
            if *c == 0.0 {
                KakBehavior::LiminfZero
            } else {
                KakBehavior::ToInfinity
            }
        }
        AkSequence::PowerLog { c, beta, gamma } => {
            if *c == 0.0 || *beta > 1.0 || (*beta == 1.0 && *gamma > 0.0) {
                KakBehavior::LiminfZero
            } else if *beta < 1.0 || *gamma < 0.0 {
                KakBehavior::ToInfinity
            } else {
                KakBehavior::LiminfPositive { limsup_infinite: false }
            }
        }
        AkSequence::Geometric { c, r } => {
            if *c == 0.0 || *r < 1.0 {
                KakBehavior::LiminfZero
            } else {
                KakBehavior::ToInfinity
            }
        }
        AkSequence::Explicit { tail, .. } => match tail {
            Some(t) => kak(t),
            None => KakBehavior::Unknown,
        },
    }
}

fn partial_sums(seq: &AkSequence) -> Vec<PartialSums> {
    let mut out = Vec::new();
    let (mut s0, mut s1) = (0.0, 0.0);
    let mut next = 4u64;
    for k in 2..=(1u64 << 20) {
        let a = seq.value(k as u32);
        s0 += a;
        s1 += (k as f64).powf(K78) * a;
        if k == next {
            out.push(PartialSums { k, sum_ak: s0, sum_k78_ak: s1 });
            next *= 4;
        }
    }
    out
}

fn conclusion(tag: ConclusionTag, statement: &str) -> Conclusion {
    Conclusion { tag, statement: statement.to_string() }
}

/// Symbolic analysis of a weight distribution with `F(0) = f0` and dyadic
/// quantiles `seq`, and the dynamical conclusions that follow.
pub fn classify_regime(f0: f64, seq: &AkSequence) -> RegimeReport {
    let regime = if f0 < 0.5 {
        PercolationRegime::Subcritical
    } else if f0 > 0.5 {
        PercolationRegime::Supercritical
    } else {
        PercolationRegime::Critical
    };
    let sum_ak = weighted_series(seq, 0.0);
    let sum_k78_ak = weighted_series(seq, K78);
    let kak_behavior = kak(seq);
    let mut conclusions = Vec::new();
    let mut notes = Vec::new();

    if regime != PercolationRegime::Critical {
        notes.push(format!(
            "F(0) = {f0} is not 1/2; the dynamical statements concern critical weights only and none are emitted"
        ));
    } else {
        match sum_ak {
            SeriesVerdict::Diverges => {
                conclusions.push(conclusion(
                    ConclusionTag::FixedTimeInfinite,
                    "rho_t = inf at every fixed time t, almost surely",
                ));
                conclusions.push(conclusion(
                    ConclusionTag::HausdorffDimension,
                    "the set of times with rho_t < inf has Hausdorff dimension 31/36, almost surely",
                ));
                match kak_behavior {
                    KakBehavior::ToInfinity => conclusions.push(conclusion(
                        ConclusionTag::MinkowskiMatchesHausdorff,
                        "for every x > 0 the exceptional set in [0, x] has upper Minkowski dimension 31/36, almost surely",
                    )),
                    KakBehavior::LiminfZero => conclusions.push(conclusion(
                        ConclusionTag::MinkowskiFull,
                        "for every x > 0 the exceptional set in [0, x] has upper Minkowski dimension 1, almost surely",
                    )),
                    KakBehavior::LiminfPositive { limsup_infinite } => {
                        if limsup_infinite {
                            conclusions.push(conclusion(
                                ConclusionTag::IntermediateLowerMinkowski,
                                "for every x > 0 the exceptional set in [0, x] has lower Minkowski dimension 31/36, almost surely",
                            ));
                        }
                        conclusions.push(conclusion(
                            ConclusionTag::IntermediateUpperSmallX,
                            "for all sufficiently small x > 0 the exceptional set in [0, x] has upper Minkowski dimension 31/36, almost surely",
                        ));
                        conclusions.push(conclusion(
                            ConclusionTag::IntermediateUpperLargeX,
                            "for all sufficiently large x the exceptional set in [0, x] has upper Minkowski dimension 1, almost surely",
                        ));
                    }
                    KakBehavior::Unknown => {
                        notes.push("behaviour of k a_k is unknown; no Minkowski statement emitted".into());
                    }
                }
            }
            SeriesVerdict::Converges => {
                conclusions.push(conclusion(
                    ConclusionTag::FixedTimeFinite,
                    "rho_t < inf at every fixed time t, almost surely",
                ));
                match sum_k78_ak {
                    SeriesVerdict::Converges => conclusions.push(conclusion(
                        ConclusionTag::NoExceptionalTimes,
                        "almost surely there are no exceptional times: rho_t < inf for all t",
                    )),
                    SeriesVerdict::Diverges => conclusions.push(conclusion(
                        ConclusionTag::DynamicsUndecided,
                        "sum k^(7/8) a_k diverges, so the no-exceptional-times criterion does not apply; dynamical behaviour not decided",
                    )),
                    SeriesVerdict::Unknown => {
                        notes.push("convergence of sum k^(7/8) a_k is unknown; dynamical behaviour not decided".into());
                    }
                }
            }
            SeriesVerdict::Unknown => {
                notes.push("convergence of sum a_k is unknown for this tail; no conclusions emitted".into());
            }
        }
        if sum_ak == SeriesVerdict::Converges && sum_k78_ak == SeriesVerdict::Diverges {
            notes.push(
                "the exponent 7/8 can be lowered slightly by a refined argument; the improvement is not quantified and not used here"
                    .into(),
            );
        }
        notes.push(
            "growth asymptotics additionally assume E tau^alpha < inf for some alpha > 1/6; this moment condition is not checked"
                .into(),
        );
        if sum_ak == SeriesVerdict::Diverges {
            notes.push("the conjectured dimension of the exceptional set on the upper Minkowski side is 5/6 in some regimes; not asserted".into());
        }
    }

    let unknown = sum_ak == SeriesVerdict::Unknown
        || sum_k78_ak == SeriesVerdict::Unknown
        || kak_behavior == KakBehavior::Unknown;
    let heuristic_partial_sums = if unknown { partial_sums(seq) } else { Vec::new() };
    if unknown {
        notes.push("partial sums are heuristic diagnostics only; they cannot decide convergence".into());
    }

    RegimeReport { regime, sum_ak, sum_k78_ak, kak_behavior, conclusions, notes, heuristic_partial_sums }
}
