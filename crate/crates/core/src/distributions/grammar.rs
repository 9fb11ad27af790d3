//! Text form of weight distributions.
//!
//! ```text
//! dist     := "bernoulli" [":" q]            P(tau = 0) = q (default 0.5), else 1
//!           | "atoms:" v "@" c ("," v "@" c)*  values with cumulative probabilities
//!           | "zhang:" a
//!           | "ak:" sequence [";kmax=" n]
//! sequence := "constant:" c
//!           | "powerlog:" c "," beta "," gamma
//!           | "geometric:" c "," r
//!           | "explicit:" v ("," v)* ["|" sequence]
//! ```
//!
//! Numbers are printed in shortest round-trip form, so `parse(format(d)) == d`
//! bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{from_ak, zhang, AkSequence, Cdf, DistError, DEFAULT_K_MAX};

#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Bernoulli { zero_prob: f64 },
    Atoms(Vec<(f64, f64)>),
    Zhang { a: f64 },
    FromAk { seq: AkSequence, k_max: u32 },
}

impl DistSpec {
    pub fn build(&self) -> Result<Cdf, DistError> {
        match self {
            DistSpec::Bernoulli { zero_prob } => Cdf::bernoulli(*zero_prob),
            DistSpec::Atoms(a) => Cdf::atoms(a.clone()),
            DistSpec::Zhang { a } => zhang(*a),
            DistSpec::FromAk { seq, k_max } => from_ak(seq, *k_max),
        }
    }

    /// The dyadic-quantile sequence of the distribution when it has a closed
    /// form. For `ak:` specs this is the sequence as written, before capping.
    pub fn ak_sequence(&self) -> Option<AkSequence> {
        match self {
            DistSpec::FromAk { seq, .. } => Some(seq.clone()),
            DistSpec::Zhang { a } => Some(AkSequence::Geometric { c: 1.0, r: (-1.0 / a).exp2() }),
            _ => None,
        }
    }
}

fn err(input: &str, reason: impl Into<String>) -> DistError {
    DistError::Parse { input: input.to_string(), reason: reason.into() }
}

fn num(input: &str, s: &str) -> Result<f64, DistError> {
    let v: f64 = s.trim().parse().map_err(|_| err(input, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(err(input, format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn nums(input: &str, s: &str, want: usize) -> Result<Vec<f64>, DistError> {
    let v = s.split(',').map(|p| num(input, p)).collect::<Result<Vec<_>, _>>()?;
    if v.len() != want {
        return Err(err(input, format!("expected {want} parameters, found {}", v.len())));
    }
    Ok(v)
}

fn parse_seq(input: &str, s: &str) -> Result<AkSequence, DistError> {
    let (family, rest) = s.split_once(':').ok_or_else(|| err(input, "sequence needs `family:params`"))?;
    let seq = match family.trim() {
        "constant" => AkSequence::Constant { c: nums(input, rest, 1)?[0] },
        "powerlog" => {
            let p = nums(input, rest, 3)?;
            AkSequence::PowerLog { c: p[0], beta: p[1], gamma: p[2] }
        }
        "geometric" => {
            let p = nums(input, rest, 2)?;
            AkSequence::Geometric { c: p[0], r: p[1] }
        }
        "explicit" => {
            let (head, tail) = match rest.split_once('|') {
                Some((h, t)) => (h, Some(Box::new(parse_seq(input, t)?))),
                None => (rest, None),
            };
            let head = head.split(',').map(|p| num(input, p)).collect::<Result<Vec<_>, _>>()?;
            AkSequence::Explicit { head, tail }
        }
        other => return Err(err(input, format!("unknown sequence family `{other}`"))),
    };
    seq.validate()?;
    Ok(seq)
}

impl FromStr for AkSequence {
    type Err = DistError;

    fn from_str(input: &str) -> Result<Self, DistError> {
        parse_seq(input, input.trim())
    }
}

impl FromStr for DistSpec {
    type Err = DistError;

    fn from_str(input: &str) -> Result<Self, DistError> {
        let s = input.trim();
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), Some(r)),
            None => (s, None),
        };
        let spec = match (family, rest) {
            ("bernoulli", None) => DistSpec::Bernoulli { zero_prob: 0.5 },
            ("bernoulli", Some(r)) => DistSpec::Bernoulli { zero_prob: num(input, r)? },
            ("atoms", Some(r)) => {
                let atoms = r
                    .split(',')
                    .map(|pair| {
                        let (v, c) = pair.split_once('@').ok_or_else(|| err(input, "atoms are `value@cumulative`"))?;
                        Ok((num(input, v)?, num(input, c)?))
                    })
                    .collect::<Result<Vec<_>, DistError>>()?;
                DistSpec::Atoms(atoms)
            }
            ("zhang", Some(r)) => DistSpec::Zhang { a: num(input, r)? },
            ("ak", Some(r)) => {
                let (seq, k_max) = match r.split_once(";kmax=") {
                    Some((seq, k)) => {
                        let k = k.trim().parse::<u32>().map_err(|_| err(input, format!("bad kmax `{k}`")))?;
                        (seq, k)
                    }
                    None => (r, DEFAULT_K_MAX),
                };
                DistSpec::FromAk { seq: parse_seq(input, seq)?, k_max }
            }
            (f, _) => return Err(err(input, format!("unknown or incomplete distribution `{f}`"))),
        };
        spec.build()?;
        Ok(spec)
    }
}

impl fmt::Display for AkSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AkSequence::Constant { c } => write!(f, "constant:{c}"),
            AkSequence::PowerLog { c, beta, gamma } => write!(f, "powerlog:{c},{beta},{gamma}"),
            AkSequence::Geometric { c, r } => write!(f, "geometric:{c},{r}"),
            AkSequence::Explicit { head, tail } => {
                write!(f, "explicit:")?;
                for (i, v) in head.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                if let Some(t) = tail {
                    write!(f, "|{t}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Bernoulli { zero_prob } => write!(f, "bernoulli:{zero_prob}"),
            DistSpec::Atoms(atoms) => {
                write!(f, "atoms:")?;
                for (i, (v, c)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}@{c}")?;
                }
                Ok(())
            }
            DistSpec::Zhang { a } => write!(f, "zhang:{a}"),
            DistSpec::FromAk { seq, k_max } => {
                if *k_max == DEFAULT_K_MAX {
                    write!(f, "ak:{seq}")
                } else {
                    write!(f, "ak:{seq};kmax={k_max}")
                }
            }
        }
    }
}

impl Serialize for DistSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DistSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
