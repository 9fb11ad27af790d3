//! Batch front end: one subcommand per run, flags over an optional config
//! file (TOML, or JSON such as the `config` field of a previous summary).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::distributions::{classify_regime, AkSequence, Cdf, DistError, DistSpec};
use crate::dynamics::{covering_number, dimension_estimate, exceptional_set, scan_statistic, DynError, DynamicalField, PointToBox};
use crate::experiments::{self as ex, box_rect, parallelogram, ExpError, Sampling};
use crate::fit::ordinary_line;
use crate::io::{Summary, Table};
use crate::labels::LabelSource;
use crate::lattice::Region;
use crate::percolation::{ArmSpec, PercError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Crossing,
    Corrlen,
    Pn,
    Arm,
    ArmExponent,
    Qm,
    Growth,
    TailProfile,
    CountVn,
    DynScan,
    DynDim,
    CoveringSurvey,
    IntervalCount,
    HausdorffCover,
    NoiseDecay,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Every run parameter. Lists (`ps`, `eps`, `t`, `c`, `grid`) are comma
/// separated; an item `2^a..2^b` expands to the powers of two in between and
/// `a..b` to the doublings of `a` up to `b`.
#[derive(Debug, Clone, Default, PartialEq, clap::Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[arg(skip)]
    pub command: Option<Command>,
    /// Weight distribution, e.g. `bernoulli`, `zhang:2`, `ak:powerlog:1,1,0`.
    #[arg(long)]
    pub dist: Option<String>,
    /// `F(0)` for `classify`.
    #[arg(long)]
    pub f0: Option<f64>,
    /// `a_k` sequence for `classify`, e.g. `constant:1`.
    #[arg(long)]
    pub ak: Option<String>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    /// Scale base of the Hausdorff covering.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub big_l: Option<i64>,
    /// Number of time slots for `interval-count`.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub big_m: Option<i64>,
    /// Number of scales for `hausdorff-cover`.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub lhat: Option<i64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub ps: Option<String>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Time horizon.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    /// Arm specification: open1, closed1, half1, poly2, mono2, alt4.
    #[arg(long)]
    pub spec: Option<String>,
    /// `m:r:n` triples, comma separated.
    #[arg(long)]
    pub triples: Option<String>,
    /// `parallelogram` (`[0,n]^2`) or `box` (`[-n,n]^2`).
    #[arg(long)]
    pub rect: Option<String>,
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub n_max: Option<i64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub aux_samples: Option<u64>,
    #[arg(long)]
    pub max_samples: Option<u64>,
    #[arg(long)]
    pub target_rel: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Largest lattice region a run may allocate.
    #[arg(long)]
    pub max_vertices: Option<u64>,
    /// Directory for `<command>.csv` and `<command>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "critfpp", version, about = "Critical first-passage percolation experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Config file (TOML, or JSON); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: RunConfig,
}

/// Failure of a run, by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Exit 2.
    Config(String),
    /// Exit 3.
    Budget(String),
    /// Exit 1.
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "invalid-config",
            CliError::Budget(_) => "budget-exceeded",
            CliError::Runtime(_) => "runtime",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<ExpError> for CliError {
    fn from(e: ExpError) -> Self {
        match e {
            ExpError::Budget { .. } => CliError::Budget(e.to_string()),
            ExpError::InvalidParameter(_) | ExpError::Dist(_) | ExpError::Lattice(_) => CliError::Config(e.to_string()),
            ExpError::Perc(PercError::UnsupportedArms(_) | PercError::BadProbability(_)) => CliError::Config(e.to_string()),
            ExpError::Dyn(d) => d.into(),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<DynError> for CliError {
    fn from(e: DynError) -> Self {
        match e {
            DynError::NonPositiveHorizon(_) | DynError::BadScale(_) | DynError::TooFewScales { .. } | DynError::BadIntervals(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<PercError> for CliError {
    fn from(e: PercError) -> Self {
        ExpError::from(e).into()
    }
}

impl From<crate::fpp::FppError> for CliError {
    fn from(e: crate::fpp::FppError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<crate::lattice::LatticeError> for CliError {
    fn from(e: crate::lattice::LatticeError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_num(item: &str) -> Result<f64, CliError> {
    let item = item.trim();
    if let Some(e) = item.strip_prefix("2^") {
        let e: i32 = e.parse().map_err(|_| bad(format!("bad exponent in `{item}`")))?;
        return Ok(2f64.powi(e));
    }
    item.parse::<f64>().map_err(|_| bad(format!("bad number `{item}`")))
}

/// Parses a list such as `0,2^-8..2^-2` or `8..256`.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|i| !i.trim().is_empty()) {
        match item.split_once("..") {
            Some((a, b)) if a.trim().starts_with("2^") && b.trim().starts_with("2^") => {
                let ea: i32 = a.trim()[2..].parse().map_err(|_| bad(format!("bad range `{item}`")))?;
                let eb: i32 = b.trim()[2..].parse().map_err(|_| bad(format!("bad range `{item}`")))?;
                let step = if eb >= ea { 1 } else { -1 };
                let mut e = ea;
                loop {
                    out.push(2f64.powi(e));
                    if e == eb {
                        break;
                    }
                    e += step;
                }
            }
            Some((a, b)) => {
                let (a, b) = (parse_num(a)?, parse_num(b)?);
                if !(a > 0.0 && b >= a) {
                    return Err(bad(format!("range `{item}` must be increasing and positive")));
                }
                let mut v = a;
                while v <= b {
                    out.push(v);
                    v *= 2.0;
                }
            }
            None => out.push(parse_num(item)?),
        }
    }
    if out.is_empty() {
        return Err(bad(format!("empty list `{s}`")));
    }
    Ok(out)
}

fn int_list(s: &str) -> Result<Vec<i32>, CliError> {
    parse_list(s)?
        .into_iter()
        .map(|v| if v.fract() == 0.0 && v.abs() < 1e9 { Ok(v as i32) } else { Err(bad(format!("`{v}` is not an integer"))) })
        .collect()
}

fn to_i32(name: &str, v: i64) -> Result<i32, CliError> {
    i32::try_from(v).map_err(|_| bad(format!("{name} = {v} out of range")))
}

fn to_u32(name: &str, v: i64) -> Result<u32, CliError> {
    u32::try_from(v).map_err(|_| bad(format!("{name} = {v} must be a nonnegative integer")))
}

/// What a subcommand hands back for output.
struct Report {
    params: Value,
    estimate: Option<f64>,
    stderr: Option<f64>,
    n_samples: u64,
    status: &'static str,
    table: Table,
    details: Value,
}

impl Report {
    fn new(params: Value, table: Table) -> Self {
        Report { params, estimate: None, stderr: None, n_samples: 0, status: "ok", table, details: Value::Null }
    }

    fn with_estimate(mut self, e: &ex::EstimatorResult) -> Self {
        self.estimate = Some(e.estimate);
        self.stderr = Some(e.stderr);
        self.n_samples = e.n_samples;
        self
    }
}

impl RunConfig {
    fn dist(&mut self) -> Result<(DistSpec, Cdf), CliError> {
        let text = self.dist.get_or_insert_with(|| "bernoulli".into()).clone();
        let spec: DistSpec = text.parse()?;
        let cdf = spec.build()?;
        Ok((spec, cdf))
    }

    fn budget(&mut self, vertices: u64) -> Result<(), CliError> {
        let limit = *self.max_vertices.get_or_insert(1 << 23);
        if vertices > limit {
            return Err(CliError::Budget(format!("needs {vertices} vertices, budget is {limit}")));
        }
        Ok(())
    }

    fn arm_spec(&mut self) -> Result<ArmSpec, CliError> {
        Ok(self.spec.get_or_insert_with(|| "open1".into()).parse()?)
    }
}

fn square(radius: i64) -> u64 {
    let side = 2 * radius.unsigned_abs() + 1;
    side * side
}

fn est_cells(e: &ex::EstimatorResult) -> Vec<crate::io::Cell> {
    vec![e.estimate.into(), e.stderr.into(), (e.n_samples as i64).into()]
}

fn dispatch(cmd: Command, c: &mut RunConfig) -> Result<Report, CliError> {
    let seed = *c.seed.get_or_insert(1);
    match cmd {
        Command::Classify => {
            let f0 = *c.f0.get_or_insert(0.5);
            let seq: AkSequence = match (&c.ak, &c.dist) {
                (Some(a), _) => a.parse()?,
                (None, Some(d)) => d.parse::<DistSpec>()?.ak_sequence().ok_or_else(|| bad("distribution has no a_k sequence; pass --ak"))?,
                (None, None) => return Err(bad("classify needs --ak or --dist")),
            };
            if !(0.0..=1.0).contains(&f0) {
                return Err(bad(format!("f0 = {f0} is not in [0, 1]")));
            }
            let report = classify_regime(f0, &seq);
            let mut t = Table::new(&["tag", "theorem", "statement"]);
            for cl in &report.conclusions {
                let tag = serde_json::to_value(cl.tag).expect("tag").as_str().unwrap_or_default().to_string();
                t.push(vec![tag.into(), cl.tag.is_theorem().into(), cl.statement.clone().into()]);
            }
            let mut r = Report::new(json!({"f0": f0, "ak": seq.to_string()}), t);
            r.details = serde_json::to_value(&report).expect("report serializes");
            Ok(r)
        }
        Command::Crossing => {
            let n = to_i32("n", *c.n.get_or_insert(32))?;
            let kind = c.rect.get_or_insert_with(|| "parallelogram".into()).clone();
            let rect = match kind.as_str() {
                "parallelogram" => parallelogram(n),
                "box" => box_rect(n),
                other => return Err(bad(format!("unknown rectangle `{other}`"))),
            };
            c.budget(square(n as i64))?;
            let ps = match (&c.ps, c.p) {
                (Some(list), _) => parse_list(list)?,
                (None, Some(p)) => vec![p],
                (None, None) => vec![*c.p.get_or_insert(0.5)],
            };
            let samples = *c.samples.get_or_insert(10_000);
            let curve = ex::crossing_curve(&ps, &rect, samples, seed)?;
            let mut t = Table::new(&["p", "estimate", "stderr", "n_samples"]);
            for (p, e) in &curve {
                let mut row = vec![(*p).into()];
                row.extend(est_cells(e));
                t.push(row);
            }
            Ok(Report::new(json!({"n": n, "rect": kind, "ps": ps}), t).with_estimate(&curve[0].1))
        }
        Command::Corrlen => {
            let p = *c.p.get_or_insert(0.6);
            let eps0 = *c.eps0.get_or_insert(0.05);
            let n_max = to_i32("n-max", *c.n_max.get_or_insert(256))?;
            c.budget(square(n_max as i64))?;
            let samples = *c.samples.get_or_insert(1000);
            let cl = ex::correlation_length(p, eps0, n_max, samples, seed)?;
            let mut t = Table::new(&["n", "estimate", "stderr", "n_samples"]);
            for (n, e) in &cl.evaluated {
                let mut row = vec![(*n).into()];
                row.extend(est_cells(e));
                t.push(row);
            }
            let mut r = Report::new(json!({"p": p, "eps0": eps0, "n_max": n_max}), t);
            r.estimate = cl.estimate.map(f64::from);
            r.n_samples = samples;
            r.status = if cl.estimate.is_some() { "ok" } else { "unresolved" };
            Ok(r)
        }
        Command::Pn => {
            let grid = match (&c.grid, c.n) {
                (Some(g), _) => int_list(g)?,
                (None, Some(n)) => vec![to_i32("n", n)?],
                (None, None) => int_list(c.grid.get_or_insert_with(|| "8..128".into()))?,
            };
            let eps0 = *c.eps0.get_or_insert(0.05);
            c.budget(square(*grid.iter().max().expect("nonempty") as i64))?;
            let samples = *c.samples.get_or_insert(2000);
            let mut t = Table::new(&["n", "p_hat", "lower", "upper", "n_samples"]);
            let mut pts = Vec::new();
            for (i, &n) in grid.iter().enumerate() {
                let e = ex::pn_estimate(n, eps0, samples, ex::stream(seed, i as u64).seed())?;
                t.push(vec![n.into(), e.p_hat.into(), e.bracket.0.into(), e.bracket.1.into(), (samples as i64).into()]);
                pts.push(e);
            }
            let mut r = Report::new(json!({"grid": grid, "eps0": eps0}), t);
            r.n_samples = samples;
            if pts.len() >= 2 {
                let x: Vec<f64> = pts.iter().map(|e| (e.n as f64).ln()).collect();
                let y: Vec<f64> = pts.iter().map(|e| (e.p_hat - 0.5).max(f64::MIN_POSITIVE).ln()).collect();
                if let Some(fit) = ordinary_line(&x, &y) {
                    r.estimate = Some(fit.slope);
                    r.stderr = Some(fit.slope_stderr);
                    r.details = json!({"slope_of_log_excess": fit});
                }
            } else {
                r.estimate = Some(pts[0].p_hat);
            }
            Ok(r)
        }
        Command::Arm => {
            let spec = c.arm_spec()?;
            let m = to_i32("m", *c.m.get_or_insert(0))?;
            let n = to_i32("n", *c.n.get_or_insert(16))?;
            let p = *c.p.get_or_insert(0.5);
            c.budget(square(n as i64))?;
            let samples = *c.samples.get_or_insert(10_000);
            let e = ex::arm_probability(&spec, m, n, p, samples, seed)?;
            let mut t = Table::new(&["spec", "m", "n", "p", "estimate", "stderr", "n_samples"]);
            let mut row = vec![spec.to_string().into(), m.into(), n.into(), p.into()];
            row.extend(est_cells(&e));
            t.push(row);
            Ok(Report::new(json!({"spec": spec.to_string(), "m": m, "n": n, "p": p}), t).with_estimate(&e))
        }
        Command::ArmExponent => {
            let spec = c.arm_spec()?;
            let m = to_i32("m", *c.m.get_or_insert(0))?;
            let grid = int_list(c.grid.get_or_insert_with(|| "8..256".into()))?;
            let p = *c.p.get_or_insert(0.5);
            c.budget(square(*grid.iter().max().expect("nonempty") as i64))?;
            let sampling = Sampling {
                min_samples: *c.samples.get_or_insert(2000),
                max_samples: *c.max_samples.get_or_insert(200_000),
                target_rel: *c.target_rel.get_or_insert(0.1),
            };
            let a = ex::arm_exponent(&spec, m, &grid, p, sampling, seed)?;
            let mut t = Table::new(&["n", "hits", "estimate", "stderr", "n_samples"]);
            for pt in &a.points {
                let mut row = vec![pt.n.into(), (pt.hits as i64).into()];
                row.extend(est_cells(&pt.estimate));
                t.push(row);
            }
            let mut r = Report::new(json!({"spec": a.spec, "m": m, "grid": grid, "p": p}), t);
            r.estimate = Some(a.exponent);
            r.stderr = Some(a.fit.slope_stderr);
            r.n_samples = a.points[0].estimate.n_samples;
            r.details = json!({"fit": a.fit});
            Ok(r)
        }
        Command::Qm => {
            let spec = c.arm_spec()?;
            let text = c.triples.get_or_insert_with(|| "2:8:32".into()).clone();
            let triples = text
                .split(',')
                .map(|tr| {
                    let v: Vec<i32> = tr.split(':').map(|x| x.trim().parse::<i32>()).collect::<Result<_, _>>().map_err(|_| bad(format!("bad triple `{tr}`")))?;
                    match v[..] {
                        [a, b, d] => Ok((a, b, d)),
                        _ => Err(bad(format!("bad triple `{tr}`"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            c.budget(square(triples.iter().map(|t| t.2).max().unwrap_or(0) as i64))?;
            let p = *c.p.get_or_insert(0.5);
            let samples = *c.samples.get_or_insert(10_000);
            let rows = ex::quasimultiplicativity_check(&spec, &triples, p, samples, seed)?;
            let mut t = Table::new(&["m", "r", "n", "pi_mn", "pi_mr", "pi_rn", "ratio", "ratio_stderr"]);
            for q in &rows {
                t.push(vec![
                    q.m.into(),
                    q.r.into(),
                    q.n.into(),
                    q.pi_mn.estimate.into(),
                    q.pi_mr.estimate.into(),
                    q.pi_rn.estimate.into(),
                    q.ratio.into(),
                    q.ratio_stderr.into(),
                ]);
            }
            let mut r = Report::new(json!({"spec": spec.to_string(), "triples": text, "p": p}), t);
            r.estimate = Some(rows[0].ratio);
            r.stderr = Some(rows[0].ratio_stderr);
            r.n_samples = samples;
            Ok(r)
        }
        Command::Growth => {
            let (spec, cdf) = c.dist()?;
            let radii = int_list(c.grid.get_or_insert_with(|| "16..256".into()))?;
            c.budget(square(*radii.iter().max().expect("nonempty") as i64))?;
            let samples = *c.samples.get_or_insert(200);
            let rows = ex::growth_curve(&cdf, &radii, samples, seed)?;
            let mut t = Table::new(&["n", "mean", "stderr", "ak_sum", "ratio", "increment", "increment_stderr"]);
            for g in &rows {
                let (inc, inc_se) = g.increment.map_or((f64::NAN, f64::NAN), |i| (i.estimate, i.stderr));
                t.push(vec![g.n.into(), g.mean.estimate.into(), g.mean.stderr.into(), g.ak_sum.into(), g.ratio.into(), inc.into(), inc_se.into()]);
            }
            Ok(Report::new(json!({"dist": spec.to_string(), "radii": radii}), t).with_estimate(&rows.last().expect("nonempty").mean))
        }
        Command::TailProfile => {
            let (spec, cdf) = c.dist()?;
            let n = to_u32("n", *c.n.get_or_insert(3))?;
            let p = *c.p.get_or_insert(0.75);
            let eta = *c.eta.get_or_insert(11.0 / 6.0);
            c.budget(square(1i64 << (n + 2).min(40)))?;
            let samples = *c.samples.get_or_insert(200);
            let tp = ex::tail_profile(&cdf, n, p, eta, samples, seed)?;
            let mut t = Table::new(&["u", "annulus", "rect", "reference"]);
            for row in &tp.rows {
                t.push(vec![row.u.into(), row.annulus.into(), row.rect.into(), row.reference.into()]);
            }
            let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "p": p, "eta": eta}), t).with_estimate(&tp.annulus);
            r.details = json!({"scale": tp.scale, "annulus": tp.annulus, "rect": tp.rect});
            Ok(r)
        }
        Command::CountVn => {
            let n = to_u32("n", *c.n.get_or_insert(2))?;
            let p = *c.p.get_or_insert(0.6);
            if n > 20 {
                return Err(CliError::Budget(format!("n = {n} is too large")));
            }
            let lhat = to_i32("lhat", *c.lhat.get_or_insert(1i64 << n))?;
            c.budget(((8u64 << n) + 1) * ((2u64 << n) + 1))?;
            let samples = *c.samples.get_or_insert(50);
            let e = ex::vn_survey(n, p, lhat, samples, seed)?;
            let mut t = Table::new(&["n", "p", "lhat", "estimate", "stderr", "n_samples"]);
            let mut row = vec![n.into(), p.into(), lhat.into()];
            row.extend(est_cells(&e));
            t.push(row);
            Ok(Report::new(json!({"n": n, "p": p, "lhat": lhat}), t).with_estimate(&e))
        }
        Command::DynScan | Command::DynDim => {
            let (spec, cdf) = c.dist()?;
            let n = to_u32("n", *c.n.get_or_insert(5))?;
            let s = *c.s.get_or_insert(1.0);
            if n > 20 {
                return Err(CliError::Budget(format!("n = {n} is too large")));
            }
            let radius = 1i32 << n;
            c.budget(square(radius as i64))?;
            let d = DynamicalField::generate(Region::Box { radius }, s, cdf, LabelSource::new(seed))?;
            let traj = scan_statistic(&d, &mut PointToBox::new(radius)?)?;
            if cmd == Command::DynScan {
                let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "s": s}), traj.to_table());
                r.n_samples = 1;
                if let Some(x) = c.x {
                    r.estimate = Some(exceptional_set(&traj, x).measure());
                }
                return Ok(r);
            }
            let x = *c.x.get_or_insert(0.0);
            let eps = parse_list(c.eps.get_or_insert_with(|| "2^-3..2^-9".into()))?;
            let set = exceptional_set(&traj, x);
            let mut t = Table::new(&["eps", "count", "ratio"]);
            for &e in &eps {
                let k = covering_number(&set, e, (0.0, s))?;
                t.push(vec![e.into(), (k as i64).into(), ((k as f64).ln() / (1.0 / e).ln()).into()]);
            }
            let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "s": s, "x": x, "eps": eps}), t);
            r.n_samples = 1;
            match dimension_estimate(&set, &eps) {
                Ok(d) => {
                    r.estimate = Some(d.slope);
                    r.stderr = Some(d.fit.slope_stderr);
                }
                Err(DynError::EmptySet) => r.status = "empty-set",
                Err(e) => return Err(e.into()),
            }
            r.details = json!({"measure": set.measure(), "pieces": set.intervals().len()});
            Ok(r)
        }
        Command::CoveringSurvey => {
            let (spec, cdf) = c.dist()?;
            let n = to_u32("n", *c.n.get_or_insert(4))?;
            let x = *c.x.get_or_insert(0.0);
            let s = *c.s.get_or_insert(1.0);
            let eps = parse_list(c.eps.get_or_insert_with(|| "2^-2..2^-6".into()))?;
            if n > 20 {
                return Err(CliError::Budget(format!("n = {n} is too large")));
            }
            c.budget(square(1i64 << n))?;
            let samples = *c.samples.get_or_insert(100);
            let aux = *c.aux_samples.get_or_insert(1000);
            let cs = ex::covering_survey(&cdf, n, x, s, &eps, samples, seed, aux)?;
            let mut t = Table::new(&["eps", "mean_count", "stderr", "y", "shape", "in_regime"]);
            for row in &cs.rows {
                let regime = row.in_regime.map_or("unchecked".to_string(), |b| b.to_string());
                t.push(vec![row.eps.into(), row.count.estimate.into(), row.count.stderr.into(), row.y.into(), row.shape.into(), regime.into()]);
            }
            let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "x": x, "s": s, "eps": eps}), t).with_estimate(&cs.measure);
            r.details = json!({"static_prob": cs.static_prob, "fubini_gap": cs.fubini_gap, "pi1": cs.pi1, "fitted_c": cs.fitted_c});
            Ok(r)
        }
        Command::IntervalCount => {
            let (spec, cdf) = c.dist()?;
            let n = to_u32("n", *c.n.get_or_insert(4))?;
            let m = to_u32("M", *c.big_m.get_or_insert(64))?;
            let cs = parse_list(c.c.get_or_insert_with(|| "0.05,0.1,0.2,0.5,1".into()))?;
            if n > 20 {
                return Err(CliError::Budget(format!("n = {n} is too large")));
            }
            c.budget(square(2i64 << n))?;
            let samples = *c.samples.get_or_insert(200);
            let aux = *c.aux_samples.get_or_insert(2000);
            let ic = ex::interval_count_statistic(&cdf, n, m, &cs, samples, seed, aux)?;
            let mut t = Table::new(&["c", "probability", "stderr", "n_samples"]);
            for (cv, e) in &ic.rows {
                let mut row = vec![(*cv).into()];
                row.extend(est_cells(e));
                t.push(row);
            }
            let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "M": m, "c": cs}), t).with_estimate(&ic.mean_count);
            r.details = json!({
                "m_times_p0": ic.m_times_p0,
                "pi1": ic.pi1,
                "count_condition": ic.count_condition,
                "length_condition": ic.length_condition,
                "histogram": ic.histogram,
            });
            if !(ic.count_condition && ic.length_condition) {
                r.status = "outside-conditions";
            }
            Ok(r)
        }
        Command::HausdorffCover => {
            let l = to_i32("L", *c.big_l.get_or_insert(2))?;
            let k = *c.k.get_or_insert(5);
            let x = *c.x.get_or_insert(0.5);
            let samples = *c.samples.get_or_insert(500);
            let aux = *c.aux_samples.get_or_insert(1000);
            let eps0 = *c.eps0.get_or_insert(0.05);
            if !(2..=64).contains(&l) || (l as f64).powi(k as i32) > 4096.0 {
                return Err(CliError::Budget(format!("L^k = {l}^{k} is too large")));
            }
            c.budget(square((l as i64).pow(k)))?;
            let ps = match &c.ps {
                Some(list) => parse_list(list)?,
                None => {
                    let mut v = Vec::new();
                    for j in 1..=k {
                        let size = l.pow(j).max(2);
                        v.push(ex::pn_estimate(size, eps0, aux, ex::stream(seed, 100 + j as u64).seed())?.p_hat);
                    }
                    v
                }
            };
            if ps.len() != k as usize {
                return Err(bad(format!("need {k} values in ps, got {}", ps.len())));
            }
            let hs = ex::hausdorff_cover_survey(l, &ps, x, samples, seed, aux)?;
            let mut t = Table::new(&["k", "p", "q", "delta", "h", "p_b", "p_b_stderr", "pi1", "ratio"]);
            for row in &hs.rows {
                t.push(vec![
                    row.k.into(),
                    row.p.into(),
                    row.q.into(),
                    row.delta.into(),
                    row.h.into(),
                    row.p_b.estimate.into(),
                    row.p_b.stderr.into(),
                    row.pi1.estimate.into(),
                    row.ratio.into(),
                ]);
            }
            let mut r = Report::new(json!({"L": l, "k": k, "x": x, "ps": ps}), t).with_estimate(&hs.wbar);
            r.details = json!({"fitted_c": hs.fitted_c, "p_wbar_at_least_x": hs.p_wbar_at_least_x, "histogram": hs.histogram});
            Ok(r)
        }
        Command::NoiseDecay => {
            let (spec, cdf) = c.dist()?;
            let n = to_u32("n", *c.n.get_or_insert(6))?;
            let ts = parse_list(c.t.get_or_insert_with(|| "0,2^-8..2^-2".into()))?;
            if n > 20 {
                return Err(CliError::Budget(format!("n = {n} is too large")));
            }
            c.budget(square(1i64 << n))?;
            let samples = *c.samples.get_or_insert(2000);
            let nd = ex::noise_decay(&cdf, n, &ts, samples, seed)?;
            let mut t = Table::new(&["t", "joint", "stderr", "ratio", "ratio_stderr"]);
            for row in &nd.rows {
                t.push(vec![row.t.into(), row.joint.estimate.into(), row.joint.stderr.into(), row.ratio.into(), row.ratio_stderr.into()]);
            }
            let mut r = Report::new(json!({"dist": spec.to_string(), "n": n, "t": ts}), t);
            r.n_samples = samples;
            if let Some(f) = &nd.slope {
                r.estimate = Some(f.slope);
                r.stderr = Some(f.slope_stderr);
            }
            r.details = json!({"p_w0": nd.p_w0, "fit": nd.slope});
            Ok(r)
        }
    }
}

fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(map.into_iter().filter(|(_, v)| !v.is_null()).collect()),
        other => other,
    }
}

fn load_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let v: Value = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        // accept a whole summary as well as a bare config
        let v = if v.get("operation").is_some() { v.get("config").cloned().unwrap_or(Value::Null) } else { v };
        serde_json::from_value(v).map_err(|e| bad(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }
}

/// Flags win over the file.
fn merge(file: RunConfig, flags: RunConfig) -> RunConfig {
    let mut base = serde_json::to_value(file).expect("config serializes");
    let over = serde_json::to_value(flags).expect("config serializes");
    if let (Value::Object(b), Value::Object(o)) = (&mut base, over) {
        for (k, v) in o {
            if !v.is_null() {
                b.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).expect("merged config deserializes")
}

/// Parses, runs and writes outputs. Returns the resolved config and the summary.
pub fn execute(cli: Cli) -> Result<(RunConfig, Summary, Table), CliError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let mut flags = cli.params;
    flags.command = cli.command;
    let mut cfg = merge(file, flags);
    let cmd = cfg.command.ok_or_else(|| bad("no subcommand given"))?;
    let threads = *cfg.threads.get_or_insert(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Runtime(e.to_string()))?;
    let report = pool.install(|| dispatch(cmd, &mut cfg))?;
    cfg.format.get_or_insert(Format::Csv);
    let config = strip_nulls(serde_json::to_value(&cfg).expect("config serializes"));
    let mut details = report.details;
    if details.is_null() {
        details = json!({});
    }
    if let Value::Object(map) = &mut details {
        map.insert("rows".into(), report.table.to_json());
    }
    let summary = Summary {
        operation: cmd.name(),
        params: report.params,
        estimate: report.estimate.filter(|e| e.is_finite()),
        stderr: report.stderr.filter(|e| e.is_finite()),
        n_samples: report.n_samples,
        seed: cfg.seed.unwrap_or(1),
        status: report.status.to_string(),
        config,
        details,
    };
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
        let name = cmd.name();
        report.table.write_csv(&dir.join(format!("{name}.csv"))).map_err(|e| CliError::Runtime(e.to_string()))?;
        let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        std::fs::write(dir.join(format!("{name}.json")), text + "\n").map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok((cfg, summary, report.table))
}

/// Entry point used by the binary: returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", json!({"status": "error", "kind": "invalid-config", "exit_code": 2, "message": e.to_string()}));
            return 2;
        }
    };
    match execute(cli) {
        Ok((cfg, summary, table)) => {
            let text = match cfg.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
            };
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", json!({"status": "error", "kind": e.kind(), "exit_code": e.code(), "message": e.message()}));
            e.code()
        }
    }
}
