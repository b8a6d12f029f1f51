//! In-process simulation of the distributed protocol: points are split over
//! `K` nodes, some of which may misbehave; the coordinator decodes the
//! received codeword, names the nodes whose shares disagree with the decoded
//! polynomial, spot-checks the polynomial at random points, and extracts the
//! exact answer.
//!
//! All randomness comes from one seed. Each (task, prime) pair draws from
//! its own ChaCha stream, so results do not depend on scheduling.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::poly::Poly;
use crate::rs::{correction_radius, gao_decode, CodewordShare, Origin};
use crate::task::{bigint_strings, Answer, Job, TaskSpec};

/// Fraction of the points that carry the degree; the rest absorb errors.
pub const DEFAULT_RATE: f64 = 0.8;

/// `e = max(ceil((d+1)/0.8), K)`.
pub fn default_points(d: usize, nodes: usize) -> usize {
    (((d + 1) as f64 / DEFAULT_RATE).ceil() as usize).max(d + 1).max(nodes)
}

/// Smallest `e >= default_points(d, K)` whose correction radius absorbs
/// `faulty` whole node blocks.
pub fn points_tolerating(d: usize, nodes: usize, faulty: usize) -> Result<usize> {
    if nodes == 0 || 2 * faulty >= nodes {
        return Err(Error::Input(format!("{faulty} faulty nodes out of {nodes} cannot be tolerated")));
    }
    let mut e = default_points(d, nodes);
    while correction_radius(e, d) < faulty * e.div_ceil(nodes) {
        e += 1;
    }
    Ok(e)
}

/// Contiguous blocks over `0..e`, sizes differing by at most one, larger
/// blocks first.
pub fn assign_points(e: usize, nodes: usize) -> Result<Vec<(usize, std::ops::Range<usize>)>> {
    if nodes == 0 || nodes > e {
        return Err(Error::Input(format!("cannot split {e} points over {nodes} nodes")));
    }
    let (base, extra) = (e / nodes, e % nodes);
    let mut start = 0;
    Ok((0..nodes)
        .map(|k| {
            let len = base + usize::from(k < extra);
            let r = start..start + len;
            start += len;
            (k, r)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ByzMode {
    /// Shares never arrive.
    Silent,
    /// Every share is replaced by a uniformly random wrong value.
    RandomCorrupt,
    /// Shares are evaluations of `P + D` for one random nonzero `D` of
    /// degree at most `d`, shared by all faulty nodes.
    AdversarialConsistent,
}

impl FromStr for ByzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "silent" => Ok(ByzMode::Silent),
            "random" | "random-corrupt" => Ok(ByzMode::RandomCorrupt),
            "consistent" | "adversarial" | "adversarial-consistent" => Ok(ByzMode::AdversarialConsistent),
            _ => Err(Error::Input(format!("unknown byzantine mode '{s}'"))),
        }
    }
}

impl fmt::Display for ByzMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ByzMode::Silent => "silent",
            ByzMode::RandomCorrupt => "random-corrupt",
            ByzMode::AdversarialConsistent => "adversarial-consistent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeConfig {
    pub nodes: usize,
    pub byzantine: BTreeSet<usize>,
    pub mode: ByzMode,
}

impl NodeConfig {
    pub fn honest(nodes: usize) -> Self {
        NodeConfig {
            nodes,
            byzantine: BTreeSet::new(),
            mode: ByzMode::RandomCorrupt,
        }
    }

    pub fn with_byzantine(nodes: usize, ids: impl IntoIterator<Item = usize>, mode: ByzMode) -> Result<Self> {
        let cfg = NodeConfig {
            nodes,
            byzantine: ids.into_iter().collect(),
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::Input("need at least one node".into()));
        }
        if let Some(&bad) = self.byzantine.iter().find(|&&b| b >= self.nodes) {
            return Err(Error::Input(format!("byzantine node {bad} outside 0..{}", self.nodes)));
        }
        Ok(())
    }

    /// Parses `"ids:mode"`, e.g. `"1,3:random"`; an empty string means none.
    pub fn parse_byzantine(nodes: usize, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "none" {
            return Ok(NodeConfig::honest(nodes));
        }
        let (ids, mode) = spec.split_once(':').unwrap_or((spec, "random"));
        let ids = ids
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad node id '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        NodeConfig::with_byzantine(nodes, ids, mode.trim().parse()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub node: usize,
    pub start: usize,
    pub end: usize,
    pub evaluations: usize,
    pub byzantine: bool,
    /// Wall time of the node's evaluations; not reproducible.
    pub wall_ns: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DecodeStatus {
    Decoded { error_points: Vec<u64> },
    Failed { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub x0: u64,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub draws: Vec<Draw>,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub q: u64,
    pub degree: usize,
    pub points: usize,
    pub received: usize,
    pub radius: usize,
    pub nodes: Vec<NodeReport>,
    pub decode: DecodeStatus,
    /// Nodes with a disagreeing share, plus silent nodes.
    pub culprits: Vec<usize>,
    pub verification: Option<Verdict>,
    /// Whether the decoded polynomial equals the honest one.
    pub honest_match: Option<bool>,
}

impl PrimeReport {
    pub fn ok(&self) -> bool {
        matches!(self.decode, DecodeStatus::Decoded { .. }) && self.verification.as_ref().is_some_and(|v| v.accepted)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskReport {
    pub label: String,
    pub degree: usize,
    pub primes: Vec<PrimeReport>,
    #[serde(with = "bigint_strings")]
    pub values: Vec<BigInt>,
    pub error: Option<String>,
    /// Decoded proofs, one per prime, when decoding succeeded.
    #[serde(skip)]
    pub proofs: Vec<(Modulus, Poly)>,
}

impl PartialEq for TaskReport {
    fn eq(&self, o: &Self) -> bool {
        self.label == o.label
            && self.degree == o.degree
            && self.primes == o.primes
            && self.values == o.values
            && self.error == o.error
            && self.proofs == o.proofs
    }
}

impl TaskReport {
    pub fn decoded(&self) -> bool {
        self.primes.iter().all(|p| matches!(p.decode, DecodeStatus::Decoded { .. }))
    }

    pub fn verified(&self) -> bool {
        self.primes.iter().all(PrimeReport::ok)
    }

    pub fn culprits(&self) -> BTreeSet<usize> {
        self.primes.iter().flat_map(|p| p.culprits.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub problem: String,
    pub seed: u64,
    pub config: NodeConfig,
    pub repeats: usize,
    pub tasks: Vec<TaskReport>,
    pub answer: Option<Answer>,
    pub error: Option<String>,
}

impl SimReport {
    pub fn decoded(&self) -> bool {
        self.tasks.iter().all(TaskReport::decoded)
    }

    pub fn verified(&self) -> bool {
        self.tasks.iter().all(TaskReport::verified)
    }

    pub fn culprits(&self) -> BTreeSet<usize> {
        self.tasks.iter().flat_map(|t| t.culprits()).collect()
    }

    /// Copy with wall times zeroed, for reproducibility comparisons.
    pub fn without_timings(&self) -> SimReport {
        let mut r = self.clone();
        for t in &mut r.tasks {
            for p in &mut t.primes {
                for n in &mut p.nodes {
                    n.wall_ns = 0;
                }
            }
        }
        r
    }
}

/// Random generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Whether `proof` agrees with a fresh evaluation at `x0`.
pub fn check_at(task: &TaskSpec, prime: usize, proof: &Poly, x0: u64) -> bool {
    task.eval(prime, x0) == proof.eval_raw(x0)
}

/// Spot-checks `proof` against fresh evaluations at `repeats` uniform points.
pub fn verify_proof(task: &TaskSpec, prime: usize, proof: &Poly, repeats: usize, rng: &mut impl Rng) -> Verdict {
    let m = task.contexts[prime].modulus;
    assert_eq!(proof.modulus(), m, "proof from another field");
    let draws: Vec<Draw> = (0..repeats)
        .map(|_| {
            let x0 = rng.gen_range(0..m.q());
            Draw {
                x0,
                accepted: check_at(task, prime, proof, x0),
            }
        })
        .collect();
    let accepted = proof.degree().map_or(true, |d| d <= task.degree) && draws.iter().all(|d| d.accepted);
    Verdict { draws, accepted }
}

fn random_poly(m: Modulus, d: usize, rng: &mut impl Rng) -> Poly {
    loop {
        let p = Poly::new(m, (0..=d).map(|_| rng.gen_range(0..m.q())).collect());
        if !p.is_zero() {
            return p;
        }
    }
}

fn run_prime(task: &TaskSpec, prime: usize, cfg: &NodeConfig, repeats: usize, rng: &mut ChaCha8Rng) -> Result<(PrimeReport, Option<Poly>)> {
    let m = task.contexts[prime].modulus;
    let d = task.degree;
    let e = task.points.unwrap_or_else(|| default_points(d, cfg.nodes));
    if e < d + 1 || e as u64 > m.q() {
        return Err(Error::Input(format!("need d+1 <= e <= q, got d={d}, e={e}, q={}", m.q())));
    }
    let blocks = assign_points(e, cfg.nodes)?;

    // honest evaluations, one node per worker
    let evaluated: Vec<(Vec<u64>, u64)> = blocks
        .par_iter()
        .map(|(_, r)| {
            let start = Instant::now();
            let vals: Vec<u64> = r.clone().map(|x| task.eval(prime, x as u64)).collect();
            (vals, start.elapsed().as_nanos() as u64)
        })
        .collect();

    let delta = (cfg.mode == ByzMode::AdversarialConsistent && !cfg.byzantine.is_empty())
        .then(|| random_poly(m, d, rng));
    let mut shares = Vec::with_capacity(e);
    let mut honest = Vec::with_capacity(e);
    let mut nodes = Vec::with_capacity(blocks.len());
    for ((k, r), (vals, wall)) in blocks.iter().zip(&evaluated) {
        let faulty = cfg.byzantine.contains(k);
        nodes.push(NodeReport {
            node: *k,
            start: r.start,
            end: r.end,
            evaluations: vals.len(),
            byzantine: faulty,
            wall_ns: *wall,
        });
        for (x, &v) in r.clone().zip(vals) {
            honest.push(v);
            let sent = match (faulty, cfg.mode) {
                (false, _) => Some(v),
                (true, ByzMode::Silent) => None,
                (true, ByzMode::RandomCorrupt) => Some(m.add(v, rng.gen_range(1..m.q()))),
                (true, ByzMode::AdversarialConsistent) => {
                    Some(m.add(v, delta.as_ref().unwrap().eval_raw(x as u64)))
                }
            };
            if let Some(value) = sent {
                shares.push(CodewordShare {
                    point: m.elem(x as u64),
                    value: m.elem(value),
                    origin: Origin::Node(*k),
                });
            }
        }
    }
    let received = shares.len();
    let radius = correction_radius(received, d);
    let silent: Vec<usize> = if cfg.mode == ByzMode::Silent {
        cfg.byzantine.iter().copied().filter(|&b| b < cfg.nodes).collect()
    } else {
        Vec::new()
    };

    let mut report = PrimeReport {
        q: m.q(),
        degree: d,
        points: e,
        received,
        radius,
        nodes,
        decode: DecodeStatus::Failed { reason: String::new() },
        culprits: Vec::new(),
        verification: None,
        honest_match: None,
    };
    match gao_decode(&shares, d) {
        Err(f) => {
            report.decode = DecodeStatus::Failed { reason: f.to_string() };
            Ok((report, None))
        }
        Ok(res) => {
            let owner = |x: u64| blocks.iter().find(|(_, r)| r.contains(&(x as usize))).unwrap().0;
            let mut culprits: BTreeSet<usize> = res.error_points.iter().map(|&x| owner(x)).collect();
            culprits.extend(silent);
            report.culprits = culprits.into_iter().collect();
            report.honest_match = Some(honest.iter().enumerate().all(|(x, &v)| res.proof.eval_raw(x as u64) == v));
            report.verification = Some(verify_proof(task, prime, &res.proof, repeats, rng));
            report.decode = DecodeStatus::Decoded {
                error_points: res.error_points,
            };
            Ok((report, Some(res.proof)))
        }
    }
}

/// Runs one task over all of its primes. `task_index` selects the random
/// streams so that tasks of a job are independent.
pub fn run_pipeline(task: &TaskSpec, cfg: &NodeConfig, repeats: usize, seed: u64, task_index: usize) -> Result<TaskReport> {
    cfg.validate()?;
    let per_prime: Vec<(PrimeReport, Option<Poly>)> = (0..task.contexts.len())
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, ((task_index as u64) << 20) | i as u64);
            run_prime(task, i, cfg, repeats, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut report = TaskReport {
        label: task.label.clone(),
        degree: task.degree,
        primes: Vec::with_capacity(per_prime.len()),
        values: Vec::new(),
        error: None,
        proofs: Vec::new(),
    };
    for (p, proof) in per_prime {
        if let Some(proof) = proof {
            report.proofs.push((proof.modulus(), proof));
        }
        report.primes.push(p);
    }
    if !report.decoded() {
        report.error = Some("decoding failed".into());
    } else if !report.verified() {
        report.error = Some("verification rejected the decoded proof".into());
    } else {
        match task.extract(&report.proofs) {
            Ok(v) => report.values = v,
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    Ok(report)
}

/// Runs every task of a job and combines the answers.
pub fn run_job(job: &Job, cfg: &NodeConfig, repeats: usize, seed: u64) -> Result<SimReport> {
    let tasks: Vec<TaskReport> = job
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| run_pipeline(t, cfg, repeats, seed, i))
        .collect::<Result<_>>()?;
    let mut report = SimReport {
        problem: job.problem.clone(),
        seed,
        config: cfg.clone(),
        repeats,
        tasks,
        answer: None,
        error: None,
    };
    if let Some(t) = report.tasks.iter().find(|t| t.error.is_some()) {
        report.error = Some(format!("{}: {}", t.label, t.error.as_deref().unwrap()));
        return Ok(report);
    }
    let outs: Vec<Vec<BigInt>> = report.tasks.iter().map(|t| t.values.clone()).collect();
    match (job.combine)(&outs) {
        Ok(a) => report.answer = Some(a),
        Err(e) => report.error = Some(e.to_string()),
    }
    Ok(report)
}
