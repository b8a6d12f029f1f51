//! Command-line front end: parse an instance, run the simulated protocol,
//! write and check proof files, and run the brute-force baselines.

pub mod input;
pub mod problem;
pub mod proof;
pub mod selftest;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use rsproof::engine::{points_tolerating, run_job, stream_rng, verify_proof, NodeConfig, SimReport};
use rsproof::field::is_prime;
use rsproof::tensor::DecompChoice;
use rsproof::Modulus;

use crate::problem::{Instance, Params, Problem};
use crate::proof::ProofFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("decoding failed: {0}")]
    Decode(String),
    #[error("verification rejected: {0}")]
    Verify(String),
    #[error("digest mismatch: {0}")]
    Digest(String),
    #[error("oracle guard exceeded: {0}")]
    Guard(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Unsupported(_) => 2,
            CliError::Decode(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Digest(_) => 5,
            CliError::Guard(_) => 6,
            CliError::Other(_) => 1,
        }
    }
}

impl From<rsproof::Error> for CliError {
    fn from(e: rsproof::Error) -> Self {
        use rsproof::Error as E;
        match e {
            E::Input(s) | E::Range(s) => CliError::Parse(s),
            E::Unsupported(s) => CliError::Unsupported(s),
            E::GuardExceeded(s) => CliError::Guard(s),
            E::Decode(f) => CliError::Decode(f.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rsproof", version, about = "Reed-Solomon coded proofs for exact counting problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the simulated protocol and write proof files
    Prove(ProveArgs),
    /// Check proof files against an instance
    Verify(VerifyArgs),
    /// Print the brute-force answer
    Oracle(OracleArgs),
    /// Prove and cross-check a built-in instance of every problem
    Selftest(SelftestArgs),
    /// Per-node timing and decomposition term counts
    Bench(BenchArgs),
}

fn parse_decomp(s: &str) -> Result<DecompChoice, String> {
    s.parse().map_err(|e: rsproof::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long)]
    pub input: PathBuf,
    /// Clique size (multiple of 6)
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Tuple count for set partitions/covers (default 2); bit width for conv3sum
    #[arg(long)]
    pub t: Option<u64>,
    /// Count unordered set partitions
    #[arg(long)]
    pub unordered: bool,
    /// Matrix multiplication decomposition: auto, naive, strassen
    #[arg(long, default_value = "auto", value_parser = parse_decomp)]
    pub decomp: DecompChoice,
}

impl InstanceArgs {
    pub fn params(&self) -> Params {
        Params {
            k: self.k,
            t: self.t,
            unordered: self.unordered,
            decomp: self.decomp,
        }
    }

    /// Reads and parses the instance; returns the text too for the digest.
    pub fn load(&self) -> Result<(String, Instance), CliError> {
        let text = fs::read_to_string(&self.input)
            .map_err(|e| CliError::Parse(format!("{}: {e}", self.input.display())))?;
        let inst = self.problem.parse(&text)?;
        Ok((text, inst))
    }
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 4)]
    pub nodes: usize,
    /// Evaluation points per prime (default ceil((d+1)/0.8))
    #[arg(long)]
    pub points: Option<usize>,
    /// Size the point count so the byzantine nodes' blocks can be corrected
    #[arg(long, conflicts_with = "points")]
    pub tolerate: bool,
    /// Faulty nodes as "ids:mode", mode one of silent, random, consistent
    #[arg(long, default_value = "")]
    pub byzantine: String,
    #[arg(long, default_value_t = 2)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated primes replacing the defaults
    #[arg(long)]
    pub primes: Option<String>,
    /// Directory for proof files and report.json
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long = "proof", required = true, num_args = 1..)]
    pub proofs: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Lift the enumeration work limit
    #[arg(long)]
    pub oracle_guard_override: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Vertices of the random graph for the clique timing run
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn parse_primes(list: &str) -> Result<Vec<Modulus>, CliError> {
    list.split(',')
        .map(|s| {
            let q: u64 = s.trim().parse().map_err(|_| CliError::Parse(format!("bad prime '{s}'")))?;
            if !is_prime(q) {
                return Err(CliError::Parse(format!("{q} is not prime")));
            }
            Modulus::new(q).map_err(CliError::from)
        })
        .collect()
}

fn sanitize(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Proof file name for task `index` and modulus `q`.
pub fn proof_name(index: usize, label: &str, q: u64) -> String {
    format!("{index:03}-{}-q{q}.cpf", sanitize(label).trim_matches('_'))
}

fn print_report(report: &SimReport, digest: u64) {
    println!(
        "problem {}  digest {digest:016x}  nodes {}  seed {}",
        report.problem, report.config.nodes, report.seed
    );
    for t in &report.tasks {
        println!("task {}  d={}  primes={}", t.label, t.degree, t.primes.len());
        for p in &t.primes {
            let decode = match &p.decode {
                rsproof::engine::DecodeStatus::Decoded { error_points } => format!("ok errors={}", error_points.len()),
                rsproof::engine::DecodeStatus::Failed { reason } => format!("failed ({reason})"),
            };
            let verify = match &p.verification {
                Some(v) => {
                    let xs: Vec<String> = v.draws.iter().map(|d| d.x0.to_string()).collect();
                    format!("{} x0=[{}]", if v.accepted { "accept" } else { "reject" }, xs.join(","))
                }
                None => "skipped".into(),
            };
            println!(
                "  q={} e={} received={} radius={} decode={} culprits={:?} verify={}",
                p.q, p.points, p.received, p.radius, decode, p.culprits, verify
            );
        }
    }
    if let Some(a) = &report.answer {
        println!("answer: {}", a.text);
    }
}

pub fn cmd_prove(args: &ProveArgs) -> Result<SimReport, CliError> {
    let ia = &args.instance;
    let params = ia.params();
    let (text, inst) = ia.load()?;
    let digest = ia.problem.digest(&text, &inst, &params);
    let mut job = ia.problem.job(&inst, &params)?;
    if let Some(list) = &args.primes {
        job.set_primes(&parse_primes(list)?)?;
    }
    let cfg = NodeConfig::parse_byzantine(args.nodes, &args.byzantine)?;
    if let Some(e) = args.points {
        job.set_points(e);
    } else if args.tolerate {
        for t in &mut job.tasks {
            t.points = Some(points_tolerating(t.degree, cfg.nodes, cfg.byzantine.len())?);
        }
    }
    let report = run_job(&job, &cfg, args.repeats, args.seed)?;
    print_report(&report, digest);

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| CliError::Other(format!("{}: {e}", dir.display())))?;
        for (i, t) in report.tasks.iter().enumerate() {
            for ((m, proof), p) in t.proofs.iter().zip(&t.primes) {
                let pf = ProofFile::from_poly(ia.problem.tag(), &t.label, digest, proof, t.degree, p.points);
                write_file(&dir.join(proof_name(i, &t.label, m.q())), &pf.render())?;
            }
        }
        let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Other(e.to_string()))?;
        write_file(&dir.join("report.json"), &(json + "\n"))?;
    }

    if !report.decoded() {
        return Err(CliError::Decode(report.error.clone().unwrap_or_default()));
    }
    if !report.verified() {
        return Err(CliError::Verify(report.error.clone().unwrap_or_default()));
    }
    if let Some(e) = &report.error {
        return Err(CliError::Other(e.clone()));
    }
    Ok(report)
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

/// Verifies every task's proofs; returns the answer text on success.
pub fn cmd_verify(args: &VerifyArgs) -> Result<String, CliError> {
    let ia = &args.instance;
    let params = ia.params();
    let (text, inst) = ia.load()?;
    let digest = ia.problem.digest(&text, &inst, &params);
    let mut job = ia.problem.job(&inst, &params)?;

    let mut by_task: BTreeMap<String, Vec<ProofFile>> = BTreeMap::new();
    for path in &args.proofs {
        let body = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let pf = ProofFile::parse(&body)?;
        if pf.problem != ia.problem.tag() {
            return Err(CliError::Digest(format!(
                "{} certifies problem '{}', not '{}'",
                path.display(),
                pf.problem,
                ia.problem.tag()
            )));
        }
        if pf.digest != digest {
            return Err(CliError::Digest(format!(
                "{} was issued for instance {:016x}, input is {digest:016x}",
                path.display(),
                pf.digest
            )));
        }
        by_task.entry(pf.task.clone()).or_default().push(pf);
    }

    let mut outs = Vec::with_capacity(job.tasks.len());
    for (i, task) in job.tasks.iter_mut().enumerate() {
        let mut files = by_task
            .remove(&task.label)
            .ok_or_else(|| CliError::Verify(format!("no proof for task {}", task.label)))?;
        files.sort_by_key(|f| f.q);
        let primes: Vec<Modulus> = files.iter().map(|f| Modulus::new(f.q)).collect::<Result<_, _>>()?;
        task.set_primes(&primes)
            .map_err(|e| CliError::Verify(format!("task {}: {e}", task.label)))?;
        let mut proofs = Vec::with_capacity(files.len());
        for (pi, f) in files.iter().enumerate() {
            if f.d != task.degree {
                return Err(CliError::Verify(format!(
                    "task {}: proof degree {} differs from the task's {}",
                    task.label, f.d, task.degree
                )));
            }
            let poly = f.poly()?;
            let mut rng = stream_rng(args.seed, ((i as u64) << 20) | pi as u64);
            let verdict = verify_proof(task, pi, &poly, args.repeats, &mut rng);
            for d in &verdict.draws {
                println!(
                    "task {} q={} x0={} {}",
                    task.label,
                    f.q,
                    d.x0,
                    if d.accepted { "match" } else { "MISMATCH" }
                );
            }
            if !verdict.accepted {
                let bad = verdict.draws.iter().find(|d| !d.accepted).map(|d| d.x0);
                return Err(CliError::Verify(format!(
                    "task {} q={}: proof disagrees with the input at x0={}",
                    task.label,
                    f.q,
                    bad.map_or("-".into(), |x| x.to_string())
                )));
            }
            proofs.push((poly.modulus(), poly));
        }
        outs.push(task.extract(&proofs)?);
    }
    if let Some(extra) = by_task.keys().next() {
        return Err(CliError::Verify(format!("proof for unknown task {extra}")));
    }
    let answer = (job.combine)(&outs)?;
    println!("verified");
    println!("answer: {}", answer.text);
    Ok(answer.text)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<String, CliError> {
    if args.oracle_guard_override {
        rsproof::oracle::set_oracle_guard(u128::MAX);
    }
    let ia = &args.instance;
    let (_, inst) = ia.load()?;
    let answer = ia.problem.oracle(&inst, &ia.params())?;
    println!("{}", answer.text);
    Ok(answer.text)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let g = rsproof::graph::Graph::gnp(args.n, 0.6, &mut rng);
    let mut job = rsproof::tasks::graph::clique_job(&g, 6, DecompChoice::Auto)?;
    let d = job.tasks[0].degree;
    let e = points_tolerating(d, 8, 0)?;
    job.set_points(e);
    println!("clique timing: n={} m={} d={d} e={e}", g.n(), g.m());
    for k in [1usize, 2, 4, 8] {
        let start = Instant::now();
        let r = run_job(&job, &NodeConfig::honest(k), 1, args.seed)?;
        let per_point: Vec<f64> = r.tasks[0].primes[0]
            .nodes
            .iter()
            .map(|n| n.wall_ns as f64 / n.evaluations.max(1) as f64)
            .collect();
        let (lo, hi) = per_point.iter().fold((f64::MAX, 0f64), |(l, h), &v| (l.min(v), h.max(v)));
        println!(
            "  K={k}: per-point ns min {lo:.0} max {hi:.0} ratio {:.2}  total {:.2}s",
            hi / lo,
            start.elapsed().as_secs_f64()
        );
    }
    println!("rank-one terms (naive N^3 vs Strassen 7^t):");
    for t in [4u32, 5] {
        let n = 1usize << t;
        let naive = rsproof::tensor::kronecker_power(&rsproof::tensor::naive_base(2), t as usize)?.rank();
        let strassen = rsproof::tensor::choose_decomposition(n, DecompChoice::Strassen)?.rank();
        println!(
            "  t={t}: naive {naive} strassen {strassen} ratio {:.6} (7/8)^t {:.6}",
            strassen as f64 / naive as f64,
            (7f64 / 8.0).powi(t as i32)
        );
    }
    Ok(())
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Prove(a) => cmd_prove(a).map(|_| ()),
        Command::Verify(a) => cmd_verify(a).map(|_| ()),
        Command::Oracle(a) => cmd_oracle(a).map(|_| ()),
        Command::Selftest(a) => selftest::run(a.seed),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
