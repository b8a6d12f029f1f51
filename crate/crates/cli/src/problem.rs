//! Problem tags and the glue between parsed instances, jobs and oracles.

use clap::ValueEnum;
use num_bigint::BigInt;

use rsproof::graph::Graph;
use rsproof::oracle::{chromatic_oracle, clique_count_oracle, triangle_count_oracle, tutte_oracle};
use rsproof::task::{Answer, Job};
use rsproof::tasks::appendix::{self, BoolMatrix, CnfFormula, Csp2Instance};
use rsproof::tasks::graph::{clique_job, triangle_job};
use rsproof::tasks::partition::{chromatic_answer, chromatic_job, partition_sum_oracle, set_partition_job, tutte_answer, tutte_job};
use rsproof::tensor::DecompChoice;

use crate::input;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Problem {
    /// k-cliques (k divisible by 6) in a graph
    Cliques,
    /// triangles in a graph
    Triangles,
    /// chromatic polynomial of a graph
    Chromatic,
    /// Tutte polynomial of a multigraph
    Tutte,
    /// t-tuples of sets from a family partitioning the universe
    Setpartition,
    /// orthogonal-vector counts per row
    Ov,
    /// satisfying assignments of a CNF formula
    Cnfsat,
    /// Hamming distance distribution per row
    Hamming,
    /// Convolution3SUM solution counts
    Conv3sum,
    /// permanent of an integer matrix
    Permanent,
    /// ordered t-tuples from a family covering the universe
    Setcover,
    /// weight enumerator of a binary CSP
    Csp2,
}

impl Problem {
    pub const ALL: [Problem; 12] = [
        Problem::Cliques,
        Problem::Triangles,
        Problem::Chromatic,
        Problem::Tutte,
        Problem::Setpartition,
        Problem::Ov,
        Problem::Cnfsat,
        Problem::Hamming,
        Problem::Conv3sum,
        Problem::Permanent,
        Problem::Setcover,
        Problem::Csp2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Problem::Cliques => "cliques",
            Problem::Triangles => "triangles",
            Problem::Chromatic => "chromatic",
            Problem::Tutte => "tutte",
            Problem::Setpartition => "setpartition",
            Problem::Ov => "ov",
            Problem::Cnfsat => "cnfsat",
            Problem::Hamming => "hamming",
            Problem::Conv3sum => "conv3sum",
            Problem::Permanent => "permanent",
            Problem::Setcover => "setcover",
            Problem::Csp2 => "csp2",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Problem> {
        Problem::ALL.into_iter().find(|p| p.tag() == tag)
    }
}

/// Problem parameters that are not part of the instance file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    /// Clique size.
    pub k: usize,
    /// Tuple size (set partitions, set covers) or bit width (Convolution3SUM).
    pub t: Option<u64>,
    /// Count unordered set partitions.
    pub unordered: bool,
    pub decomp: DecompChoice,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k: 6,
            t: None,
            unordered: false,
            decomp: DecompChoice::Auto,
        }
    }
}

pub const DEFAULT_TUPLE: u64 = 2;

#[derive(Clone, Debug)]
pub enum Instance {
    Graph(Graph),
    Cnf(CnfFormula),
    Matrices(BoolMatrix, BoolMatrix),
    Ints(Vec<u64>),
    IntMatrix(Vec<Vec<i64>>),
    Family { n: usize, sets: Vec<u64> },
    Csp(Csp2Instance),
}

fn core_err(e: rsproof::Error) -> CliError {
    CliError::from(e)
}

fn bits_needed(values: &[u64]) -> u64 {
    let max = values.iter().copied().max().unwrap_or(0);
    u64::from(64 - max.leading_zeros()).max(1)
}

impl Problem {
    pub fn parse(self, text: &str) -> Result<Instance, CliError> {
        Ok(match self {
            Problem::Cliques | Problem::Triangles | Problem::Chromatic => Instance::Graph(input::parse_graph(text, false)?),
            Problem::Tutte => Instance::Graph(input::parse_graph(text, true)?),
            Problem::Ov | Problem::Hamming => {
                let (a, b) = input::parse_bool_matrices(text)?;
                Instance::Matrices(a, b)
            }
            Problem::Cnfsat => Instance::Cnf(input::parse_cnf(text)?),
            Problem::Conv3sum => Instance::Ints(input::parse_ints(text)?),
            Problem::Permanent => Instance::IntMatrix(input::parse_int_matrix(text)?),
            Problem::Setpartition | Problem::Setcover => {
                let (n, sets) = input::parse_family(text)?;
                Instance::Family { n, sets }
            }
            Problem::Csp2 => Instance::Csp(input::parse_csp(text)?),
        })
    }

    /// Parameters that change the answer, as bound into the digest.
    pub fn param_tag(self, inst: &Instance, p: &Params) -> String {
        match (self, inst) {
            (Problem::Cliques, _) => format!("k={}", p.k),
            (Problem::Setpartition, _) => {
                format!("t={} unordered={}", p.t.unwrap_or(DEFAULT_TUPLE), p.unordered)
            }
            (Problem::Setcover, _) => format!("t={}", p.t.unwrap_or(DEFAULT_TUPLE)),
            (Problem::Conv3sum, Instance::Ints(v)) => format!("t={}", p.t.unwrap_or_else(|| bits_needed(v))),
            _ => String::new(),
        }
    }

    /// FNV-1a digest over problem tag, parameters and canonical instance text.
    pub fn digest(self, text: &str, inst: &Instance, p: &Params) -> u64 {
        let bound = format!("{}\n{}\n{}", self.tag(), self.param_tag(inst, p), input::canonicalize(text));
        input::fnv1a64(bound.as_bytes())
    }

    pub fn job(self, inst: &Instance, p: &Params) -> Result<Job, CliError> {
        let t = p.t.unwrap_or(DEFAULT_TUPLE);
        let job = match (self, inst) {
            (Problem::Cliques, Instance::Graph(g)) => clique_job(g, p.k, p.decomp),
            (Problem::Triangles, Instance::Graph(g)) => triangle_job(g, p.decomp),
            (Problem::Chromatic, Instance::Graph(g)) => chromatic_job(g),
            (Problem::Tutte, Instance::Graph(g)) => tutte_job(g),
            (Problem::Setpartition, Instance::Family { n, sets }) => set_partition_job(sets, *n, t, p.unordered),
            (Problem::Ov, Instance::Matrices(a, b)) => appendix::ov_job(a, b),
            (Problem::Cnfsat, Instance::Cnf(f)) => appendix::cnfsat_job(f),
            (Problem::Hamming, Instance::Matrices(a, b)) => appendix::hamming_job(a, b),
            (Problem::Conv3sum, Instance::Ints(v)) => {
                appendix::conv3sum_job(v, p.t.unwrap_or_else(|| bits_needed(v)) as usize)
            }
            (Problem::Permanent, Instance::IntMatrix(a)) => appendix::permanent_job(a),
            (Problem::Setcover, Instance::Family { n, sets }) => appendix::setcover_job(sets, *n, t),
            (Problem::Csp2, Instance::Csp(c)) => appendix::csp2_job(c, p.decomp),
            _ => return Err(CliError::Other("instance does not match the problem".into())),
        };
        let mut job = job.map_err(core_err)?;
        job.problem = self.tag().into();
        Ok(job)
    }

    /// Brute-force answer, rendered exactly like the pipeline's answer.
    pub fn oracle(self, inst: &Instance, p: &Params) -> Result<Answer, CliError> {
        let t = p.t.unwrap_or(DEFAULT_TUPLE);
        let vector = |v: Vec<u64>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
        let a = match (self, inst) {
            (Problem::Cliques, Instance::Graph(g)) => Answer::scalar(clique_count_oracle(g, p.k)?),
            (Problem::Triangles, Instance::Graph(g)) => Answer::scalar(triangle_count_oracle(g)),
            (Problem::Chromatic, Instance::Graph(g)) => chromatic_answer(chromatic_oracle(g)?),
            (Problem::Tutte, Instance::Graph(g)) => tutte_answer(&tutte_oracle(g)?),
            (Problem::Setpartition, Instance::Family { n, sets }) => {
                let mut x = partition_sum_oracle(*n, t, |s| BigInt::from(u8::from(sets.contains(&s))))?;
                if p.unordered {
                    x /= (1..=t).map(BigInt::from).product::<BigInt>();
                }
                Answer::scalar(x)
            }
            (Problem::Ov, Instance::Matrices(a, b)) => Answer::vector(vector(appendix::ov_oracle(a, b))),
            (Problem::Cnfsat, Instance::Cnf(f)) => Answer::scalar(BigInt::from(appendix::cnfsat_oracle(f)?)),
            (Problem::Hamming, Instance::Matrices(a, b)) => {
                appendix::hamming_answer(vector(appendix::hamming_oracle(a, b).concat()), a.t())
            }
            (Problem::Conv3sum, Instance::Ints(v)) => appendix::conv3sum_answer(vector(appendix::conv3sum_oracle(v))),
            (Problem::Permanent, Instance::IntMatrix(a)) => Answer::scalar(appendix::permanent_oracle(a)?),
            (Problem::Setcover, Instance::Family { n, sets }) => Answer::scalar(appendix::setcover_oracle(sets, *n, t)?),
            (Problem::Csp2, Instance::Csp(c)) => appendix::csp2_answer(appendix::csp2_oracle(c)?),
            _ => return Err(CliError::Other("instance does not match the problem".into())),
        };
        Ok(a)
    }
}
