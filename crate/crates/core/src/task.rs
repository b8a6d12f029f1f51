//! Problem instances bound to a proof polynomial: degree bound, primes,
//! per-prime point evaluators and the answer-extraction recipe.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{crt_combine, modulus_product, recenter};
use crate::field::{find_prime, Modulus};
use crate::poly::Poly;

/// Evaluates the proof polynomial at a point modulo a fixed prime.
pub type Evaluator = Arc<dyn Fn(u64) -> u64 + Send + Sync>;
/// Builds the evaluator for one prime.
pub type EvaluatorBuilder = Arc<dyn Fn(Modulus) -> Result<Evaluator> + Send + Sync>;
/// Turns the decoded proofs (one per prime) into integers.
pub type Extractor = Arc<dyn Fn(&[(Modulus, Poly)]) -> Result<Vec<BigInt>> + Send + Sync>;

/// Where prime searches start by default.
pub const DEFAULT_PRIME_START: u64 = (1 << 60) + 1;

#[derive(Clone)]
pub struct PrimeContext {
    pub modulus: Modulus,
    pub evaluator: Evaluator,
}

impl fmt::Debug for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeContext({})", self.modulus.q())
    }
}

/// One proof polynomial family over several primes.
#[derive(Clone)]
pub struct TaskSpec {
    /// Short label, e.g. `cliques` or `chromatic[t=3]`.
    pub label: String,
    /// Degree bound `d`.
    pub degree: usize,
    /// Number of evaluation points `e`, when fixed by the task.
    pub points: Option<usize>,
    /// Bound `Phi` on the magnitude of every extracted integer.
    pub magnitude: BigUint,
    pub contexts: Vec<PrimeContext>,
    builder: EvaluatorBuilder,
    extractor: Extractor,
}

impl fmt::Debug for TaskSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TaskSpec")
            .field("label", &self.label)
            .field("degree", &self.degree)
            .field("magnitude", &self.magnitude)
            .field("contexts", &self.contexts)
            .finish()
    }
}

/// Smallest run of primes from `start` whose product exceeds `2*bound + 1`.
pub fn primes_for_bound(bound: &BigUint, start: u64) -> Result<Vec<Modulus>> {
    let target: BigUint = bound * 2u32 + 1u32;
    let mut out = Vec::new();
    let mut prod = BigUint::one();
    let mut next = start;
    while prod <= target {
        let m = find_prime(next)?;
        next = m.q() + 1;
        prod *= m.q();
        out.push(m);
    }
    Ok(out)
}

impl TaskSpec {
    pub fn new(
        label: impl Into<String>,
        degree: usize,
        magnitude: BigUint,
        builder: EvaluatorBuilder,
        extractor: Extractor,
    ) -> Result<Self> {
        let primes = primes_for_bound(&magnitude, DEFAULT_PRIME_START)?;
        let mut task = TaskSpec {
            label: label.into(),
            degree,
            points: None,
            magnitude,
            contexts: Vec::new(),
            builder,
            extractor,
        };
        task.set_primes(&primes)?;
        Ok(task)
    }

    /// Replaces the prime set; their product must exceed `2*Phi + 1`.
    pub fn set_primes(&mut self, primes: &[Modulus]) -> Result<()> {
        let prod = modulus_product(primes);
        let need: BigUint = &self.magnitude * 2u32 + 1u32;
        if prod <= need {
            return Err(Error::Input(format!(
                "prime product {prod} does not exceed 2*bound+1 = {need}"
            )));
        }
        let mut sorted: Vec<u64> = primes.iter().map(|p| p.q()).collect();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::Input("duplicate primes".into()));
        }
        self.contexts = primes
            .iter()
            .map(|&m| {
                if m.q() <= self.degree as u64 {
                    return Err(Error::ModulusTooSmall {
                        q: m.q(),
                        need: self.degree as u64,
                    });
                }
                Ok(PrimeContext {
                    modulus: m,
                    evaluator: (self.builder)(m)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(())
    }

    pub fn with_points(mut self, e: usize) -> Self {
        self.points = Some(e);
        self
    }

    pub fn primes(&self) -> Vec<Modulus> {
        self.contexts.iter().map(|c| c.modulus).collect()
    }

    /// Honest evaluation modulo the `i`-th prime.
    pub fn eval(&self, i: usize, x0: u64) -> u64 {
        (self.contexts[i].evaluator)(x0)
    }

    pub fn extract(&self, proofs: &[(Modulus, Poly)]) -> Result<Vec<BigInt>> {
        (self.extractor)(proofs)
    }

    /// Interpolates the honest proof polynomial modulo each prime from
    /// `d+1` direct evaluations. Test and oracle helper.
    pub fn honest_proofs(&self) -> Result<Vec<(Modulus, Poly)>> {
        self.contexts
            .iter()
            .map(|c| {
                let xs: Vec<u64> = (0..=self.degree as u64).collect();
                let ys: Vec<u64> = xs.iter().map(|&x| (c.evaluator)(x)).collect();
                Ok((c.modulus, crate::poly::interpolate_raw(c.modulus, &xs, &ys)?))
            })
            .collect()
    }

    /// Answer computed without the distributed machinery.
    pub fn solve_direct(&self) -> Result<Vec<BigInt>> {
        self.extract(&self.honest_proofs()?)
    }
}

/// CRT-combines one residue per prime into a signed or unsigned integer.
pub fn combine_residues(residues: &[(u64, Modulus)], signed: bool) -> Result<BigInt> {
    let x = crt_combine(residues)?;
    if signed {
        let moduli: Vec<Modulus> = residues.iter().map(|r| r.1).collect();
        Ok(recenter(&x, &modulus_product(&moduli)))
    } else {
        Ok(BigInt::from(x))
    }
}

/// Extractor for `sum_{x in window} P(x)` as a single integer.
pub fn window_sum_extractor(window: std::ops::RangeInclusive<u64>, signed: bool) -> Extractor {
    Arc::new(move |proofs: &[(Modulus, Poly)]| {
        let residues: Vec<(u64, Modulus)> = proofs
            .iter()
            .map(|(m, p)| {
                let s = window.clone().fold(0u64, |acc, x| m.add(acc, p.eval_raw(x)));
                (s, *m)
            })
            .collect();
        Ok(vec![combine_residues(&residues, signed)?])
    })
}

/// Extractor returning `P(x)` for every `x` in the window.
pub fn window_values_extractor(window: std::ops::RangeInclusive<u64>, signed: bool) -> Extractor {
    Arc::new(move |proofs: &[(Modulus, Poly)]| {
        window
            .clone()
            .map(|x| {
                let residues: Vec<(u64, Modulus)> = proofs.iter().map(|(m, p)| (p.eval_raw(x), *m)).collect();
                combine_residues(&residues, signed)
            })
            .collect()
    })
}

/// Extractor for the coefficient `p_index` as a single integer.
pub fn coefficient_extractor(index: usize, signed: bool) -> Extractor {
    Arc::new(move |proofs: &[(Modulus, Poly)]| {
        let residues: Vec<(u64, Modulus)> = proofs
            .iter()
            .map(|(m, p)| (p.coeffs().get(index).copied().unwrap_or(0), *m))
            .collect();
        Ok(vec![combine_residues(&residues, signed)?])
    })
}

/// Wraps an extractor and divides every output exactly by `divisor`.
pub fn quotient_extractor(inner: Extractor, divisor: BigInt) -> Extractor {
    Arc::new(move |proofs: &[(Modulus, Poly)]| {
        inner(proofs)?
            .into_iter()
            .map(|x| {
                let (quo, rem) = x.div_rem(&divisor);
                if rem.is_zero() {
                    Ok(quo)
                } else {
                    Err(Error::Extraction(format!("{x} is not divisible by {divisor}")))
                }
            })
            .collect()
    })
}

/// A final answer with a human-readable rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    #[serde(with = "bigint_strings")]
    pub values: Vec<BigInt>,
    pub text: String,
}

impl Answer {
    pub fn scalar(x: BigInt) -> Self {
        Answer {
            text: x.to_string(),
            values: vec![x],
        }
    }

    pub fn vector(values: Vec<BigInt>) -> Self {
        let text = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        Answer { values, text }
    }
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Combines the per-task integer outputs of a job.
pub type Combiner = Arc<dyn Fn(&[Vec<BigInt>]) -> Result<Answer> + Send + Sync>;

/// A problem solved through one or more proof polynomials.
#[derive(Clone)]
pub struct Job {
    pub problem: String,
    pub tasks: Vec<TaskSpec>,
    pub combine: Combiner,
}

impl fmt::Debug for Job {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Job")
            .field("problem", &self.problem)
            .field("tasks", &self.tasks)
            .finish()
    }
}

impl Job {
    pub fn single(task: TaskSpec, render: impl Fn(Vec<BigInt>) -> Result<Answer> + Send + Sync + 'static) -> Self {
        Job {
            problem: task.label.clone(),
            tasks: vec![task],
            combine: Arc::new(move |outs: &[Vec<BigInt>]| render(outs[0].clone())),
        }
    }

    /// Replaces the primes of every task.
    pub fn set_primes(&mut self, primes: &[Modulus]) -> Result<()> {
        for t in &mut self.tasks {
            t.set_primes(primes)?;
        }
        Ok(())
    }

    pub fn set_points(&mut self, e: usize) {
        for t in &mut self.tasks {
            t.points = Some(e);
        }
    }

    /// Answer computed without the distributed machinery.
    pub fn solve_direct(&self) -> Result<Answer> {
        let outs: Vec<Vec<BigInt>> = self.tasks.iter().map(|t| t.solve_direct()).collect::<Result<_>>()?;
        (self.combine)(&outs)
    }
}
