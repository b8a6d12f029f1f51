//! Smaller proof polynomials: orthogonal vectors, #CNFSAT, Hamming distance
//! distributions, Convolution3SUM, the permanent, set covers over a small
//! family, and 2-constraint satisfaction enumerated by weight.
//!
//! Column interpolants are evaluated through Lagrange weights over a run of
//! consecutive nodes, `O(n)` per column per point.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::interpolate_integer;
use crate::field::Modulus;
use crate::form62::{pairs, ChiFamily, ChiMatrix, Form62Evaluator};
use crate::oracle::{format_univariate, oracle_guard};
use crate::poly::{lagrange_basis_raw, Poly};
use crate::task::{
    combine_residues, window_sum_extractor, window_values_extractor, Answer, Evaluator,
    Extractor, Job, TaskSpec,
};
use crate::tensor::{choose_decomposition, DecompChoice};

/// Lagrange weights at `x0` for the nodes `start, start+1, ..., start+count-1`.
fn consecutive_basis(m: &Modulus, start: u64, count: usize, x0: u64) -> Vec<u64> {
    // shift so the nodes become 1..=count
    let shift = m.sub(m.reduce(x0), m.reduce(start));
    lagrange_basis_raw(*m, count, m.add(shift, 1)).expect("modulus exceeds the node count")
}

fn check_nodes(m: &Modulus, count: u64) -> Result<()> {
    if m.q() <= count {
        return Err(Error::ModulusTooSmall { q: m.q(), need: count });
    }
    Ok(())
}

fn guard(work: u128, what: &str) -> Result<()> {
    if work > oracle_guard() {
        return Err(Error::GuardExceeded(format!("{what}: {work} candidates exceed the oracle limit")));
    }
    Ok(())
}

/// Rows of bits, all of the same width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    pub rows: Vec<Vec<u8>>,
}

impl BoolMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || width == 0 {
            return Err(Error::Input("matrix needs positive dimensions".into()));
        }
        if rows.iter().any(|r| r.len() != width || r.iter().any(|&b| b > 1)) {
            return Err(Error::Input("rows must be equally long and hold only 0/1".into()));
        }
        Ok(BoolMatrix { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.rows[0].len()
    }
}

fn same_shape(a: &BoolMatrix, b: &BoolMatrix) -> Result<()> {
    if a.n() != b.n() || a.t() != b.t() {
        return Err(Error::Input("both matrices must have the same shape".into()));
    }
    Ok(())
}

// ---- orthogonal vectors ---------------------------------------------------

/// `P(x) = sum_k prod_j (1 - b_kj A_j(x))` with `A_j(i) = a_ij`; then
/// `P(i)` counts the rows of `B` orthogonal to row `i` of `A`.
pub fn ov_task(a: &BoolMatrix, b: &BoolMatrix) -> Result<TaskSpec> {
    same_shape(a, b)?;
    let (n, t) = (a.n(), a.t());
    let (a, b) = (Arc::new(a.clone()), Arc::new(b.clone()));
    let builder = Arc::new(move |m: Modulus| {
        check_nodes(&m, n as u64)?;
        let (a, b) = (a.clone(), b.clone());
        Ok(Arc::new(move |x0: u64| {
            let lam = consecutive_basis(&m, 1, n, x0);
            let cols: Vec<u64> = (0..t)
                .map(|j| (0..n).filter(|&i| a.rows[i][j] == 1).fold(0, |acc, i| m.add(acc, lam[i])))
                .collect();
            b.rows.iter().fold(0, |acc, row| {
                let prod = (0..t)
                    .filter(|&j| row[j] == 1)
                    .fold(1 % m.q(), |p, j| m.mul(p, m.sub(1, cols[j])));
                m.add(acc, prod)
            })
        }) as Evaluator)
    });
    TaskSpec::new(
        "ov",
        (n - 1) * t,
        BigUint::from(n),
        builder,
        window_values_extractor(1..=n as u64, false),
    )
}

pub fn ov_job(a: &BoolMatrix, b: &BoolMatrix) -> Result<Job> {
    Ok(Job::single(ov_task(a, b)?, |v| Ok(Answer::vector(v))))
}

pub fn ov_oracle(a: &BoolMatrix, b: &BoolMatrix) -> Vec<u64> {
    a.rows
        .iter()
        .map(|ra| {
            b.rows
                .iter()
                .filter(|rb| ra.iter().zip(rb.iter()).all(|(&x, &y)| x & y == 0))
                .count() as u64
        })
        .collect()
}

// ---- #CNFSAT --------------------------------------------------------------

/// CNF over variables `1..=vars`; literals are signed variable numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::Input(format!("literal {l} outside 1..={vars}")));
                }
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    /// Whether `assignment` (bit `v-1` holds variable `v`) satisfies the formula.
    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let bit = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                bit == (l > 0)
            })
        })
    }
}

/// The orthogonal-vectors matrices of the formula: row `i` of `A` (of `B`)
/// is the `i`-th assignment to the first (second) half of the variables in
/// big-endian order, and entry `j` is 1 iff it satisfies no literal of
/// clause `j`. The variable count must be even.
pub fn cnf_matrices(f: &CnfFormula) -> Result<(BoolMatrix, BoolMatrix)> {
    if f.vars % 2 != 0 || f.vars == 0 {
        return Err(Error::Input("variable count must be positive and even".into()));
    }
    let h = f.vars / 2;
    if h > 20 {
        return Err(Error::GuardExceeded(format!("2^{h} rows")));
    }
    let width = f.clauses.len().max(1);
    let build = |offset: usize| {
        (0..1usize << h)
            .map(|i| {
                let mut row = vec![0u8; width];
                for (j, c) in f.clauses.iter().enumerate() {
                    let satisfies_one = c.iter().any(|&l| {
                        let v = l.unsigned_abs() as usize - 1;
                        if v < offset || v >= offset + h {
                            return false;
                        }
                        // first variable of the half is the most significant bit
                        let bit = i >> (h - 1 - (v - offset)) & 1 == 1;
                        bit == (l > 0)
                    });
                    row[j] = u8::from(!satisfies_one);
                }
                row
            })
            .collect::<Vec<_>>()
    };
    Ok((BoolMatrix::new(build(0))?, BoolMatrix::new(build(h))?))
}

/// Number of satisfying assignments: the sum of the orthogonal-vector
/// counts, after padding to an even number of variables.
pub fn cnfsat_job(f: &CnfFormula) -> Result<Job> {
    let pad = f.vars % 2 + usize::from(f.vars == 0) * 2;
    let padded = CnfFormula::new(f.vars + pad, f.clauses.clone())?;
    let (a, b) = cnf_matrices(&padded)?;
    let mut task = ov_task(&a, &b)?;
    task.label = "cnfsat".into();
    let divisor = BigInt::from(1u64 << pad);
    Ok(Job {
        problem: "cnfsat".into(),
        tasks: vec![task],
        combine: Arc::new(move |outs: &[Vec<BigInt>]| {
            let total: BigInt = outs[0].iter().sum();
            Ok(Answer::scalar(total / &divisor))
        }),
    })
}

pub fn cnfsat_oracle(f: &CnfFormula) -> Result<u64> {
    guard(1u128 << f.vars.min(100), "assignment enumeration")?;
    Ok((0u64..1 << f.vars).filter(|&a| f.satisfied_by(a)).count() as u64)
}

// ---- Hamming distance distribution ----------------------------------------

/// `H_j` at a node with distance label `h`: the `j`-th smallest value of
/// `{0..t} \ {h}` (zero-based `j`).
fn root_value(j: usize, h: usize) -> usize {
    if j < h {
        j
    } else {
        j + 1
    }
}

/// `prod_{l != h} (h - l)` over `l` in `0..=t`, as a signed integer.
fn hamming_factor(h: usize, t: usize) -> BigInt {
    (0..=t).filter(|&l| l != h).map(|l| BigInt::from(h as i64 - l as i64)).product()
}

/// `P(i(t+1)+h) = prod_{l != h}(h - l) c_ih` where `c_ih` counts rows of
/// `B` at Hamming distance `h` from row `i` of `A`.
pub fn hamming_task(a: &BoolMatrix, b: &BoolMatrix) -> Result<TaskSpec> {
    same_shape(a, b)?;
    let (n, t) = (a.n(), a.t());
    let nodes = n * (t + 1);
    let (a, b) = (Arc::new(a.clone()), Arc::new(b.clone()));
    let builder = Arc::new(move |m: Modulus| {
        check_nodes(&m, (nodes + t + 1) as u64)?;
        let (a, b) = (a.clone(), b.clone());
        Ok(Arc::new(move |x0: u64| {
            let lam = consecutive_basis(&m, t as u64 + 1, nodes, x0);
            // per-row sums of the weights of the row's t+1 nodes
            let row_w: Vec<u64> = (0..n)
                .map(|i| lam[i * (t + 1)..(i + 1) * (t + 1)].iter().fold(0, |acc, &v| m.add(acc, v)))
                .collect();
            let z: Vec<u64> = (0..t)
                .map(|j| (0..n).filter(|&i| a.rows[i][j] == 1).fold(0, |acc, i| m.add(acc, row_w[i])))
                .collect();
            let w: Vec<u64> = (0..t)
                .map(|j| {
                    (0..nodes).fold(0, |acc, k| {
                        let h = k % (t + 1);
                        m.mul_add(acc, lam[k], root_value(j, h) as u64)
                    })
                })
                .collect();
            b.rows.iter().fold(0, |acc, row| {
                // distance of the interpolated row to this row of B
                let dist = (0..t).fold(0, |d, j| {
                    let term = if row[j] == 1 { m.sub(1, z[j]) } else { z[j] };
                    m.add(d, term)
                });
                let prod = w.iter().fold(1 % m.q(), |p, &wl| m.mul(p, m.sub(dist, wl)));
                m.add(acc, prod)
            })
        }) as Evaluator)
    });
    let extractor: Extractor = Arc::new(move |proofs: &[(Modulus, Poly)]| {
        let mut out = Vec::with_capacity(n * (t + 1));
        for i in 1..=n {
            for h in 0..=t {
                let x = (i * (t + 1) + h) as u64;
                let residues: Vec<(u64, Modulus)> = proofs
                    .iter()
                    .map(|(m, p)| {
                        let f = crate::exact::bigint_mod(&hamming_factor(h, t), m);
                        (m.mul(p.eval_raw(x), m.inv(f)), *m)
                    })
                    .collect();
                out.push(combine_residues(&residues, false)?);
            }
        }
        Ok(out)
    });
    TaskSpec::new(
        "hamming",
        t * (nodes - 1),
        BigUint::from(n),
        builder,
        extractor,
    )
}

pub fn hamming_job(a: &BoolMatrix, b: &BoolMatrix) -> Result<Job> {
    let t = a.t();
    Ok(Job::single(hamming_task(a, b)?, move |v| Ok(hamming_answer(v, t))))
}

/// One line per row of `A`: the counts at distances `0..=t`.
pub fn hamming_answer(values: Vec<BigInt>, t: usize) -> Answer {
    let text = values
        .chunks(t + 1)
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n");
    Answer { values, text }
}

/// `c[i][h]` by comparing all pairs.
pub fn hamming_oracle(a: &BoolMatrix, b: &BoolMatrix) -> Vec<Vec<u64>> {
    a.rows
        .iter()
        .map(|ra| {
            let mut c = vec![0u64; ra.len() + 1];
            for rb in &b.rows {
                c[ra.iter().zip(rb).filter(|(x, y)| x != y).count()] += 1;
            }
            c
        })
        .collect()
}

// ---- Convolution3SUM ------------------------------------------------------

fn sum3(m: &Modulus, b1: u64, b2: u64, b3: u64) -> u64 {
    let (n1, n2, n3) = (m.sub(1, b1), m.sub(1, b2), m.sub(1, b3));
    let t = [
        m.mul(m.mul(n1, n2), b3),
        m.mul(m.mul(n1, b2), n3),
        m.mul(m.mul(b1, n2), n3),
        m.mul(m.mul(b1, b2), b3),
    ];
    t.into_iter().fold(0, |a, v| m.add(a, v))
}

fn maj3(m: &Modulus, b1: u64, b2: u64, b3: u64) -> u64 {
    let (n1, n2, n3) = (m.sub(1, b1), m.sub(1, b2), m.sub(1, b3));
    let t = [
        m.mul(m.mul(n1, b2), b3),
        m.mul(m.mul(b1, n2), b3),
        m.mul(m.mul(b1, b2), n3),
        m.mul(m.mul(b1, b2), b3),
    ];
    t.into_iter().fold(0, |a, v| m.add(a, v))
}

/// The adder polynomial `T(y, z, w)`, equal to `[y + z = w]` on bit vectors
/// (least significant bit first).
pub fn adder_poly(m: &Modulus, y: &[u64], z: &[u64], w: &[u64]) -> u64 {
    let mut carry = 0u64;
    let mut prod = 1 % m.q();
    for j in 0..y.len() {
        let s = sum3(m, y[j], z[j], carry);
        let agree = m.add(m.mul(m.sub(1, w[j]), m.sub(1, s)), m.mul(w[j], s));
        prod = m.mul(prod, agree);
        carry = maj3(m, y[j], z[j], carry);
    }
    m.mul(m.sub(1, carry), prod)
}

/// `P(x) = sum_{l=1}^{n/2} T(A(x), A(l), A(x+l))`; `P(i)` counts `l` in
/// `[n/2]` with `A[i] + A[l] = A[i+l]` (1-based).
pub fn conv3sum_task(values: &[u64], t: usize) -> Result<TaskSpec> {
    let n = values.len();
    if n < 2 || t == 0 || t > 62 {
        return Err(Error::Input("need at least two entries and 1 <= t <= 62 bits".into()));
    }
    if values.iter().any(|&v| v >> t != 0) {
        return Err(Error::Input(format!("entries must be below 2^{t}")));
    }
    let half = n / 2;
    let bits: Arc<Vec<Vec<u64>>> = Arc::new(values.iter().map(|&v| (0..t).map(|j| v >> j & 1).collect()).collect());
    let builder = Arc::new(move |m: Modulus| {
        check_nodes(&m, n as u64)?;
        let bits = bits.clone();
        Ok(Arc::new(move |x0: u64| {
            let interp = |x: u64| -> Vec<u64> {
                let lam = consecutive_basis(&m, 1, n, x);
                (0..t)
                    .map(|j| (0..n).filter(|&i| bits[i][j] == 1).fold(0, |acc, i| m.add(acc, lam[i])))
                    .collect()
            };
            let y = interp(x0);
            (1..=half).fold(0, |acc, l| {
                let z = &bits[l - 1];
                let w = interp(m.add(m.reduce(x0), l as u64));
                m.add(acc, adder_poly(&m, &y, z, &w))
            })
        }) as Evaluator)
    });
    TaskSpec::new(
        "conv3sum",
        (n - 1) * t * (t + 5) / 2,
        BigUint::from(half.max(1)),
        builder,
        window_values_extractor(1..=half as u64, false),
    )
}

pub fn conv3sum_job(values: &[u64], t: usize) -> Result<Job> {
    Ok(Job::single(conv3sum_task(values, t)?, |v| Ok(conv3sum_answer(v))))
}

pub fn conv3sum_answer(values: Vec<BigInt>) -> Answer {
    let total: BigInt = values.iter().sum();
    let list = values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    Answer {
        text: format!("total {total}; per index {list}"),
        values,
    }
}

/// `c_i` for `i` in `[n/2]` by checking every pair.
pub fn conv3sum_oracle(values: &[u64]) -> Vec<u64> {
    let half = values.len() / 2;
    (1..=half)
        .map(|i| {
            (1..=half)
                .filter(|&l| values[i - 1] + values[l - 1] == values[i + l - 1])
                .count() as u64
        })
        .collect()
}

// ---- permanent ------------------------------------------------------------

/// Bits of `i` (little-endian) for `i` in `0..2^h`, evaluated as
/// interpolants at `x0`, together with the Lagrange weights.
fn digit_interpolants(m: &Modulus, h: usize, x0: u64) -> (Vec<u64>, Vec<u64>) {
    let lam = consecutive_basis(m, 0, 1 << h, x0);
    let d = (0..h)
        .map(|k| {
            lam.iter()
                .enumerate()
                .filter(|(i, _)| i >> k & 1 == 1)
                .fold(0, |acc, (_, &v)| m.add(acc, v))
        })
        .collect();
    (lam, d)
}

fn parity_sign(m: &Modulus, bits: u32) -> u64 {
    if bits % 2 == 0 {
        1 % m.q()
    } else {
        m.sub(0, 1)
    }
}

/// Ryser's formula with the first half of the columns interpolated over
/// `x = 0..2^{n/2}-1`; `per A = sum_{i} P(i)`. The sign of the first-half
/// columns is folded into the first row's interpolant so that
/// `deg P <= n (2^{n/2} - 1)`. Odd `n` is padded with a unit diagonal entry.
pub fn permanent_task(a: &[Vec<i64>]) -> Result<TaskSpec> {
    let n0 = a.len();
    if n0 == 0 || a.iter().any(|r| r.len() != n0) {
        return Err(Error::Input("permanent needs a non-empty square matrix".into()));
    }
    let mut mat: Vec<Vec<i64>> = a.to_vec();
    if n0 % 2 == 1 {
        for row in &mut mat {
            row.push(0);
        }
        let mut last = vec![0; n0 + 1];
        last[n0] = 1;
        mat.push(last);
    }
    let n = mat.len();
    let h = n / 2;
    if h > 16 {
        return Err(Error::GuardExceeded(format!("2^{h} interpolation nodes")));
    }
    let max = mat.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    // |per A| <= n! max^n
    let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
    let magnitude = fact * BigUint::from(max).pow(n as u32);
    let mat = Arc::new(mat);
    let builder = Arc::new(move |m: Modulus| {
        check_nodes(&m, 1 << h)?;
        let a: Vec<Vec<u64>> = mat.iter().map(|r| r.iter().map(|&v| m.from_i64(v)).collect()).collect();
        // (-1)^{popcount(i)} sum_{k<h} a_0k bit_k(i) at every node
        let first: Vec<u64> = (0..1usize << h)
            .map(|i| {
                let s = (0..h).filter(|&k| i >> k & 1 == 1).fold(0, |acc, k| m.add(acc, a[0][k]));
                m.mul(parity_sign(&m, i.count_ones()), s)
            })
            .collect();
        let sign_n = parity_sign(&m, n as u32);
        Ok(Arc::new(move |x0: u64| {
            let (lam, d) = digit_interpolants(&m, h, x0);
            let dot = |v: &[u64]| lam.iter().zip(v).fold(0, |acc, (&l, &x)| m.mul_add(acc, l, x));
            let u = dot(&first);
            let sigma = lam
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &l)| m.mul_add(acc, l, parity_sign(&m, i.count_ones())));
            // first-half linear parts of rows 1..n
            let lin: Vec<u64> = (0..n)
                .map(|r| (0..h).fold(0, |acc, k| m.mul_add(acc, a[r][k], d[k])))
                .collect();
            let mut total = 0u64;
            for z2 in 0usize..1 << (n - h) {
                let c = |r: usize| {
                    (0..n - h)
                        .filter(|&k| z2 >> k & 1 == 1)
                        .fold(0, |acc, k| m.add(acc, a[r][h + k]))
                };
                let mut term = m.add(u, m.mul(c(0), sigma));
                for r in 1..n {
                    term = m.mul(term, m.add(lin[r], c(r)));
                }
                let s = m.mul(sign_n, parity_sign(&m, z2.count_ones()));
                total = m.mul_add(total, s, term);
            }
            total
        }) as Evaluator)
    });
    TaskSpec::new(
        "permanent",
        n * ((1 << h) - 1),
        magnitude,
        builder,
        window_sum_extractor(0..=((1u64 << h) - 1), true),
    )
}

pub fn permanent_job(a: &[Vec<i64>]) -> Result<Job> {
    Ok(Job::single(permanent_task(a)?, |v| Ok(Answer::scalar(v[0].clone()))))
}

/// Permanent by dynamic programming over column subsets.
pub fn permanent_oracle(a: &[Vec<i64>]) -> Result<BigInt> {
    let n = a.len();
    guard((n as u128) << n.min(100), "permanent subsets")?;
    let mut dp = vec![BigInt::zero(); 1 << n];
    dp[0] = BigInt::one();
    for mask in 0usize..1 << n {
        let row = mask.count_ones() as usize;
        if row >= n || dp[mask].is_zero() {
            continue;
        }
        for (j, &v) in a[row].iter().enumerate() {
            if mask >> j & 1 == 0 && v != 0 {
                let add = &dp[mask] * v;
                dp[mask | 1 << j] += add;
            }
        }
    }
    Ok(dp[(1 << n) - 1].clone())
}

// ---- set covers over a small family ---------------------------------------

/// `c_t(F) = sum_{i} P(i)`, the number of `t`-tuples from `F` whose union is
/// the universe `0..n`, via inclusion-exclusion with the first half of the
/// `y` variables interpolated. Odd `n` gets one extra element that every
/// set contains.
pub fn setcover_task(sets: &[u64], n: usize, t: u64) -> Result<TaskSpec> {
    if n == 0 || n > 40 {
        return Err(Error::Input("set cover universe must have 1..=40 elements".into()));
    }
    if t == 0 {
        return Err(Error::Input("need at least one set per cover".into()));
    }
    if sets.iter().any(|&x| x >> n != 0) {
        return Err(Error::Input(format!("set outside the universe 0..{n}")));
    }
    let pad = n % 2;
    let full = n + pad;
    let sets: Arc<Vec<u64>> = Arc::new(sets.iter().map(|&x| x | (pad as u64) << n).collect());
    let h = full / 2;
    let builder = Arc::new(move |m: Modulus| {
        check_nodes(&m, 1 << h)?;
        let sets = sets.clone();
        Ok(Arc::new(move |x0: u64| {
            let (_, d) = digit_interpolants(&m, h, x0);
            let first_sign = d.iter().fold(1 % m.q(), |p, &y| m.mul(p, m.sub(1, m.add(y, y))));
            // prod_{j in X, j < h} y_j for every set
            let inner: Vec<u64> = sets
                .iter()
                .map(|&x| (0..h).filter(|&j| x >> j & 1 == 1).fold(1 % m.q(), |p, j| m.mul(p, d[j])))
                .collect();
            let sign_n = parity_sign(&m, full as u32);
            let mut total = 0u64;
            for y2 in 0u64..1 << (full - h) {
                let s = sets
                    .iter()
                    .zip(&inner)
                    .filter(|(&x, _)| (x >> h) & !y2 == 0)
                    .fold(0, |acc, (_, &v)| m.add(acc, v));
                let sign = m.mul(sign_n, parity_sign(&m, y2.count_ones()));
                total = m.mul_add(total, m.mul(sign, first_sign), m.pow(s, t));
            }
            total
        }) as Evaluator)
    });
    let degree = ((1usize << h) - 1) * (1 + t as usize) * h;
    let magnitude = BigUint::one() << (full as u64 * (t + 1));
    TaskSpec::new(
        format!("setcover[t={t}]"),
        degree,
        magnitude,
        builder,
        window_sum_extractor(0..=((1u64 << h) - 1), false),
    )
}

pub fn setcover_job(sets: &[u64], n: usize, t: u64) -> Result<Job> {
    Ok(Job::single(setcover_task(sets, n, t)?, |v| Ok(Answer::scalar(v[0].clone()))))
}

/// Ordered `t`-tuples from `sets` covering `0..n`, by enumeration.
pub fn setcover_oracle(sets: &[u64], n: usize, t: u64) -> Result<BigInt> {
    let work = (sets.len() as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    guard(work, "set cover tuples")?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    fn rec(sets: &[u64], left: u64, acc: u64, full: u64) -> u64 {
        if left == 0 {
            return u64::from(acc == full);
        }
        sets.iter().map(|&x| rec(sets, left - 1, acc | x, full)).sum()
    }
    Ok(BigInt::from(rec(sets, t, 0, full)))
}

// ---- 2-CSP by weight ------------------------------------------------------

/// A binary constraint on variables `u < v` (zero-based), satisfied by the
/// listed value pairs and contributing `weight` when satisfied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csp2Constraint {
    pub u: usize,
    pub v: usize,
    pub allowed: Vec<(usize, usize)>,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csp2Instance {
    pub n: usize,
    pub sigma: usize,
    pub constraints: Vec<Csp2Constraint>,
}

/// Largest per-group assignment count `sigma^{n/6}`.
pub const CSP_MAX_N: usize = 64;

impl Csp2Instance {
    pub fn new(n: usize, sigma: usize, constraints: Vec<Csp2Constraint>) -> Result<Self> {
        if n == 0 || n % 6 != 0 {
            return Err(Error::Unsupported(format!("variable count {n} is not a positive multiple of 6")));
        }
        if sigma == 0 {
            return Err(Error::Input("alphabet must be non-empty".into()));
        }
        let mut cs = Vec::with_capacity(constraints.len());
        for c in constraints {
            if c.u == c.v || c.u >= n || c.v >= n {
                return Err(Error::Input(format!("constraint on ({}, {}) is not binary over 0..{n}", c.u, c.v)));
            }
            if c.allowed.iter().any(|&(a, b)| a >= sigma || b >= sigma) {
                return Err(Error::Input("allowed pair outside the alphabet".into()));
            }
            // store with u < v
            let c = if c.u < c.v {
                c
            } else {
                Csp2Constraint {
                    u: c.v,
                    v: c.u,
                    allowed: c.allowed.iter().map(|&(a, b)| (b, a)).collect(),
                    weight: c.weight,
                }
            };
            cs.push(c);
        }
        Ok(Csp2Instance {
            n,
            sigma,
            constraints: cs,
        })
    }

    /// Total weight `sum_j w_j`, the degree of the enumerator.
    pub fn total_weight(&self) -> u64 {
        self.constraints.iter().map(|c| c.weight).sum()
    }

    fn group(&self, var: usize) -> usize {
        var / (self.n / 6) + 1
    }

    /// Lexicographically least pair `(s, t)` whose groups hold both variables.
    pub fn constraint_type(&self, c: &Csp2Constraint) -> (usize, usize) {
        let (a, b) = (self.group(c.u), self.group(c.v));
        if a != b {
            (a.min(b), a.max(b))
        } else if a == 1 {
            (1, 2)
        } else {
            (1, a)
        }
    }

    /// Weight of satisfied constraints under a full assignment.
    pub fn weight_of(&self, values: &[usize]) -> u64 {
        self.constraints
            .iter()
            .filter(|c| c.allowed.contains(&(values[c.u], values[c.v])))
            .map(|c| c.weight)
            .sum()
    }

    /// Values of the group's variables under group assignment `a`; the
    /// group's first variable is the most significant digit.
    fn group_values(&self, a: usize) -> Vec<usize> {
        let k = self.n / 6;
        let mut out = vec![0; k];
        let mut a = a;
        for slot in out.iter_mut().rev() {
            *slot = a % self.sigma;
            a /= self.sigma;
        }
        out
    }

    /// `f^{(s,t)}(a_s, a_t)` tables, one `N x N` matrix per pair in slot order.
    pub fn type_weights(&self) -> Result<Vec<Vec<u64>>> {
        let k = self.n / 6;
        let big_n = (self.sigma as u128).pow(k as u32);
        if big_n > CSP_MAX_N as u128 {
            return Err(Error::GuardExceeded(format!(
                "sigma^(n/6) = {big_n} exceeds {CSP_MAX_N}"
            )));
        }
        let big_n = big_n as usize;
        let vals: Vec<Vec<usize>> = (0..big_n).map(|a| self.group_values(a)).collect();
        let mut out = Vec::with_capacity(15);
        for (s, t) in pairs() {
            let mine: Vec<&Csp2Constraint> = self
                .constraints
                .iter()
                .filter(|c| self.constraint_type(c) == (s, t))
                .collect();
            let mut table = vec![0u64; big_n * big_n];
            for (i, vs) in vals.iter().enumerate() {
                for (j, vt) in vals.iter().enumerate() {
                    let value = |var: usize| {
                        let g = self.group(var);
                        let off = var % k;
                        if g == s {
                            vs[off]
                        } else {
                            debug_assert_eq!(g, t);
                            vt[off]
                        }
                    };
                    table[i * big_n + j] = mine
                        .iter()
                        .filter(|c| c.allowed.contains(&(value(c.u), value(c.v))))
                        .map(|c| c.weight)
                        .sum();
                }
            }
            out.push(table);
        }
        Ok(out)
    }
}

/// One fifteen-matrix task per `w0 = 0..=W` (with `W` the total weight),
/// `chi^{(s,t)}_{ab} = w0^{f^{(s,t)}(a,b)}`; the job interpolates the
/// weight enumerator over the integers.
pub fn csp2_job(inst: &Csp2Instance, choice: DecompChoice) -> Result<Job> {
    let tables = Arc::new(inst.type_weights()?);
    let big_n = (tables[0].len() as f64).sqrt().round() as usize;
    let dec = choose_decomposition(big_n, choice)?;
    let top = inst.total_weight();
    let rank = dec.rank() as u64;
    let assignments = BigUint::from(inst.sigma).pow(inst.n as u32);
    let mut tasks = Vec::with_capacity(top as usize + 1);
    for w0 in 0..=top {
        let tables = tables.clone();
        let dec = dec.clone();
        let builder = Arc::new(move |m: Modulus| {
            let mats: Vec<ChiMatrix> = tables
                .iter()
                .map(|tab| ChiMatrix::new(big_n, tab.iter().map(|&f| m.pow(m.reduce(w0), f)).collect()))
                .collect::<Result<_>>()?;
            let ev = Form62Evaluator::new(m, &ChiFamily::new(mats)?, &dec)?;
            Ok(Arc::new(move |x: u64| ev.eval(x)) as Evaluator)
        });
        let magnitude = &assignments * BigUint::from(w0.max(1)).pow(top as u32);
        tasks.push(TaskSpec::new(
            format!("csp2[w={w0}]"),
            3 * (rank as usize - 1),
            magnitude,
            builder,
            window_sum_extractor(1..=rank, false),
        )?);
    }
    Ok(Job {
        problem: "csp2".into(),
        tasks,
        combine: Arc::new(move |outs: &[Vec<BigInt>]| {
            let xs: Vec<BigInt> = (0..=top).map(BigInt::from).collect();
            let ys: Vec<BigInt> = outs.iter().map(|o| o[0].clone()).collect();
            let mut coeffs = interpolate_integer(&xs, &ys)?;
            coeffs.resize(top as usize + 1, BigInt::zero());
            Ok(csp2_answer(coeffs))
        }),
    })
}

/// Counts by total weight, then the enumerator polynomial in `w`.
pub fn csp2_answer(coeffs: Vec<BigInt>) -> Answer {
    Answer {
        text: format!(
            "{}\nenumerator {}",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            format_univariate(&coeffs, "w")
        ),
        values: coeffs,
    }
}

/// Weight enumerator by visiting all `sigma^n` assignments.
pub fn csp2_oracle(inst: &Csp2Instance) -> Result<Vec<BigInt>> {
    let work = (inst.sigma as u128).checked_pow(inst.n as u32).unwrap_or(u128::MAX);
    guard(work, "assignment enumeration")?;
    let mut counts = vec![0u64; inst.total_weight() as usize + 1];
    let mut values = vec![0usize; inst.n];
    loop {
        counts[inst.weight_of(&values) as usize] += 1;
        let mut i = 0;
        loop {
            if i == inst.n {
                return Ok(counts.into_iter().map(BigInt::from).collect());
            }
            values[i] += 1;
            if values[i] < inst.sigma {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}
