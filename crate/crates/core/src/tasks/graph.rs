//! Clique counting through the fifteen-factor form, and triangle counting
//! through the trace of `A^3` expressed with a trilinear decomposition.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{find_prime, Modulus};
use crate::form62::{ChiFamily, ChiMatrix, Form62Evaluator};
use crate::graph::Graph;
use crate::oracle::binomial;
use crate::task::{quotient_extractor, window_sum_extractor, Answer, Evaluator, Job, TaskSpec, DEFAULT_PRIME_START};
use crate::tensor::{choose_decomposition, DecompChoice, TriDecomp};
use crate::yates::{checked_pow, default_split_level, yates_poly_extension_eval, yates_split_sparse, BaseMatrix, SparseVec};

pub use crate::oracle::{clique_count_oracle, triangle_count_oracle};

/// Largest subset-matrix dimension accepted by the clique reduction.
pub const CLIQUE_MAX_N: usize = 4096;

/// All `s`-subsets of `[n]` as bitmasks, in colex order (ascending mask).
pub fn colex_subsets(n: usize, s: usize) -> Vec<u64> {
    assert!(n <= 63, "subset masks limited to 63 elements");
    if s == 0 {
        return vec![0];
    }
    if s > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x: u64 = (1 << s) - 1;
    while x < 1 << n {
        out.push(x);
        // next mask with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn is_clique(g: &Graph, mask: u64) -> bool {
    let vs: Vec<usize> = (0..64).filter(|&v| mask >> v & 1 == 1).collect();
    vs.iter()
        .enumerate()
        .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.adjacent(u, v)))
}

/// `chi_AB = [A and B disjoint, A u B a clique]` over colex-ranked
/// `(k/6)`-subsets.
pub fn clique_chi(g: &Graph, k: usize) -> Result<ChiMatrix> {
    if k == 0 || k % 6 != 0 {
        return Err(Error::Unsupported(format!("clique size {k} is not a positive multiple of 6")));
    }
    let s = k / 6;
    if binomial(g.n(), s) > CLIQUE_MAX_N as u128 {
        return Err(Error::GuardExceeded(format!(
            "C({}, {s}) subsets exceed the limit {CLIQUE_MAX_N}",
            g.n()
        )));
    }
    let subsets = colex_subsets(g.n(), s);
    let good: Vec<bool> = subsets.iter().map(|&a| is_clique(g, a)).collect();
    let n = subsets.len();
    let mut entries = vec![0u64; n * n];
    for i in 0..n {
        if !good[i] {
            continue;
        }
        for j in 0..n {
            let (a, b) = (subsets[i], subsets[j]);
            if good[j] && a & b == 0 && is_clique(g, a | b) {
                entries[i * n + j] = 1;
            }
        }
    }
    ChiMatrix::new(n, entries)
}

/// `k! / ((k/6)!)^6`: ordered disjoint six-part splits of one `k`-clique.
pub fn clique_multinomial(k: usize) -> BigInt {
    let fact = |n: usize| (1..=n).fold(BigInt::from(1), |acc, i| acc * i);
    fact(k) / fact(k / 6).pow(6)
}

/// Proof polynomial for the number of `k`-cliques; the answer is
/// `sum_{r=1}^R P(r)` divided by the multinomial.
pub fn clique_task(g: &Graph, k: usize, dec: &TriDecomp) -> Result<TaskSpec> {
    let chi = ChiFamily::single(clique_chi(g, k)?);
    let n = chi.n();
    if dec.n() < n {
        return Err(Error::Input(format!(
            "decomposition covers dimension {}, need {n}",
            dec.n()
        )));
    }
    let rank = dec.rank() as u64;
    let magnitude = BigUint::from(n.max(1)).pow(6);
    let dec = dec.clone();
    let builder = Arc::new(move |m: Modulus| {
        let ev = Form62Evaluator::new(m, &chi, &dec)?;
        Ok(Arc::new(move |x: u64| ev.eval(x)) as Evaluator)
    });
    let extractor = quotient_extractor(window_sum_extractor(1..=rank, false), clique_multinomial(k));
    TaskSpec::new(format!("cliques[k={k}]"), 3 * (rank as usize - 1), magnitude, builder, extractor)
}

/// Clique task with the decomposition picked for the subset dimension.
pub fn clique_job(g: &Graph, k: usize, choice: DecompChoice) -> Result<Job> {
    let s = k / 6;
    let dim = binomial(g.n(), s).max(1) as usize;
    let dec = choose_decomposition(dim, choice)?;
    let task = clique_task(g, k, &dec)?;
    Ok(Job::single(task, |v| Ok(Answer::scalar(v[0].clone()))))
}

// ---- triangles ------------------------------------------------------------

/// Shared per-prime state: the three transposed base tables and the sparse
/// adjacency vector in Yates pair order.
struct TraceSetup {
    bases: [BaseMatrix; 3],
    x: SparseVec,
    k: usize,
    ell: usize,
    parts: usize,
}

fn trace_setup(m: Modulus, g: &Graph, dec: &TriDecomp) -> Result<Option<TraceSetup>> {
    if g.is_multigraph() {
        return Err(Error::Input("triangle counting needs a simple graph".into()));
    }
    if dec.n() < g.n() {
        return Err(Error::Input(format!(
            "decomposition covers dimension {}, need {}",
            dec.n(),
            g.n()
        )));
    }
    if dec.r0 < dec.n0 * dec.n0 {
        return Err(Error::Input("split evaluation needs R0 >= N0^2".into()));
    }
    if g.m() == 0 {
        return Ok(None);
    }
    let mut entries: Vec<(usize, u64)> = Vec::with_capacity(2 * g.m());
    for &(u, v) in g.edges() {
        entries.push((dec.pair_index(u, v), 1));
        entries.push((dec.pair_index(v, u), 1));
    }
    entries.sort_unstable();
    let x = SparseVec::new(dec.n0 * dec.n0, dec.t, entries)?;
    let ell = default_split_level(dec.r0, x.support_size(), dec.t);
    let parts = checked_pow(dec.r0, dec.t - ell)?;
    let [a, b, c] = dec.base_matrices(m);
    Ok(Some(TraceSetup {
        bases: [a.transpose(), b.transpose(), c.transpose()],
        x,
        k: dec.t,
        ell,
        parts,
    }))
}

/// Number of split parts `R/m'` for the graph under `dec`.
pub fn triangle_window(g: &Graph, dec: &TriDecomp) -> Result<usize> {
    let m = find_prime(DEFAULT_PRIME_START)?;
    Ok(trace_setup(m, g, dec)?.map_or(1, |s| s.parts))
}

/// `trace(A^3) / 6` from all split/sparse parts of `A_r, B_r, C_r`, the
/// parts evaluated in parallel.
pub fn triangle_count_parallel(g: &Graph, dec: &TriDecomp) -> Result<BigInt> {
    let m = find_prime(DEFAULT_PRIME_START)?;
    let Some(s) = trace_setup(m, g, dec)? else {
        return Ok(BigInt::from(0));
    };
    let sums: Vec<u64> = (0..s.parts)
        .into_par_iter()
        .map(|p| -> Result<u64> {
            let [a, b, c] = &s.bases;
            let ya = yates_split_sparse(a, &s.x, s.k, Some(s.ell), p)?;
            let yb = yates_split_sparse(b, &s.x, s.k, Some(s.ell), p)?;
            let yc = yates_split_sparse(c, &s.x, s.k, Some(s.ell), p)?;
            Ok((0..ya.len()).fold(0, |acc, u| m.add(acc, m.mul(m.mul(ya[u], yb[u]), yc[u]))))
        })
        .collect::<Result<_>>()?;
    let trace = sums.into_iter().fold(0, |acc, v| m.add(acc, v));
    if trace % 6 != 0 {
        return Err(Error::Extraction(format!("trace {trace} is not divisible by 6")));
    }
    Ok(BigInt::from(trace / 6))
}

/// Proof polynomial `P(z) = sum_u A_u(z) B_u(z) C_u(z)` whose sum over
/// `z = 1..R/m'` is `trace(A^3)`; the answer is that sum divided by 6.
pub fn triangle_task(g: &Graph, dec: &TriDecomp) -> Result<TaskSpec> {
    let window = triangle_window(g, dec)?;
    let n = g.n() as u64;
    let magnitude = BigUint::from(n * n * n);
    let g = g.clone();
    let dec = dec.clone();
    let builder = Arc::new(move |m: Modulus| {
        let Some(s) = trace_setup(m, &g, &dec)? else {
            return Ok(Arc::new(|_x: u64| 0u64) as Evaluator);
        };
        if m.q() <= s.parts as u64 {
            return Err(Error::ModulusTooSmall {
                q: m.q(),
                need: s.parts as u64,
            });
        }
        Ok(Arc::new(move |z0: u64| {
            let [a, b, c] = &s.bases;
            let ev = |base: &BaseMatrix| {
                yates_poly_extension_eval(base, &s.x, s.k, Some(s.ell), z0).expect("checked at construction")
            };
            let (ya, yb, yc) = (ev(a), ev(b), ev(c));
            (0..ya.len()).fold(0, |acc, u| m.add(acc, m.mul(m.mul(ya[u], yb[u]), yc[u])))
        }) as Evaluator)
    });
    let extractor = quotient_extractor(window_sum_extractor(1..=window as u64, false), BigInt::from(6));
    TaskSpec::new("triangles", 3 * (window - 1), magnitude, builder, extractor)
}

/// One triangle task per connected component with at least one edge; the
/// answer is the sum.
pub fn triangle_job(g: &Graph, choice: DecompChoice) -> Result<Job> {
    let mut tasks = Vec::new();
    for comp in g.components() {
        let sub = g.induced(&comp);
        if sub.m() < 3 {
            continue;
        }
        let dec = choose_decomposition(sub.n(), choice)?;
        let mut t = triangle_task(&sub, &dec)?;
        t.label = format!("triangles[component of {}]", comp[0]);
        tasks.push(t);
    }
    if tasks.is_empty() {
        let dec = choose_decomposition(g.n(), choice)?;
        tasks.push(triangle_task(&Graph::empty(g.n()), &dec)?);
    }
    Ok(Job {
        problem: "triangles".into(),
        tasks,
        combine: Arc::new(|outs: &[Vec<BigInt>]| Ok(Answer::scalar(outs.iter().map(|o| &o[0]).sum()))),
    })
}

/// Degree threshold `max(1, floor(m^{(w-1)/(w+1)}))` with `w` the
/// exponent of `dec`.
pub fn ayz_threshold(m: usize, dec: &TriDecomp) -> usize {
    let w = dec.exponent();
    ((m as f64).powf((w - 1.0) / (w + 1.0)).floor() as usize).max(1)
}

/// Triangle count splitting vertices by degree: triangles among high-degree
/// vertices through the split/sparse trace on the induced subgraph, the
/// rest by scanning the labelled edge ends of low-degree vertices.
pub fn triangle_count_sparse_ayz(g: &Graph, dec: &TriDecomp) -> Result<BigInt> {
    if g.is_multigraph() {
        return Err(Error::Input("triangle counting needs a simple graph".into()));
    }
    let delta = ayz_threshold(g.m(), dec);
    let nbrs: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v)).collect();
    let low: Vec<bool> = nbrs.iter().map(|l| l.len() <= delta).collect();

    let high: Vec<usize> = (0..g.n()).filter(|&v| !low[v]).collect();
    let high_count = triangle_count_parallel(&g.induced(&high), dec)?;

    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut low_count = 0u64;
    for &(a, b) in g.edges() {
        for (x, y) in [(a, b), (b, a)] {
            if !low[x] {
                continue;
            }
            // x must be the least low endpoint of the edge
            if low[y] && y < x {
                continue;
            }
            for label in 1..=delta {
                let Some(&z) = nbrs[x].get(label - 1) else { break };
                if z == y || !g.adjacent(y, z) {
                    continue;
                }
                let e = norm(x, y);
                let others = [norm(x, z), norm(y, z)];
                let smallest = others
                    .iter()
                    .filter(|&&(p, q)| low[p] || low[q])
                    .all(|&o| e < o);
                if smallest {
                    low_count += 1;
                }
            }
        }
    }
    Ok(high_count + BigInt::from(low_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{clique_count_oracle, trace_a3};
    use crate::poly::interpolate_raw;
    use crate::tensor::{kronecker_power, naive_base, strassen_base};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn colex_order() {
        assert_eq!(colex_subsets(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(colex_subsets(3, 0), vec![0]);
        assert_eq!(colex_subsets(5, 5), vec![0b11111]);
        assert_eq!(colex_subsets(10, 3).len(), 120);
    }

    #[test]
    fn chi_is_symmetric_with_zero_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [6, 12] {
            let g = Graph::gnp(12, 0.7, &mut rng);
            let chi = clique_chi(&g, k).unwrap();
            for i in 0..chi.n {
                assert_eq!(chi.get(i, i), 0);
                for j in 0..chi.n {
                    assert_eq!(chi.get(i, j), chi.get(j, i));
                }
            }
        }
        assert!(matches!(clique_chi(&Graph::complete(6), 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn multinomials() {
        assert_eq!(clique_multinomial(6), BigInt::from(720));
        assert_eq!(clique_multinomial(12), BigInt::from(479001600 / 64));
    }

    #[test]
    fn clique_examples() {
        let dec = naive_base(7);
        for (g, want) in [(Graph::complete(6), 1), (Graph::complete(7), 7), (Graph::empty(7), 0)] {
            let t = clique_task(&g, 6, &dec).unwrap();
            assert_eq!(t.solve_direct().unwrap(), vec![BigInt::from(want)]);
        }
    }

    #[test]
    fn clique_random_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let g = Graph::gnp(8, 0.75, &mut rng);
            let job = clique_job(&g, 6, DecompChoice::Auto).unwrap();
            let want = clique_count_oracle(&g, 6).unwrap();
            assert_eq!(job.solve_direct().unwrap().values, vec![want]);
        }
    }

    #[test]
    fn twelve_cliques_via_pairs() {
        // C(8,2) = 28 subsets pad to a Strassen power; only the set-up is cheap
        let job = clique_job(&Graph::complete(8), 12, DecompChoice::Auto).unwrap();
        assert_eq!(job.tasks[0].degree, 3 * (7usize.pow(5) - 1));
    }

    fn strassen(t: usize) -> TriDecomp {
        kronecker_power(&strassen_base(), t).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let dec = strassen(2);
        assert_eq!(triangle_count_parallel(&Graph::complete(3), &dec).unwrap(), BigInt::from(1));
        assert_eq!(triangle_count_parallel(&Graph::path(3), &dec).unwrap(), BigInt::from(0));
        assert_eq!(triangle_count_parallel(&Graph::complete(4), &dec).unwrap(), BigInt::from(4));
        let t = triangle_task(&Graph::complete(4), &dec).unwrap();
        assert_eq!(t.solve_direct().unwrap(), vec![BigInt::from(4)]);
        let t = triangle_task(&Graph::empty(4), &dec).unwrap();
        assert_eq!(t.solve_direct().unwrap(), vec![BigInt::from(0)]);
        assert_eq!(triangle_count_sparse_ayz(&Graph::star(9), &dec.clone()).unwrap(), BigInt::from(0));
    }

    #[test]
    fn window_sum_is_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let dec = strassen(4);
        let m = Modulus::new(1_000_003).unwrap();
        for _ in 0..5 {
            let g = Graph::gnp(14, 0.3, &mut rng);
            let s = trace_setup(m, &g, &dec).unwrap().unwrap();
            assert!(s.parts > 1);
            let t = triangle_task(&g, &dec).unwrap();
            let ctx = &t.contexts[0];
            let q = ctx.modulus;
            let total = (1..=s.parts as u64).fold(0, |acc, z| q.add(acc, (ctx.evaluator)(z)));
            assert_eq!(total, trace_a3(&g));
            // degree bound 3(W-1)
            let xs: Vec<u64> = (0..=3 * s.parts as u64 + 2).collect();
            let ys: Vec<u64> = xs.iter().map(|&x| (ctx.evaluator)(x)).collect();
            let p = interpolate_raw(q, &xs, &ys).unwrap();
            assert!(p.degree().unwrap_or(0) <= t.degree);
        }
    }

    #[test]
    fn triangle_variants_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..15 {
            let n = rng.gen_range(3..=20);
            let g = Graph::gnp(n, rng.gen_range(0.1..0.9), &mut rng);
            let want = BigInt::from(trace_a3(&g) / 6);
            let dec = choose_decomposition(n, DecompChoice::Strassen).unwrap();
            assert_eq!(triangle_count_parallel(&g, &dec).unwrap(), want);
            assert_eq!(triangle_count_sparse_ayz(&g, &dec).unwrap(), want);
            assert_eq!(triangle_job(&g, DecompChoice::Strassen).unwrap().solve_direct().unwrap().values, vec![want]);
        }
    }
}
