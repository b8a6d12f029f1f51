//! Partitioning sum-products `sum_{(X_1..X_t)} f(X_1)...f(X_t)` over ordered
//! partitions of a universe, through a proof polynomial whose coefficient
//! `p_{2^|B| - 1}` is the answer. The universe is split into explicit
//! elements `E` and bit elements `B`; bit `b_i` carries weight `2^i`, so
//! `|B|` bits (with repetition) sum to `2^|B| - 1` only if each is used once.
//!
//! Instantiations: exact set partitions, the chromatic polynomial
//! (independent-set indicator) and the Tutte polynomial (Potts weights).

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::bipoly::pow_trunc_raw;
use crate::error::{Error, Result};
use crate::exact::{interpolate_bivariate, interpolate_integer};
use crate::field::Modulus;
use crate::graph::Graph;
use crate::oracle::{format_bivariate, format_univariate, normalize_bivariate, Bivariate};
use crate::task::{coefficient_extractor, quotient_extractor, Answer, Evaluator, Job, TaskSpec};
use crate::yates::{yates_lanes, BaseMatrix};

/// Largest universe the template accepts (subsets are 64-bit masks and
/// tables have `2^|E|` rows).
pub const TEMPLATE_MAX_N: usize = 40;

/// Split of the universe `0..n` into explicit elements and bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseSplit {
    pub n: usize,
    /// Explicit elements; for the tripartite split the first `e1` of them
    /// form `E1` and the rest `E2`.
    pub e: Vec<usize>,
    pub e1: usize,
    /// Bit elements; `b[i]` has weight `2^i`.
    pub b: Vec<usize>,
}

impl UniverseSplit {
    pub fn new(n: usize, e: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let e1 = e.len();
        Self::build(n, e, e1, b)
    }

    fn build(n: usize, e: Vec<usize>, e1: usize, b: Vec<usize>) -> Result<Self> {
        if n > TEMPLATE_MAX_N {
            return Err(Error::GuardExceeded(format!(
                "universe of {n} elements exceeds {TEMPLATE_MAX_N}"
            )));
        }
        let mut seen = vec![false; n];
        for &x in e.iter().chain(&b) {
            if x >= n || seen[x] {
                return Err(Error::Input(format!("element {x} repeated or outside 0..{n}")));
            }
            seen[x] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Input("split does not cover the universe".into()));
        }
        Ok(UniverseSplit { n, e, e1, b })
    }

    /// `E = {0..n/2}`, `B = {n/2..n}`; `n` must be even.
    pub fn halves(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::Input(format!("halves need an even universe, got {n}")));
        }
        Self::new(n, (0..n / 2).collect(), (n / 2..n).collect())
    }

    /// `E1, E2, B` of equal size `n/3` in that order.
    pub fn thirds(n: usize) -> Result<Self> {
        if n % 3 != 0 {
            return Err(Error::Input(format!("thirds need n divisible by 3, got {n}")));
        }
        let k = n / 3;
        Self::build(n, (0..2 * k).collect(), k, (2 * k..n).collect())
    }

    /// Degree bound `|B| 2^{|B|-1}` of the proof polynomial.
    pub fn degree(&self) -> usize {
        let nb = self.b.len();
        if nb == 0 {
            0
        } else {
            nb << (nb - 1)
        }
    }

    /// Index `2^|B| - 1` of the answer coefficient.
    pub fn target(&self) -> usize {
        (1usize << self.b.len()) - 1
    }

    fn e_mask(&self, x: u64) -> usize {
        self.e.iter().enumerate().fold(0, |acc, (i, &v)| acc | ((x >> v & 1) as usize) << i)
    }

    fn b_mask(&self, x: u64) -> usize {
        self.b.iter().enumerate().fold(0, |acc, (i, &v)| acc | ((x >> v & 1) as usize) << i)
    }
}

/// The set function `f` of the sum-product.
#[derive(Clone, Debug)]
pub enum SetFunction {
    /// Indicator of a family of subsets (bitmasks over the universe).
    Family(Vec<u64>),
    /// Indicator of independent sets of a graph on the universe.
    Independent(Graph),
    /// `(1 + r)^{|E(G[X])|}`, loops and parallel edges counted.
    Potts { graph: Graph, r: u64 },
}

/// A partitioning sum-product with `t` parts.
#[derive(Clone, Debug)]
pub struct PartitionInstance {
    pub split: UniverseSplit,
    pub parts: u64,
    pub f: SetFunction,
    /// Bound on `|f(X)|`.
    pub phi: BigUint,
}

impl PartitionInstance {
    pub fn new(split: UniverseSplit, parts: u64, f: SetFunction) -> Result<Self> {
        if parts == 0 {
            return Err(Error::Input("need at least one part".into()));
        }
        let phi = match &f {
            SetFunction::Family(sets) => {
                if sets.iter().any(|&x| split.n < 64 && x >> split.n != 0) {
                    return Err(Error::Input("set outside the universe".into()));
                }
                BigUint::one()
            }
            SetFunction::Independent(g) => {
                check_graph(g, &split)?;
                BigUint::one()
            }
            SetFunction::Potts { graph, r } => {
                check_graph(graph, &split)?;
                BigUint::from(1 + r).pow(graph.m() as u32)
            }
        };
        if matches!(f, SetFunction::Potts { .. }) && split.e1 * 2 != split.e.len() {
            return Err(Error::Input("Potts weights need the tripartite split".into()));
        }
        Ok(PartitionInstance { split, parts, f, phi })
    }

    /// Bound `2^{nt+1} phi^t` on the coefficients of the proof polynomial.
    pub fn magnitude(&self) -> BigUint {
        let n = self.split.n as u64;
        (BigUint::one() << (n * self.parts + 1)) * self.phi.pow(self.parts as u32)
    }

    /// `P(x0)` modulo `m`: node function table, sieve over `Y` in `2^E`,
    /// coefficient of `w_E^|E| w_B^|B|` in `g(Y)^t`.
    pub fn eval(&self, m: &Modulus, x0: u64) -> u64 {
        let g = node_function(self, m, x0);
        let (de, db) = (self.split.e.len(), self.split.b.len());
        let lanes = (de + 1) * (db + 1);
        let top = de * (db + 1) + db;
        let mut acc = 0u64;
        for (y, row) in g.chunks(lanes).enumerate() {
            let c = pow_trunc_raw(m, row, self.parts, de, db)[top];
            if (de - y.count_ones() as usize) % 2 == 0 {
                acc = m.add(acc, c);
            } else {
                acc = m.sub(acc, c);
            }
        }
        acc
    }
}

fn check_graph(g: &Graph, split: &UniverseSplit) -> Result<()> {
    if g.n() != split.n {
        return Err(Error::Input(format!(
            "graph has {} vertices, universe has {}",
            g.n(),
            split.n
        )));
    }
    Ok(())
}

/// `x0^{2^i}` for every bit.
fn bit_weights(m: &Modulus, nb: usize, x0: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(nb);
    let mut w = m.reduce(x0);
    for _ in 0..nb {
        out.push(w);
        w = m.mul(w, w);
    }
    out
}

/// `x0^{sum of weights of X}` for every `X` in `2^B`.
fn bit_products(m: &Modulus, weights: &[u64]) -> Vec<u64> {
    let mut out = vec![1 % m.q(); 1 << weights.len()];
    for x in 1..out.len() {
        let low = x.trailing_zeros() as usize;
        out[x] = m.mul(out[x & (x - 1)], weights[low]);
    }
    out
}

/// In-place zeta transform over `2^k` blocks of `lanes` residues.
fn zeta(m: &Modulus, table: &[u64], k: usize, lanes: usize) -> Vec<u64> {
    yates_lanes(&BaseMatrix::subset_zeta(*m), table, k, lanes).expect("table shape")
}

/// The node function `g(Y) = sum_{X : X n E in Y} f(X) w_E^{|X n E|}
/// w_B^{|X n B|} x0^{weights(X n B)}` for every `Y` in `2^E`, as a table of
/// `2^|E|` bivariate blocks.
pub fn node_function(inst: &PartitionInstance, m: &Modulus, x0: u64) -> Vec<u64> {
    match &inst.f {
        SetFunction::Family(sets) => g_setfamily(sets, &inst.split, m, x0),
        SetFunction::Independent(g) => g_independent(g, &inst.split, m, x0),
        SetFunction::Potts { graph, r } => g_potts(graph, *r, &inst.split, m, x0),
    }
}

pub fn g_setfamily(sets: &[u64], split: &UniverseSplit, m: &Modulus, x0: u64) -> Vec<u64> {
    let (de, db) = (split.e.len(), split.b.len());
    let lanes = (de + 1) * (db + 1);
    let xb = bit_products(m, &bit_weights(m, db, x0));
    let mut g0 = vec![0u64; lanes << de];
    for &x in sets {
        let (z, bm) = (split.e_mask(x), split.b_mask(x));
        let slot = z * lanes + z.count_ones() as usize * (db + 1) + bm.count_ones() as usize;
        g0[slot] = m.add(g0[slot], xb[bm]);
    }
    zeta(m, &g0, de, lanes)
}

/// Neighbour masks of each vertex restricted to the positions of `part`.
fn local_neighbours(g: &Graph, part: &[usize], of: &[usize]) -> Vec<usize> {
    of.iter()
        .map(|&v| {
            part.iter()
                .enumerate()
                .filter(|&(_, &u)| g.adjacent(v, u))
                .fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect()
}

pub fn g_independent(g: &Graph, split: &UniverseSplit, m: &Modulus, x0: u64) -> Vec<u64> {
    let (de, db) = (split.e.len(), split.b.len());
    let xb = bit_products(m, &bit_weights(m, db, x0));
    // f_B and its zeta transform, polynomials in w_B only
    let bb = local_neighbours(g, &split.b, &split.b);
    let mut indep_b = vec![false; 1 << db];
    indep_b[0] = true;
    let wb = db + 1;
    let mut fb = vec![0u64; wb << db];
    fb[0] = 1 % m.q();
    for x in 1usize..1 << db {
        let low = x.trailing_zeros() as usize;
        let rest = x & (x - 1);
        indep_b[x] = indep_b[rest] && bb[low] & x == 0;
        if indep_b[x] {
            fb[x * wb + x.count_ones() as usize] = xb[x];
        }
    }
    let gb = zeta(m, &fb, db, wb);

    // \hat f_E(X) = w_E^|X| g_B(B \ Gamma_B(X)) for independent X in E
    let ee = local_neighbours(g, &split.e, &split.e);
    let eb = local_neighbours(g, &split.b, &split.e);
    let lanes = (de + 1) * wb;
    let full_b = (1usize << db) - 1;
    let mut indep_e = vec![false; 1 << de];
    let mut gamma = vec![0usize; 1 << de];
    indep_e[0] = true;
    let mut fe = vec![0u64; lanes << de];
    fe[..wb].copy_from_slice(&gb[full_b * wb..(full_b + 1) * wb]);
    for x in 1usize..1 << de {
        let low = x.trailing_zeros() as usize;
        let rest = x & (x - 1);
        indep_e[x] = indep_e[rest] && ee[low] & x == 0;
        gamma[x] = gamma[rest] | eb[low];
        if indep_e[x] {
            let free = full_b & !gamma[x];
            let a = x.count_ones() as usize;
            let dst = x * lanes + a * wb;
            fe[dst..dst + wb].copy_from_slice(&gb[free * wb..(free + 1) * wb]);
        }
    }
    zeta(m, &fe, de, lanes)
}

/// Edge multiplicities between positions of two parts, and loop counts.
struct EdgeCounts {
    mult: Vec<Vec<u32>>,
    loops: Vec<u32>,
}

fn edge_counts(g: &Graph) -> EdgeCounts {
    let n = g.n();
    let mut mult = vec![vec![0u32; n]; n];
    let mut loops = vec![0u32; n];
    for &(u, v) in g.edges() {
        if u == v {
            loops[u] += 1;
        } else {
            mult[u][v] += 1;
            mult[v][u] += 1;
        }
    }
    EdgeCounts { mult, loops }
}

impl EdgeCounts {
    /// `|E(G[X])|` for every `X` in `2^part` (loops included).
    fn inside(&self, part: &[usize]) -> Vec<u32> {
        let mut out = vec![0u32; 1 << part.len()];
        for x in 1usize..out.len() {
            let low = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            let v = part[low];
            let to_rest: u32 = (0..part.len())
                .filter(|&i| rest >> i & 1 == 1)
                .map(|i| self.mult[v][part[i]])
                .sum();
            out[x] = out[rest] + self.loops[v] + to_rest;
        }
        out
    }

    /// `|E(G[X, Y])|` indexed `[y * 2^|px| + x]`.
    fn between(&self, px: &[usize], py: &[usize]) -> Vec<u32> {
        let nx = 1usize << px.len();
        // degree of each y into every X
        let mut to_x = vec![vec![0u32; nx]; py.len()];
        for (j, &y) in py.iter().enumerate() {
            for x in 1..nx {
                let low = x.trailing_zeros() as usize;
                to_x[j][x] = to_x[j][x & (x - 1)] + self.mult[y][px[low]];
            }
        }
        let mut out = vec![0u32; nx << py.len()];
        for y in 1usize..1 << py.len() {
            let low = y.trailing_zeros() as usize;
            let rest = y & (y - 1);
            for x in 0..nx {
                out[y * nx + x] = out[rest * nx + x] + to_x[low][x];
            }
        }
        out
    }
}

/// Node function for Potts weights: `g_0(Y1 u Y2) = f_{E1,E2}(Y1, Y2)
/// sum_X \hat f_{B,E1}(X, Y1) \hat f_{B,E2}(X, Y2)`, the sum over `X` being
/// one matrix product per `w_B` degree, followed by a zeta transform.
pub fn g_potts(g: &Graph, r: u64, split: &UniverseSplit, m: &Modulus, x0: u64) -> Vec<u64> {
    let (de, db) = (split.e.len(), split.b.len());
    let (e1, e2) = split.e.split_at(split.e1);
    let b = &split.b;
    let counts = edge_counts(g);
    let w = m.add(1 % m.q(), m.reduce(r));
    let pw: Vec<u64> = std::iter::successors(Some(1 % m.q()), |&p| Some(m.mul(p, w)))
        .take(g.m() + 1)
        .collect();
    let xb = bit_products(m, &bit_weights(m, db, x0));

    let in_b = counts.inside(b);
    let in_e1 = counts.inside(e1);
    let in_e2 = counts.inside(e2);
    let b_e1 = counts.between(b, e1);
    let b_e2 = counts.between(b, e2);
    let e2_e1 = counts.between(e2, e1);

    let (n1, n2, nb) = (1usize << e1.len(), 1usize << e2.len(), 1usize << db);
    // \hat f_{B,E1} without its monomial: (1+r)^{e(X,Y1) + e(X)} x0^{sum X}
    let f1 = |y1: usize, x: usize| m.mul(pw[(b_e1[y1 * nb + x] + in_b[x]) as usize], xb[x]);
    // \hat f_{B,E2} without its monomial: (1+r)^{e(X,Y2) + e(Y2)}
    let f2 = |x: usize, y2: usize| pw[(b_e2[y2 * nb + x] + in_e2[y2]) as usize];

    let wb = db + 1;
    let lanes = (de + 1) * wb;
    let mut g0 = vec![0u64; lanes << de];
    let mut by_deg = vec![0u64; wb];
    for y1 in 0..n1 {
        for y2 in 0..n2 {
            by_deg.iter_mut().for_each(|v| *v = 0);
            for x in 0..nb {
                let c = x.count_ones() as usize;
                by_deg[c] = m.mul_add(by_deg[c], f1(y1, x), f2(x, y2));
            }
            let f12 = pw[(e2_e1[y1 * n2 + y2] + in_e1[y1]) as usize];
            let y = y1 | y2 << e1.len();
            let a = y.count_ones() as usize;
            let dst = y * lanes + a * wb;
            for (c, &v) in by_deg.iter().enumerate() {
                g0[dst + c] = m.mul(f12, v);
            }
        }
    }
    zeta(m, &g0, de, lanes)
}

/// Proof polynomial of a partitioning sum-product; the extracted answer is
/// `p_{2^|B|-1}` divided by `divisor`.
pub fn partition_task(label: impl Into<String>, inst: PartitionInstance, divisor: BigInt) -> Result<TaskSpec> {
    let degree = inst.split.degree();
    let target = inst.split.target();
    let magnitude = inst.magnitude();
    let inst = Arc::new(inst);
    let builder = Arc::new(move |m: Modulus| {
        let inst = inst.clone();
        Ok(Arc::new(move |x0: u64| inst.eval(&m, x0)) as Evaluator)
    });
    let extractor = quotient_extractor(coefficient_extractor(target, false), divisor);
    TaskSpec::new(label, degree, magnitude, builder, extractor)
}

/// Adds isolated vertices until `n` is a multiple of `unit`.
fn pad_graph(g: &Graph, unit: usize) -> (Graph, usize) {
    let pad = (unit - g.n() % unit) % unit;
    (g.with_isolated(pad), pad)
}

/// Family over a universe padded by `pad` free elements: each set is
/// repeated with every subset of the new elements.
fn pad_family(sets: &[u64], n: usize, pad: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(sets.len() << pad);
    for &x in sets {
        for s in 0u64..1 << pad {
            out.push(x | s << n);
        }
    }
    out
}

/// Ordered `t`-tuples of sets from `sets` partitioning `0..n`
/// (divided by `t!` when `unordered`).
pub fn set_partition_job(sets: &[u64], n: usize, t: u64, unordered: bool) -> Result<Job> {
    if sets.contains(&0) {
        return Err(Error::Input("the family must not contain the empty set".into()));
    }
    if n < 64 && sets.iter().any(|&x| x >> n != 0) {
        return Err(Error::Input(format!("set outside the universe 0..{n}")));
    }
    let pad = n % 2;
    let split = UniverseSplit::halves(n + pad)?;
    let inst = PartitionInstance::new(split, t, SetFunction::Family(pad_family(sets, n, pad)))?;
    let task = partition_task(format!("setpartition[t={t}]"), inst, BigInt::from(t).pow(pad as u32))?;
    Ok(Job::single(task, move |v| {
        let mut x = v[0].clone();
        if unordered {
            let fact: BigInt = (1..=t).map(BigInt::from).product();
            x /= fact;
        }
        Ok(Answer::scalar(x))
    }))
}

/// One task per `t = 1..=n+1` giving `chi_G(t)`; the job interpolates the
/// integer coefficients.
pub fn chromatic_job(g: &Graph) -> Result<Job> {
    if g.is_multigraph() {
        return Err(Error::Input("chromatic polynomial expects a simple graph".into()));
    }
    let n = g.n();
    let (padded, pad) = pad_graph(g, 2);
    let split = UniverseSplit::halves(padded.n())?;
    let mut tasks = Vec::with_capacity(n + 1);
    for t in 1..=n as u64 + 1 {
        let inst = PartitionInstance::new(split.clone(), t, SetFunction::Independent(padded.clone()))?;
        tasks.push(partition_task(
            format!("chromatic[t={t}]"),
            inst,
            BigInt::from(t).pow(pad as u32),
        )?);
    }
    Ok(Job {
        problem: "chromatic".into(),
        tasks,
        combine: Arc::new(move |outs: &[Vec<BigInt>]| {
            let xs: Vec<BigInt> = (1..=n as u64 + 1).map(BigInt::from).collect();
            let ys: Vec<BigInt> = outs.iter().map(|o| o[0].clone()).collect();
            Ok(chromatic_answer(interpolate_integer(&xs, &ys)?))
        }),
    })
}

/// Coefficients (constant first) rendered as a polynomial in `t`.
pub fn chromatic_answer(mut coeffs: Vec<BigInt>) -> Answer {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Answer {
        text: format_univariate(&coeffs, "t"),
        values: coeffs,
    }
}

/// `T_G` from the Potts coefficients `z[a][b]` of `t^a r^b`, using
/// `T(x,y) = (x-1)^{-c} (y-1)^{-n} Z((x-1)(y-1), y-1)`.
pub fn tutte_from_potts(z: &[Vec<BigInt>], components: usize, n: usize) -> Result<Bivariate> {
    // in u = x-1, v = y-1 the term z_ab t^a r^b is z_ab u^a v^{a+b}
    let mut uv: Vec<Vec<BigInt>> = Vec::new();
    for (a, row) in z.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if a < components || a + b < n {
                return Err(Error::Extraction(format!(
                    "Potts term t^{a} r^{b} not divisible by the Tutte prefactor"
                )));
            }
            let (i, j) = (a - components, a + b - n);
            if uv.len() <= i {
                uv.resize(i + 1, Vec::new());
            }
            if uv[i].len() <= j {
                uv[i].resize(j + 1, BigInt::zero());
            }
            uv[i][j] += c;
        }
    }
    // expand (x-1)^i (y-1)^j
    let binom = |n: usize| -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for k in 0..n {
            let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
            row.push(next);
        }
        row
    };
    let rows = uv.len().max(1);
    let cols = uv.iter().map(|r| r.len()).max().unwrap_or(1).max(1);
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for (i, row) in uv.iter().enumerate() {
        let bi = binom(i);
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let bj = binom(j);
            for (p, cp) in bi.iter().enumerate() {
                let sp = if (i - p) % 2 == 0 { 1 } else { -1 };
                for (s, cs) in bj.iter().enumerate() {
                    let ss = if (j - s) % 2 == 0 { 1 } else { -1 };
                    out[p][s] += c * cp * cs * BigInt::from(sp * ss);
                }
            }
        }
    }
    Ok(normalize_bivariate(out))
}

/// `Z_G(t, r)` on the grid `t = 1..=n+1`, `r = 1..=m+1`, one task per grid
/// point; the job interpolates and converts to the Tutte polynomial.
pub fn tutte_job(g: &Graph) -> Result<Job> {
    let (n, m) = (g.n(), g.m());
    let (padded, pad) = pad_graph(g, 3);
    let padded = if padded.is_multigraph() {
        padded
    } else {
        Graph::multigraph(padded.n(), padded.edges().to_vec())?
    };
    let split = UniverseSplit::thirds(padded.n())?;
    let mut tasks = Vec::with_capacity((n + 1) * (m + 1));
    for t in 1..=n as u64 + 1 {
        for r in 1..=m as u64 + 1 {
            let f = SetFunction::Potts {
                graph: padded.clone(),
                r,
            };
            let inst = PartitionInstance::new(split.clone(), t, f)?;
            tasks.push(partition_task(
                format!("tutte[t={t},r={r}]"),
                inst,
                BigInt::from(t).pow(pad as u32),
            )?);
        }
    }
    let components = g.component_count();
    Ok(Job {
        problem: "tutte".into(),
        tasks,
        combine: Arc::new(move |outs: &[Vec<BigInt>]| {
            let ts: Vec<BigInt> = (1..=n as u64 + 1).map(BigInt::from).collect();
            let rs: Vec<BigInt> = (1..=m as u64 + 1).map(BigInt::from).collect();
            let grid: Vec<Vec<BigInt>> = outs.chunks(m + 1).map(|row| row.iter().map(|o| o[0].clone()).collect()).collect();
            let z = interpolate_bivariate(&ts, &rs, &grid)?;
            Ok(tutte_answer(&tutte_from_potts(&z, components, n)?))
        }),
    })
}

/// Nonzero coefficients as triples `i, j, c` for `c x^i y^j`.
pub fn tutte_answer(tutte: &Bivariate) -> Answer {
    let mut values = Vec::new();
    for (i, row) in tutte.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                values.extend([BigInt::from(i), BigInt::from(j), c.clone()]);
            }
        }
    }
    Answer {
        text: format_bivariate(tutte),
        values,
    }
}

/// Reads the Tutte coefficients back from an answer produced by
/// [`tutte_job`] (triples `i, j, c`).
pub fn tutte_from_answer(a: &Answer) -> Bivariate {
    let mut out: Bivariate = vec![vec![BigInt::zero()]];
    for tri in a.values.chunks(3) {
        let i: usize = tri[0].to_string().parse().unwrap_or(0);
        let j: usize = tri[1].to_string().parse().unwrap_or(0);
        if out.len() <= i {
            out.resize(i + 1, vec![BigInt::zero()]);
        }
        for row in out.iter_mut() {
            if row.len() <= j {
                row.resize(j + 1, BigInt::zero());
            }
        }
        out[i][j] = tri[2].clone();
    }
    normalize_bivariate(out)
}

/// Brute-force sum-product over all ordered `t`-tuples of disjoint sets
/// covering the universe (assigns each element to one part).
pub fn partition_sum_oracle(n: usize, t: u64, f: impl Fn(u64) -> BigInt) -> Result<BigInt> {
    let work = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if work > crate::oracle::oracle_guard() {
        return Err(Error::GuardExceeded(format!("{t}^{n} assignments")));
    }
    let mut total = BigInt::zero();
    let mut assign = vec![0u64; n];
    loop {
        let mut parts = vec![0u64; t as usize];
        for (v, &p) in assign.iter().enumerate() {
            parts[p as usize] |= 1 << v;
        }
        total += parts.iter().map(|&x| f(x)).product::<BigInt>();
        // next assignment in base t
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            assign[i] += 1;
            if assign[i] < t {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}
