//! Exponential-time reference answers: enumeration, deletion-contraction,
//! Kirchhoff. Single-threaded and guarded.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, UnionFind};

/// Default work limit for enumeration oracles (number of candidates).
pub const ORACLE_GUARD: u128 = 50_000_000;

static GUARD_LIMIT: AtomicU64 = AtomicU64::new(ORACLE_GUARD as u64);

/// Current process-wide oracle work limit.
pub fn oracle_guard() -> u128 {
    match GUARD_LIMIT.load(Ordering::Relaxed) {
        u64::MAX => u128::MAX,
        v => v as u128,
    }
}

/// Replaces the oracle work limit; `u128::MAX` disables it.
pub fn set_oracle_guard(limit: u128) {
    GUARD_LIMIT.store(limit.min(u64::MAX as u128) as u64, Ordering::Relaxed);
}

fn guard(work: u128, limit: u128, what: &str) -> Result<()> {
    if work > limit {
        return Err(Error::GuardExceeded(format!(
            "{what}: {work} candidates exceed the oracle limit {limit}"
        )));
    }
    Ok(())
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of `k`-vertex cliques, by enumerating all `k`-subsets.
pub fn clique_count_oracle(g: &Graph, k: usize) -> Result<BigInt> {
    clique_count_guarded(g, k, oracle_guard())
}

pub fn clique_count_guarded(g: &Graph, k: usize, limit: u128) -> Result<BigInt> {
    let n = g.n();
    guard(binomial(n, k), limit, "clique enumeration")?;
    if k == 0 {
        return Ok(BigInt::one());
    }
    fn rec(g: &Graph, chosen: &mut Vec<usize>, start: usize, k: usize) -> u64 {
        if chosen.len() == k {
            return 1;
        }
        let mut total = 0;
        for v in start..g.n() {
            if chosen.iter().all(|&u| g.adjacent(u, v)) {
                chosen.push(v);
                total += rec(g, chosen, v + 1, k);
                chosen.pop();
            }
        }
        total
    }
    Ok(BigInt::from(rec(g, &mut Vec::new(), 0, k)))
}

/// `trace(A^3)` by direct multiplication over adjacency bitsets.
pub fn trace_a3(g: &Graph) -> u64 {
    let mut total = 0u64;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if i != j && g.adjacent(i, j) {
                total += g
                    .adjacency_row(i)
                    .iter()
                    .zip(g.adjacency_row(j))
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum::<u64>();
            }
        }
    }
    total
}

/// Triangle count by cubing the adjacency matrix.
pub fn triangle_count_oracle(g: &Graph) -> BigInt {
    BigInt::from(trace_a3(g) / 6)
}

// ---- chromatic polynomial -------------------------------------------------

type Coeffs = Vec<BigInt>;

fn poly_add(a: &Coeffs, b: &Coeffs, sign: i32) -> Coeffs {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        if sign >= 0 {
            out[i] += v;
        } else {
            out[i] -= v;
        }
    }
    trim(out)
}

fn trim(mut v: Coeffs) -> Coeffs {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

/// `t (t-1) ... (t-n+1)` as coefficients.
pub fn falling_factorial(n: usize) -> Coeffs {
    let mut p = vec![BigInt::one()];
    for i in 0..n {
        // multiply by (t - i)
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (j, c) in p.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(i);
        }
        p = next;
    }
    trim(p)
}

struct Chromatic {
    memo: HashMap<Vec<u64>, Coeffs>,
}

impl Chromatic {
    /// `adj` holds one neighbour bitmask per vertex.
    fn solve(&mut self, adj: Vec<u64>) -> Coeffs {
        let n = adj.len();
        let m2: u32 = adj.iter().map(|r| r.count_ones()).sum();
        if m2 == 0 {
            let mut v = vec![BigInt::zero(); n + 1];
            v[n] = BigInt::one();
            return v;
        }
        if m2 as usize == n * (n - 1) {
            return falling_factorial(n);
        }
        if let Some(hit) = self.memo.get(&adj) {
            return hit.clone();
        }
        let dense = (m2 as usize) > n * (n - 1) / 2;
        let result = if dense {
            // addition-contraction on a non-edge
            let (u, v) = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .find(|&(u, v)| adj[u] >> v & 1 == 0)
                .expect("graph is not complete");
            let mut plus = adj.clone();
            plus[u] |= 1 << v;
            plus[v] |= 1 << u;
            let a = self.solve(plus);
            let b = self.solve(contract(&adj, u, v));
            poly_add(&a, &b, 1)
        } else {
            let u = (0..n).max_by_key(|&v| adj[v].count_ones()).unwrap();
            let v = adj[u].trailing_zeros() as usize;
            let mut minus = adj.clone();
            minus[u] &= !(1 << v);
            minus[v] &= !(1 << u);
            let a = self.solve(minus);
            let b = self.solve(contract(&adj, u, v));
            poly_add(&a, &b, -1)
        };
        self.memo.insert(adj, result.clone());
        result
    }
}

/// Merges `v` into `u` (simple graph: parallel edges collapse) and removes `v`.
fn contract(adj: &[u64], u: usize, v: usize) -> Vec<u64> {
    let n = adj.len();
    let mut merged = adj.to_vec();
    merged[u] |= merged[v];
    for w in 0..n {
        if merged[v] >> w & 1 == 1 {
            merged[w] |= 1 << u;
        }
    }
    merged[u] &= !(1 << u) & !(1 << v);
    let squeeze = |row: u64| -> u64 {
        let low = row & ((1u64 << v) - 1);
        let high = (row >> (v + 1)) << v;
        low | high
    };
    merged
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != v)
        .map(|(_, &r)| squeeze(r))
        .collect()
}

/// Coefficients of the chromatic polynomial (index = power of `t`) by
/// deletion-contraction with memoisation.
pub fn chromatic_oracle(g: &Graph) -> Result<Coeffs> {
    if g.n() > 24 {
        return Err(Error::GuardExceeded(format!(
            "deletion-contraction limited to 24 vertices, got {}",
            g.n()
        )));
    }
    if g.has_loops() {
        return Ok(Vec::new());
    }
    let mut adj = vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut c = Chromatic { memo: HashMap::new() };
    Ok(c.solve(adj))
}

/// Number of proper colourings with `t` colours, by backtracking.
pub fn colorings_count(g: &Graph, t: usize) -> u64 {
    fn rec(g: &Graph, colors: &mut Vec<usize>, t: usize) -> u64 {
        let v = colors.len();
        if v == g.n() {
            return 1;
        }
        let mut total = 0;
        for c in 0..t {
            if (0..v).all(|u| colors[u] != c || !g.adjacent(u, v)) {
                colors.push(c);
                total += rec(g, colors, t);
                colors.pop();
            }
        }
        total
    }
    if g.has_loops() {
        return 0;
    }
    rec(g, &mut Vec::new(), t)
}

// ---- Tutte polynomial -----------------------------------------------------

/// `T[i][j]` is the coefficient of `x^i y^j`.
pub type Bivariate = Vec<Vec<BigInt>>;

fn bi_zero() -> Bivariate {
    vec![vec![BigInt::zero()]]
}

fn bi_add(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let rows = a.len().max(b.len());
    let cols = a.iter().chain(b).map(|r| r.len()).max().unwrap_or(1);
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for src in [a, b] {
        for (i, r) in src.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                out[i][j] += v;
            }
        }
    }
    out
}

/// Multiplies by `x` (`dx = 1`) or `y` (`dy = 1`).
fn bi_shift(a: &Bivariate, dx: usize, dy: usize) -> Bivariate {
    let mut out = vec![vec![BigInt::zero(); a[0].len() + dy]; a.len() + dx];
    for (i, r) in a.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            out[i + dx][j + dy] = v.clone();
        }
    }
    out
}

/// Drops trailing zero rows and columns.
pub fn normalize_bivariate(mut a: Bivariate) -> Bivariate {
    let cols = a
        .iter()
        .map(|r| r.iter().rposition(|v| !v.is_zero()).map_or(0, |p| p + 1))
        .max()
        .unwrap_or(0)
        .max(1);
    for r in &mut a {
        r.resize(cols, BigInt::zero());
    }
    while a.len() > 1 && a.last().unwrap().iter().all(|v| v.is_zero()) {
        a.pop();
    }
    if a.is_empty() {
        return bi_zero();
    }
    a
}

fn connected_without(n: usize, edges: &[(usize, usize)], skip: usize, u: usize, v: usize) -> bool {
    let mut uf = UnionFind::new(n);
    for (i, &(a, b)) in edges.iter().enumerate() {
        if i != skip {
            uf.union(a, b);
        }
    }
    uf.find(u) == uf.find(v)
}

fn tutte_rec(n: usize, edges: &[(usize, usize)]) -> Bivariate {
    let Some(&(u, v)) = edges.last() else {
        return vec![vec![BigInt::one()]];
    };
    let last = edges.len() - 1;
    let rest = &edges[..last];
    if u == v {
        return bi_shift(&tutte_rec(n, rest), 0, 1);
    }
    // contraction: relabel v as u
    let contracted: Vec<(usize, usize)> = rest
        .iter()
        .map(|&(a, b)| {
            let a = if a == v { u } else { a };
            let b = if b == v { u } else { b };
            (a.min(b), a.max(b))
        })
        .collect();
    if !connected_without(n, edges, last, u, v) {
        return bi_shift(&tutte_rec(n, &contracted), 1, 0);
    }
    bi_add(&tutte_rec(n, rest), &tutte_rec(n, &contracted))
}

/// Tutte polynomial of a multigraph by deletion-contraction.
pub fn tutte_oracle(g: &Graph) -> Result<Bivariate> {
    if g.m() > 24 {
        return Err(Error::GuardExceeded(format!(
            "deletion-contraction limited to 24 edges, got {}",
            g.m()
        )));
    }
    Ok(normalize_bivariate(tutte_rec(g.n(), g.edges())))
}

pub fn eval_bivariate(p: &Bivariate, x: &BigInt, y: &BigInt) -> BigInt {
    let mut total = BigInt::zero();
    let mut xp = BigInt::one();
    for row in p {
        let mut yp = BigInt::one();
        for c in row {
            total += c * &xp * &yp;
            yp *= y;
        }
        xp *= x;
    }
    total
}

/// Renders `sum c_ij x^i y^j` as e.g. `x^2 + x + y`.
pub fn format_bivariate(p: &Bivariate) -> String {
    let mut terms: Vec<(usize, usize, &BigInt)> = Vec::new();
    for (i, row) in p.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                terms.push((i, j, c));
            }
        }
    }
    // total degree descending, then x-degree descending
    terms.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let var = |name: &str, k: usize| match k {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{k}"),
    };
    render_terms(terms.into_iter().map(|(i, j, c)| {
        let mono = [var("x", i), var("y", j)]
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("*");
        (c.clone(), mono)
    }))
}

/// Renders `sum c_k t^k`, highest power first.
pub fn format_univariate(p: &[BigInt], var: &str) -> String {
    render_terms(p.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        (c.clone(), mono)
    }))
}

fn render_terms(terms: impl Iterator<Item = (BigInt, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Number of maximal spanning forests (spanning trees when connected), by
/// the matrix-tree theorem on each component. Loops are ignored and
/// parallel edges counted with multiplicity.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    let mut total = BigInt::one();
    for comp in g.components() {
        let k = comp.len();
        if k <= 1 {
            continue;
        }
        let mut index = vec![usize::MAX; g.n()];
        for (i, &v) in comp.iter().enumerate() {
            index[v] = i;
        }
        let mut lap = vec![vec![BigInt::zero(); k]; k];
        for &(u, v) in g.edges() {
            if u == v || index[u] == usize::MAX {
                continue;
            }
            let (a, b) = (index[u], index[v]);
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
        let minor: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
        total *= determinant(minor);
    }
    total
}

/// Number of acyclic edge subsets, by enumeration.
pub fn forest_count(g: &Graph) -> Result<BigInt> {
    let m = g.m();
    guard(1u128 << m.min(100), oracle_guard(), "forest enumeration")?;
    let mut count = 0u64;
    for mask in 0u64..(1u64 << m) {
        let mut uf = UnionFind::new(g.n());
        let acyclic = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .all(|(_, &(u, v))| uf.union(u, v));
        if acyclic {
            count += 1;
        }
    }
    Ok(BigInt::from(count))
}
