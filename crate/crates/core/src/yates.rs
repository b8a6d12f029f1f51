//! Multiplication by Kronecker powers `A^{(x)k}` with Yates's algorithm:
//! the classical dense scheme, the split/sparse variant that produces the
//! output in independent parts, and its polynomial extension.
//!
//! Index convention used across the crate: `j` in `[s^k]` has base-`s`
//! digits `(j_1, ..., j_k)` with `j_1` the most significant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::poly::lagrange_basis_raw;

/// A `rows x cols` matrix over `Z_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
    /// nonzero `(col, value)` pairs per row
    nonzeros: Vec<Vec<(usize, u64)>>,
}

fn row_nonzeros(rows: usize, cols: usize, entries: &[u64]) -> Vec<Vec<(usize, u64)>> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .filter_map(|j| {
                    let c = entries[i * cols + j];
                    (c != 0).then_some((j, c))
                })
                .collect()
        })
        .collect()
}

impl BaseMatrix {
    pub fn new(modulus: Modulus, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input("base matrix needs positive dimensions".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Input(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries: Vec<u64> = entries.into_iter().map(|v| modulus.reduce(v)).collect();
        Ok(BaseMatrix {
            modulus,
            rows,
            cols,
            nonzeros: row_nonzeros(rows, cols, &entries),
            entries,
        })
    }

    pub fn from_i64(modulus: Modulus, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(modulus, rows, cols, entries.iter().map(|&v| modulus.from_i64(v)).collect())
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        Self::new(modulus, n, n, e).expect("identity of positive size")
    }

    /// `[[1,0],[1,1]]`, whose Kronecker powers are the subset zeta transform.
    pub fn subset_zeta(modulus: Modulus) -> Self {
        Self::new(modulus, 2, 2, vec![1, 0, 1, 1]).unwrap()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Row count `t`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count `s`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut e = vec![0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                e[j * self.rows + i] = self.get(i, j);
            }
        }
        BaseMatrix {
            modulus: self.modulus,
            rows: self.cols,
            cols: self.rows,
            nonzeros: row_nonzeros(self.cols, self.rows, &e),
            entries: e,
        }
    }

    /// Entry `(i, j)` of `A^{(x)k}` as a product over digits.
    pub fn kron_entry(&self, i: usize, j: usize, k: usize) -> u64 {
        let m = &self.modulus;
        let (mut i, mut j) = (i, j);
        let mut acc = 1 % m.q();
        for _ in 0..k {
            acc = m.mul(acc, self.get(i % self.rows, j % self.cols));
            i /= self.rows;
            j /= self.cols;
        }
        acc
    }
}

/// Sparse vector in `Z_q^{s^k}` given by its support `D` and values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseVec {
    pub s: usize,
    pub k: usize,
    pub entries: Vec<(usize, u64)>,
}

impl SparseVec {
    pub fn new(s: usize, k: usize, entries: Vec<(usize, u64)>) -> Result<Self> {
        let dim = checked_pow(s, k)?;
        if let Some(&(j, _)) = entries.iter().find(|(j, _)| *j >= dim) {
            return Err(Error::Input(format!("index {j} outside [{dim}]")));
        }
        Ok(SparseVec { s, k, entries })
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self, m: &Modulus) -> Vec<u64> {
        let mut x = vec![0; self.s.pow(self.k as u32)];
        for &(j, v) in &self.entries {
            x[j] = m.add(x[j], m.reduce(v));
        }
        x
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::Range(format!("{base}^{exp} overflows")))
}

/// Classical Yates over vectors whose entries are blocks of `lanes` residues.
pub fn yates_lanes(a: &BaseMatrix, x: &[u64], k: usize, lanes: usize) -> Result<Vec<u64>> {
    let (t, s) = (a.rows, a.cols);
    let need = checked_pow(s, k)?
        .checked_mul(lanes)
        .ok_or_else(|| Error::Range("vector length overflows".into()))?;
    if x.len() != need {
        return Err(Error::Input(format!(
            "vector has length {}, expected {need}",
            x.len()
        )));
    }
    checked_pow(t, k)?
        .checked_mul(lanes)
        .ok_or_else(|| Error::Range("output length overflows".into()))?;
    let m = a.modulus;
    let mut cur = x.to_vec();
    let mut pre = 1usize;
    for p in 0..k {
        let suf = s.pow((k - p - 1) as u32) * lanes;
        let mut next = vec![0u64; pre * t * suf];
        for b in 0..pre {
            for i in 0..t {
                let dst = (b * t + i) * suf;
                for &(j, c) in &a.nonzeros[i] {
                    let src = (b * s + j) * suf;
                    let (out, inp) = (&mut next[dst..dst + suf], &cur[src..src + suf]);
                    if c == 1 {
                        for (o, &v) in out.iter_mut().zip(inp) {
                            *o = m.add(*o, v);
                        }
                    } else {
                        for (o, &v) in out.iter_mut().zip(inp) {
                            *o = m.mul_add(*o, c, v);
                        }
                    }
                }
            }
        }
        cur = next;
        pre *= t;
    }
    Ok(cur)
}

/// `y = A^{(x)k} x` for dense `x` of length `s^k`.
pub fn yates_classical(a: &BaseMatrix, x: &[u64], k: usize) -> Result<Vec<u64>> {
    yates_lanes(a, x, k, 1)
}

/// Default split level `ceil(log_t |D|)`, capped at `k`.
pub fn default_split_level(t: usize, support: usize, k: usize) -> usize {
    let mut ell = 0;
    let mut cap = 1usize;
    while cap < support && ell < k {
        cap = cap.saturating_mul(t);
        ell += 1;
    }
    ell
}

fn check_split(a: &BaseMatrix, x: &SparseVec, k: usize, ell: Option<usize>) -> Result<usize> {
    if a.rows < a.cols {
        return Err(Error::Input(format!(
            "split evaluation needs rows >= cols, got {}x{}",
            a.rows, a.cols
        )));
    }
    if x.s != a.cols || x.k != k {
        return Err(Error::Input("sparse vector shape does not match the base".into()));
    }
    if x.entries.is_empty() {
        return Err(Error::Input("sparse vector has empty support".into()));
    }
    let ell = ell.unwrap_or_else(|| default_split_level(a.rows, x.entries.len(), k));
    if ell > k {
        return Err(Error::Input(format!("split level {ell} exceeds k = {k}")));
    }
    Ok(ell)
}

/// Collapses the sparse input onto its low digits with column weights
/// `weight(j_high)` and runs the inner classical Yates.
fn split_inner(
    a: &BaseMatrix,
    x: &SparseVec,
    k: usize,
    ell: usize,
    weight: impl Fn(usize) -> u64,
) -> Result<Vec<u64>> {
    let m = a.modulus;
    let low_dim = a.cols.pow(ell as u32);
    let high_dim = a.cols.pow((k - ell) as u32);
    let mut z = vec![0u64; low_dim];
    for &(j, v) in &x.entries {
        let (lo, hi) = (j / high_dim, j % high_dim);
        let w = weight(hi);
        if w != 0 {
            z[lo] = m.mul_add(z[lo], w, m.reduce(v));
        }
    }
    yates_classical(a, &z, ell)
}

/// The entries `y_{(i_1..i_ell, part)}` of `y = A^{(x)k} x`, where `part`
/// encodes the last `k - ell` output digits.
pub fn yates_split_sparse(
    a: &BaseMatrix,
    x: &SparseVec,
    k: usize,
    ell: Option<usize>,
    part: usize,
) -> Result<Vec<u64>> {
    let ell = check_split(a, x, k, ell)?;
    let parts = checked_pow(a.rows, k - ell)?;
    if part >= parts {
        return Err(Error::Input(format!("part {part} outside [{parts}]")));
    }
    split_inner(a, x, k, ell, |hi| a.kron_entry(part, hi, k - ell))
}

/// Polynomial extension of the split/sparse outer loop evaluated at `z0`.
/// At `z0 = p + 1` for `p` in `[t^{k-ell}]` this equals part `p`; in
/// general each coordinate is a polynomial in `z0` of degree `< t^{k-ell}`.
pub fn yates_poly_extension_eval(
    a: &BaseMatrix,
    x: &SparseVec,
    k: usize,
    ell: Option<usize>,
    z0: u64,
) -> Result<Vec<u64>> {
    let ell = check_split(a, x, k, ell)?;
    let alpha = outer_weights(a, k - ell, z0)?;
    split_inner(a, x, k, ell, |hi| alpha[hi])
}

/// `alpha_{j}(z0) = sum_p Phi_p(z0) (A^{(x)h})_{p, j}` for all `j` in `[s^h]`.
pub(crate) fn outer_weights(a: &BaseMatrix, h: usize, z0: u64) -> Result<Vec<u64>> {
    let parts = checked_pow(a.rows, h)?;
    let phi = lagrange_basis_raw(a.modulus, parts, z0)?;
    yates_classical(&a.transpose(), &phi, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::interpolate_raw;
    use proptest::prelude::*;

    fn q() -> Modulus {
        Modulus::new(1_000_003).unwrap()
    }

    fn dense_kron(a: &BaseMatrix, x: &[u64], k: usize) -> Vec<u64> {
        let m = a.modulus();
        let (t, s) = (a.rows().pow(k as u32), a.cols().pow(k as u32));
        let mut y = vec![0; t];
        for (i, yi) in y.iter_mut().enumerate() {
            for (j, &xj) in x.iter().enumerate().take(s) {
                // digit-wise product, most significant first
                let mut c = 1;
                let (mut ii, mut jj) = (i, j);
                for _ in 0..k {
                    c = m.mul(c, a.get(ii % a.rows(), jj % a.cols()));
                    ii /= a.rows();
                    jj /= a.cols();
                }
                *yi = m.mul_add(*yi, c, xj);
            }
        }
        y
    }

    #[test]
    fn zeta_example() {
        let a = BaseMatrix::subset_zeta(q());
        assert_eq!(yates_classical(&a, &[1, 2, 3, 4], 2).unwrap(), vec![1, 3, 4, 10]);
    }

    #[test]
    fn identity_and_single_level() {
        let m = q();
        let id = BaseMatrix::identity(m, 3);
        let x: Vec<u64> = (0..27).collect();
        assert_eq!(yates_classical(&id, &x, 3).unwrap(), x);
        let a = BaseMatrix::new(m, 2, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(yates_classical(&a, &[1, 1, 1], 1).unwrap(), vec![6, 15]);
    }

    #[test]
    fn size_mismatch_is_input_error() {
        let a = BaseMatrix::subset_zeta(q());
        assert!(matches!(yates_classical(&a, &[1, 2, 3], 2), Err(Error::Input(_))));
    }

    #[test]
    fn split_rejects_bad_parts() {
        let m = q();
        let a = BaseMatrix::subset_zeta(m);
        let x = SparseVec::new(2, 3, vec![(1, 5), (6, 2)]).unwrap();
        assert!(yates_split_sparse(&a, &x, 3, None, 4).is_err());
        let empty = SparseVec::new(2, 3, vec![]).unwrap();
        assert!(yates_split_sparse(&a, &empty, 3, None, 0).is_err());
    }

    #[test]
    fn extension_needs_large_modulus() {
        let m = Modulus::new(3).unwrap();
        let a = BaseMatrix::subset_zeta(m);
        let x = SparseVec::new(2, 3, vec![(1, 1)]).unwrap();
        assert!(matches!(
            yates_poly_extension_eval(&a, &x, 3, Some(1), 0),
            Err(Error::ModulusTooSmall { .. })
        ));
    }

    #[test]
    fn kron_entry_matches_dense() {
        let m = q();
        let a = BaseMatrix::new(m, 3, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        for j in 0..4 {
            let mut e = vec![0; 4];
            e[j] = 1;
            let col = dense_kron(&a, &e, 2);
            for (i, c) in col.iter().enumerate() {
                assert_eq!(a.kron_entry(i, j, 2), *c);
            }
        }
    }

    fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(t, s)| {
            let s = s.min(t);
            (Just(t), Just(s), prop::collection::vec(0u64..1_000_003, t * s))
        })
    }

    proptest! {
        #[test]
        fn classical_equals_dense((t, s, e) in matrix_strategy(), k in 1usize..=4, seed in prop::collection::vec(0u64..1_000_003, 81)) {
            let a = BaseMatrix::new(q(), t, s, e).unwrap();
            let x = &seed[..s.pow(k as u32)];
            prop_assert_eq!(yates_classical(&a, x, k).unwrap(), dense_kron(&a, x, k));
        }

        #[test]
        fn split_parts_concatenate_to_classical(
            (t, s, e) in matrix_strategy(),
            k in 1usize..=4,
            support in prop::collection::btree_map(0usize..81, 1u64..1_000_003, 1..10),
        ) {
            let m = q();
            let a = BaseMatrix::new(m, t, s, e).unwrap();
            let dim = s.pow(k as u32);
            let entries: Vec<(usize, u64)> = support
                .into_iter()
                .map(|(j, v)| (j % dim, v))
                .collect::<std::collections::BTreeMap<_, _>>()
                .into_iter()
                .collect();
            let x = SparseVec::new(s, k, entries).unwrap();
            let full = yates_classical(&a, &x.to_dense(&m), k).unwrap();
            let ell = default_split_level(t, x.support_size(), k);
            let parts = t.pow((k - ell) as u32);
            let mut got = vec![0; full.len()];
            for p in 0..parts {
                let part = yates_split_sparse(&a, &x, k, None, p).unwrap();
                for (u, v) in part.into_iter().enumerate() {
                    got[u * parts + p] = v;
                }
            }
            prop_assert_eq!(got, full);
        }

        #[test]
        fn extension_agrees_and_has_low_degree(
            (t, s, e) in matrix_strategy(),
            k in 1usize..=4,
            ell in 0usize..=4,
            support in prop::collection::btree_map(0usize..81, 1u64..1_000_003, 1..6),
        ) {
            let m = q();
            let ell = ell.min(k);
            let a = BaseMatrix::new(m, t, s, e).unwrap();
            let dim = s.pow(k as u32);
            let entries: Vec<(usize, u64)> = support
                .into_iter()
                .map(|(j, v)| (j % dim, v))
                .collect::<std::collections::BTreeMap<_, _>>()
                .into_iter()
                .collect();
            let x = SparseVec::new(s, k, entries).unwrap();
            let parts = t.pow((k - ell) as u32);
            for p in 0..parts {
                prop_assert_eq!(
                    yates_poly_extension_eval(&a, &x, k, Some(ell), p as u64 + 1).unwrap(),
                    yates_split_sparse(&a, &x, k, Some(ell), p).unwrap()
                );
            }
            // sample at fresh points and check the interpolant degree
            let zs: Vec<u64> = (0..=parts as u64).map(|i| 1000 + 17 * i).collect();
            let evals: Vec<Vec<u64>> = zs.iter().map(|&z| yates_poly_extension_eval(&a, &x, k, Some(ell), z).unwrap()).collect();
            for coord in 0..evals[0].len() {
                let ys: Vec<u64> = evals.iter().map(|v| v[coord]).collect();
                let p = interpolate_raw(m, &zs, &ys).unwrap();
                prop_assert!(p.degree().is_none_or(|d| d < parts));
            }
        }
    }
}
