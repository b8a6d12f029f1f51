//! The fifteen-factor linear form
//! `X = sum_{a,b,c,d,e,f} prod_{1<=s<t<=6} chi^{(s,t)}_{x_s x_t}`
//! over six indices `(x_1..x_6) = (a,b,c,d,e,f)`: the literal sum, the
//! `N^2 x N^2` matrix route, the per-term circuit with `O(N^2)` working
//! space, and the evaluation of its proof polynomial at arbitrary points.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::poly::lagrange_basis_raw;
use crate::tensor::TriDecomp;
use crate::yates::{yates_classical, BaseMatrix};

/// Square `N x N` matrix of residues (interpreted modulo the prime in use).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiMatrix {
    pub n: usize,
    pub entries: Vec<u64>,
}

impl ChiMatrix {
    pub fn new(n: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Input(format!(
                "matrix of dimension {n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(ChiMatrix { n, entries })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    /// Embeds into the top-left corner of a zero `n x n` matrix.
    pub fn padded(&self, n: usize) -> ChiMatrix {
        assert!(n >= self.n);
        if n == self.n {
            return self.clone();
        }
        let mut e = vec![0; n * n];
        for i in 0..self.n {
            e[i * n..i * n + self.n].copy_from_slice(&self.entries[i * self.n..(i + 1) * self.n]);
        }
        ChiMatrix { n, entries: e }
    }
}

/// Fifteen matrices indexed by pairs `1 <= s < t <= 6`. Members may alias.
#[derive(Clone, Debug)]
pub struct ChiFamily {
    n: usize,
    mats: Vec<Arc<ChiMatrix>>,
}

/// Position of the pair `(s, t)` in the family, `1 <= s < t <= 6`.
pub fn pair_slot(s: usize, t: usize) -> usize {
    assert!(1 <= s && s < t && t <= 6, "invalid pair ({s}, {t})");
    // pairs in lexicographic order
    let before: usize = (1..s).map(|i| 6 - i).sum();
    before + (t - s - 1)
}

/// All pairs in slot order.
pub fn pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(15);
    for s in 1..=6 {
        for t in s + 1..=6 {
            out.push((s, t));
        }
    }
    out
}

impl ChiFamily {
    /// Every member is the same matrix.
    pub fn single(chi: ChiMatrix) -> Self {
        let shared = Arc::new(chi);
        ChiFamily {
            n: shared.n,
            mats: vec![shared; 15],
        }
    }

    /// Members in slot order, see [`pairs`].
    pub fn new(mats: Vec<ChiMatrix>) -> Result<Self> {
        if mats.len() != 15 {
            return Err(Error::Input(format!("need 15 matrices, got {}", mats.len())));
        }
        let n = mats[0].n;
        if mats.iter().any(|m| m.n != n) {
            return Err(Error::Input("family members differ in dimension".into()));
        }
        Ok(ChiFamily {
            n,
            mats: mats.into_iter().map(Arc::new).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: usize, t: usize) -> &ChiMatrix {
        &self.mats[pair_slot(s, t)]
    }

    /// Zero-pads every member to dimension `n`, preserving aliasing.
    pub fn padded(&self, n: usize) -> ChiFamily {
        if n == self.n {
            return self.clone();
        }
        let mut out: Vec<Arc<ChiMatrix>> = Vec::with_capacity(15);
        for (i, m) in self.mats.iter().enumerate() {
            let prior = (0..i).find(|&j| Arc::ptr_eq(&self.mats[j], m));
            out.push(match prior {
                Some(j) => out[j].clone(),
                None => Arc::new(m.padded(n)),
            });
        }
        ChiFamily { n, mats: out }
    }

    /// Members reduced modulo `m`, in slot order.
    fn reduced(&self, m: &Modulus) -> Vec<Vec<u64>> {
        self.mats
            .iter()
            .map(|c| c.entries.iter().map(|&v| m.reduce(v)).collect())
            .collect()
    }
}

/// Largest dimension the literal six-fold sum accepts.
pub const DIRECT_MAX_N: usize = 16;
/// Largest dimension for the `N^2 x N^2` route.
pub const NP_MAX_N: usize = 32;

/// The literal six-fold sum.
pub fn form62_direct(m: &Modulus, chi: &ChiFamily) -> Result<u64> {
    let n = chi.n;
    if n > DIRECT_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "direct evaluation limited to N <= {DIRECT_MAX_N}, got {n}"
        )));
    }
    let x = chi.reduced(m);
    let g = |s: usize, t: usize, i: usize, j: usize| x[pair_slot(s, t)][i * n + j];
    let mut total = 0u64;
    for a in 0..n {
        for b in 0..n {
            let p2 = g(1, 2, a, b);
            if p2 == 0 {
                continue;
            }
            for c in 0..n {
                let p3 = m.mul(p2, m.mul(g(1, 3, a, c), g(2, 3, b, c)));
                if p3 == 0 {
                    continue;
                }
                for d in 0..n {
                    let p4 = m.mul(p3, m.mul(m.mul(g(1, 4, a, d), g(2, 4, b, d)), g(3, 4, c, d)));
                    if p4 == 0 {
                        continue;
                    }
                    for e in 0..n {
                        let p5 = m.mul(
                            p4,
                            m.mul(
                                m.mul(g(1, 5, a, e), g(2, 5, b, e)),
                                m.mul(g(3, 5, c, e), g(4, 5, d, e)),
                            ),
                        );
                        if p5 == 0 {
                            continue;
                        }
                        for f in 0..n {
                            let p6 = m.mul(
                                m.mul(m.mul(g(1, 6, a, f), g(2, 6, b, f)), g(3, 6, c, f)),
                                m.mul(g(4, 6, d, f), g(5, 6, e, f)),
                            );
                            total = m.mul_add(total, p5, p6);
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Three `N^2 x N^2` matrices `U, S, T` and `X = sum U o (S T^T)`.
pub fn form62_np(m: &Modulus, chi: &ChiFamily) -> Result<u64> {
    let n = chi.n;
    if n > NP_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "N^2 x N^2 evaluation limited to N <= {NP_MAX_N}, got {n}"
        )));
    }
    let x = chi.reduced(m);
    let g = |s: usize, t: usize, i: usize, j: usize| x[pair_slot(s, t)][i * n + j];
    let nn = n * n;
    let mut u = vec![0u64; nn * nn];
    let mut s = vec![0u64; nn * nn];
    let mut t = vec![0u64; nn * nn];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let ab = a * n + b;
                    let cd = c * n + d;
                    u[ab * nn + cd] = m.mul(
                        m.mul(m.mul(g(1, 2, a, b), g(1, 3, a, c)), m.mul(g(1, 4, a, d), g(2, 3, b, c))),
                        g(2, 4, b, d),
                    );
                    // (a,b) x (e,f) for S, (c,d) x (e,f) for T
                    let (e, f) = (c, d);
                    s[ab * nn + cd] = m.mul(
                        m.mul(m.mul(g(1, 5, a, e), g(1, 6, a, f)), m.mul(g(2, 5, b, e), g(2, 6, b, f))),
                        g(5, 6, e, f),
                    );
                    let (cc, dd) = (a, b);
                    t[ab * nn + cd] = m.mul(
                        m.mul(m.mul(g(3, 4, cc, dd), g(3, 5, cc, e)), m.mul(g(3, 6, cc, f), g(4, 5, dd, e))),
                        g(4, 6, dd, f),
                    );
                }
            }
        }
    }
    let v = mul_abt(m, &s, &t, nn);
    Ok(u.iter().zip(&v).fold(0, |acc, (&x, &y)| m.mul_add(acc, x, y)))
}

/// `out[i][j] = sum_k x[i][k] y[j][k]` for square `n x n` inputs.
fn mul_abt(m: &Modulus, x: &[u64], y: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        let xi = &x[i * n..(i + 1) * n];
        if xi.iter().all(|&v| v == 0) {
            continue;
        }
        for j in 0..n {
            let yj = &y[j * n..(j + 1) * n];
            let mut acc = 0u64;
            for (&a, &b) in xi.iter().zip(yj) {
                if a != 0 && b != 0 {
                    acc = m.mul_add(acc, a, b);
                }
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// `out[i][j] = sum_k x[i][k] y[k][j]`.
fn mul_ab(m: &Modulus, x: &[u64], y: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let a = x[i * n + k];
            if a == 0 {
                continue;
            }
            for j in 0..n {
                let b = y[k * n + j];
                if b != 0 {
                    out[i * n + j] = m.mul_add(out[i * n + j], a, b);
                }
            }
        }
    }
    out
}

fn hadamard(m: &Modulus, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| m.mul(a, b)).collect()
}

/// One term of the circuit given coefficient matrices `alpha[d][e]`,
/// `beta[e][f]`, `gamma[d][f]`; every intermediate is `N x N`.
fn contract(m: &Modulus, x: &[Vec<u64>], n: usize, alpha: &[u64], beta: &[u64], gamma: &[u64]) -> u64 {
    let c = |s: usize, t: usize| x[pair_slot(s, t)].as_slice();
    // H_ad = sum_e chi15_ae (alpha o chi45)_de
    let h = mul_abt(m, c(1, 5), &hadamard(m, alpha, c(4, 5)), n);
    // A_ab = sum_d (chi14 o H)_ad chi24_bd
    let a = mul_abt(m, &hadamard(m, c(1, 4), &h), c(2, 4), n);
    // K_be = sum_f chi26_bf (beta o chi56)_ef
    let k = mul_abt(m, c(2, 6), &hadamard(m, beta, c(5, 6)), n);
    // B_bc = sum_e (chi25 o K)_be chi35_ce
    let b = mul_abt(m, &hadamard(m, c(2, 5), &k), c(3, 5), n);
    // L_cf = sum_d chi34_cd (gamma o chi46)_df
    let l = mul_ab(m, c(3, 4), &hadamard(m, gamma, c(4, 6)), n);
    // C_ac = sum_f chi16_af (chi36 o L)_cf
    let cc = mul_abt(m, c(1, 6), &hadamard(m, c(3, 6), &l), n);
    // Q_ab = sum_c (chi13 o C)_ac (chi23 o B)_bc
    let q = mul_abt(m, &hadamard(m, c(1, 3), &cc), &hadamard(m, c(2, 3), &b), n);
    // P = sum_ab chi12_ab A_ab Q_ab
    let mut p = 0u64;
    for i in 0..n * n {
        let w = c(1, 2)[i];
        if w != 0 {
            p = m.mul_add(p, w, m.mul(a[i], q[i]));
        }
    }
    p
}

/// Counters reported by [`form62_circuit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CircuitStats {
    /// Number of rank-one terms `P(r)` evaluated.
    pub r_terms: usize,
    /// Padded matrix dimension.
    pub n: usize,
}

fn padded_for(chi: &ChiFamily, dec: &TriDecomp) -> Result<ChiFamily> {
    if dec.n() < chi.n() {
        return Err(Error::Input(format!(
            "decomposition dimension {} below matrix dimension {}",
            dec.n(),
            chi.n()
        )));
    }
    Ok(chi.padded(dec.n()))
}

/// Coefficient matrices at rank-one term `r` (zero-based).
fn coefficients_at(m: &Modulus, dec: &TriDecomp, r: usize) -> [Vec<u64>; 3] {
    let n = dec.n();
    let mut out = [vec![0u64; n * n], vec![0u64; n * n], vec![0u64; n * n]];
    for i in 0..n {
        for j in 0..n {
            out[0][i * n + j] = m.from_i64(dec.alpha(i, j, r));
            out[1][i * n + j] = m.from_i64(dec.beta(i, j, r));
            out[2][i * n + j] = m.from_i64(dec.gamma(i, j, r));
        }
    }
    out
}

/// The term `P(r)` for `r` in `1..=R`.
pub fn form62_circuit_term(m: &Modulus, chi: &ChiFamily, dec: &TriDecomp, r: usize) -> Result<u64> {
    if r == 0 || r > dec.rank() {
        return Err(Error::Input(format!("term {r} outside 1..={}", dec.rank())));
    }
    let chi = padded_for(chi, dec)?;
    let x = chi.reduced(m);
    let [al, be, ga] = coefficients_at(m, dec, r - 1);
    Ok(contract(m, &x, chi.n(), &al, &be, &ga))
}

/// `sum_{r=1}^R P(r)`, evaluated term by term.
pub fn form62_circuit(m: &Modulus, chi: &ChiFamily, dec: &TriDecomp) -> Result<(u64, CircuitStats)> {
    let chi = padded_for(chi, dec)?;
    let x = chi.reduced(m);
    let mut total = 0u64;
    for r in 0..dec.rank() {
        let [al, be, ga] = coefficients_at(m, dec, r);
        total = m.add(total, contract(m, &x, chi.n(), &al, &be, &ga));
    }
    Ok((
        total,
        CircuitStats {
            r_terms: dec.rank(),
            n: chi.n(),
        },
    ))
}

/// Precomputed state for evaluating the proof polynomial modulo one prime.
#[derive(Clone, Debug)]
pub struct Form62Evaluator {
    m: Modulus,
    n: usize,
    rank: usize,
    t: usize,
    chi: Vec<Vec<u64>>,
    bases: [BaseMatrix; 3],
    perm: Vec<usize>,
}

impl Form62Evaluator {
    pub fn new(m: Modulus, chi: &ChiFamily, dec: &TriDecomp) -> Result<Self> {
        let rank = dec.rank();
        let need = 3 * rank as u64;
        if m.q() <= need {
            return Err(Error::ModulusTooSmall { q: m.q(), need });
        }
        let chi = padded_for(chi, dec)?;
        Ok(Form62Evaluator {
            m,
            n: chi.n(),
            rank,
            t: dec.t,
            chi: chi.reduced(&m),
            bases: dec.base_matrices(m),
            perm: dec.pair_permutation(),
        })
    }

    /// Degree bound of the proof polynomial, `3(R-1)`.
    pub fn degree_bound(&self) -> usize {
        3 * (self.rank - 1)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `P(x0)`: Lagrange weights at `x0`, coefficient interpolants by Yates
    /// over the Kronecker structure, then the `N x N` contractions.
    pub fn eval(&self, x0: u64) -> u64 {
        let m = &self.m;
        let lambda = lagrange_basis_raw(self.m, self.rank, x0).expect("modulus checked at construction");
        let nn = self.n * self.n;
        let coeff = |base: &BaseMatrix| {
            let y = yates_classical(base, &lambda, self.t).expect("shapes fixed by the decomposition");
            let mut out = vec![0u64; nn];
            for (o, &v) in y.iter().enumerate() {
                out[self.perm[o]] = v;
            }
            out
        };
        let al = coeff(&self.bases[0]);
        let be = coeff(&self.bases[1]);
        let ga = coeff(&self.bases[2]);
        contract(m, &self.chi, self.n, &al, &be, &ga)
    }
}

/// `P(x0)` for the proof polynomial of the form.
pub fn form62_proof_eval(m: &Modulus, chi: &ChiFamily, dec: &TriDecomp, x0: u64) -> Result<u64> {
    Ok(Form62Evaluator::new(*m, chi, dec)?.eval(x0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::find_prime;
    use crate::poly::interpolate_raw;
    use crate::tensor::{kronecker_power, naive_base, strassen_base};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_family(rng: &mut ChaCha8Rng, n: usize, q: u64) -> ChiFamily {
        let mats = (0..15)
            .map(|_| ChiMatrix::new(n, (0..n * n).map(|_| rng.gen_range(0..q)).collect()).unwrap())
            .collect();
        ChiFamily::new(mats).unwrap()
    }

    #[test]
    fn pair_slots_are_dense() {
        let all: Vec<usize> = pairs().iter().map(|&(s, t)| pair_slot(s, t)).collect();
        assert_eq!(all, (0..15).collect::<Vec<_>>());
    }

    #[test]
    fn all_ones_and_zero_member() {
        let m = Modulus::new(101).unwrap();
        let ones = ChiFamily::single(ChiMatrix::new(2, vec![1; 4]).unwrap());
        assert_eq!(form62_direct(&m, &ones).unwrap(), 64 % 101);
        assert_eq!(form62_np(&m, &ones).unwrap(), 64 % 101);
        let big = find_prime(1 << 40).unwrap();
        assert_eq!(form62_direct(&big, &ones).unwrap(), 64);
        assert_eq!(form62_circuit(&big, &ones, &strassen_base()).unwrap().0, 64);
        let mut mats: Vec<ChiMatrix> = (0..15).map(|_| ChiMatrix::new(2, vec![1; 4]).unwrap()).collect();
        mats[7] = ChiMatrix::new(2, vec![0; 4]).unwrap();
        let fam = ChiFamily::new(mats).unwrap();
        assert_eq!(form62_direct(&big, &fam).unwrap(), 0);
        assert_eq!(form62_np(&big, &fam).unwrap(), 0);
    }

    #[test]
    fn complete_six_gives_factorial() {
        let big = find_prime(1 << 40).unwrap();
        let n = 6;
        let e = (0..n * n).map(|i| u64::from(i / n != i % n)).collect();
        let fam = ChiFamily::single(ChiMatrix::new(n, e).unwrap());
        assert_eq!(form62_direct(&big, &fam).unwrap(), 720);
        assert_eq!(form62_np(&big, &fam).unwrap(), 720);
    }

    #[test]
    fn single_entry_pattern() {
        // chi^{(s,t)} = unit matrix at (0,0) everywhere: only the all-zero tuple survives
        let big = find_prime(1 << 40).unwrap();
        let mut e = vec![0; 4];
        e[0] = 3;
        let fam = ChiFamily::single(ChiMatrix::new(2, e).unwrap());
        let want = big.pow(3, 15);
        assert_eq!(form62_direct(&big, &fam).unwrap(), want);
        assert_eq!(form62_np(&big, &fam).unwrap(), want);
        assert_eq!(form62_circuit(&big, &fam, &naive_base(2)).unwrap().0, want);
    }

    #[test]
    fn four_way_agreement_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Modulus::new(101).unwrap();
        for _ in 0..5 {
            let fam = random_family(&mut rng, 2, 101);
            let direct = form62_direct(&m, &fam).unwrap();
            assert_eq!(form62_np(&m, &fam).unwrap(), direct);
            for dec in [naive_base(2), strassen_base()] {
                assert_eq!(form62_circuit(&m, &fam, &dec).unwrap().0, direct);
            }
        }
        let big = find_prime(1 << 50).unwrap();
        let fam = random_family(&mut rng, 4, big.q());
        let direct = form62_direct(&big, &fam).unwrap();
        assert_eq!(form62_np(&big, &fam).unwrap(), direct);
        let s2 = kronecker_power(&strassen_base(), 2).unwrap();
        assert_eq!(form62_circuit(&big, &fam, &s2).unwrap().0, direct);
        let ev = Form62Evaluator::new(big, &fam, &s2).unwrap();
        let sum = (1..=ev.rank() as u64).fold(0, |acc, r| big.add(acc, ev.eval(r)));
        assert_eq!(sum, direct);
    }

    #[test]
    fn proof_matches_terms_and_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let big = find_prime(1 << 50).unwrap();
        let fam = random_family(&mut rng, 2, big.q());
        let dec = strassen_base();
        let ev = Form62Evaluator::new(big, &fam, &dec).unwrap();
        for r in 1..=7 {
            assert_eq!(ev.eval(r as u64), form62_circuit_term(&big, &fam, &dec, r).unwrap());
        }
        let xs: Vec<u64> = (0..=3 * 7u64).map(|i| 100 + i).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| ev.eval(x)).collect();
        let p = interpolate_raw(big, &xs, &ys).unwrap();
        assert!(p.degree().unwrap() <= ev.degree_bound());
        // padded N=3 onto the N=4 decomposition
        let fam3 = random_family(&mut rng, 3, 1000);
        let s2 = kronecker_power(&dec, 2).unwrap();
        assert_eq!(
            form62_circuit(&big, &fam3, &s2).unwrap().0,
            form62_direct(&big, &fam3).unwrap()
        );
    }

    #[test]
    fn guards() {
        let m = Modulus::new(101).unwrap();
        let fam = ChiFamily::single(ChiMatrix::new(17, vec![0; 289]).unwrap());
        assert!(matches!(form62_direct(&m, &fam), Err(Error::GuardExceeded(_))));
        let small = ChiFamily::single(ChiMatrix::new(2, vec![1; 4]).unwrap());
        let s2 = kronecker_power(&strassen_base(), 2).unwrap();
        assert!(matches!(
            Form62Evaluator::new(m, &small, &s2),
            Err(Error::ModulusTooSmall { .. })
        ));
    }
}
