//! Trilinear decompositions of the matrix-multiplication tensor,
//! `sum_{d,e,f} u_de v_ef w_df = sum_r (sum a_de(r) u_de)(sum b_ef(r) v_ef)(sum g_df(r) w_df)`,
//! with Kronecker structure: coefficients of a power are digit-wise products
//! of the base coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::yates::{checked_pow, BaseMatrix};

/// Base coefficient tables of shape `N0^2 x R0` (row `d*N0 + e`, column `r`)
/// together with the Kronecker power level `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriDecomp {
    pub name: String,
    pub n0: usize,
    pub r0: usize,
    pub t: usize,
    pub alpha0: Vec<i64>,
    pub beta0: Vec<i64>,
    pub gamma0: Vec<i64>,
    n: usize,
    r: usize,
}

/// Which decomposition to use for a given matrix dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompChoice {
    Strassen,
    Naive,
    /// Whichever of the two has fewer rank-one terms.
    Auto,
}

impl std::str::FromStr for DecompChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strassen" => Ok(DecompChoice::Strassen),
            "naive" => Ok(DecompChoice::Naive),
            "auto" => Ok(DecompChoice::Auto),
            other => Err(Error::Input(format!("unknown decomposition {other:?}"))),
        }
    }
}

impl TriDecomp {
    fn from_base(name: &str, n0: usize, r0: usize, alpha0: Vec<i64>, beta0: Vec<i64>, gamma0: Vec<i64>) -> Self {
        assert_eq!(alpha0.len(), n0 * n0 * r0);
        assert_eq!(beta0.len(), n0 * n0 * r0);
        assert_eq!(gamma0.len(), n0 * n0 * r0);
        TriDecomp {
            name: name.to_string(),
            n0,
            r0,
            t: 1,
            alpha0,
            beta0,
            gamma0,
            n: n0,
            r: r0,
        }
    }

    /// Matrix dimension `N = N0^t`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rank-one terms `R = R0^t`.
    pub fn rank(&self) -> usize {
        self.r
    }

    /// `log R0 / log N0`, the exponent this family realizes.
    pub fn exponent(&self) -> f64 {
        if self.n0 <= 1 {
            3.0
        } else {
            (self.r0 as f64).ln() / (self.n0 as f64).ln()
        }
    }

    fn coeff(&self, table: &[i64], a: usize, b: usize, r: usize) -> i64 {
        let (mut a, mut b, mut r) = (a, b, r);
        let mut acc = 1i64;
        for _ in 0..self.t {
            let row = (a % self.n0) * self.n0 + b % self.n0;
            acc *= table[row * self.r0 + r % self.r0];
            if acc == 0 {
                return 0;
            }
            a /= self.n0;
            b /= self.n0;
            r /= self.r0;
        }
        acc
    }

    /// `alpha_{de}(r)` with `r` in `[R]` (zero-based).
    pub fn alpha(&self, d: usize, e: usize, r: usize) -> i64 {
        self.coeff(&self.alpha0, d, e, r)
    }

    pub fn beta(&self, e: usize, f: usize, r: usize) -> i64 {
        self.coeff(&self.beta0, e, f, r)
    }

    pub fn gamma(&self, d: usize, f: usize, r: usize) -> i64 {
        self.coeff(&self.gamma0, d, f, r)
    }

    fn base_matrix(&self, m: Modulus, table: &[i64]) -> BaseMatrix {
        BaseMatrix::from_i64(m, self.n0 * self.n0, self.r0, table).expect("base table shape")
    }

    /// The three base tables as `N0^2 x R0` matrices over `Z_q`.
    pub fn base_matrices(&self, m: Modulus) -> [BaseMatrix; 3] {
        [
            self.base_matrix(m, &self.alpha0),
            self.base_matrix(m, &self.beta0),
            self.base_matrix(m, &self.gamma0),
        ]
    }

    /// Inverse of [`TriDecomp::pair_permutation`]: the Yates index of the
    /// matrix position `(d, e)`.
    pub fn pair_index(&self, d: usize, e: usize) -> usize {
        let (mut d, mut e, mut o, mut scale) = (d, e, 0, 1);
        for _ in 0..self.t {
            o += ((d % self.n0) * self.n0 + e % self.n0) * scale;
            scale *= self.n0 * self.n0;
            d /= self.n0;
            e /= self.n0;
        }
        o
    }

    /// Maps a Yates output index over `[(N0^2)^t]`, whose digits are
    /// `d_j*N0 + e_j`, to the flat matrix index `d*N + e`.
    pub fn pair_permutation(&self) -> Vec<usize> {
        let total = self.n * self.n;
        (0..total)
            .map(|o| {
                let (mut o, mut d, mut e, mut scale) = (o, 0, 0, 1);
                for _ in 0..self.t {
                    let digit = o % (self.n0 * self.n0);
                    d += (digit / self.n0) * scale;
                    e += (digit % self.n0) * scale;
                    scale *= self.n0;
                    o /= self.n0 * self.n0;
                }
                d * self.n + e
            })
            .collect()
    }
}

/// Strassen's rank-7 decomposition of `<2,2,2>`.
pub fn strassen_base() -> TriDecomp {
    // rows A11, A12, A21, A22 ; columns M1..M7
    #[rustfmt::skip]
    let alpha = vec![
        1, 0, 1, 0, 1, -1, 0,
        0, 0, 0, 0, 1, 0, 1,
        0, 1, 0, 0, 0, 1, 0,
        1, 1, 0, 1, 0, 0, -1,
    ];
    #[rustfmt::skip]
    let beta = vec![
        1, 1, 0, -1, 0, 1, 0,
        0, 0, 1, 0, 0, 1, 0,
        0, 0, 0, 1, 0, 0, 1,
        1, 0, -1, 0, 1, 0, 1,
    ];
    #[rustfmt::skip]
    let gamma = vec![
        1, 0, 0, 1, -1, 0, 1,
        0, 0, 1, 0, 1, 0, 0,
        0, 1, 0, 1, 0, 0, 0,
        1, -1, 1, 0, 0, 1, 0,
    ];
    TriDecomp::from_base("strassen", 2, 7, alpha, beta, gamma)
}

/// The schoolbook decomposition of `<n0,n0,n0>` with `r = (i,j,k)`.
pub fn naive_base(n0: usize) -> TriDecomp {
    assert!(n0 >= 1, "naive decomposition needs n0 >= 1");
    let r0 = n0 * n0 * n0;
    let mut alpha = vec![0i64; n0 * n0 * r0];
    let mut beta = alpha.clone();
    let mut gamma = alpha.clone();
    for i in 0..n0 {
        for j in 0..n0 {
            for k in 0..n0 {
                let r = (i * n0 + j) * n0 + k;
                alpha[(i * n0 + j) * r0 + r] = 1;
                beta[(j * n0 + k) * r0 + r] = 1;
                gamma[(i * n0 + k) * r0 + r] = 1;
            }
        }
    }
    TriDecomp::from_base("naive", n0, r0, alpha, beta, gamma)
}

/// The `t`-th Kronecker power, a decomposition of `<N0^t, N0^t, N0^t>`.
pub fn kronecker_power(base: &TriDecomp, t: usize) -> Result<TriDecomp> {
    if t == 0 {
        return Err(Error::Input("Kronecker power needs t >= 1".into()));
    }
    let level = base
        .t
        .checked_mul(t)
        .ok_or_else(|| Error::Range("power level overflows".into()))?;
    let n = checked_pow(base.n0, level)?;
    let r = checked_pow(base.r0, level)?;
    n.checked_mul(n)
        .ok_or_else(|| Error::Range("N^2 overflows".into()))?;
    Ok(TriDecomp {
        t: level,
        n,
        r,
        ..base.clone()
    })
}

/// Largest dimension for which `Auto` considers the schoolbook
/// decomposition (its base tables hold `n^5` entries).
pub const NAIVE_AUTO_MAX: usize = 16;

/// Picks a decomposition covering dimension `n` (padding up to a power of
/// two for Strassen).
pub fn choose_decomposition(n: usize, choice: DecompChoice) -> Result<TriDecomp> {
    let n = n.max(1);
    let strassen = || {
        let t = (usize::BITS - (n - 1).leading_zeros()).max(1) as usize;
        kronecker_power(&strassen_base(), t)
    };
    match choice {
        DecompChoice::Strassen => strassen(),
        DecompChoice::Naive => Ok(naive_base(n)),
        DecompChoice::Auto => {
            let s = strassen()?;
            if n <= NAIVE_AUTO_MAX && n.pow(3) <= s.rank() {
                Ok(naive_base(n))
            } else {
                Ok(s)
            }
        }
    }
}

/// Checks the decomposition identity on every unit-tensor triple.
pub fn verify_decomposition(dec: &TriDecomp, n: usize) -> Result<bool> {
    if n != dec.n() {
        return Err(Error::Input(format!("dimension {n} differs from N = {}", dec.n())));
    }
    if n > 8 {
        return Err(Error::GuardExceeded(format!("verification limited to N <= 8, got {n}")));
    }
    let r = dec.rank();
    let nn = n * n;
    let mut a = vec![0i64; nn * r];
    let mut b = vec![0i64; nn * r];
    let mut c = vec![0i64; nn * r];
    for x in 0..n {
        for y in 0..n {
            for rr in 0..r {
                a[(x * n + y) * r + rr] = dec.alpha(x, y, rr);
                b[(x * n + y) * r + rr] = dec.beta(x, y, rr);
                c[(x * n + y) * r + rr] = dec.gamma(x, y, rr);
            }
        }
    }
    // coefficient of u_de v_e'f w_d'f' must be [d=d'][e=e'][f=f']
    for de in 0..nn {
        for ef in 0..nn {
            let mut ab = vec![0i64; r];
            let mut any = false;
            for rr in 0..r {
                ab[rr] = a[de * r + rr] * b[ef * r + rr];
                any |= ab[rr] != 0;
            }
            for df in 0..nn {
                let s: i64 = if any {
                    (0..r).map(|rr| ab[rr] * c[df * r + rr]).sum()
                } else {
                    0
                };
                let (d, e) = (de / n, de % n);
                let (e2, f) = (ef / n, ef % n);
                let (d2, f2) = (df / n, df % n);
                let want = i64::from(d == d2 && e == e2 && f == f2);
                if s != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
