//! Prime-field arithmetic on 64-bit residues.
//!
//! Products are formed in 128 bits and reduced with a Barrett constant
//! precomputed per modulus. Residues are plain `u64` values in `[0, q)`;
//! [`FieldElement`] pairs a residue with its modulus for the public API.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 62;

/// A prime modulus with its Barrett reduction constant.
#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus {
    q: u64,
    bits: u32,
    mu: u64,
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Modulus {}

impl std::hash::Hash for Modulus {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state)
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.q)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Modulus::new(q)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.q
    }
}

impl Modulus {
    /// Builds a modulus, checking that `q` is a prime below 2^62.
    pub fn new(q: u64) -> Result<Self> {
        if q >= MAX_MODULUS {
            return Err(Error::Range(format!("modulus {q} is not below 2^62")));
        }
        if !is_prime(q) {
            return Err(Error::Input(format!("modulus {q} is not prime")));
        }
        Ok(Self::new_unchecked(q))
    }

    fn new_unchecked(q: u64) -> Self {
        let bits = 64 - q.leading_zeros();
        let mu = ((1u128 << (2 * bits)) / q as u128) as u64;
        Modulus { q, bits, mu }
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Barrett reduction of `x < q^2`.
    #[inline]
    pub fn reduce128(&self, x: u128) -> u64 {
        let q1 = x >> (self.bits - 1);
        let q3 = (q1 * self.mu as u128) >> (self.bits + 1);
        let mut r = (x - q3 * self.q as u128) as u64;
        while r >= self.q {
            r -= self.q;
        }
        r
    }

    /// Reduces an arbitrary `u64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if x < self.q {
            x
        } else {
            x % self.q
        }
    }

    /// Maps a signed integer into `[0, q)`.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = self.reduce(x.unsigned_abs());
        if x < 0 {
            self.neg(r)
        } else {
            r
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce128(a as u128 * b as u128)
    }

    /// `acc + a*b`.
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        self.add(acc, self.mul(a, b))
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.q != 0, "inverse of zero mod {}", self.q);
        self.pow(a, self.q - 2)
    }

    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            modulus: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }
}

/// A residue together with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    modulus: Modulus,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn pow(self, exp: u64) -> Self {
        FieldElement {
            value: self.modulus.pow(self.value, exp),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Self {
        FieldElement {
            value: self.modulus.inv(self.value),
            modulus: self.modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    #[inline]
    fn check(&self, other: &Self) {
        assert_eq!(
            self.modulus.q, other.modulus.q,
            "field elements from different moduli"
        );
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        FieldElement {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        FieldElement {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        FieldElement {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a
/// complete witness set below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= lower_bound`.
pub fn find_prime(lower_bound: u64) -> Result<Modulus> {
    if lower_bound >= MAX_MODULUS {
        return Err(Error::Range(format!(
            "prime search bound {lower_bound} is not below 2^62"
        )));
    }
    let mut c = lower_bound.max(2);
    while c < MAX_MODULUS {
        if is_prime(c) {
            return Ok(Modulus::new_unchecked(c));
        }
        c += 1;
    }
    Err(Error::Range(format!("no prime in [{lower_bound}, 2^62)")))
}

/// `count` consecutive primes starting the search at `lower_bound`.
pub fn primes_from(lower_bound: u64, count: usize) -> Result<Vec<Modulus>> {
    let mut out = Vec::with_capacity(count);
    let mut next = lower_bound;
    for _ in 0..count {
        let m = find_prime(next)?;
        next = m.q() + 1;
        out.push(m);
    }
    Ok(out)
}

/// Inverts every entry with a single field inversion. Panics on a zero entry.
pub fn batch_inverse(m: &Modulus, xs: &[u64]) -> Vec<u64> {
    if xs.is_empty() {
        return Vec::new();
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = 1u64;
    for &x in xs {
        prefix.push(acc);
        acc = m.mul(acc, x);
    }
    let mut inv = m.inv(acc);
    let mut out = vec![0u64; xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = m.mul(inv, prefix[i]);
        inv = m.mul(inv, xs[i]);
    }
    out
}
