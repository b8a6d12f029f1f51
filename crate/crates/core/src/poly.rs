//! Dense univariate polynomials over a prime field, quadratic-time algorithms.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{batch_inverse, FieldElement, Modulus};

/// Coefficient vector with index `j` holding the coefficient of `x^j`.
/// Always normalized: empty for zero, otherwise the last entry is nonzero.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    modulus: Modulus,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?} mod {}", self.coeffs, self.modulus.q())
    }
}

impl Poly {
    /// Reduces and normalizes raw coefficients.
    pub fn new(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c = modulus.reduce(*c);
        }
        let mut p = Poly { modulus, coeffs };
        p.trim();
        p
    }

    pub fn from_elements(modulus: Modulus, coeffs: &[FieldElement]) -> Self {
        let raw = coeffs
            .iter()
            .map(|c| {
                assert_eq!(c.modulus(), modulus, "field elements from different moduli");
                c.value()
            })
            .collect();
        Poly::new(modulus, raw)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Poly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(modulus: Modulus, c: u64) -> Self {
        Poly::new(modulus, vec![c])
    }

    /// `x^k`
    pub fn monomial(modulus: Modulus, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1 % modulus.q();
        Poly::new(modulus, c)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// Coefficient of `x^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> FieldElement {
        self.modulus.elem(self.coeffs.get(j).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation on a raw residue.
    pub fn eval_raw(&self, x: u64) -> u64 {
        let m = &self.modulus;
        let x = m.reduce(x);
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    pub fn eval(&self, x0: FieldElement) -> FieldElement {
        assert_eq!(x0.modulus(), self.modulus, "field elements from different moduli");
        self.modulus.elem(self.eval_raw(x0.value()))
    }

    fn check(&self, other: &Poly) {
        assert_eq!(
            self.modulus, other.modulus,
            "polynomials from different moduli"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let m = &self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                m.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::new(self.modulus, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check(other);
        let m = &self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                m.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::new(self.modulus, c)
    }

    pub fn scale(&self, s: u64) -> Poly {
        let m = &self.modulus;
        let s = m.reduce(s);
        Poly::new(self.modulus, self.coeffs.iter().map(|&c| m.mul(c, s)).collect())
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.modulus);
        }
        let m = &self.modulus;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = m.mul_add(c[i + j], a, b);
            }
        }
        Poly::new(self.modulus, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        self.check(divisor);
        let m = &self.modulus;
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (Poly::zero(self.modulus), self.clone());
        }
        let lead_inv = m.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = m.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = m.sub(rem[i + j], m.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Poly::new(self.modulus, quot), Poly::new(self.modulus, rem))
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(modulus: Modulus, roots: &[u64]) -> Poly {
        let m = &modulus;
        let mut c = vec![1 % m.q()];
        for &r in roots {
            let r = m.reduce(r);
            c.push(0);
            for j in (0..c.len()).rev() {
                let lower = if j > 0 { c[j - 1] } else { 0 };
                c[j] = m.sub(lower, m.mul(r, c[j]));
            }
        }
        Poly::new(modulus, c)
    }
}

/// Horner's rule: `sum_j p_j x0^j`.
pub fn poly_eval(p: &Poly, x0: FieldElement) -> FieldElement {
    p.eval(x0)
}

/// Lagrange interpolation on raw residues in O(n^2).
pub fn interpolate_raw(modulus: Modulus, xs: &[u64], ys: &[u64]) -> Result<Poly> {
    if xs.len() != ys.len() {
        return Err(Error::Input(format!(
            "{} points but {} values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.is_empty() {
        return Err(Error::Input("interpolation needs at least one point".into()));
    }
    let m = &modulus;
    let xs: Vec<u64> = xs.iter().map(|&x| m.reduce(x)).collect();
    let mut seen = HashSet::with_capacity(xs.len());
    for &x in &xs {
        if !seen.insert(x) {
            return Err(Error::Input(format!("duplicate interpolation point {x}")));
        }
    }
    let n = xs.len();
    if xs[0].checked_add(n as u64).is_some_and(|end| end <= m.q()) && xs.iter().enumerate().all(|(i, &x)| x == xs[0] + i as u64) {
        return Ok(interpolate_consecutive(modulus, xs[0], ys));
    }
    let full = Poly::from_roots(modulus, &xs);
    let full_c = &full.coeffs;
    // M'(x_i) = prod_{j != i} (x_i - x_j)
    let denoms: Vec<u64> = (0..n)
        .map(|i| {
            let mut acc = 1u64;
            for j in 0..n {
                if j != i {
                    acc = m.mul(acc, m.sub(xs[i], xs[j]));
                }
            }
            acc
        })
        .collect();
    let inv = batch_inverse(m, &denoms);
    let mut out = vec![0u64; n];
    let mut quot = vec![0u64; n];
    for i in 0..n {
        let w = m.mul(m.reduce(ys[i]), inv[i]);
        if w == 0 {
            continue;
        }
        // synthetic division of M(x) by (x - x_i)
        let mut carry = 0u64;
        for j in (0..n).rev() {
            carry = m.add(full_c[j + 1], m.mul(carry, xs[i]));
            quot[j] = carry;
        }
        for j in 0..n {
            out[j] = m.mul_add(out[j], w, quot[j]);
        }
    }
    Ok(Poly::new(modulus, out))
}

/// Newton divided differences on `a, a+1, ..., a+n-1`, where every
/// spacing is a small integer with a precomputable inverse.
fn interpolate_consecutive(modulus: Modulus, a: u64, ys: &[u64]) -> Poly {
    let m = &modulus;
    let n = ys.len();
    let ks: Vec<u64> = (1..n as u64).collect();
    let inv = batch_inverse(m, &ks);
    let mut dd: Vec<u64> = ys.iter().map(|&y| m.reduce(y)).collect();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = m.mul(m.sub(dd[i], dd[i - 1]), inv[k - 1]);
        }
    }
    // Horner in the Newton basis: P = dd[k] + (x - a - k) P
    let mut out = vec![0u64; n];
    out[0] = dd[n - 1];
    let mut len = 1;
    for k in (0..n - 1).rev() {
        let shift = m.neg(m.reduce(a + k as u64));
        out[len] = out[len - 1];
        for j in (1..len).rev() {
            out[j] = m.mul_add(out[j - 1], shift, out[j]);
        }
        out[0] = m.mul_add(dd[k], shift, out[0]);
        len += 1;
    }
    Poly::new(modulus, out)
}

/// The unique polynomial of degree `< points.len()` through the given pairs.
pub fn poly_interpolate(points: &[FieldElement], values: &[FieldElement]) -> Result<Poly> {
    let modulus = points
        .first()
        .map(|p| p.modulus())
        .ok_or_else(|| Error::Input("interpolation needs at least one point".into()))?;
    let xs: Vec<u64> = points
        .iter()
        .map(|p| {
            assert_eq!(p.modulus(), modulus, "field elements from different moduli");
            p.value()
        })
        .collect();
    let ys: Vec<u64> = values
        .iter()
        .map(|v| {
            assert_eq!(v.modulus(), modulus, "field elements from different moduli");
            v.value()
        })
        .collect();
    interpolate_raw(modulus, &xs, &ys)
}

/// Values `Lambda_1(x0), ..., Lambda_R(x0)` of the Lagrange basis on nodes `1..=R`.
pub fn lagrange_basis_raw(modulus: Modulus, r: usize, x0: u64) -> Result<Vec<u64>> {
    let m = &modulus;
    if m.q() <= r as u64 {
        return Err(Error::ModulusTooSmall {
            q: m.q(),
            need: r as u64,
        });
    }
    let x0 = m.reduce(x0);
    let mut out = vec![0u64; r];
    if x0 >= 1 && x0 <= r as u64 {
        out[x0 as usize - 1] = 1;
        return Ok(out);
    }
    let mut fact = Vec::with_capacity(r);
    fact.push(1u64);
    for j in 1..r {
        fact.push(m.mul(fact[j - 1], j as u64));
    }
    let diffs: Vec<u64> = (1..=r as u64).map(|j| m.sub(x0, m.reduce(j))).collect();
    let gamma = diffs.iter().fold(1u64, |acc, &d| m.mul(acc, d));
    let denoms: Vec<u64> = (0..r)
        .map(|i| m.mul(diffs[i], m.mul(fact[i], fact[r - 1 - i])))
        .collect();
    let inv = batch_inverse(m, &denoms);
    for i in 0..r {
        let v = m.mul(gamma, inv[i]);
        // sign (-1)^(R - r) with r = i + 1
        out[i] = if (r - 1 - i) % 2 == 1 { m.neg(v) } else { v };
    }
    Ok(out)
}

pub fn lagrange_basis_at(r: usize, x0: FieldElement) -> Result<Vec<FieldElement>> {
    let m = x0.modulus();
    Ok(lagrange_basis_raw(m, r, x0.value())?
        .into_iter()
        .map(|v| m.elem(v))
        .collect())
}
