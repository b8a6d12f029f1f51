//! Exact integer reconstruction: CRT and interpolation over the rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Modulus;

/// Unique representative in `[0, prod q)` of the given residues.
pub fn crt_combine(residues: &[(u64, Modulus)]) -> Result<BigUint> {
    let mut seen: Vec<(u64, Modulus)> = Vec::with_capacity(residues.len());
    for &(v, m) in residues {
        let v = m.reduce(v);
        match seen.iter().find(|(_, s)| *s == m) {
            Some(&(w, _)) if w != v => {
                return Err(Error::Input(format!(
                    "inconsistent residues {w} and {v} modulo {m}"
                )))
            }
            Some(_) => {}
            None => seen.push((v, m)),
        }
    }
    let mut x = BigUint::zero();
    let mut prod = BigUint::one();
    for (v, m) in seen {
        let x_mod = (&x % m.q()).to_u64().unwrap();
        let prod_mod = (&prod % m.q()).to_u64().unwrap();
        let t = m.mul(m.sub(v, x_mod), m.inv(prod_mod));
        x += &prod * t;
        prod *= m.q();
    }
    Ok(x)
}

/// Product of the moduli.
pub fn modulus_product(moduli: &[Modulus]) -> BigUint {
    moduli.iter().fold(BigUint::one(), |acc, m| acc * m.q())
}

/// Maps `x` in `[0, prod)` to the symmetric range `(-prod/2, prod/2]`.
pub fn recenter(x: &BigUint, prod: &BigUint) -> BigInt {
    let half = prod >> 1u32;
    if x > &half {
        BigInt::from(x.clone()) - BigInt::from(prod.clone())
    } else {
        BigInt::from(x.clone())
    }
}

/// Residue of a signed integer modulo `m`.
pub fn bigint_mod(x: &BigInt, m: &Modulus) -> u64 {
    let r = x.mod_floor(&BigInt::from(m.q()));
    r.to_u64().unwrap()
}

/// Newton interpolation over the rationals. Returns coefficients in
/// increasing degree, length equal to the number of points.
pub fn interpolate_rational(xs: &[BigInt], ys: &[BigInt]) -> Result<Vec<BigRational>> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::Input("interpolation needs matching nonempty inputs".into()));
    }
    let n = xs.len();
    for i in 0..n {
        for j in 0..i {
            if xs[i] == xs[j] {
                return Err(Error::Input(format!("duplicate interpolation point {}", xs[i])));
            }
        }
    }
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    // expand the Newton form from the top
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs = coeffs * (x - xs[k]) + dd[k]
        let xk = BigRational::from_integer(xs[k].clone());
        let mut next = vec![BigRational::zero(); n];
        for j in 0..n {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < n {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * &xk;
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    Ok(coeffs)
}

/// Interpolation when the polynomial is known to have integer coefficients.
pub fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Result<Vec<BigInt>> {
    let coeffs = interpolate_rational(xs, ys)?;
    to_integers(coeffs)
}

pub fn to_integers(coeffs: Vec<BigRational>) -> Result<Vec<BigInt>> {
    let mut out: Vec<BigInt> = coeffs
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Extraction(format!("non-integral coefficient {c}")))
            }
        })
        .collect::<Result<_>>()?;
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// Grid interpolation: `values[i][j]` is the value at `(xs[i], ys[j])`.
/// Returns integer coefficients `c[a][b]` of `x^a y^b`.
pub fn interpolate_bivariate(xs: &[BigInt], ys: &[BigInt], values: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    if values.len() != xs.len() || values.iter().any(|row| row.len() != ys.len()) {
        return Err(Error::Input("grid shape does not match the axes".into()));
    }
    // interpolate along y for each x, then along x for each y-degree
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(xs.len());
    for row in values {
        let mut c = interpolate_rational(ys, row)?;
        c.resize(ys.len(), BigRational::zero());
        rows.push(c);
    }
    let mut out = vec![vec![BigInt::zero(); ys.len()]; xs.len()];
    for b in 0..ys.len() {
        let column: Vec<BigRational> = rows.iter().map(|r| r[b].clone()).collect();
        let coeffs = interpolate_rational_values(xs, &column)?;
        for (a, c) in coeffs.into_iter().enumerate() {
            if !c.is_integer() {
                return Err(Error::Extraction(format!("non-integral coefficient {c}")));
            }
            out[a][b] = c.to_integer();
        }
    }
    Ok(out)
}

fn interpolate_rational_values(xs: &[BigInt], ys: &[BigRational]) -> Result<Vec<BigRational>> {
    // scale to integers by the common denominator
    let den = ys.iter().fold(BigInt::one(), |acc, y| acc.lcm(y.denom()));
    let scaled: Vec<BigInt> = ys.iter().map(|y| (y * BigRational::from_integer(den.clone())).to_integer()).collect();
    let c = interpolate_rational(xs, &scaled)?;
    let den = BigRational::from_integer(den);
    Ok(c.into_iter().map(|v| v / &den).collect())
}

/// `|x| <= bound`
pub fn within(x: &BigInt, bound: &BigUint) -> bool {
    x.abs().to_biguint().is_some_and(|a| &a <= bound)
}
