//! Nonsystematic Reed-Solomon encoding and Gao's decoder.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{DecodeFailure, Error, Result};
use crate::field::FieldElement;
use crate::poly::{interpolate_raw, Poly};

/// Who produced a share.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    Node(usize),
    External,
}

/// A claimed evaluation `P(point) = value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodewordShare {
    pub point: FieldElement,
    pub value: FieldElement,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub proof: Poly,
    /// Points whose received value disagrees with `proof`, ascending.
    pub error_points: Vec<u64>,
}

/// Evaluates `p` at each point.
pub fn rs_encode(p: &Poly, points: &[FieldElement]) -> Result<Vec<CodewordShare>> {
    let m = p.modulus();
    if points.len() as u64 > m.q() {
        return Err(Error::Input(format!(
            "{} points exceed the field size {}",
            points.len(),
            m.q()
        )));
    }
    if p.degree().is_some_and(|d| d >= points.len()) {
        return Err(Error::Input(format!(
            "degree {} needs more than {} points",
            p.degree().unwrap(),
            points.len()
        )));
    }
    let mut seen = HashSet::with_capacity(points.len());
    points
        .iter()
        .map(|&x| {
            assert_eq!(x.modulus(), m, "field elements from different moduli");
            if !seen.insert(x.value()) {
                return Err(Error::Input(format!("duplicate evaluation point {}", x.value())));
            }
            Ok(CodewordShare {
                point: x,
                value: p.eval(x),
                origin: Origin::External,
            })
        })
        .collect()
}

/// Largest number of corrupted values `received` shares can absorb at degree `d`.
pub fn correction_radius(received: usize, d: usize) -> usize {
    received.saturating_sub(d + 1) / 2
}

/// Decodes a received word to the unique polynomial of degree `<= d`
/// within half the minimum distance, reporting the disagreeing points.
pub fn gao_decode(received: &[CodewordShare], d: usize) -> Result<DecodeResult, DecodeFailure> {
    let e = received.len();
    if e < d + 1 {
        return Err(DecodeFailure::TooFewShares {
            received: e,
            needed: d + 1,
        });
    }
    let m = received[0].point.modulus();
    let mut seen = HashSet::with_capacity(e);
    let mut xs = Vec::with_capacity(e);
    let mut ys = Vec::with_capacity(e);
    for s in received {
        assert_eq!(s.point.modulus(), m, "field elements from different moduli");
        assert_eq!(s.value.modulus(), m, "field elements from different moduli");
        if !seen.insert(s.point.value()) {
            return Err(DecodeFailure::DuplicatePoint(s.point.value()));
        }
        xs.push(s.point.value());
        ys.push(s.value.value());
    }
    let g0 = Poly::from_roots(m, &xs);
    let g1 = interpolate_raw(m, &xs, &ys).expect("points already checked distinct");

    // partial extended Euclid: u*G0 + v*G1 = r, stop once 2 deg r < e + d + 1
    let below = |p: &Poly| p.degree().is_none_or(|k| 2 * k < e + d + 1);
    let (mut r0, mut r1) = (g0.clone(), g1.clone());
    let (mut u0, mut u1) = (Poly::constant(m, 1), Poly::zero(m));
    let (mut v0, mut v1) = (Poly::zero(m), Poly::constant(m, 1));
    while !below(&r1) {
        let (quot, rem) = r0.divrem(&r1);
        let u2 = u0.sub(&quot.mul(&u1));
        let v2 = v0.sub(&quot.mul(&v1));
        r0 = std::mem::replace(&mut r1, rem);
        u0 = std::mem::replace(&mut u1, u2);
        v0 = std::mem::replace(&mut v1, v2);
    }
    debug_assert_eq!(u1.mul(&g0).add(&v1.mul(&g1)), r1);
    let (proof, rem) = r1.divrem(&v1);
    if !rem.is_zero() {
        return Err(DecodeFailure::NonzeroRemainder);
    }
    if let Some(k) = proof.degree() {
        if k > d {
            return Err(DecodeFailure::DegreeTooLarge { degree: k, bound: d });
        }
    }
    let mut error_points: Vec<u64> = xs
        .iter()
        .zip(&ys)
        .filter(|(&x, &y)| proof.eval_raw(x) != y)
        .map(|(&x, _)| x)
        .collect();
    error_points.sort_unstable();
    let radius = correction_radius(e, d);
    if error_points.len() > radius {
        return Err(DecodeFailure::TooManyErrors {
            errors: error_points.len(),
            radius,
        });
    }
    Ok(DecodeResult { proof, error_points })
}
