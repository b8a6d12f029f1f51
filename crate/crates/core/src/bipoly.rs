//! Bivariate polynomials in two indeterminates with truncated products.

use serde::{Deserialize, Serialize};

use crate::field::{FieldElement, Modulus};

/// Coefficients `c[a][b]` of `w_E^a w_B^b`, stored row-major with fixed
/// bounds `a <= de`, `b <= db`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BiPoly {
    modulus: Modulus,
    de: usize,
    db: usize,
    coeffs: Vec<u64>,
}

impl BiPoly {
    pub fn zero(modulus: Modulus, de: usize, db: usize) -> Self {
        BiPoly {
            modulus,
            de,
            db,
            coeffs: vec![0; (de + 1) * (db + 1)],
        }
    }

    pub fn one(modulus: Modulus, de: usize, db: usize) -> Self {
        let mut p = Self::zero(modulus, de, db);
        p.coeffs[0] = 1 % modulus.q();
        p
    }

    /// Builds from `(a, b, coefficient)` terms; terms beyond the bounds are dropped.
    pub fn from_terms(modulus: Modulus, de: usize, db: usize, terms: &[(usize, usize, u64)]) -> Self {
        let mut p = Self::zero(modulus, de, db);
        for &(a, b, c) in terms {
            if a <= de && b <= db {
                let i = a * (db + 1) + b;
                p.coeffs[i] = modulus.add(p.coeffs[i], modulus.reduce(c));
            }
        }
        p
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.de, self.db)
    }

    pub fn get(&self, a: usize, b: usize) -> FieldElement {
        self.modulus.elem(self.coeffs[a * (self.db + 1) + b])
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn raw_mut(&mut self) -> &mut [u64] {
        &mut self.coeffs
    }

    pub fn add_assign(&mut self, other: &BiPoly) {
        assert_eq!(self.modulus, other.modulus, "polynomials from different moduli");
        assert_eq!(self.bounds(), other.bounds(), "bivariate bounds differ");
        let m = self.modulus;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = m.add(*a, b);
        }
    }
}

/// `out = a * b` truncated to `(de, db)`; all three slices share that shape.
pub fn mul_trunc_raw(m: &Modulus, a: &[u64], b: &[u64], de: usize, db: usize, out: &mut [u64]) {
    let w = db + 1;
    out.iter_mut().for_each(|c| *c = 0);
    for i1 in 0..=de {
        for j1 in 0..=db {
            let x = a[i1 * w + j1];
            if x == 0 {
                continue;
            }
            for i2 in 0..=de - i1 {
                let row = (i1 + i2) * w + j1;
                let brow = i2 * w;
                for j2 in 0..=db - j1 {
                    let y = b[brow + j2];
                    if y != 0 {
                        out[row + j2] = m.mul_add(out[row + j2], x, y);
                    }
                }
            }
        }
    }
}

/// `base^exp` truncated to `(de, db)` by square-and-multiply.
pub fn pow_trunc_raw(m: &Modulus, base: &[u64], exp: u64, de: usize, db: usize) -> Vec<u64> {
    let n = (de + 1) * (db + 1);
    let mut acc = vec![0u64; n];
    acc[0] = 1 % m.q();
    let mut sq = base.to_vec();
    let mut tmp = vec![0u64; n];
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            mul_trunc_raw(m, &acc, &sq, de, db, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
        }
        e >>= 1;
        if e > 0 {
            mul_trunc_raw(m, &sq, &sq, de, db, &mut tmp);
            std::mem::swap(&mut sq, &mut tmp);
        }
    }
    acc
}

/// Product of `a` and `b` with every term of degree beyond `bounds` discarded.
pub fn bipoly_mul_trunc(a: &BiPoly, b: &BiPoly, bounds: (usize, usize)) -> BiPoly {
    assert_eq!(a.modulus, b.modulus, "polynomials from different moduli");
    let m = a.modulus;
    let (de, db) = bounds;
    let resize = |p: &BiPoly| {
        let mut out = BiPoly::zero(m, de, db);
        for i in 0..=de.min(p.de) {
            for j in 0..=db.min(p.db) {
                out.coeffs[i * (db + 1) + j] = p.coeffs[i * (p.db + 1) + j];
            }
        }
        out
    };
    let (ra, rb) = (resize(a), resize(b));
    let mut out = BiPoly::zero(m, de, db);
    mul_trunc_raw(&m, &ra.coeffs, &rb.coeffs, de, db, &mut out.coeffs);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Modulus {
        Modulus::new(101).unwrap()
    }

    #[test]
    fn examples() {
        let m = q();
        let a = BiPoly::from_terms(m, 1, 1, &[(0, 0, 1), (1, 0, 1)]);
        let b = BiPoly::from_terms(m, 1, 1, &[(0, 0, 1), (0, 1, 1)]);
        let p = bipoly_mul_trunc(&a, &b, (1, 1));
        assert_eq!(p.raw(), &[1, 1, 1, 1]);

        let we = BiPoly::from_terms(m, 1, 1, &[(1, 0, 1)]);
        assert!(bipoly_mul_trunc(&we, &we, (1, 1)).raw().iter().all(|&c| c == 0));

        let sq = BiPoly::from_terms(m, 2, 0, &[(0, 0, 1), (1, 0, 2), (2, 0, 1)]);
        let cube = pow_trunc_raw(&m, sq.raw(), 3, 2, 0);
        assert_eq!(cube, vec![1, 6, 15]);
    }

    fn full_mul(a: &[u64], b: &[u64], de: usize, db: usize, m: &Modulus) -> Vec<u64> {
        let (fe, fb) = (2 * de + 1, 2 * db + 1);
        let mut out = vec![0u64; fe * fb];
        for i1 in 0..=de {
            for j1 in 0..=db {
                for i2 in 0..=de {
                    for j2 in 0..=db {
                        let k = (i1 + i2) * fb + j1 + j2;
                        out[k] = m.mul_add(out[k], a[i1 * (db + 1) + j1], b[i2 * (db + 1) + j2]);
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn truncation_matches_full_product(
            de in 0usize..4, db in 0usize..4,
            seed in prop::collection::vec(0u64..101, 50)
        ) {
            let m = q();
            let n = (de + 1) * (db + 1);
            let a = &seed[..n];
            let b = &seed[25..25 + n];
            let mut out = vec![0; n];
            mul_trunc_raw(&m, a, b, de, db, &mut out);
            let full = full_mul(a, b, de, db, &m);
            for i in 0..=de {
                for j in 0..=db {
                    prop_assert_eq!(out[i * (db + 1) + j], full[i * (2 * db + 1) + j]);
                }
            }
        }
    }
}
