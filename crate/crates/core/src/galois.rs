//! Finite fields `GF(p^r)` with a fixed element enumeration.
//!
//! Elements are coefficient vectors over `F_p` reduced modulo the
//! lexicographically smallest monic irreducible of degree `r`. Element
//! `x_i` is the one whose base-`p` digits (degree 0 least significant)
//! spell `i - 1`, so `x_1 = 0`.

use crate::cyclotomic::IntPolynomial;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const FIELD_SIZE_CAP: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, r))` with `q = p^r`, `r >= 1`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut r = 0;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p as u32, r))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    r: u32,
    /// Monic, length `r + 1`, ascending degree.
    modulus: Vec<u32>,
}

/// `GF(p^r)` with its canonical modulus.
pub fn make_field(p: u32, r: u32) -> Result<GaloisField> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if r == 0 {
        return Err(Error::Shape("field degree must be at least 1".into()));
    }
    let size = (p as u64).checked_pow(r).filter(|&s| s <= FIELD_SIZE_CAP);
    let Some(_) = size else {
        return Err(Error::SizeCap {
            size: (p as u64).saturating_pow(r),
            cap: FIELD_SIZE_CAP,
        });
    };
    let modulus = smallest_irreducible(p, r as usize);
    Ok(GaloisField { p, r, modulus })
}

/// Field of order `q`, or an error if `q` is not a prime power.
pub fn field_of_order(q: u64) -> Result<GaloisField> {
    let (p, r) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_field(p, r)
}

// Monic polynomials of degree `deg` ordered by their low-degree-first
// coefficient tuple.
fn monic_polys(p: u32, deg: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut idx| {
        let mut c = vec![0u32; deg + 1];
        for k in (0..deg).rev() {
            c[k] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[deg] = 1;
        c
    })
}

fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let d = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let p = p as u64;
    for i in (d..r.len()).rev() {
        let lead = r[i] % p;
        if lead == 0 {
            continue;
        }
        for j in 0..=d {
            let sub = lead * b[j] as u64 % p;
            r[i - d + j] = (r[i - d + j] + p - sub) % p;
        }
    }
    r.truncate(d);
    r.into_iter().map(|x| x as u32).collect()
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let r = poly.len() - 1;
    for deg in 1..=r / 2 {
        for divisor in monic_polys(p, deg) {
            if poly_rem_mod_p(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, r: usize) -> Vec<u32> {
    monic_polys(p, r)
        .find(|c| is_irreducible(c, p))
        .expect("irreducible polynomials exist in every degree")
}

impl GaloisField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.r)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_polynomial(&self) -> IntPolynomial {
        let c: Vec<i64> = self.modulus.iter().map(|&x| x as i64).collect();
        IntPolynomial::from_i64(&c)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.r as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The element `x_{index + 1}` of the enumeration.
    ///
    /// # Panics
    /// Panics if `index >= order`.
    pub fn element(&self, index: usize) -> FieldElement {
        assert!(index < self.order(), "element index out of range");
        let mut idx = index;
        let coeffs = (0..self.r)
            .map(|_| {
                let c = (idx % self.p as usize) as u32;
                idx /= self.p as usize;
                c
            })
            .collect();
        FieldElement { coeffs }
    }

    /// Position of `a` in [`enumerate_elements`](Self::enumerate_elements).
    pub fn index_of(&self, a: &FieldElement) -> usize {
        a.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.coeffs.len() == self.r as usize && a.coeffs.iter().all(|&c| c < self.p)
    }

    pub fn enumerate_elements(&self) -> Vec<FieldElement> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let r = self.r as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
        let mut coeffs = if prod.len() > r {
            poly_rem_mod_p(&prod, &self.modulus, self.p)
        } else {
            prod
        };
        coeffs.resize(r, 0);
        FieldElement { coeffs }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.coeffs.iter().all(|&c| c == 0) {
            return None;
        }
        Some(self.pow(a, self.order() as u64 - 2))
    }
}
