//! Exact zero tests for integer combinations of `m`-th roots of unity.
//!
//! A sum `sum_k c_k zeta_m^k` equals the integer `v` iff the cyclotomic
//! polynomial `Phi_m` divides `sum_k c_k x^k - v`. Remainders are computed
//! in checked `i128` arithmetic and recomputed with big integers if any
//! intermediate would overflow.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^degree - 1`
    pub fn x_pow_minus_one(degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[degree] += BigInt::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Self::new(out)
    }

    /// Quotient and remainder by a monic divisor. Returns `None` if the
    /// divisor is not monic.
    pub fn div_rem_monic(&self, divisor: &Self) -> Option<(Self, Self)> {
        if !divisor.is_monic() {
            return None;
        }
        let d = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= d {
            return Some((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let lead = std::mem::take(&mut rem[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs[..d].iter().enumerate() {
                rem[i - d + j] -= &lead * c;
            }
            quot[i - d] = lead;
        }
        rem.truncate(d);
        Some((Self::new(quot), Self::new(rem)))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = deg == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{deg}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn divisors(m: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= m as u64 {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `m`-th cyclotomic polynomial, by exact division of `x^m - 1` by the
/// product of `Phi_d` over proper divisors `d` of `m`.
///
/// # Panics
/// Panics if `m == 0`.
pub fn cyclotomic_poly(m: u32) -> IntPolynomial {
    assert!(m >= 1, "cyclotomic polynomial order must be positive");
    let divs = divisors(m);
    let mut known: BTreeMap<u32, IntPolynomial> = BTreeMap::new();
    for &d in &divs {
        let denom = divisors(d)
            .into_iter()
            .filter(|&e| e < d)
            .fold(IntPolynomial::one(), |acc, e| acc.mul(&known[&e]));
        let (q, r) = IntPolynomial::x_pow_minus_one(d as usize)
            .div_rem_monic(&denom)
            .expect("products of cyclotomic polynomials are monic");
        debug_assert!(r.is_zero());
        known.insert(d, q);
    }
    known.remove(&m).unwrap()
}

/// Multiplicities of `zeta_m^k` for `k` in `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentCountVector {
    m: u32,
    counts: Vec<u64>,
}

impl ExponentCountVector {
    pub fn new(m: u32, counts: Vec<u64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroRootOrder);
        }
        if counts.len() != m as usize {
            return Err(Error::LengthMismatch {
                left: counts.len(),
                right: m as usize,
            });
        }
        Ok(Self { m, counts })
    }

    /// Tally a sequence of exponents.
    pub fn from_exponents<I: IntoIterator<Item = u32>>(m: u32, exps: I) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroRootOrder);
        }
        let mut counts = vec![0u64; m as usize];
        for e in exps {
            if e >= m {
                return Err(Error::ExponentOutOfRange { value: e, m });
            }
            counts[e as usize] += 1;
        }
        Ok(Self { m, counts })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Complex conjugate of `zeta^e`, as an exponent.
pub fn conj(e: u32, m: u32) -> u32 {
    (m - e % m) % m
}

/// Exponent of `-zeta^e`. Only meaningful for even `m`.
pub fn negate(e: u32, m: u32) -> u32 {
    debug_assert!(m % 2 == 0);
    (e + m / 2) % m
}

/// Exponent multiset of the inner product `sum_i a_i conj(b_i)`.
pub fn dot_counts(a: &[u32], b: &[u32], m: u32) -> Result<ExponentCountVector> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if m == 0 {
        return Err(Error::ZeroRootOrder);
    }
    let mut counts = vec![0u64; m as usize];
    for (&x, &y) in a.iter().zip(b) {
        for v in [x, y] {
            if v >= m {
                return Err(Error::ExponentOutOfRange { value: v, m });
            }
        }
        counts[((x + m - y) % m) as usize] += 1;
    }
    Ok(ExponentCountVector { m, counts })
}

/// Cached `Phi_m` for repeated zero tests at a fixed root order.
#[derive(Clone, Debug)]
pub struct CyclotomicTester {
    m: u32,
    phi: IntPolynomial,
    phi_small: Vec<i128>,
}

impl CyclotomicTester {
    pub fn new(m: u32) -> Self {
        let phi = cyclotomic_poly(m);
        let phi_small = phi
            .coeffs()
            .iter()
            .map(|c| c.to_i128().expect("cyclotomic coefficients fit in i128"))
            .collect();
        Self { m, phi, phi_small }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.phi
    }

    /// Exact test of `sum_k counts[k] zeta_m^k == v`.
    ///
    /// # Panics
    /// Panics if `c` has a different root order.
    pub fn sum_equals(&self, c: &ExponentCountVector, v: i64) -> bool {
        assert_eq!(c.m, self.m, "root order mismatch");
        self.counts_equal(&c.counts, v)
    }

    pub(crate) fn counts_equal(&self, counts: &[u64], v: i64) -> bool {
        match self.remainder_is_zero_small(counts, v) {
            Some(z) => z,
            None => self.remainder_is_zero_big(counts, v),
        }
    }

    fn remainder_is_zero_small(&self, counts: &[u64], v: i64) -> Option<bool> {
        let d = self.phi_small.len() - 1;
        let mut p: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        p[0] = p[0].checked_sub(v as i128)?;
        for i in (d..p.len()).rev() {
            let lead = p[i];
            if lead == 0 {
                continue;
            }
            p[i] = 0;
            for (j, &c) in self.phi_small[..d].iter().enumerate() {
                if c != 0 {
                    p[i - d + j] = p[i - d + j].checked_sub(lead.checked_mul(c)?)?;
                }
            }
        }
        Some(p.iter().take(d).all(|&c| c == 0))
    }

    fn remainder_is_zero_big(&self, counts: &[u64], v: i64) -> bool {
        let mut coeffs: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        coeffs[0] -= BigInt::from(v);
        let (_, r) = IntPolynomial::new(coeffs)
            .div_rem_monic(&self.phi)
            .expect("cyclotomic polynomials are monic");
        r.is_zero()
    }
}

/// Exact test of `sum_k counts[k] zeta_m^k == v`.
pub fn sum_equals(c: &ExponentCountVector, v: i64) -> bool {
    CyclotomicTester::new(c.m).sum_equals(c, v)
}

/// Double-precision value of the root sum, as `(re, im)`.
pub fn approx_sum(c: &ExponentCountVector) -> (f64, f64) {
    let m = c.m as f64;
    c.counts
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(re, im), (k, &n)| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m;
            (re + n as f64 * theta.cos(), im + n as f64 * theta.sin())
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ecv(m: u32, counts: &[u64]) -> ExponentCountVector {
        ExponentCountVector::new(m, counts.to_vec()).unwrap()
    }

    #[test]
    fn cyclotomic_small_orders() {
        assert_eq!(cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        // x^4 - 1 = (x - 1)(x + 1)(x^2 + 1)
        assert_eq!(cyclotomic_poly(4), IntPolynomial::from_i64(&[1, 0, 1]));
        // x^6 - 1 = (x - 1)(x + 1)(x^2 + x + 1)(x^2 - x + 1)
        assert_eq!(cyclotomic_poly(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(6).to_string(), "x^2 - x + 1");
    }

    #[test]
    fn phi_105_has_coefficient_minus_two() {
        let p = cyclotomic_poly(105).to_i64_vec().unwrap();
        assert_eq!(p.len(), 49);
        assert!(p.contains(&-2));
    }

    #[test]
    fn dot_counts_examples() {
        let row = [0, 2, 1, 3];
        assert_eq!(dot_counts(&row, &row, 4).unwrap().counts(), &[4, 0, 0, 0]);
        assert_eq!(
            dot_counts(&[0, 1, 2], &[0, 0, 0], 3).unwrap().counts(),
            &[1, 1, 1]
        );
        // rows 2 and 3 of F_3: (0-0, 1-2, 2-1) mod 3
        assert_eq!(
            dot_counts(&[0, 1, 2], &[0, 2, 1], 3).unwrap().counts(),
            &[1, 1, 1]
        );
    }

    #[test]
    fn dot_counts_errors() {
        assert!(matches!(
            dot_counts(&[0, 1], &[0], 3),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            dot_counts(&[0, 3], &[0, 0], 3),
            Err(Error::ExponentOutOfRange { value: 3, m: 3 })
        ));
    }

    #[test]
    fn sum_equals_examples() {
        assert!(sum_equals(&ecv(3, &[1, 1, 1]), 0));
        assert!(sum_equals(&ecv(3, &[0, 1, 1]), -1));
        assert!(sum_equals(&ecv(6, &[0, 2, 0, 0, 2, 0]), 0));
        assert!(!sum_equals(&ecv(6, &[0, 2, 0, 0, 1, 0]), 0));
        assert!(sum_equals(&ecv(1, &[5]), 5));
        assert!(!sum_equals(&ecv(1, &[5]), 4));
    }

    #[test]
    fn float_oracle_agrees_on_examples() {
        let (re, im) = approx_sum(&ecv(3, &[0, 1, 1]));
        assert!((re + 1.0).abs() < 1e-12 && im.abs() < 1e-12);
        let (re, im) = approx_sum(&ecv(6, &[0, 2, 0, 0, 2, 0]));
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        let (re, im) = approx_sum(&ecv(4, &[0, 1, 0, 1]));
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        assert_eq!(approx_sum(&ecv(5, &[7, 0, 0, 0, 0])), (7.0, 0.0));
    }

    #[test]
    fn big_integer_fallback_agrees() {
        let t = CyclotomicTester::new(12);
        let counts = [u64::MAX / 2, 0, 0, 0, 0, 0, u64::MAX / 2, 0, 0, 0, 0, 0];
        // zeta^6 = -1, so the two halves cancel
        assert!(t.counts_equal(&counts, 0));
        assert!(t.remainder_is_zero_big(&counts, 0));
        assert!(!t.counts_equal(&counts, 1));
    }

    #[test]
    fn conjugation_and_negation() {
        assert_eq!(conj(0, 6), 0);
        assert_eq!(conj(1, 6), 5);
        assert_eq!(negate(1, 6), 4);
        assert_eq!(negate(negate(5, 6), 6), 5);
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
