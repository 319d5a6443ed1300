//! Bounded-precision p-adic numbers.
//!
//! A nonzero value is stored in canonical form `p^r * (d0 + d1 p + d2 p^2 + ...)`
//! with `d0 != 0`; the valuation `r` absorbs every factor of `p`.  Zero is the
//! sentinel with an empty digit vector.  Arithmetic truncates to the common
//! effective precision and never rounds: the retained digits are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sieve::is_prime;

/// Default number of stored digits.
pub const DEFAULT_PRECISION: usize = 32;

/// Largest accepted prime base; keeps digit arithmetic comfortably in `u64`.
pub const MAX_PRIME: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct PAdicNumber {
    p: u64,
    /// Valuation of the leading stored digit; `i64::MAX` for zero.
    r: i64,
    /// Canonical digits, least significant first; empty for zero.
    digits: Vec<u64>,
    precision: usize,
}

impl PartialEq for PAdicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.digits == other.digits
    }
}

impl Eq for PAdicNumber {}

impl PAdicNumber {
    /// Build from `p^r * (digits[0] + digits[1] p + ...)` at the default precision.
    ///
    /// Leading zero digits are absorbed into the valuation; an all-zero (or
    /// empty) digit list yields the zero sentinel.
    pub fn from_digits(p: u64, r: i64, digits: &[u64]) -> Result<Self> {
        Self::with_precision(p, r, digits, DEFAULT_PRECISION)
    }

    /// Same as [`from_digits`](Self::from_digits) with an explicit precision.
    pub fn with_precision(p: u64, r: i64, digits: &[u64], precision: usize) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::invalid("precision must be at least 1"));
        }
        for &d in digits {
            if d >= p {
                return Err(Error::DigitOutOfRange { digit: d, p });
            }
        }
        Ok(Self::canonical(p, r, digits.to_vec(), Some(precision)))
    }

    /// The zero value for base `p`.
    pub fn zero(p: u64) -> Result<Self> {
        Self::from_digits(p, 0, &[])
    }

    /// Expand a nonnegative integer at the default precision.
    pub fn from_integer(p: u64, n: u64) -> Result<Self> {
        Self::from_integer_with_precision(p, n, DEFAULT_PRECISION)
    }

    pub fn from_integer_with_precision(p: u64, n: u64, precision: usize) -> Result<Self> {
        check_prime(p)?;
        let mut digits = Vec::new();
        let mut m = n;
        while m > 0 {
            digits.push(m % p);
            m /= p;
        }
        Self::with_precision(p, 0, &digits, precision)
    }

    /// Canonicalize: strip leading zeros into `r`, then fix the digit count.
    ///
    /// `pad_to = Some(n)` treats the input as exact and pads/truncates to `n`
    /// digits; `None` keeps whatever digits survive (used by arithmetic, where
    /// trailing positions are unknown rather than zero).
    fn canonical(p: u64, r: i64, mut digits: Vec<u64>, pad_to: Option<usize>) -> Self {
        let shift = digits.iter().take_while(|&&d| d == 0).count();
        if shift == digits.len() {
            return Self {
                p,
                r: i64::MAX,
                digits: Vec::new(),
                precision: pad_to.unwrap_or(digits.len().max(1)),
            };
        }
        digits.drain(..shift);
        if let Some(n) = pad_to {
            digits.resize(n, 0);
        }
        let precision = digits.len();
        Self {
            p,
            r: r + shift as i64,
            digits,
            precision,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Valuation exponent; `None` for zero (conceptually `+inf`).
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.r)
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Digit at absolute position `pos` (the coefficient of `p^pos`).
    ///
    /// Positions outside the stored window read as zero.
    pub(crate) fn digit_at(&self, pos: i64) -> u64 {
        if self.is_zero() || pos < self.r {
            return 0;
        }
        let idx = (pos - self.r) as usize;
        self.digits.get(idx).copied().unwrap_or(0)
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Digitwise sum with carries, truncated to the common effective precision.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let p = self.p;
        let r0 = self.r.min(other.r);
        let known = (self.r + self.digits.len() as i64).min(other.r + other.digits.len() as i64);
        let width = (known - r0) as usize;
        let mut out = vec![0u64; width];
        let mut carry = 0u64;
        for (idx, slot) in out.iter_mut().enumerate() {
            let pos = r0 + idx as i64;
            let s = self.digit_at(pos) + other.digit_at(pos) + carry;
            *slot = s % p;
            carry = s / p;
        }
        Ok(Self::canonical(p, r0, out, None))
    }

    /// Additive inverse (p-complement of the unit part, exact on retained digits).
    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.p;
        let mut digits = Vec::with_capacity(self.digits.len());
        digits.push(p - self.digits[0]);
        for &d in &self.digits[1..] {
            digits.push(p - 1 - d);
        }
        Self {
            p,
            r: self.r,
            digits,
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Valuations add; unit parts multiply with carries, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        if self.is_zero() || other.is_zero() {
            let precision = self.precision.min(other.precision).max(1);
            return PAdicNumber::with_precision(self.p, 0, &[], precision);
        }
        let p = self.p;
        let n = self.digits.len().min(other.digits.len());
        let a = &self.digits[..n];
        let b = &other.digits[..n];
        let mut out = vec![0u64; n];
        let mut carry = 0u64;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut col = carry;
            for j in 0..=i {
                col += a[j] * b[i - j];
            }
            *slot = col % p;
            carry = col / p;
        }
        // d0 * d0' is a unit mod p, so no leading-zero shift can occur.
        Ok(Self::canonical(p, self.r + other.r, out, None))
    }

    /// The p-adic absolute value `p^(-r)` as an exact rational; zero maps to 0.
    pub fn abs(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        power_abs(self.p, self.r)
    }

    /// Order-reversing embedding into the positive reals.
    ///
    /// A value `p^r * u` with unit `u = d0 * (1 + sum a_i p^i)` maps to
    /// `p^(-r) * (1 + sum a_i p^(-2i) + (d0 - 1) p^(-2N))`, where the `a_i`
    /// come from the exact division `u / d0` and `N` is the precision.  For
    /// `d0 = 1` this is the plain digit-mirroring embedding; the trailing
    /// marker term keeps the map injective on canonical units while staying
    /// inside the geometric tail bound `p^(-r) * [1, 1 + 1/(p+1)]`.  The
    /// marker sits below `f64` resolution once `2N` exceeds the mantissa
    /// range, so callers needing exact injectivity at high precision should
    /// compare digits directly.
    ///
    /// Zero has no image and is reported as an error.
    pub fn monna(&self) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::ZeroHasNoImage);
        }
        let p = self.p as f64;
        let d0 = self.digits[0];
        let tail: Vec<u64> = if d0 == 1 {
            self.digits[1..].to_vec()
        } else {
            let unit = div_digits_by_scalar(&self.digits, d0, self.p);
            debug_assert_eq!(unit[0], 1);
            unit[1..].to_vec()
        };
        let mut acc = 1.0f64;
        let w = p.powi(-2);
        let mut weight = 1.0;
        for &a in &tail {
            weight *= w;
            acc += a as f64 * weight;
        }
        acc += (d0 - 1) as f64 * p.powi(-2 * self.digits.len() as i32);
        Ok(acc * p.powi(-(self.r as i32)))
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_PRIME {
        return Err(Error::invalid(format!(
            "prime base {p} exceeds the supported maximum {MAX_PRIME}"
        )));
    }
    Ok(())
}

/// `p^(-r)` as an exact rational.
pub(crate) fn power_abs(p: u64, r: i64) -> BigRational {
    let base = BigInt::from(p);
    if r >= 0 {
        BigRational::new(BigInt::one(), base.pow(r as u32))
    } else {
        BigRational::from(base.pow((-r) as u32))
    }
}

/// Modular inverse of `a` in `[1, p)` for prime `p` (Fermat).
fn mod_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Digit-serial p-adic division of a digit vector by a unit scalar `d0`.
///
/// Computes `q` with `q * d0 == u (mod p^len)`; `q[0] = 1` whenever `d0` is
/// the leading digit of `u`.
fn div_digits_by_scalar(u: &[u64], d0: u64, p: u64) -> Vec<u64> {
    let inv = mod_inv(d0, p);
    let mut rem: Vec<u64> = u.to_vec();
    let mut q = vec![0u64; u.len()];
    for i in 0..u.len() {
        let qi = rem[i] % p * inv % p;
        q[i] = qi;
        let mut borrow = qi * d0;
        let mut j = i;
        while borrow > 0 && j < u.len() {
            let sub = borrow % p;
            borrow /= p;
            if rem[j] >= sub {
                rem[j] -= sub;
            } else {
                rem[j] += p - sub;
                borrow += 1;
            }
            j += 1;
        }
        debug_assert_eq!(rem[i], 0);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn canonical_form() {
        let a = PAdicNumber::from_digits(5, 0, &[2]).unwrap();
        assert_eq!(a.valuation(), Some(0));
        assert_eq!(a.digits()[0], 2);

        let b = PAdicNumber::from_digits(3, 0, &[0, 1]).unwrap();
        assert_eq!(b.valuation(), Some(1));
        assert_eq!(b.digits()[0], 1);

        let z = PAdicNumber::from_digits(2, 0, &[]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            PAdicNumber::from_digits(4, 0, &[1]),
            Err(Error::NotPrime(4))
        ));
        assert!(matches!(
            PAdicNumber::from_digits(3, 0, &[3]),
            Err(Error::DigitOutOfRange { digit: 3, p: 3 })
        ));
    }

    #[test]
    fn addition_examples() {
        let p5_2 = PAdicNumber::from_integer(5, 2).unwrap();
        let p5_3 = PAdicNumber::from_integer(5, 3).unwrap();
        let sum = p5_2.add(&p5_3).unwrap();
        assert_eq!(sum.valuation(), Some(1));
        assert_eq!(sum.digits()[0], 1);

        let a = PAdicNumber::from_digits(7, -1, &[3]).unwrap();
        let b = PAdicNumber::from_digits(7, -1, &[4]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.digits()[0], 1);

        let one = PAdicNumber::from_integer(3, 1).unwrap();
        let two = PAdicNumber::from_integer(3, 2).unwrap();
        let three = one.add(&two).unwrap();
        assert_eq!(three.valuation(), Some(1));
        assert_eq!(three.digits()[0], 1);
    }

    #[test]
    fn addition_rejects_prime_mismatch() {
        let a = PAdicNumber::from_integer(3, 1).unwrap();
        let b = PAdicNumber::from_integer(5, 1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::PrimeMismatch(3, 5))));
    }

    #[test]
    fn multiplication_examples() {
        let p5_2 = PAdicNumber::from_integer(5, 2).unwrap();
        let p5_3 = PAdicNumber::from_integer(5, 3).unwrap();
        let prod = p5_2.mul(&p5_3).unwrap();
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(&prod.digits()[..2], &[1, 1]);

        let three = PAdicNumber::from_integer(3, 3).unwrap();
        let nine = three.mul(&three).unwrap();
        assert_eq!(nine.valuation(), Some(2));
        assert_eq!(nine.digits()[0], 1);

        let t2 = PAdicNumber::from_integer(2, 3).unwrap();
        let nine2 = t2.mul(&t2).unwrap();
        assert_eq!(nine2.valuation(), Some(0));
        assert_eq!(&nine2.digits()[..4], &[1, 0, 0, 1]);
    }

    #[test]
    fn absolute_value_examples() {
        assert_eq!(PAdicNumber::from_integer(3, 9).unwrap().abs(), rational(1, 9));
        assert_eq!(PAdicNumber::from_integer(5, 10).unwrap().abs(), rational(1, 5));
        assert_eq!(PAdicNumber::from_integer(3, 7).unwrap().abs(), rational(1, 1));
        assert!(PAdicNumber::zero(7).unwrap().abs().is_zero());
    }

    #[test]
    fn subtraction_matches_valuation_of_difference() {
        let one = PAdicNumber::from_integer(2, 1).unwrap();
        let five = PAdicNumber::from_integer(2, 5).unwrap();
        let d = one.sub(&five).unwrap();
        assert_eq!(d.abs(), rational(1, 4));
        let z = one.sub(&one).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn monna_examples() {
        let one = PAdicNumber::from_digits(7, 0, &[1]).unwrap();
        assert_eq!(one.monna().unwrap(), 1.0);

        // 1 + 1*2 -> 1 + 2^-2
        let three = PAdicNumber::from_integer(2, 3).unwrap();
        assert!((three.monna().unwrap() - 1.25).abs() < 1e-15);

        // 3 * (1 + 2*3) = 21 -> (1/3)(1 + 2/9) = 11/27
        let t = PAdicNumber::from_integer(3, 21).unwrap();
        assert!((t.monna().unwrap() - 11.0 / 27.0).abs() < 1e-13);

        assert!(matches!(
            PAdicNumber::zero(3).unwrap().monna(),
            Err(Error::ZeroHasNoImage)
        ));
    }

    #[test]
    fn monna_unit_range_bound() {
        // All canonical 3-digit units for p in {2, 3}: image in [1, 1 + 1/(p+1)].
        for p in [2u64, 3] {
            let bound = 1.0 + 1.0 / (p as f64 + 1.0);
            for d0 in 1..p {
                for d1 in 0..p {
                    for d2 in 0..p {
                        let u = PAdicNumber::with_precision(p, 0, &[d0, d1, d2], 3).unwrap();
                        let img = u.monna().unwrap();
                        assert!((1.0..=bound).contains(&img), "p={p} digits {d0},{d1},{d2}: {img}",);
                    }
                }
            }
        }
    }

    #[test]
    fn monna_respects_valuation_scaling() {
        let t = PAdicNumber::from_integer(3, 21).unwrap();
        let img = t.monna().unwrap();
        assert!((1.0 / 3.0..=1.0 / 3.0 * 1.25).contains(&img));
        assert!(
            PAdicNumber::from_integer(2, 12).unwrap().monna().unwrap() <= 0.25 * (1.0 + 1.0 / 3.0)
        );
    }

    #[test]
    fn scalar_division_recovers_principal_unit() {
        // 8 in Z_3 is 2 * 4: dividing by d0 = 2 gives digits of 4 = 1 + 3.
        let u = [2u64, 2, 0, 0];
        let q = div_digits_by_scalar(&u, 2, 3);
        assert_eq!(q, vec![1, 1, 0, 0]);
    }

    #[test]
    fn negative_valuations_are_exact() {
        let x = PAdicNumber::from_digits(2, -4, &[1, 1]).unwrap();
        assert!(x.monna().unwrap().is_finite());
        assert_eq!(x.abs(), rational(16, 1));
    }

    proptest! {
        #[test]
        fn strong_triangle_with_sharp_equality(
            pi in 0usize..4,
            ra in -3i64..4,
            rb in -3i64..4,
            da in proptest::collection::vec(0u64..7, 8),
            db in proptest::collection::vec(0u64..7, 8),
        ) {
            let p = [2u64, 3, 5, 7][pi];
            let da: Vec<u64> = da.iter().map(|d| d % p).collect();
            let db: Vec<u64> = db.iter().map(|d| d % p).collect();
            let a = PAdicNumber::with_precision(p, ra, &da, 8).unwrap();
            let b = PAdicNumber::with_precision(p, rb, &db, 8).unwrap();
            let sum = a.add(&b).unwrap();
            let max = a.abs().max(b.abs());
            prop_assert!(sum.abs() <= max);
            if a.abs() != b.abs() && !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(sum.abs(), max);
            }
        }

        #[test]
        fn absolute_value_is_multiplicative(
            ra in -3i64..4,
            rb in -3i64..4,
            da in proptest::collection::vec(0u64..5, 6),
            db in proptest::collection::vec(0u64..5, 6),
        ) {
            let a = PAdicNumber::with_precision(5, ra, &da, 6).unwrap();
            let b = PAdicNumber::with_precision(5, rb, &db, 6).unwrap();
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.abs(), a.abs() * b.abs());
        }
    }
}
