//! Arithmetic modulo a prime, p-adic digit expansion and binomial /
//! multinomial coefficients mod p computed digit-wise (Lucas).
//!
//! Residues are always kept in canonical form `0..p`. Bulk storage elsewhere
//! in the crate uses bare `u32` residues together with a [`Prime`], which
//! carries the arithmetic; [`FieldElement`] is the self-describing value type
//! for the public surface.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{value} is not prime (smallest divisor {divisor})")]
    NotPrime { value: u64, divisor: u64 },
    #[error("{value} is not prime (primes start at 2)")]
    TooSmall { value: u64 },
    #[error("{value} exceeds the supported modulus range (< 2^32)")]
    TooLarge { value: u64 },
    #[error("{value} does not fit in {digits} base-{base} digits")]
    OutOfRange { value: u64, base: u32, digits: u32 },
}

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    /// Validates `x` by trial division.
    pub fn new(x: u64) -> Result<Self, FieldError> {
        if x < 2 {
            return Err(FieldError::TooSmall { value: x });
        }
        if x > u64::from(u32::MAX) {
            return Err(FieldError::TooLarge { value: x });
        }
        let mut d = 2u64;
        while d * d <= x {
            if x.is_multiple_of(d) {
                return Err(FieldError::NotPrime { value: x, divisor: d });
            }
            d += 1;
        }
        Ok(Prime(x as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % u64::from(self.0)) as u32
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn reduce_signed(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.0)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = u64::from(a) + u64::from(b);
        let p = u64::from(self.0);
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (u64::from(a) + u64::from(self.0) - u64::from(b)) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, u64::from(self.0) - 2))
        }
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            modulus: self,
        }
    }

    /// `p^m` if it fits in a `u64`.
    pub fn checked_power(self, m: u32) -> Option<u64> {
        u64::from(self.0).checked_pow(m)
    }
}

impl TryFrom<u64> for Prime {
    type Error = FieldError;
    fn try_from(x: u64) -> Result<Self, Self::Error> {
        Prime::new(x)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        u64::from(p.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Validating constructor for the prime modulus.
pub fn make_prime(x: u64) -> Result<Prime, FieldError> {
    Prime::new(x)
}

/// An element of F_p. Operators panic when the operands' moduli differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: Prime,
}

impl FieldElement {
    pub fn new(value: u64, modulus: Prime) -> Self {
        modulus.element(value)
    }

    pub fn zero(modulus: Prime) -> Self {
        FieldElement { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        modulus.element(1)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        self.modulus.inv(self.value).map(|value| FieldElement {
            value,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> Self {
        FieldElement {
            value: self.modulus.pow(self.value, exp),
            modulus: self.modulus,
        }
    }

    fn same_field(self, other: Self) -> Prime {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli in field arithmetic"
        );
        self.modulus
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let p = self.same_field(rhs);
        FieldElement {
            value: p.add(self.value, rhs.value),
            modulus: p,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let p = self.same_field(rhs);
        FieldElement {
            value: p.sub(self.value, rhs.value),
            modulus: p,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.same_field(rhs);
        FieldElement {
            value: p.mul(self.value, rhs.value),
            modulus: p,
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

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Base-p digits of an integer, least significant first, zero-padded to a
/// fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicDigits {
    digits: Vec<u32>,
    p: Prime,
}

impl PAdicDigits {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> u64 {
        let p = u64::from(self.p.get());
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + u64::from(d))
    }
}

pub fn p_adic_digits(x: u64, p: Prime, m: u32) -> Result<PAdicDigits, FieldError> {
    let out_of_range = FieldError::OutOfRange {
        value: x,
        base: p.get(),
        digits: m,
    };
    match p.checked_power(m) {
        Some(limit) if x >= limit => return Err(out_of_range),
        _ => {}
    }
    let base = u64::from(p.get());
    let mut rest = x;
    let digits = (0..m)
        .map(|_| {
            let d = (rest % base) as u32;
            rest /= base;
            d
        })
        .collect();
    Ok(PAdicDigits { digits, p })
}

/// C(a, b) mod p for single digits `a, b < p`.
fn small_binomial(a: u32, b: u32, p: Prime) -> u32 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 1..=b {
        num = p.mul(num, a - b + i);
        den = p.mul(den, i);
    }
    // den is a product of integers below p, hence invertible.
    p.mul(num, p.inv(den).expect("digit factorials are units mod p"))
}

/// Binomial coefficient mod p as a product of digit-wise binomials.
/// Zero whenever `r > t`.
pub fn binomial_mod_p(t: u64, r: u64, p: Prime) -> FieldElement {
    FieldElement {
        value: lucas(t, r, p),
        modulus: p,
    }
}

fn lucas(mut t: u64, mut r: u64, p: Prime) -> u32 {
    if r > t {
        return 0;
    }
    let base = u64::from(p.get());
    let mut acc = 1u32;
    while r > 0 && acc != 0 {
        let (td, rd) = ((t % base) as u32, (r % base) as u32);
        if rd > td {
            return 0;
        }
        acc = p.mul(acc, small_binomial(td, rd, p));
        t /= base;
        r /= base;
    }
    acc
}

/// Multinomial coefficient `t! / (r_1! ... r_k! (t - Σ r_j)!)` mod p,
/// computed as a chain of binomials. Zero when `Σ r_j > t`.
pub fn multinomial_mod_p(t: u64, r_list: &[u64], p: Prime) -> FieldElement {
    let mut rest = t;
    let mut acc = 1 % p.get();
    for &r in r_list {
        if r > rest {
            return FieldElement::zero(p);
        }
        acc = p.mul(acc, lucas(rest, r, p));
        rest -= r;
    }
    FieldElement {
        value: acc,
        modulus: p,
    }
}

/// Digit-wise nonzero test: C(t, r) ≢ 0 (mod p) iff every base-p digit of
/// `r` is at most the matching digit of `t`.
pub fn binomial_nonzero(mut t: u64, mut r: u64, p: Prime) -> bool {
    let base = u64::from(p.get());
    while r > 0 {
        if r % base > t % base {
            return false;
        }
        r /= base;
        t /= base;
    }
    true
}

/// Full p×p table of C(a, b) mod p, handy for hot loops over digits.
#[derive(Clone, Debug)]
pub struct DigitBinomials {
    p: Prime,
    table: Vec<u32>,
}

impl DigitBinomials {
    pub fn new(p: Prime) -> Self {
        let n = p.get() as usize;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            table[a * n] = 1 % p.get();
            for b in 1..=a {
                let above = if b < a { table[(a - 1) * n + b] } else { 0 };
                table[a * n + b] = p.add(table[(a - 1) * n + b - 1], above);
            }
        }
        DigitBinomials { p, table }
    }

    #[inline]
    pub fn get(&self, a: u32, b: u32) -> u32 {
        let n = self.p.get() as usize;
        self.table[a as usize * n + b as usize]
    }

    /// Lucas product over digits using the cached table.
    pub fn binomial(&self, mut t: u64, mut r: u64) -> u32 {
        if r > t {
            return 0;
        }
        let base = u64::from(self.p.get());
        let mut acc = 1 % self.p.get();
        while r > 0 {
            let (td, rd) = ((t % base) as u32, (r % base) as u32);
            if rd > td {
                return 0;
            }
            acc = self.p.mul(acc, self.get(td, rd));
            t /= base;
            r /= base;
        }
        acc
    }
}
