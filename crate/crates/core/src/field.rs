//! Coefficient rings used throughout the crate.
//!
//! Everything is exact: integers and rationals are arbitrary precision and
//! prime-field elements are canonical residues in `[0, p)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::LinalgError;

/// A commutative ring with a runtime context (the modulus, for prime fields).
pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
    /// Parses an exact decimal literal (`-3`, and `2/5` where division exists).
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn tag(&self) -> FieldTag;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<BigInt> {
        s.trim().parse().ok()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((n, d)) => {
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.trim().parse().ok()?, d))
            }
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn tag(&self) -> FieldTag {
        FieldTag::Rational
    }
}

/// The prime field of order `p`. Construct with [`PrimeField::new`], which
/// rejects composite moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("residue fits in u64")
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<u64> {
        let t = s.trim();
        match t.split_once('/') {
            None => t.parse::<BigInt>().ok().map(|v| self.from_bigint(&v)),
            Some((n, d)) => {
                let n = self.from_bigint(&n.trim().parse().ok()?);
                let d = self.from_bigint(&d.trim().parse().ok()?);
                self.div(&n, &d)
            }
        }
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on i128 to avoid overflow for 64-bit primes.
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i128(t0))
    }
    fn tag(&self) -> FieldTag {
        FieldTag::Prime(self.p)
    }
}

/// Deterministic trial-division primality test. Moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Runtime name of a coefficient field: `Q` or `F<p>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl FieldTag {
    /// Parses `q`/`Q` or a prime written in decimal, optionally prefixed by `F`.
    pub fn parse(s: &str) -> Result<Self, LinalgError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldTag::Rational);
        }
        let digits = t.strip_prefix(['F', 'f']).unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::BadFieldTag(s.to_string()))?;
        PrimeField::new(p).map(|f| f.tag())
    }

    pub fn validate(self) -> Result<Self, LinalgError> {
        match self {
            FieldTag::Rational => Ok(self),
            FieldTag::Prime(p) => PrimeField::new(p).map(|_| self),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Runs `$body` with `$field` bound to the concrete field named by `$tag`.
///
/// Panics if the tag names a composite modulus; callers validate tags first.
#[macro_export]
macro_rules! with_field {
    ($tag:expr, |$field:ident| $body:expr) => {
        match $tag {
            $crate::field::FieldTag::Rational => {
                let $field = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldTag::Prime(p) => {
                let $field = $crate::field::PrimeField::new(p).expect("validated prime");
                $body
            }
        }
    };
}

/// Sign helper for alternating sums.
pub(crate) fn alternating(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn bigint_abs_is_one(v: &BigInt) -> bool {
    v.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert_eq!(primes_up_to(50).len(), 15);
        assert!(!is_prime(1));
        assert!(!is_prime(91));
        assert!(PrimeField::new(12).is_err());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(11).unwrap();
        for a in 1..11 {
            let ia = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ia), 1);
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-3), 8);
        assert_eq!(f.from_bigint(&BigInt::from(-25)), 8);
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(FieldTag::parse("q").unwrap(), FieldTag::Rational);
        assert_eq!(FieldTag::parse("11").unwrap(), FieldTag::Prime(11));
        assert_eq!(FieldTag::parse("F2").unwrap(), FieldTag::Prime(2));
        assert!(matches!(FieldTag::parse("4"), Err(LinalgError::NotPrime(4))));
        assert!(FieldTag::parse("x").is_err());
        assert_eq!(FieldTag::Prime(7).to_string(), "F7");
    }
}
