//! Exact field arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every number in the engine is a [`Scalar`] tagged with its [`FieldSpec`].
//! There is no floating point anywhere; rationals are kept in lowest terms by
//! `num`'s `BigRational` and residues are reduced into `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("cannot interpret `{0}` as a field description (expected `Q` or `Fp:P`)")]
    BadDescription(String),
    #[error("denominator {0} is not invertible mod {1}")]
    BadDenominator(u64, u64),
}

/// The ground field: ℚ or 𝔽ₚ for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// 0 for ℚ, p for 𝔽ₚ.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Parses `Q` or `Fp:P` (e.g. `Fp:2`), the syntax used by the CLI and
    /// the DGA file format.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        if text == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = text.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| FieldError::BadDescription(text.to_string()))?;
            return FieldSpec::prime_field(p);
        }
        Err(FieldError::BadDescription(text.to_string()))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: 0, prime: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Residue {
                value: if *p == 1 { 0 } else { 1 },
                prime: *p,
            },
        }
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Residue { value: r, prime: *p }
            }
        }
    }

    /// Exact `n/d`. Over 𝔽ₚ the denominator must be invertible.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar, FieldError> {
        assert!(d != 0, "zero denominator");
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            ))),
            FieldSpec::PrimeField(p) => {
                let dm = d.rem_euclid(*p as i64) as u64;
                let inv = mod_inverse(dm, *p).ok_or(FieldError::BadDenominator(dm, *p))?;
                let nm = n.rem_euclid(*p as i64) as u64;
                Ok(Scalar::Residue {
                    value: mul_mod(nm, inv, *p),
                    prime: *p,
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An exact field element.
///
/// Rationals are stored in lowest terms with positive denominator (enforced
/// by `BigRational`); residues are always reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { prime, .. } => FieldSpec::PrimeField(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Residue { value, prime } => {
                mod_inverse(*value, *prime).map(|v| Scalar::Residue {
                    value: v,
                    prime: *prime,
                })
            }
        }
    }

    /// A crude size measure used only to pick small pivots: for rationals
    /// `|num| * den`, for residues the residue itself.
    pub fn pivot_size(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.numer().abs() * r.denom(),
            Scalar::Residue { value, .. } => BigInt::from(*value),
        }
    }

    /// Parses a coefficient string: decimal integer or `p/q`.
    pub fn parse_in(field: FieldSpec, text: &str) -> Result<Scalar, FieldError> {
        let bad = || FieldError::BadDescription(text.to_string());
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            field.from_ratio(n, d)
        } else {
            let n: i64 = text.trim().parse().map_err(|_| bad())?;
            Ok(field.from_integer(n))
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across distinct fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: add_mod(*a, *b, *prime),
                    prime: *prime,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *prime),
                    prime: *prime,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, prime } => Scalar::Residue {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // p is prime, so a^(p-2) inverts a.
    Some(pow_mod(a, p - 2, p))
}

/// Deterministic Miller-Rabin for u64 (the usual 12-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(FieldSpec::prime_field(2).is_ok());
        assert!(FieldSpec::prime_field(97).is_ok());
        assert!(FieldSpec::prime_field(1).is_err());
        assert!(FieldSpec::prime_field(91).is_err()); // 7 * 13
        assert!(FieldSpec::prime_field(0).is_err());
    }

    #[test]
    fn rational_arithmetic_stays_reduced() {
        let q = FieldSpec::rationals();
        let half = q.from_ratio(1, 2).unwrap();
        let third = q.from_ratio(2, 6).unwrap();
        let sum = &half + &third;
        assert_eq!(sum, q.from_ratio(5, 6).unwrap());
        assert_eq!(&sum * &sum.inverse().unwrap(), q.one());
        assert_eq!(q.from_ratio(-3, -6).unwrap(), half);
    }

    #[test]
    fn residue_arithmetic() {
        let f7 = FieldSpec::prime_field(7).unwrap();
        let a = f7.from_integer(5);
        let b = f7.from_integer(4);
        assert_eq!(&a + &b, f7.from_integer(2));
        assert_eq!(&a * &b, f7.from_integer(6));
        assert_eq!(-&a, f7.from_integer(2));
        assert_eq!(&a * &a.inverse().unwrap(), f7.one());
        assert!(f7.zero().inverse().is_none());
    }

    #[test]
    fn parse_round_trips() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("Fp:2").unwrap(), FieldSpec::PrimeField(2));
        assert!(FieldSpec::parse("Fp:6").is_err());
        assert!(FieldSpec::parse("R").is_err());

        let q = FieldSpec::rationals();
        assert_eq!(Scalar::parse_in(q, "-3").unwrap(), q.from_integer(-3));
        assert_eq!(Scalar::parse_in(q, "1/2").unwrap(), q.from_ratio(1, 2).unwrap());
        let f5 = FieldSpec::prime_field(5).unwrap();
        assert_eq!(Scalar::parse_in(f5, "7").unwrap(), f5.from_integer(2));
        assert_eq!(Scalar::parse_in(f5, "1/2").unwrap(), f5.from_integer(3));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64((1 << 31) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64((1u64 << 32) + 1));
    }
}
