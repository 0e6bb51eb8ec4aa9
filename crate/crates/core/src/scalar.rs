//! Exact scalar fields: arbitrary-precision rationals and prime fields GF(p).
//!
//! Every coefficient in the crate is a [`FieldElement`]. An element knows
//! which field it belongs to, so mixing fields is detected at runtime: the
//! `checked_*` methods report it as [`Error::FieldMismatch`], while the
//! [`FieldOps`] methods used on hot paths treat it as a bug and panic.

use alloc::string::ToString;
use alloc::sync::Arc;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which field the scalars live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    /// GF(p); the modulus is shared by every element of the field.
    Prime(Arc<BigUint>),
}

impl Field {
    pub fn rationals() -> Self {
        Field::Rationals
    }

    /// GF(p), rejecting composite `p`.
    pub fn prime(p: impl Into<BigUint>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Field::Prime(Arc::new(p)))
    }

    /// Parses the descriptor syntax `q` or `gf:<p>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "q" || text == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = text.strip_prefix("gf:") {
            let p: BigUint = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidField(text.to_string()))?;
            return Field::prime(p);
        }
        Err(Error::InvalidField(text.to_string()))
    }

    pub fn modulus(&self) -> Option<&BigUint> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(p),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(n)),
            Field::Prime(p) => FieldElement::Prime {
                residue: reduce(&n, p),
                modulus: p.clone(),
            },
        }
    }

    /// `num / den` in this field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<FieldElement> {
        self.int(num).checked_div(&self.int(den))
    }

    /// Parses a scalar literal: an optionally signed integer `-12` or a
    /// quotient `a/b` of integers. In GF(p) both are reduced mod p.
    pub fn parse_scalar(&self, text: &str) -> Result<FieldElement> {
        let bad = || Error::InvalidScalar(text.to_string());
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let parse_int = |s: &str| -> Result<BigInt> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse::<BigInt>().map_err(|_| bad())
        };
        let value = match body.split_once('/') {
            None => self.from_bigint(parse_int(body)?),
            Some((n, d)) => {
                let d = self.from_bigint(parse_int(d)?);
                if d.is_zero() {
                    return Err(bad());
                }
                self.from_bigint(parse_int(n)?).checked_div(&d)?
            }
        };
        Ok(if neg { value.neg() } else { value })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => f.write_str("q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

fn reduce(n: &BigInt, p: &BigUint) -> BigUint {
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    n.mod_floor(&p)
        .to_biguint()
        .expect("mod_floor is non-negative")
}

/// Deterministic Miller-Rabin with the first thirteen prime bases. This is a
/// proof of primality below 3.3 * 10^24; larger moduli get a strong
/// probable-prime test with the same fixed bases.
fn is_prime(n: &BigUint) -> bool {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An exact scalar.
///
/// Rationals are kept in lowest terms with a positive denominator (the
/// `BigRational` invariant); prime-field residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime {
        residue: BigUint,
        modulus: Arc<BigUint>,
    },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rationals,
            FieldElement::Prime { modulus, .. } => Field::Prime(modulus.clone()),
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElement::Rational(_), FieldElement::Rational(_)) => true,
            (FieldElement::Prime { modulus: p, .. }, FieldElement::Prime { modulus: q, .. }) => {
                Arc::ptr_eq(p, q) || p == q
            }
            _ => false,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { residue, .. } => residue.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { residue, .. } => residue.is_one(),
        }
    }

    /// True only for negative rationals; prime-field residues carry no sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, FieldElement::Rational(r) if r.is_negative())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: if residue.is_zero() {
                    BigUint::zero()
                } else {
                    modulus.as_ref() - residue
                },
                modulus: modulus.clone(),
            },
        }
    }

    /// Multiplicative inverse; GF(p) uses the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { residue, modulus } => {
                let a = BigInt::from_biguint(Sign::Plus, residue.clone());
                let p = BigInt::from_biguint(Sign::Plus, modulus.as_ref().clone());
                let eg = a.extended_gcd(&p);
                debug_assert!(eg.gcd.is_one());
                FieldElement::Prime {
                    residue: reduce(&eg.x, modulus),
                    modulus: modulus.clone(),
                }
            }
        })
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// The value as an `i64`, when it is an integer in range (GF(p) residues
    /// always qualify for small p).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElement::Rational(r) if r.is_integer() => r.numer().to_i64(),
            FieldElement::Rational(_) => None,
            FieldElement::Prime { residue, .. } => residue.to_i64(),
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Prime {
                    residue: a,
                    modulus,
                },
                FieldElement::Prime { residue: b, .. },
            ) => {
                let mut s = a + b;
                if s >= **modulus {
                    s -= modulus.as_ref();
                }
                FieldElement::Prime {
                    residue: s,
                    modulus: modulus.clone(),
                }
            }
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime {
                    residue: a,
                    modulus,
                },
                FieldElement::Prime { residue: b, .. },
            ) => FieldElement::Prime {
                residue: (a * b) % modulus.as_ref(),
                modulus: modulus.clone(),
            },
            _ => panic!("field mismatch: {} vs {}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            FieldElement::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            FieldElement::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Field arithmetic shared by every kind of matrix entry: scalars, rational
/// functions and rational streams.
///
/// Operands must come from the same field; mixing fields panics.
pub trait FieldOps: Clone + PartialEq + fmt::Debug {
    fn zero_in(field: &Field) -> Self;
    fn one_in(field: &Field) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` when the element has no inverse in the carrier.
    fn inv(&self) -> Option<Self>;
}

impl FieldOps for FieldElement {
    fn zero_in(field: &Field) -> Self {
        field.zero()
    }
    fn one_in(field: &Field) -> Self {
        field.one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add_unchecked(&FieldElement::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(self).ok()
    }
}
