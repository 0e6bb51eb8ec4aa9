//! The rational-function field k(X).
//!
//! Unlike [`RationalStream`], a [`RationalFunction`] may have a denominator
//! that vanishes at zero. Gaussian elimination over k(X) passes through such
//! entries, so matrices are inverted here and converted back to streams
//! afterwards.

use core::fmt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalStream};
use crate::scalar::{Field, FieldElement, FieldOps};

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::from_polynomial(num);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_rem(&g).expect("gcd divides").0,
                den.div_rem(&g).expect("gcd divides").0,
            )
        };
        let lead = den
            .leading_coeff()
            .expect("nonzero")
            .inv()
            .expect("nonzero");
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction {
                num: num.scale(&lead),
                den: den.scale(&lead),
            }
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn field(&self) -> &Field {
        self.den.field()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Converts to a stream when the denominator is invertible at zero.
    pub fn to_stream(&self) -> Result<RationalStream> {
        RationalStream::new(self.num.clone(), self.den.clone())
    }
}

impl From<&RationalStream> for RationalFunction {
    fn from(s: &RationalStream) -> Self {
        RationalFunction::normalized(s.numerator().clone(), s.denominator().clone())
    }
}

impl FieldOps for RationalFunction {
    fn zero_in(field: &Field) -> Self {
        Self::from_polynomial(Polynomial::zero(field))
    }
    fn one_in(field: &Field) -> Self {
        Self::from_polynomial(Polynomial::one(field))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_terms(f);
        }
        f.write_str("(")?;
        self.num.fmt_terms(f)?;
        f.write_str(")/(")?;
        self.den.fmt_terms(f)?;
        f.write_str(")")
    }
}
