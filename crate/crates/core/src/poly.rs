//! Dense univariate polynomials and rational streams `p/q` with `q(0) != 0`.
//!
//! A polynomial `c0 + c1 X + ... + ck X^k` is the stream
//! `(c0, c1, ..., ck, 0, 0, ...)`. A [`RationalStream`] is a quotient of two
//! such streams whose denominator is invertible, i.e. has a nonzero constant
//! term. It is kept in lowest terms with `den(0) = 1`, so two rational
//! streams are equal exactly when their representations are.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, FieldElement, FieldOps};

/// Coefficients in ascending degree; never carries trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &Field) -> Self {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        Self::from_coeffs(&field, vec![c])
    }

    /// The stream `X = (0, 1, 0, 0, ...)`.
    pub fn x(field: &Field) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); degree];
        coeffs.push(c);
        Self::from_coeffs(&field, coeffs)
    }

    /// Panics if a coefficient is not in `field`.
    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> Self {
        let probe = field.zero();
        assert!(
            coeffs.iter().all(|c| c.same_field(&probe)),
            "coefficient outside {field}"
        );
        let mut p = Polynomial {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `None` is the degree of the zero polynomial and sorts below every
    /// finite degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients, `degree + 1` (0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval_at_zero(&self) -> FieldElement {
        self.coeff(0)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(FieldElement::neg).collect(),
        }
    }

    /// Convolution product restricted to polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.len() + other.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::from_coeffs(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiplication by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Division by `X`; the constant term must already be zero.
    pub fn shift_down(&self) -> Self {
        debug_assert!(self.eval_at_zero().is_zero());
        Polynomial {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().skip(1).cloned().collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead_inv = divisor
            .leading_coeff()
            .ok_or(Error::DivisionByZero)?
            .inv()?;
        let dd = divisor.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_coeffs(&self.field, quot),
            Self::from_coeffs(&self.field, rem),
        ))
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub(crate) fn fmt_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = if c.is_negative() {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    f.write_str("X")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of printed terms (nonzero coefficients).
    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Terms in ascending degree joined by ` + ` / ` - `, unit coefficients and
/// zero terms omitted: `1 - 2*X + X^2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

/// A rational stream `num/den` in canonical form: `gcd(num, den) = 1` and
/// `den(0) = 1`. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalStream {
    num: Polynomial,
    den: Polynomial,
}

impl RationalStream {
    /// Builds `num/den`, failing with [`Error::NotInvertibleAtZero`] when
    /// `den(0) = 0`.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.eval_at_zero().is_zero() {
            return Err(Error::NotInvertibleAtZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch(
                num.field().clone(),
                den.field().clone(),
            ));
        }
        Ok(Self::normalized(num, den))
    }

    /// Caller guarantees `den(0) != 0`.
    pub(crate) fn normalized(num: Polynomial, den: Polynomial) -> Self {
        let field = den.field().clone();
        if num.is_zero() {
            return Self::zero(&field);
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
        let c = den.eval_at_zero().inv().expect("den(0) != 0");
        if c.is_one() {
            RationalStream { num, den }
        } else {
            RationalStream {
                num: num.scale(&c),
                den: den.scale(&c),
            }
        }
    }

    pub fn zero(field: &Field) -> Self {
        RationalStream {
            num: Polynomial::zero(field),
            den: Polynomial::one(field),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_polynomial(Polynomial::one(field))
    }

    /// The constant stream `[c] = (c, 0, 0, ...)`.
    pub fn constant(c: FieldElement) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn x(field: &Field) -> Self {
        Self::from_polynomial(Polynomial::x(field))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.field());
        RationalStream { num: p, den }
    }

    /// `1/(1 - cX) = (1, c, c^2, ...)`.
    pub fn geometric(c: FieldElement) -> Self {
        let field = c.field();
        let den = Polynomial::from_coeffs(&field, vec![field.one(), c.neg()]);
        Self::normalized(Polynomial::one(&field), den)
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

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `max(deg num, deg den)`, with the zero polynomial counted as degree 0.
    pub fn max_degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalStream {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// `self / other`; the divisor must have a nonzero initial value.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.eval_at_zero().is_zero() {
            return Err(Error::NotInvertibleAtZero);
        }
        Ok(Self::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    /// The multiplicative inverse `1/self`.
    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.field()).div(self)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self::normalized(self.num.pow(exp), self.den.pow(exp))
    }

    /// The initial value `s(0) = num(0) / den(0)`; with `den(0) = 1` this is
    /// just `num(0)`.
    pub fn initial_value(&self) -> FieldElement {
        self.num.eval_at_zero()
    }

    /// The stream derivative `s' = (s(1), s(2), ...)`.
    ///
    /// With `s = p/q`, `s - s(0) = (p - s(0) q)/q` has a numerator divisible
    /// by `X`, and dividing it out gives `s'` over the same denominator.
    pub fn derivative(&self) -> Self {
        let r = self.num.sub(&self.den.scale(&self.initial_value()));
        // gcd(r, q) = gcd(p, q) = 1, so the result is already canonical.
        RationalStream {
            num: r.shift_down(),
            den: self.den.clone(),
        }
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |s, _| s.derivative())
    }

    /// The first `n` coefficients, from the recurrence
    /// `s(i) = num_i - sum_{j >= 1} den_j s(i - j)`.
    pub fn expand(&self, n: usize) -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> = Vec::with_capacity(n);
        let den = self.den.coeffs();
        for i in 0..n {
            let mut v = self.num.coeff(i);
            for (j, d) in den.iter().enumerate().skip(1).take(i) {
                if !d.is_zero() {
                    v = v.sub(&d.mul(&out[i - j]));
                }
            }
            out.push(v);
        }
        out
    }

    /// Decides equality by cross-multiplication, independent of the
    /// canonical form.
    pub fn equals(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

/// `(c0 + c1*X)/(1 + d1*X + d2*X^2)`; the denominator is omitted when it is
/// 1 and parentheses appear only around multi-term parts.
impl fmt::Display for RationalStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_terms(f);
        }
        let wrap_num = self.num.term_count() > 1
            || self
                .num
                .coeffs()
                .iter()
                .any(|c| c.to_i64().is_none() && !c.is_zero());
        if wrap_num {
            f.write_str("(")?;
            self.num.fmt_terms(f)?;
            f.write_str(")")?;
        } else {
            self.num.fmt_terms(f)?;
        }
        f.write_str("/(")?;
        self.den.fmt_terms(f)?;
        f.write_str(")")
    }
}

impl FieldOps for RationalStream {
    fn zero_in(field: &Field) -> Self {
        Self::zero(field)
    }
    fn one_in(field: &Field) -> Self {
        Self::one(field)
    }
    fn is_zero(&self) -> bool {
        RationalStream::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalStream::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalStream::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalStream::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalStream::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}
