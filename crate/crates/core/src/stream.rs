//! Memoized prefix streams.
//!
//! A [`StreamPrefix`] produces `s(0), s(1), ...` on demand from a pure
//! producer and caches what it has produced. Every finite representation in
//! the crate can be viewed this way, which makes prefix streams the common
//! ground on which the representations are compared.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::RationalStream;
use crate::scalar::{Field, FieldElement, FieldOps};

/// Producer signature: given the index and the coefficients already cached,
/// return the next coefficient.
type Producer = Box<dyn FnMut(usize, &[FieldElement]) -> FieldElement + Send>;

pub struct StreamPrefix {
    field: Field,
    producer: Producer,
    cache: Vec<FieldElement>,
}

impl fmt::Debug for StreamPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StreamPrefix")
            .field("field", &self.field)
            .field("cached", &self.cache)
            .finish_non_exhaustive()
    }
}

impl StreamPrefix {
    /// The producer is called with strictly increasing indices, exactly once
    /// per index.
    pub fn from_fn(
        field: &Field,
        producer: impl FnMut(usize, &[FieldElement]) -> FieldElement + Send + 'static,
    ) -> Self {
        StreamPrefix {
            field: field.clone(),
            producer: Box::new(producer),
            cache: Vec::new(),
        }
    }

    /// The finite sequence padded with zeros.
    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> Self {
        let zero = field.zero();
        Self::from_fn(field, move |i, _| {
            coeffs.get(i).cloned().unwrap_or_else(|| zero.clone())
        })
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        Self::from_coeffs(&field, alloc::vec![c])
    }

    pub fn x(field: &Field) -> Self {
        Self::from_coeffs(field, alloc::vec![field.zero(), field.one()])
    }

    /// Bridges the symbolic layer: coefficient `i` equals
    /// `s.expand(i + 1)[i]`, computed incrementally by the same denominator
    /// recurrence.
    pub fn from_rational(s: &RationalStream) -> Self {
        let num: Vec<FieldElement> = s.numerator().coeffs().to_vec();
        let den: Vec<FieldElement> = s.denominator().coeffs().to_vec();
        let field = s.field().clone();
        Self::from_fn(&s.field().clone(), move |i, prev| {
            let mut v = num.get(i).cloned().unwrap_or_else(|| field.zero());
            for (j, d) in den.iter().enumerate().skip(1).take(i) {
                v = v.sub(&d.mul(&prev[i - j]));
            }
            v
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficient `i`, producing (and caching) everything up to it.
    pub fn get(&mut self, i: usize) -> FieldElement {
        while self.cache.len() <= i {
            let next = (self.producer)(self.cache.len(), &self.cache);
            self.cache.push(next);
        }
        self.cache[i].clone()
    }

    /// The first `n` coefficients.
    pub fn prefix(&mut self, n: usize) -> Vec<FieldElement> {
        if n > 0 {
            self.get(n - 1);
        }
        self.cache[..n].to_vec()
    }

    /// The initial value `s(0)`.
    pub fn head(&mut self) -> FieldElement {
        self.get(0)
    }

    /// The derivative `s' = (s(1), s(2), ...)`.
    pub fn tail(mut self) -> Self {
        let field = self.field.clone();
        Self::from_fn(&field, move |i, _| self.get(i + 1))
    }

    /// `c : s = (c, s(0), s(1), ...)`.
    pub fn cons(c: FieldElement, mut s: Self) -> Self {
        let field = s.field.clone();
        Self::from_fn(
            &field,
            move |i, _| if i == 0 { c.clone() } else { s.get(i - 1) },
        )
    }

    pub fn add(mut self, mut other: Self) -> Self {
        let field = self.field.clone();
        Self::from_fn(&field, move |i, _| self.get(i).add(&other.get(i)))
    }

    pub fn neg(mut self) -> Self {
        let field = self.field.clone();
        Self::from_fn(&field, move |i, _| FieldOps::neg(&self.get(i)))
    }

    pub fn scale(mut self, c: FieldElement) -> Self {
        let field = self.field.clone();
        Self::from_fn(&field, move |i, _| c.mul(&self.get(i)))
    }

    /// Cauchy product `(s * t)(n) = sum_{i <= n} s(i) t(n - i)`.
    pub fn convolve(mut self, mut other: Self) -> Self {
        let field = self.field.clone();
        let zero = field.zero();
        Self::from_fn(&field, move |n, _| {
            (0..=n).fold(zero.clone(), |acc, i| {
                acc.add(&self.get(i).mul(&other.get(n - i)))
            })
        })
    }

    /// The multiplicative inverse, via `b(0) = a(0)^-1` and
    /// `b(n) = -a(0)^-1 * sum_{i=1}^{n} a(i) b(n - i)`.
    pub fn inverse(mut self) -> Result<Self> {
        let a0_inv = self.head().inv().map_err(|_| Error::ZeroInitialValue)?;
        let field = self.field.clone();
        let zero = field.zero();
        Ok(Self::from_fn(&field, move |n, prev| {
            if n == 0 {
                return a0_inv.clone();
            }
            let sum = (1..=n).fold(zero.clone(), |acc, i| {
                acc.add(&self.get(i).mul(&prev[n - i]))
            });
            FieldOps::neg(&a0_inv.mul(&sum))
        }))
    }
}
