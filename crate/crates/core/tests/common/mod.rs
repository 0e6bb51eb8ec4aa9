#![allow(dead_code)]

use proptest::prelude::*;
use streamcalc::{Field, FieldElement, Matrix, Polynomial, RationalStream};

pub fn gf101() -> Field {
    Field::prime(101u32).unwrap()
}

pub fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(gf101())]
}

pub fn ints(field: &Field, v: &[i64]) -> Vec<FieldElement> {
    v.iter().map(|&c| field.int(c)).collect()
}

pub fn matrix(field: &Field, rows: &[&[i64]]) -> Matrix<FieldElement> {
    Matrix::from_rows(field, rows.iter().map(|r| ints(field, r)).collect()).unwrap()
}

/// Numerator degree at most 5, denominator degree at most 5 with constant
/// term 1, coefficients in -9..=9.
pub fn rational_in(field: Field) -> impl Strategy<Value = RationalStream> {
    (
        prop::collection::vec(-9i64..=9, 0..=6),
        prop::collection::vec(-9i64..=9, 0..=5),
    )
        .prop_map(move |(num, den_tail)| {
            let mut den = vec![1];
            den.extend(den_tail);
            RationalStream::new(
                Polynomial::from_ints(&field, &num),
                Polynomial::from_ints(&field, &den),
            )
            .unwrap()
        })
}

pub fn rational() -> impl Strategy<Value = RationalStream> {
    fields().prop_flat_map(rational_in)
}

/// A square matrix of the given size with entries in -bound..=bound.
pub fn square(field: Field, n: usize, bound: i64) -> impl Strategy<Value = Matrix<FieldElement>> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| Matrix::from_fn(&field, n, n, |i, j| field.int(v[i * n + j])))
}

pub fn vector(field: Field, n: usize, bound: i64) -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec(-bound..=bound, n).prop_map(move |v| ints(&field, &v))
}
