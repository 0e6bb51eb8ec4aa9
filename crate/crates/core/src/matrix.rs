//! Exact dense matrices over the scalar field, k(X), or rational streams.
//!
//! A matrix over rational streams is how a rational stream of linear maps is
//! represented: the stream `(1, F, F^2, ...)` is the matrix
//! `(I - X F)^-1`, see [`resolvent`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalStream};
use crate::ratfunc::RationalFunction;
use crate::scalar::{Field, FieldElement, FieldOps};

/// Row-major `rows x cols` matrix; every entry belongs to `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: FieldOps> Matrix<E> {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![E::zero_in(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = E::one_in(field);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> E,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Rows must all have the same length.
    pub fn from_rows(field: &Field, rows: Vec<Vec<E>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn row_vector(field: &Field, v: Vec<E>) -> Self {
        Matrix {
            field: field.clone(),
            rows: 1,
            cols: v.len(),
            entries: v,
        }
    }

    pub fn column_vector(field: &Field, v: Vec<E>) -> Self {
        Matrix {
            field: field.clone(),
            rows: v.len(),
            cols: 1,
            entries: v,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(E::is_zero)
    }

    pub fn map<T>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<T>(&self, f: impl FnMut(&E) -> Result<T>) -> Result<Matrix<T>> {
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self[(j, i)].clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(shape_err("add", self, other));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&E::one_in(&self.field).neg()))
    }

    pub fn scale(&self, c: &E) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape_err("multiply", self, other));
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[E]) -> Result<Vec<E>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(E::zero_in(&self.field), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(shape_err("stack", self, other));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("nonzero pivot in a field");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let delta = factor.mul(&self[(r, j)]);
                    self[(i, j)] = self[(i, j)].sub(&delta);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column of the reduced
    /// echelon form (free variable set to 1, the others to 0).
    pub fn kernel_basis(&self) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![E::zero_in(&self.field); self.cols];
            v[f] = E::one_in(&self.field);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r[(row, f)].neg();
            }
            v
        })
        .collect()
    }

    /// Some solution of `M x = b`, free variables set to zero; `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &[E]) -> Result<Option<Vec<E>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch("right-hand side length".into()));
        }
        let aug = Self::from_fn(&self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![E::zero_in(&self.field); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Gauss-Jordan inversion, pivoting on the first nonzero entry of each
    /// column. The determinant is the signed product of the pivots; a zero
    /// column below the diagonal means it vanishes.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.field, n);
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a[(i, c)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let pivot_inv = a[(c, c)].inv().ok_or(Error::SingularMatrix)?;
            for j in 0..n {
                a[(c, j)] = a[(c, j)].mul(&pivot_inv);
                inv[(c, j)] = inv[(c, j)].mul(&pivot_inv);
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let factor = a[(i, c)].clone();
                for j in 0..n {
                    let da = factor.mul(&a[(c, j)]);
                    a[(i, j)] = a[(i, j)].sub(&da);
                    let di = factor.mul(&inv[(c, j)]);
                    inv[(i, j)] = inv[(i, j)].sub(&di);
                }
            }
        }
        Ok(inv)
    }
}

fn shape_err<E>(op: &str, a: &Matrix<E>, b: &Matrix<E>) -> Error {
    Error::ShapeMismatch(format!(
        "cannot {op} {}x{} and {}x{}",
        a.rows, a.cols, b.rows, b.cols
    ))
}

impl<E> core::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }
}

impl<E> core::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.entries[i * self.cols + j]
    }
}

/// Rows separated by `;`, entries by `,`: `0,-1;1,2`.
impl<E: fmt::Display> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
        }
        Ok(())
    }
}

impl Matrix<FieldElement> {
    /// Entrywise embedding into k(X) as constants.
    pub fn to_rational_functions(&self) -> Matrix<RationalFunction> {
        self.map(|c| RationalFunction::constant(c.clone()))
    }

    pub fn to_streams(&self) -> Matrix<RationalStream> {
        self.map(|c| RationalStream::constant(c.clone()))
    }
}

impl Matrix<FieldElement> {
    /// The monic characteristic polynomial `det(tI - F)`, by reduction to
    /// Hessenberg form followed by the usual three-term expansion.
    pub fn characteristic_polynomial(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "characteristic polynomial of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let field = self.field.clone();
        let mut h = self.clone();
        for m in 1..n {
            let Some(p) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if p != m {
                for j in 0..n {
                    h.entries.swap(p * n + j, m * n + j);
                }
                for i in 0..n {
                    h.entries.swap(i * n + p, i * n + m);
                }
            }
            let pivot_inv = FieldOps::inv(&h[(m, m - 1)]).expect("nonzero pivot");
            for i in m + 1..n {
                let u = h[(i, m - 1)].mul(&pivot_inv);
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = h[(i, j)].sub(&u.mul(&h[(m, j)]));
                    h[(i, j)] = v;
                }
                for r in 0..n {
                    let v = h[(r, m)].add(&u.mul(&h[(r, i)]));
                    h[(r, m)] = v;
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k x k block.
        let t = Polynomial::x(&field);
        let mut chars: Vec<Polynomial> = vec![Polynomial::one(&field)];
        for k in 0..n {
            let mut p = t
                .sub(&Polynomial::constant(h[(k, k)].clone()))
                .mul(&chars[k]);
            let mut sub = field.one();
            for i in 1..=k {
                sub = sub.mul(&h[(k - i + 1, k - i)]);
                let c = h[(k - i, k)].mul(&sub);
                if !c.is_zero() {
                    p = p.sub(&chars[k - i].scale(&c));
                }
            }
            chars.push(p);
        }
        Ok(chars.pop().expect("at least the constant polynomial"))
    }
}

/// `(I - X F)^-1`, the matrix of the stream `(1, F, F^2, ...)`.
///
/// The common denominator is `d = det(I - X F)`, the reversed characteristic
/// polynomial, whose constant term is 1. The numerators are the adjugate
/// entries, which have degree below `n` and agree with
/// `d * (1 + F X + F^2 X^2 + ...)` there.
pub fn resolvent(f: &Matrix<FieldElement>) -> Result<Matrix<RationalStream>> {
    let chi = f.characteristic_polynomial()?;
    let field = f.field().clone();
    let n = f.rows();
    let det: Vec<FieldElement> = (0..=n).map(|k| chi.coeff(n - k)).collect();
    let mut powers = Vec::with_capacity(n);
    let mut power = Matrix::identity(&field, n);
    for _ in 0..n {
        let next = power.mul(f)?;
        powers.push(power);
        power = next;
    }
    let den = Polynomial::from_coeffs(&field, det.clone());
    Ok(Matrix::from_fn(&field, n, n, |i, j| {
        let num: Vec<FieldElement> = (0..n)
            .map(|k| {
                (0..=k).fold(field.zero(), |acc, l| {
                    let e = &powers[k - l][(i, j)];
                    if e.is_zero() || det[l].is_zero() {
                        acc
                    } else {
                        acc.add(&det[l].mul(e))
                    }
                })
            })
            .collect();
        RationalStream::new(Polynomial::from_coeffs(&field, num), den.clone())
            .expect("det(I - XF) is 1 at zero")
    }))
}
