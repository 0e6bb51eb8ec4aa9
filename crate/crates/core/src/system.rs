//! Finite-dimensional linear systems `(k^n, <H, F>)` with output in `k^m`.
//!
//! A state `v` has the final behaviour `f(v) = (Hv, HFv, HF^2v, ...)`, which
//! in closed form is the vector of rational streams `H (I - XF)^-1 v`.
//! Conversely [`realize`] builds, for any vector of rational streams, the
//! minimal system spanned by its iterated derivatives.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{resolvent, Matrix};
use crate::poly::RationalStream;
use crate::scalar::{Field, FieldElement, FieldOps};

/// Dynamics `F` (`n x n`) and output `H` (`m x n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    dynamics: Matrix<FieldElement>,
    output: Matrix<FieldElement>,
}

impl LinearSystem {
    pub fn new(dynamics: Matrix<FieldElement>, output: Matrix<FieldElement>) -> Result<Self> {
        if !dynamics.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "dynamics must be square, got {}x{}",
                dynamics.rows(),
                dynamics.cols()
            )));
        }
        if output.cols() != dynamics.rows() {
            return Err(Error::DimensionMismatch(format!(
                "output has {} columns for a {}-dimensional state space",
                output.cols(),
                dynamics.rows()
            )));
        }
        if output.rows() == 0 {
            return Err(Error::DimensionMismatch(
                "a system needs at least one output".into(),
            ));
        }
        if dynamics.field() != output.field() {
            return Err(Error::FieldMismatch(
                dynamics.field().clone(),
                output.field().clone(),
            ));
        }
        Ok(LinearSystem { dynamics, output })
    }

    pub fn field(&self) -> &Field {
        self.dynamics.field()
    }

    /// State-space dimension `n`.
    pub fn dim(&self) -> usize {
        self.dynamics.rows()
    }

    /// Output dimension `m`.
    pub fn outputs(&self) -> usize {
        self.output.rows()
    }

    pub fn dynamics(&self) -> &Matrix<FieldElement> {
        &self.dynamics
    }

    pub fn output(&self) -> &Matrix<FieldElement> {
        &self.output
    }

    fn check_state(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, system dimension is {}",
                v.len(),
                self.dim()
            )));
        }
        let probe = self.field().zero();
        if let Some(bad) = v.iter().find(|c| !c.same_field(&probe)) {
            return Err(Error::FieldMismatch(self.field().clone(), bad.field()));
        }
        Ok(())
    }

    /// `H (I - XF)^-1 v`, one rational stream per output.
    pub fn final_behaviour(&self, v: &[FieldElement]) -> Result<Vec<RationalStream>> {
        self.check_state(v)?;
        let resolvent = resolvent(&self.dynamics)?;
        let state: Vec<RationalStream> = v.iter().cloned().map(RationalStream::constant).collect();
        let trajectory = resolvent.mul_vec(&state)?;
        self.output.to_streams().mul_vec(&trajectory)
    }

    /// The first `n` outputs `Hv, HFv, HF^2v, ...` by iteration.
    pub fn step_semantics(&self, v: &[FieldElement], n: usize) -> Result<Vec<Vec<FieldElement>>> {
        self.check_state(v)?;
        let mut state = v.to_vec();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.output.mul_vec(&state)?);
            state = self.dynamics.mul_vec(&state)?;
        }
        Ok(out)
    }

    /// `[H; HF; ...; HF^(n-1)]`; its kernel is the set of states with zero
    /// behaviour.
    pub fn observability_matrix(&self) -> Matrix<FieldElement> {
        let n = self.dim();
        let mut block = self.output.clone();
        let mut acc = Matrix::zeros(self.field(), 0, n);
        for _ in 0..n {
            acc = acc.vstack(&block).expect("same width");
            block = block.mul(&self.dynamics).expect("conformant");
        }
        acc
    }

    /// `v1 ~ v2` iff `f(v1) = f(v2)` iff `v1 - v2` lies in the kernel of the
    /// observability matrix.
    pub fn equivalent_states(&self, v1: &[FieldElement], v2: &[FieldElement]) -> Result<bool> {
        self.check_state(v1)?;
        self.check_state(v2)?;
        let diff: Vec<FieldElement> = v1.iter().zip(v2).map(|(a, b)| a.sub(b)).collect();
        Ok(self
            .observability_matrix()
            .mul_vec(&diff)?
            .iter()
            .all(FieldElement::is_zero))
    }
}

/// A linear system with a designated initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedLinearSystem {
    system: LinearSystem,
    initial: Vec<FieldElement>,
}

impl PointedLinearSystem {
    pub fn new(system: LinearSystem, initial: Vec<FieldElement>) -> Result<Self> {
        system.check_state(&initial)?;
        Ok(PointedLinearSystem { system, initial })
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn initial(&self) -> &[FieldElement] {
        &self.initial
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn field(&self) -> &Field {
        self.system.field()
    }

    pub fn into_parts(self) -> (LinearSystem, Vec<FieldElement>) {
        (self.system, self.initial)
    }

    /// The final behaviour of the initial state.
    pub fn behaviour(&self) -> Result<Vec<RationalStream>> {
        self.system.final_behaviour(&self.initial)
    }

    pub fn step_semantics(&self, n: usize) -> Result<Vec<Vec<FieldElement>>> {
        self.system.step_semantics(&self.initial, n)
    }

    /// Quotient by the kernel of the observability matrix.
    ///
    /// With `R` the nonzero rows of the reduced echelon form of the
    /// observability matrix and `S` the selector of its pivot columns
    /// (`R S = I`), the reduced system is `(R F S, H S)` started at `R v0`.
    /// Since the kernel is `F`-invariant and contained in `ker H`, `R` is a
    /// homomorphism onto it.
    pub fn minimize(&self) -> Self {
        let field = self.field().clone();
        let n = self.dim();
        let (echelon, pivots) = self.system.observability_matrix().rref();
        let r = pivots.len();
        let reduce = Matrix::from_fn(&field, r, n, |i, j| echelon[(i, j)].clone());
        let select = Matrix::from_fn(&field, n, r, |i, j| {
            if pivots[j] == i {
                field.one()
            } else {
                field.zero()
            }
        });
        let dynamics = reduce
            .mul(self.system.dynamics())
            .and_then(|m| m.mul(&select))
            .expect("conformant");
        let output = self.system.output().mul(&select).expect("conformant");
        let initial = reduce.mul_vec(&self.initial).expect("conformant");
        PointedLinearSystem {
            system: LinearSystem::new(dynamics, output).expect("shapes preserved"),
            initial,
        }
    }

    /// Re-expresses the system in a basis whose first vector is the initial
    /// state, so that the new initial state is `(1, 0, ..., 0)`.
    ///
    /// Fails with [`Error::UnsupportedInitialVector`] for the zero state,
    /// which belongs to no basis.
    pub fn rebase_to_first_basis_vector(&self) -> Result<Self> {
        let field = self.field().clone();
        let n = self.dim();
        let Some(lead) = self.initial.iter().position(|c| !c.is_zero()) else {
            return Err(Error::UnsupportedInitialVector);
        };
        // Columns: v0 followed by the standard basis vectors other than e_lead.
        let others: Vec<usize> = (0..n).filter(|&i| i != lead).collect();
        let change = Matrix::from_fn(&field, n, n, |i, j| {
            if j == 0 {
                self.initial[i].clone()
            } else if others[j - 1] == i {
                field.one()
            } else {
                field.zero()
            }
        });
        let back = change.inverse()?;
        let dynamics = back.mul(self.system.dynamics())?.mul(&change)?;
        let output = self.system.output().mul(&change)?;
        let mut initial = vec![field.zero(); n];
        initial[0] = field.one();
        Ok(PointedLinearSystem {
            system: LinearSystem::new(dynamics, output)?,
            initial,
        })
    }
}

/// Row-echelon accumulator that remembers, for every stored row, which
/// combination of the inserted vectors produced it.
struct DependenceTracker {
    rows: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)>,
    field: Field,
}

impl DependenceTracker {
    /// Inserts the next vector `w_k`. Returns `Some(c)` with
    /// `w_k = sum_i c_i w_i` if it depends on the earlier ones, otherwise
    /// stores it and returns `None`.
    fn insert(&mut self, mut w: Vec<FieldElement>) -> Option<Vec<FieldElement>> {
        let k = self.rows.len();
        let mut dep = vec![self.field.zero(); k];
        // Rows are kept zero at the pivots of earlier rows, so one pass in
        // insertion order clears every pivot position of `w`.
        for (pivot, row, combo) in &self.rows {
            let alpha = w[*pivot].clone();
            if alpha.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&alpha.mul(r));
                }
            }
            for (d, c) in dep.iter_mut().zip(combo) {
                *d = d.add(&alpha.mul(c));
            }
        }
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return Some(dep);
        };
        let scale = w[pivot].inv().expect("nonzero");
        let row: Vec<FieldElement> = w.iter().map(|x| x.mul(&scale)).collect();
        let mut combo: Vec<FieldElement> = dep.iter().map(|d| d.neg().mul(&scale)).collect();
        combo.push(scale);
        for (_, _, c) in &mut self.rows {
            c.push(self.field.zero());
        }
        self.rows.push((pivot, row, combo));
        None
    }
}

/// Minimal linear representation of a vector of rational streams.
///
/// The derivatives `s, s', s'', ...` are generated symbolically until the
/// first one that depends linearly on its predecessors,
/// `s^(n) = sum_{i<n} c_i s^(i)`. On the basis `s^(0), ..., s^(n-1)` the
/// derivative acts by the companion matrix with subdiagonal ones and last
/// column `c`, the output reads off initial values, and `s` itself is the
/// first basis vector.
///
/// Each component `p/q` keeps its denominator under differentiation, so a
/// derivative is identified with its numerator, a vector of
/// `max(deg p, deg q) + 1` coefficients. The loop therefore terminates after
/// at most that many steps summed over components.
pub fn realize(streams: &[RationalStream]) -> Result<PointedLinearSystem> {
    let first = streams
        .first()
        .ok_or_else(|| Error::DimensionMismatch("nothing to realize".into()))?;
    let field = first.field().clone();
    if let Some(bad) = streams.iter().find(|s| *s.field() != field) {
        return Err(Error::FieldMismatch(field, bad.field().clone()));
    }
    let m = streams.len();
    let widths: Vec<usize> = streams.iter().map(|s| s.max_degree() + 1).collect();
    let embed = |current: &[RationalStream]| -> Vec<FieldElement> {
        current
            .iter()
            .zip(&widths)
            .flat_map(|(s, &w)| (0..w).map(move |i| s.numerator().coeff(i)))
            .collect()
    };

    let mut tracker = DependenceTracker {
        rows: Vec::new(),
        field: field.clone(),
    };
    let mut current = streams.to_vec();
    let mut initial_values: Vec<Vec<FieldElement>> = Vec::new();
    let coeffs = loop {
        if let Some(c) = tracker.insert(embed(&current)) {
            break c;
        }
        initial_values.push(current.iter().map(RationalStream::initial_value).collect());
        current = current.iter().map(RationalStream::derivative).collect();
    };

    let n = coeffs.len();
    let dynamics = Matrix::from_fn(&field, n, n, |i, j| {
        if j + 1 == n {
            coeffs[i].clone()
        } else if i == j + 1 {
            field.one()
        } else {
            field.zero()
        }
    });
    let output = Matrix::from_fn(&field, m, n, |i, j| initial_values[j][i].clone());
    let mut initial = vec![field.zero(); n];
    if n > 0 {
        initial[0] = field.one();
    }
    PointedLinearSystem::new(LinearSystem::new(dynamics, output)?, initial)
}
