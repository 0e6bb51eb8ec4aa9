//! Weighted stream automata.
//!
//! States `q_1, ..., q_n` carry an output weight `L_i` and transitions
//! `q_i -> q_j` weighted by `K[i][j]` (zero meaning no transition). The
//! stream of a state sums, for each length `k`, the weights of all paths of
//! length `k` multiplied by the output weight where they end.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{resolvent, Matrix};
use crate::poly::RationalStream;
use crate::scalar::{Field, FieldElement, FieldOps};
use crate::system::{realize, LinearSystem, PointedLinearSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    outputs: Vec<FieldElement>,
    weights: Matrix<FieldElement>,
}

impl WeightedAutomaton {
    pub fn new(outputs: Vec<FieldElement>, weights: Matrix<FieldElement>) -> Result<Self> {
        let n = outputs.len();
        if !weights.is_square() || weights.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} output weights but a {}x{} transition matrix",
                weights.rows(),
                weights.cols()
            )));
        }
        let probe = weights.field().zero();
        if let Some(bad) = outputs.iter().find(|c| !c.same_field(&probe)) {
            return Err(Error::FieldMismatch(weights.field().clone(), bad.field()));
        }
        Ok(WeightedAutomaton { outputs, weights })
    }

    pub fn field(&self) -> &Field {
        self.weights.field()
    }

    pub fn states(&self) -> usize {
        self.outputs.len()
    }

    /// `L`, the output weight of each state.
    pub fn outputs(&self) -> &[FieldElement] {
        &self.outputs
    }

    /// `K`, with `K[i][j]` the weight of `q_i -> q_j`.
    pub fn weights(&self) -> &Matrix<FieldElement> {
        &self.weights
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q >= self.states() {
            return Err(Error::StateOutOfRange {
                index: q,
                states: self.states(),
            });
        }
        Ok(())
    }

    /// Coefficient `k` of the stream of `q`, by enumerating every path of
    /// length `k`. Exponential in `k`; meant as a reference.
    pub fn path_sum(&self, q: usize, k: usize) -> Result<FieldElement> {
        self.check_state(q)?;
        Ok(self.paths_from(q, k, &self.field().one()))
    }

    fn paths_from(&self, q: usize, k: usize, weight: &FieldElement) -> FieldElement {
        if k == 0 {
            return weight.mul(&self.outputs[q]);
        }
        let mut total = self.field().zero();
        for (next, w) in self.weights.row(q).iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            total = total.add(&self.paths_from(next, k - 1, &weight.mul(w)));
        }
        total
    }

    /// The stream of every state: `(I - XK)^-1 L`.
    pub fn behaviour(&self) -> Vec<RationalStream> {
        let res = resolvent(&self.weights).expect("I - XK is invertible over k(X)");
        let l: Vec<RationalStream> = self
            .outputs
            .iter()
            .cloned()
            .map(RationalStream::constant)
            .collect();
        res.mul_vec(&l).expect("conformant")
    }

    /// The transpose construction: `L = H^T`, `K = F^T`, so that the first
    /// state carries the system's behaviour. The initial state must be
    /// `(1, 0, ..., 0)`; see
    /// [`PointedLinearSystem::rebase_to_first_basis_vector`] for other
    /// states.
    pub fn from_linear_system(sys: &PointedLinearSystem) -> Result<Self> {
        if sys.system().outputs() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "an automaton has one output, the system has {}",
                sys.system().outputs()
            )));
        }
        let v0 = sys.initial();
        let first_basis =
            !v0.is_empty() && v0[0].is_one() && v0[1..].iter().all(FieldElement::is_zero);
        if !first_basis {
            return Err(Error::UnsupportedInitialVector);
        }
        Self::new(
            sys.system().output().row(0).to_vec(),
            sys.system().dynamics().transpose(),
        )
    }

    /// The linear system `(K^T, L^T)` pointed at the basis vector of `q`.
    pub fn to_linear_system(&self, q: usize) -> Result<PointedLinearSystem> {
        self.check_state(q)?;
        let field = self.field();
        let mut v0 = vec![field.zero(); self.states()];
        v0[q] = field.one();
        let sys = LinearSystem::new(
            self.weights.transpose(),
            Matrix::row_vector(field, self.outputs.clone()),
        )?;
        PointedLinearSystem::new(sys, v0)
    }

    /// An automaton whose first state has the stream `s`. The zero stream
    /// gets a single state with no output and no transitions.
    pub fn synthesize(s: &RationalStream) -> Self {
        let realized = realize(core::slice::from_ref(s)).expect("one stream");
        if realized.dim() == 0 {
            let field = s.field();
            return WeightedAutomaton {
                outputs: vec![field.zero()],
                weights: Matrix::zeros(field, 1, 1),
            };
        }
        Self::from_linear_system(&realized).expect("realization starts at the first basis vector")
    }
}
