//! Comparing representations and inspecting raw prefixes.
//!
//! Any of the four finite presentations can be reduced to a rational stream,
//! where equality is decidable. For a bare prefix of coefficients there is no
//! symbolic derivative, so the number of independent derivatives is bounded
//! from below by the rank of the Hankel matrix `(s(i + j))`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::WeightedAutomaton;
use crate::circuit::CanonicalCircuit;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::RationalStream;
use crate::scalar::FieldElement;
use crate::system::PointedLinearSystem;

/// One finite presentation of a stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Rational(RationalStream),
    /// Must have a single output.
    System(PointedLinearSystem),
    Circuit(CanonicalCircuit),
    /// An automaton and a state index.
    Automaton(WeightedAutomaton, usize),
}

impl Representation {
    /// The stream denoted, in closed form.
    pub fn to_rational(&self) -> Result<RationalStream> {
        match self {
            Representation::Rational(s) => Ok(s.clone()),
            Representation::System(sys) => {
                if sys.system().outputs() != 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "expected a single-output system, got {} outputs",
                        sys.system().outputs()
                    )));
                }
                Ok(sys.behaviour()?.remove(0))
            }
            Representation::Circuit(c) => Ok(c.behaviour()),
            Representation::Automaton(a, q) => {
                if *q >= a.states() {
                    return Err(Error::StateOutOfRange {
                        index: *q,
                        states: a.states(),
                    });
                }
                Ok(a.behaviour().swap_remove(*q))
            }
        }
    }
}

/// Whether two representations denote the same stream.
pub fn equivalent(a: &Representation, b: &Representation) -> Result<bool> {
    Ok(first_difference(a, b)?.is_none())
}

/// The first index at which the two streams differ, if any.
pub fn first_difference(a: &Representation, b: &Representation) -> Result<Option<usize>> {
    let (a, b) = (a.to_rational()?, b.to_rational()?);
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().clone(), b.field().clone()));
    }
    // The denominator of the difference is a unit, so its first nonzero
    // coefficient sits where the numerator's does.
    Ok(a.sub(&b).numerator().lowest_degree())
}

/// Rank of the `m x m` Hankel matrix `(s(i + j))`, which needs `2m - 1`
/// coefficients.
pub fn hankel_rank(prefix: &[FieldElement], m: usize) -> Result<usize> {
    if m == 0 {
        return Ok(0);
    }
    let needed = 2 * m - 1;
    if prefix.len() < needed {
        return Err(Error::InsufficientPrefix {
            needed,
            got: prefix.len(),
        });
    }
    let field = prefix[0].field();
    Ok(Matrix::from_fn(&field, m, m, |i, j| prefix[i + j].clone()).rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The Hankel rank does not rule out a rational stream of the claimed size.
    RationalWitnessConsistent,
    /// The Hankel rank exceeds the bound, so no rational stream of that size
    /// has this prefix.
    NotRationalBelowBound(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::RationalWitnessConsistent => f.write_str("RationalWitnessConsistent"),
            Verdict::NotRationalBelowBound(d) => write!(f, "NotRationalBelowBound({d})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub prefix_len: usize,
    pub hankel_size: usize,
    pub rank: usize,
    pub verdict: Verdict,
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prefix_len: {}", self.prefix_len)?;
        writeln!(f, "hankel_size: {}", self.hankel_size)?;
        writeln!(f, "rank: {}", self.rank)?;
        write!(f, "verdict: {}", self.verdict)
    }
}

/// Finite evidence against rationality: the Hankel matrix of size `d + 1`
/// has rank above `d`. Needs `2d + 1` coefficients.
pub fn nonrationality_probe(prefix: &[FieldElement], d: usize) -> Result<RankReport> {
    let hankel_size = d + 1;
    let rank = hankel_rank(prefix, hankel_size)?;
    let verdict = if rank > d {
        Verdict::NotRationalBelowBound(d)
    } else {
        Verdict::RationalWitnessConsistent
    };
    Ok(RankReport {
        prefix_len: prefix.len(),
        hankel_size,
        rank,
        verdict,
    })
}

/// The shortest recurrence `s(t + n) = sum_{i<n} c_i s(t + i)` with
/// `n <= max_order` holding throughout the prefix, found by solving the
/// shifted-prefix linear system for each order in turn. Needs
/// `2 * max_order` coefficients.
pub fn fit_recurrence(
    prefix: &[FieldElement],
    max_order: usize,
) -> Result<Option<Vec<FieldElement>>> {
    let needed = 2 * max_order;
    if prefix.len() < needed {
        return Err(Error::InsufficientPrefix {
            needed,
            got: prefix.len(),
        });
    }
    let Some(field) = prefix.first().map(FieldElement::field) else {
        return Ok(Some(Vec::new()));
    };
    for n in 0..=max_order {
        let equations = prefix.len() - n;
        let rhs: Vec<FieldElement> = prefix[n..].to_vec();
        if n == 0 {
            if rhs.iter().all(FieldElement::is_zero) {
                return Ok(Some(Vec::new()));
            }
            continue;
        }
        let a = Matrix::from_fn(&field, equations, n, |t, i| prefix[t + i].clone());
        if let Some(c) = a.solve(&rhs)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
