//! Exact stream calculus over a field.
//!
//! A stream is an infinite sequence `s = (s(0), s(1), ...)` of field
//! elements. The rational streams, quotients `p/q` of polynomial streams
//! with `q(0) != 0`, are exactly the streams with a finite presentation, and
//! this crate implements four of them together with constructive conversions:
//!
//! * symbolic quotients ([`RationalStream`]),
//! * finite-dimensional linear systems ([`system`]),
//! * canonical stream circuits built from registers, multipliers, adders and
//!   copiers ([`circuit`]),
//! * weighted stream automata ([`automaton`]).
//!
//! All arithmetic is exact, over the rationals or a prime field. The crate is
//! `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod automaton;
pub mod circuit;
mod error;
pub mod expr;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod stream;
pub mod system;

pub use analysis::{RankReport, Representation, Verdict};
pub use automaton::WeightedAutomaton;
pub use circuit::{CanonicalCircuit, CircuitNetlist, Gate};
pub use error::{Error, Result, SyntaxError};
pub use expr::{parse_stream, StreamExpr};
pub use matrix::{resolvent, Matrix};
pub use poly::{Polynomial, RationalStream};
pub use ratfunc::RationalFunction;
pub use scalar::{Field, FieldElement, FieldOps};
pub use stream::StreamPrefix;
pub use system::{realize, LinearSystem, PointedLinearSystem};
