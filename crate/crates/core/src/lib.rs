//! Verification workbench for metric small-cancellation group theory.
//!
//! The crate is split along the objects it manipulates:
//!
//! - [`words`]: reduced words in a free group, cyclic words, proper powers and
//!   Wicks-form commutator detection.
//! - [`presentations`]: symmetrized relator sets, pieces, the exact `C'(λ)`
//!   threshold and the parameter ladder.
//! - [`dehn`]: Dehn's algorithm for `C'(1/6)` presentations and a bounded
//!   commutator search.
//! - [`surface_maps`]: rotation-system maps on closed oriented surfaces, the
//!   weight test, cell classification, models and van Kampen diagrams.
//! - [`motions`]: periodic multi-car motions, bus and cab schedules, exact
//!   collision detection and the car-crash bound.
//! - [`workbench`]: exhaustive scans for commutators that are proper powers.
//!
//! All arithmetic is exact: lengths are integers and every ratio, weight,
//! time and position is a [`Rational`].

pub mod dehn;
pub mod motions;
pub mod presentations;
pub mod rational;
pub mod surface_maps;
pub mod words;
pub mod workbench;

pub use rational::Rational;
pub use words::{CyclicWord, Generator, Word};
