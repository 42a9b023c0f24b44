//! Depth-efficient CNOT circuits on a line of wires.
//!
//! Wires are numbered `1..=n` and gates only act on neighbours. A circuit
//! computes an invertible matrix over F₂; see [`circuit::Circuit::matrix`]
//! for the orientation.

pub mod bounds;
pub mod circuit;
pub mod constructions;
pub mod error;
pub mod f2;
pub mod glsynth;
pub mod render;
pub mod search;

pub use circuit::{Circuit, Gate, TimeSlice};
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
