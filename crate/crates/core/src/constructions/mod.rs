//! Named circuit families.
//!
//! Each construction emits its gates in a fixed order and relies on
//! [`Circuit::schedule`] to pack them; the order is what makes the
//! scheduled depth come out exactly.

mod boxes;
mod cascades;
mod reversal;
mod rotation;
mod sorting;

pub use boxes::{box_circuit, box_depth, BoxOutput, BoxSpec};
pub use cascades::{add_circuit, gather_circuit, swap_circuit, Gather, GATHER_DEPTH_SLOPE};
pub use reversal::reverse_circuit;
pub use rotation::{rotate_circuit, rotation_block, rotation_block_circuit, rotation_block_flipped};
pub use sorting::{inversion_count, odd_even_network, permutation_circuit, ComparatorNetwork};
#[cfg(test)]
pub(crate) use sorting::next_permutation;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::f2::MAX_DIM;

pub(crate) fn check_wires(n: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Checks that `sigma` (1-based images) is a bijection on `1..=len`.
pub(crate) fn check_permutation(sigma: &[usize]) -> Result<()> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for &s in sigma {
        if !(1..=n).contains(&s) || seen[s] {
            return Err(Error::NotAPermutation(n));
        }
        seen[s] = true;
    }
    Ok(())
}

/// The three-gate exchange of wires `i` and `i + 1`.
pub(crate) fn swap_gates(i: usize) -> [Gate; 3] {
    [Gate::up(i), Gate::down(i), Gate::up(i)]
}
