//! Reversal of all wires in depth 2n + 2.

use crate::circuit::{Circuit, Gate};
use crate::error::Result;

use super::check_wires;

/// Even-indexed wires added into both neighbours.
fn even_into_neighbours(n: usize) -> impl Iterator<Item = Gate> {
    let first = (1..=n / 2).map(|i| Gate::new(2 * i - 1, 2 * i));
    let second = (1..=(n - 1) / 2).map(|i| Gate::new(2 * i + 1, 2 * i));
    first.chain(second)
}

/// Odd-indexed wires added into both neighbours.
fn odd_into_neighbours(n: usize) -> impl Iterator<Item = Gate> {
    let first = (1..=n / 2).map(|i| Gate::new(2 * i, 2 * i - 1));
    let second = (1..=(n - 1) / 2).map(|i| Gate::new(2 * i, 2 * i + 1));
    first.chain(second)
}

/// Sets wire `n + 1 − i` to `a_i`: `n + 1` alternating rounds, starting with
/// the even round. Size `n² − 1`; depth `2n + 2`, or 3 when `n = 2`.
pub fn reverse_circuit(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let mut gates = Vec::with_capacity(n * n);
    for round in 0..=n {
        if round % 2 == 0 {
            gates.extend(even_into_neighbours(n));
        } else {
            gates.extend(odd_into_neighbours(n));
        }
    }
    Circuit::schedule(n, &gates)
}
