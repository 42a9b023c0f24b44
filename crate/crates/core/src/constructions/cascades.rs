//! Addition, swap, and gathering across the wire array.
//!
//! All three move values toward the middle wires `k = ⌈n/2⌉` and `k + 1`
//! with nested cascades, act there, and undo the cascades.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

use super::check_wires;

/// Slope `c` in the gather depth bound `depth ≤ ⌈n/2⌉ + c·m`. Contiguous
/// blocks far from the window are the worst case: their cascades barely
/// overlap, and `(depth − ⌈n/2⌉)/m` creeps up toward 4 (3.97 at `n = 63`).
pub const GATHER_DEPTH_SLOPE: usize = 4;

/// `bit[i] ⊕= bit[i+1]` for `i = lo..hi` ascending.
fn up_run(lo: usize, hi: usize) -> impl Iterator<Item = Gate> {
    (lo..hi).map(Gate::up)
}

/// `bit[i+1] ⊕= bit[i]` for `i = lo..hi` ascending.
fn down_run(lo: usize, hi: usize) -> impl Iterator<Item = Gate> {
    (lo..hi).map(Gate::down)
}

/// Moves the value on wire `from` down to wire `to > from`. Afterwards
/// wires `from..to` hold a basis of the span of the old values on
/// `from+1..=to` and nothing else sees the moved value.
fn cascade_down(from: usize, to: usize) -> Vec<Gate> {
    up_run(from, to)
        .chain(down_run(from, to))
        .chain(up_run(from, to))
        .collect()
}

/// Moves the value on wire `from` up to wire `to < from`, with the same
/// guarantee mirrored. The last run accumulates upward.
fn cascade_up(from: usize, to: usize) -> Vec<Gate> {
    let rev_up = || (to..from).rev().map(Gate::up);
    rev_up()
        .chain((to..from).rev().map(Gate::down))
        .chain(rev_up())
        .collect()
}

/// Writes `a_1 ⊕ a_n` to wire `n` and restores every other wire.
pub fn add_circuit(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let k = n.div_ceil(2);
    let sub: Vec<Gate> = up_run(1, k)
        .chain(down_run(1, k))
        .chain((k + 1..n).rev().map(Gate::up))
        .chain((k + 1..n).rev().map(Gate::down))
        .collect();
    let mut gates = sub.clone();
    gates.push(Gate::down(k));
    gates.extend(sub.iter().rev());
    Circuit::schedule(n, &gates)
}

/// Exchanges wires 1 and `n`, leaving the rest in place.
///
/// The outer two gates of the central swap on `k, k+1` commute with the
/// last gates of the cascades, so they are emitted before (and after) them.
pub fn swap_circuit(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    let k = n.div_ceil(2);
    let mut top = cascade_down(1, k);
    let mut bottom = cascade_up(n, k + 1);
    let tails: Vec<Gate> = [top.pop(), bottom.pop()].into_iter().flatten().collect();
    let sub: Vec<Gate> = top.into_iter().chain(bottom).collect();

    let mut gates = sub.clone();
    gates.push(Gate::down(k));
    gates.extend(&tails);
    gates.push(Gate::up(k));
    gates.extend(tails.iter().rev());
    gates.push(Gate::down(k));
    gates.extend(sub.iter().rev());
    Circuit::schedule(n, &gates)
}

/// Result of [`gather_circuit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gather {
    pub circuit: Circuit,
    /// First wire of the window; position `i_ℓ` ends on wire
    /// `window_start + ℓ − 1`.
    pub window_start: usize,
}

/// Moves the values on `positions` onto consecutive wires around the middle.
///
/// With `k = ⌈n/2⌉` and `j` the number of positions at or above `k`, the
/// `ℓ`-th position ends on wire `k − j + ℓ` holding exactly its initial
/// value, and no other wire depends on it. Positions above the middle are
/// gathered nearest-first into `k, k−1, …`; those below into `k+1, k+2, …`.
pub fn gather_circuit(n: usize, positions: &[usize]) -> Result<Gather> {
    check_wires(n)?;
    let m = positions.len();
    if m < 2 || m > n {
        return Err(Error::InvalidPositions(format!(
            "need between 2 and {n} positions, got {m}"
        )));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPositions(
            "positions must be strictly increasing".into(),
        ));
    }
    if positions[0] < 1 || positions[m - 1] > n {
        return Err(Error::InvalidPositions(format!(
            "positions must lie in 1..={n}"
        )));
    }
    let k = n.div_ceil(2);
    let j = positions.iter().filter(|&&p| p <= k).count();
    let window_start = k + 1 - j;

    let mut gates = Vec::new();
    for (ell, &p) in positions.iter().enumerate().take(j).rev() {
        gates.extend(cascade_down(p, window_start + ell));
    }
    for (ell, &p) in positions.iter().enumerate().skip(j) {
        gates.extend(cascade_up(p, window_start + ell));
    }
    Ok(Gather {
        circuit: Circuit::schedule(n, &gates)?,
        window_start,
    })
}
