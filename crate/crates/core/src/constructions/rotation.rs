//! Cyclic rotation of wires.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

use super::{check_wires, swap_circuit};

fn check_range(n: usize, lo: usize, hi: usize) -> Result<()> {
    if lo >= 1 && lo < hi && hi <= n {
        Ok(())
    } else {
        Err(Error::InvalidRange { n, lo, hi })
    }
}

/// The rotation block on wires `lo..=hi`: wire `hi` receives `a_lo`, wire
/// `i` receives `a_{i+1}` for `lo ≤ i < hi`. Three nested cascades and a
/// closing downward run; `4(hi − lo) − 1` gates.
pub fn rotation_block(lo: usize, hi: usize) -> Vec<Gate> {
    let span = lo..hi;
    span.clone()
        .map(Gate::down)
        .chain(span.clone().map(Gate::up))
        .chain(span.map(Gate::down))
        .chain((lo..hi - 1).rev().map(Gate::down))
        .collect()
}

/// [`rotation_block`] turned upside down within `lo..=hi` and run backward.
/// Both changes reverse the direction of rotation, so it computes the same
/// permutation.
pub fn rotation_block_flipped(lo: usize, hi: usize) -> Vec<Gate> {
    rotation_block(lo, hi)
        .into_iter()
        .rev()
        .map(|g| Gate::new(lo + hi - g.target, lo + hi - g.source))
        .collect()
}

/// Checked form of [`rotation_block`] as a scheduled circuit on `n` wires.
pub fn rotation_block_circuit(n: usize, lo: usize, hi: usize, flipped: bool) -> Result<Circuit> {
    check_range(n, lo, hi)?;
    let gates = if flipped {
        rotation_block_flipped(lo, hi)
    } else {
        rotation_block(lo, hi)
    };
    Circuit::schedule(n, &gates)
}

/// Rotates all `n` wires: wire `n` receives `a_1`, wire `i` receives
/// `a_{i+1}`.
///
/// Runs the block on `1..=k` and the flipped block on `k..=n` with
/// `k = ⌈n/2⌉`. The first block's last write to wire `k` commutes with the
/// second block's first write to it, so the second block's write goes first.
pub fn rotate_circuit(n: usize) -> Result<Circuit> {
    check_wires(n)?;
    if n == 2 {
        return swap_circuit(2);
    }
    let k = n.div_ceil(2);
    let first = rotation_block(1, k);
    let second = rotation_block_flipped(k, n);

    // Last gate of the first block touching k, and the first of the second.
    let last_k = first
        .iter()
        .rposition(|g| g.touches(k))
        .expect("block touches its last wire");
    let first_k = second
        .iter()
        .position(|g| g.touches(k))
        .expect("block touches its first wire");
    debug_assert_eq!(first[last_k].target, k);
    debug_assert_eq!(second[first_k].target, k);

    let mut gates = Vec::with_capacity(first.len() + second.len());
    gates.extend(&first[..last_k]);
    gates.extend(&second[..=first_k]);
    gates.extend(&first[last_k..]);
    gates.extend(&second[first_k + 1..]);
    Circuit::schedule(n, &gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitMatrix;

    /// Rotation of `lo..=hi` as a wire state.
    fn rotation_target(n: usize, lo: usize, hi: usize) -> BitMatrix {
        let mut sigma: Vec<usize> = (1..=n).collect();
        // a_i moves to wire i − 1, a_lo to wire hi.
        for i in lo..=hi {
            sigma[i - 1] = if i == lo { hi } else { i - 1 };
        }
        BitMatrix::permutation(&sigma).unwrap()
    }

    #[test]
    fn block_examples() {
        for n in 3..=20 {
            let c = rotation_block_circuit(n, 1, n, false).unwrap();
            assert_eq!(c.matrix(), rotation_target(n, 1, n));
            assert_eq!(c.size(), 4 * n - 5);
            assert_eq!(c.depth(), 2 * n + 1);
        }
        let c = rotation_block_circuit(5, 2, 3, false).unwrap();
        assert_eq!(c.size(), 3);
        assert_eq!(c.depth(), 3);
        assert_eq!(c.matrix(), rotation_target(5, 2, 3));

        let r = rotation_block_circuit(9, 5, 9, false).unwrap();
        let r_flipped = rotation_block_circuit(9, 5, 9, true).unwrap();
        assert_eq!(r.matrix(), r_flipped.matrix());
    }

    #[test]
    fn block_formulas_on_subranges() {
        for n in 2..=14 {
            for lo in 1..n {
                for hi in lo + 1..=n {
                    let span = hi - lo;
                    for flipped in [false, true] {
                        let c = rotation_block_circuit(n, lo, hi, flipped).unwrap();
                        assert_eq!(c.matrix(), rotation_target(n, lo, hi));
                        assert_eq!(c.size(), 4 * span - 1);
                        let depth = if span == 1 { 3 } else { 2 * span + 3 };
                        assert_eq!(c.depth(), depth, "{lo}..={hi}");
                    }
                }
            }
        }
        assert!(rotation_block_circuit(5, 3, 3, false).is_err());
        assert!(rotation_block_circuit(5, 0, 3, false).is_err());
        assert!(rotation_block_circuit(5, 2, 6, false).is_err());
    }

    #[test]
    fn rotate_examples() {
        let c = rotate_circuit(10).unwrap();
        assert_eq!(c.depth(), 15);
        assert_eq!(c.matrix(), rotation_target(10, 1, 10));

        let c = rotate_circuit(3).unwrap();
        assert_eq!(c.matrix(), rotation_target(3, 1, 3));
        assert_eq!(c.size(), 6);

        let c = rotate_circuit(2).unwrap();
        assert_eq!(c.depth(), 3);
        assert_eq!(c.matrix(), rotation_target(2, 1, 2));
    }

    #[test]
    fn rotate_formulas() {
        for n in 3..=40 {
            let c = rotate_circuit(n).unwrap();
            assert!(c.validate().is_ok());
            assert_eq!(c.matrix(), rotation_target(n, 1, n), "n = {n}");
            assert_eq!(c.size(), 4 * n - 6);
            assert!(c.depth() <= n + 5, "n = {n}: depth {}", c.depth());
        }
    }
}
