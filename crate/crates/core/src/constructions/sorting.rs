//! Adjacent-comparator sorting networks and permutation circuits.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

use super::{check_permutation, check_wires, swap_gates};

/// Layers of comparators; comparator `i` acts on wires `i` and `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparatorNetwork {
    n: usize,
    layers: Vec<Vec<usize>>,
}

impl ComparatorNetwork {
    /// Rejects out-of-range comparators and layers whose comparators share a
    /// wire. Empty layers are dropped.
    pub fn new(n: usize, layers: Vec<Vec<usize>>) -> Result<Self> {
        check_wires(n)?;
        let mut kept = Vec::with_capacity(layers.len());
        for mut layer in layers {
            layer.sort_unstable();
            for &i in &layer {
                if !(1..n).contains(&i) {
                    return Err(Error::InvalidPositions(format!(
                        "comparator {i} out of range for {n} wires"
                    )));
                }
            }
            if layer.windows(2).any(|w| w[1] < w[0] + 2) {
                return Err(Error::InvalidPositions(
                    "comparators in one layer share a wire".into(),
                ));
            }
            if !layer.is_empty() {
                kept.push(layer);
            }
        }
        Ok(Self { n, layers: kept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Runs the network as conditional swaps on `labels` (0-indexed slice of
    /// wire labels), calling `fired(layer, i)` for each comparator that
    /// swaps.
    pub fn run<T: Ord>(&self, labels: &mut [T], mut fired: impl FnMut(usize, usize)) {
        assert_eq!(labels.len(), self.n);
        for (l, layer) in self.layers.iter().enumerate() {
            for &i in layer {
                if labels[i - 1] > labels[i] {
                    labels.swap(i - 1, i);
                    fired(l, i);
                }
            }
        }
    }

    /// The comparators that fire on `labels`, as a network of their own.
    pub fn restricted_to<T: Ord + Clone>(&self, labels: &[T]) -> ComparatorNetwork {
        let mut kept = vec![Vec::new(); self.layers.len()];
        let mut labels = labels.to_vec();
        self.run(&mut labels, |l, i| kept[l].push(i));
        ComparatorNetwork::new(self.n, kept).expect("subset of a valid network")
    }

    /// The comparators used when wire `i` starts with label `n + 1 − i`.
    pub fn reversal_network(&self) -> ComparatorNetwork {
        let labels: Vec<usize> = (1..=self.n).rev().collect();
        self.restricted_to(&labels)
    }

    /// Exhaustive check over all `n!` labelings.
    pub fn sorts_all_permutations(&self) -> bool {
        let mut perm: Vec<usize> = (0..self.n).collect();
        loop {
            let mut labels = perm.clone();
            self.run(&mut labels, |_, _| {});
            if labels.windows(2).any(|w| w[0] > w[1]) {
                return false;
            }
            if !next_permutation(&mut perm) {
                return true;
            }
        }
    }
}

/// Lexicographic successor; false once the last permutation is reached.
pub(crate) fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Odd–even transposition sort: `n` layers alternating comparators
/// `(2j−1, 2j)` and `(2j, 2j+1)`.
pub fn odd_even_network(n: usize) -> Result<ComparatorNetwork> {
    check_wires(n)?;
    let layers = (0..n)
        .map(|t| (1 + t % 2..n).step_by(2).collect())
        .collect();
    ComparatorNetwork::new(n, layers)
}

/// Number of pairs `i < j` with `σ(i) > σ(j)`.
pub fn inversion_count(sigma: &[usize]) -> usize {
    (0..sigma.len())
        .map(|i| (i + 1..sigma.len()).filter(|&j| sigma[i] > sigma[j]).count())
        .sum()
}

/// Sets wire `σ(i)` to `a_i`. Wire `i` carries label `σ(i)`; every
/// comparator of the odd–even network that fires becomes a three-gate swap.
/// Size is `3·inv(σ)`, depth at most `3n`.
pub fn permutation_circuit(sigma: &[usize]) -> Result<Circuit> {
    let n = sigma.len();
    check_wires(n)?;
    check_permutation(sigma)?;
    let net = odd_even_network(n)?;
    let mut labels = sigma.to_vec();
    let mut gates: Vec<Gate> = Vec::new();
    net.run(&mut labels, |_, i| gates.extend(swap_gates(i)));
    Circuit::schedule(n, &gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitMatrix;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn odd_even_examples() {
        let net = odd_even_network(7).unwrap();
        assert_eq!((net.depth(), net.size()), (7, 21));
        let net = odd_even_network(2).unwrap();
        assert_eq!((net.depth(), net.size()), (1, 1));
        assert!(odd_even_network(6).unwrap().sorts_all_permutations());
    }

    #[test]
    fn odd_even_sorts_exhaustively() {
        for n in 2..=8 {
            let net = odd_even_network(n).unwrap();
            assert!(net.sorts_all_permutations(), "n = {n}");
            assert_eq!(net.size(), n * (n - 1) / 2);
            assert_eq!(net.depth(), if n == 2 { 1 } else { n });
        }
    }

    #[test]
    fn truncated_network_fails_to_sort() {
        let net = odd_even_network(5).unwrap();
        let short = ComparatorNetwork::new(5, net.layers()[..4].to_vec()).unwrap();
        assert!(!short.sorts_all_permutations());
    }

    #[test]
    fn network_validation() {
        assert!(ComparatorNetwork::new(4, vec![vec![1, 2]]).is_err());
        assert!(ComparatorNetwork::new(4, vec![vec![4]]).is_err());
        assert!(ComparatorNetwork::new(4, vec![vec![0]]).is_err());
        assert_eq!(ComparatorNetwork::new(4, vec![vec![], vec![3, 1]]).unwrap().depth(), 1);
    }

    #[test]
    fn minimal_network_is_its_own_reversal_network() {
        for n in 2..=12 {
            let net = odd_even_network(n).unwrap();
            assert_eq!(net.reversal_network(), net);
        }
    }

    #[test]
    fn permutation_examples() {
        assert_eq!(permutation_circuit(&[1, 2, 3]).unwrap().size(), 0);
        let c = permutation_circuit(&[5, 4, 3, 2, 1]).unwrap();
        assert_eq!(c.matrix(), BitMatrix::anti_identity(5));
        assert_eq!(c.size(), 30);
        assert!(permutation_circuit(&[1, 1, 3]).is_err());
        assert!(permutation_circuit(&[1, 2, 4]).is_err());
    }

    #[test]
    fn random_permutations() {
        let mut rng = StdRng::seed_from_u64(9);
        for n in 2..=20 {
            for _ in 0..30 {
                let mut sigma: Vec<usize> = (1..=n).collect();
                sigma.shuffle(&mut rng);
                let c = permutation_circuit(&sigma).unwrap();
                assert!(c.validate().is_ok());
                assert_eq!(c.matrix(), BitMatrix::permutation(&sigma).unwrap());
                assert_eq!(c.size(), 3 * inversion_count(&sigma));
                assert!(c.depth() <= 3 * n);
            }
        }
    }

    #[test]
    fn inversions() {
        assert_eq!(inversion_count(&[1, 2, 3]), 0);
        assert_eq!(inversion_count(&[5, 4, 3, 2, 1]), 10);
        assert_eq!(inversion_count(&[2, 1, 4, 3]), 2);
    }
}
