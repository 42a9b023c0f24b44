//! Exhaustive minimum-depth search over GL_n(2) for small `n`.
//!
//! States are wire-state matrices packed row-major into one `u64` (entry
//! `(i, j)` at bit `(i−1)·n + (j−1)`, so `n ≤ 8`). The Cayley graph has one
//! generator per nonempty time slice; each slice is its own inverse, so the
//! graph is undirected and distances from `I` equal distances to `I`.
//!
//! Frontier expansion is level-synchronous and may run on several threads;
//! the visited set is claimed with atomic `fetch_or`, so level sizes and
//! distances do not depend on scheduling.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, TimeSlice};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;

/// Largest `n` with a one-word state encoding.
pub const MAX_SEARCH_WIRES: usize = 8;

/// Largest `n` whose diameter runs without `allow_huge`.
pub const MAX_ROUTINE_DIAMETER_WIRES: usize = 5;

/// Largest `n` accepted by [`max_depth`].
pub const MAX_DIAMETER_WIRES: usize = 6;

const PARALLEL_THRESHOLD: usize = 1 << 12;

fn check_search_wires(n: usize) -> Result<()> {
    if (2..=MAX_SEARCH_WIRES).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Every nonempty set of pairwise wire-disjoint adjacent gates, each gate in
/// either direction.
pub fn slice_generators(n: usize) -> Result<Vec<TimeSlice>> {
    check_search_wires(n)?;
    fn extend(slot: usize, n: usize, acc: &mut Vec<Gate>, out: &mut Vec<TimeSlice>) {
        if slot >= n {
            if !acc.is_empty() {
                out.push(TimeSlice::new(acc.clone()));
            }
            return;
        }
        extend(slot + 1, n, acc, out);
        for g in [Gate::up(slot), Gate::down(slot)] {
            acc.push(g);
            extend(slot + 2, n, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    extend(1, n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Slices that cannot take another gate.
pub fn maximal_slice_generators(n: usize) -> Result<Vec<TimeSlice>> {
    Ok(slice_generators(n)?
        .into_iter()
        .filter(|s| {
            let mut used = vec![false; n + 2];
            for g in s.gates() {
                used[g.target] = true;
                used[g.source] = true;
            }
            !(1..n).any(|i| !used[i] && !used[i + 1])
        })
        .collect())
}

/// A slice as two column masks on the packed encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SliceMask {
    /// Source columns of downward gates (`bit[i+1] ⊕= bit[i]`).
    down_src: u64,
    /// Source columns of upward gates (`bit[i] ⊕= bit[i+1]`).
    up_src: u64,
}

impl SliceMask {
    fn new(n: usize, slice: &TimeSlice) -> Self {
        let column = |c: usize| (0..n).fold(0u64, |m, r| m | 1 << (r * n + c - 1));
        let mut mask = SliceMask { down_src: 0, up_src: 0 };
        for g in slice.gates() {
            if g.is_up() {
                mask.up_src |= column(g.source);
            } else {
                mask.down_src |= column(g.source);
            }
        }
        mask
    }

    /// Gates in a slice touch disjoint wires, so all column updates can be
    /// read from the old state at once.
    #[inline(always)]
    fn apply(&self, x: u64) -> u64 {
        x ^ ((x & self.down_src) << 1) ^ ((x & self.up_src) >> 1)
    }
}

/// Generators with both their slice and mask form.
struct Generators {
    slices: Vec<TimeSlice>,
    masks: Vec<SliceMask>,
}

impl Generators {
    fn new(n: usize, slices: Vec<TimeSlice>) -> Self {
        let masks = slices.iter().map(|s| SliceMask::new(n, s)).collect();
        Self { slices, masks }
    }
}

fn identity_word(n: usize) -> u64 {
    BitMatrix::identity(n).pack_row_major()
}

/// |GL_n(2)| = Π_{i<n} (2ⁿ − 2ⁱ).
pub fn group_order(n: usize) -> u128 {
    (0..n).map(|i| (1u128 << n) - (1u128 << i)).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    DistanceToTarget,
    Diameter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub mode: SearchMode,
    /// Minimum depth to the target, or the eccentricity of `I`.
    pub depth: usize,
    /// A circuit of exactly `depth` slices computing the target.
    pub witness: Option<Circuit>,
    pub visited_count: u64,
    /// Diameter mode: states per distance from `I`.
    pub level_sizes: Vec<u64>,
    /// Diameter mode: one state at maximum distance.
    pub extremal: Option<BitMatrix>,
}

/// Minimum depth of any circuit computing `target`, by bidirectional BFS
/// from `I` and from `target`. Fails with [`Error::DepthLimitExceeded`]
/// when the depth is larger than `depth_limit`.
pub fn distance(target: &BitMatrix, depth_limit: usize, witness: bool) -> Result<SearchResult> {
    let n = target.dim();
    check_search_wires(n)?;
    if !target.is_invertible() {
        return Err(Error::Singular);
    }
    let gens = Generators::new(n, slice_generators(n)?);
    distance_with(n, target, depth_limit, witness, &gens)
}

fn distance_with(
    n: usize,
    target: &BitMatrix,
    depth_limit: usize,
    witness: bool,
    gens: &Generators,
) -> Result<SearchResult> {
    let start = identity_word(n);
    let goal = target.pack_row_major();
    let mut result = SearchResult {
        n,
        mode: SearchMode::DistanceToTarget,
        depth: 0,
        witness: None,
        visited_count: 1,
        level_sizes: Vec::new(),
        extremal: None,
    };
    if start == goal {
        result.witness = witness.then(|| Circuit::empty(n));
        return Ok(result);
    }

    // sides[0] grows from I, sides[1] from the target.
    let mut dist: [HashMap<u64, u32>; 2] = [HashMap::from([(start, 0)]), HashMap::from([(goal, 0)])];
    let mut frontier: [Vec<u64>; 2] = [vec![start], vec![goal]];
    let mut radius = [0u32; 2];

    loop {
        let explored = (radius[0] + radius[1]) as usize;
        if explored >= depth_limit {
            return Err(Error::DepthLimitExceeded { limit: depth_limit });
        }
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let other = 1 - side;
        if frontier[side].is_empty() {
            return Err(Error::Singular);
        }
        let level = radius[side] + 1;
        let mut next = Vec::new();
        let mut meet = None;
        for &x in &frontier[side] {
            for mask in &gens.masks {
                let y = mask.apply(x);
                if dist[side].contains_key(&y) {
                    continue;
                }
                if meet.is_none() && dist[other].contains_key(&y) {
                    meet = Some(y);
                }
                dist[side].insert(y, level);
                next.push(y);
            }
            if meet.is_some() {
                break;
            }
        }
        radius[side] = level;
        frontier[side] = next;

        // No state was within a of I and b of the target before this level,
        // so the distance is at least a + b + 1, and any meeting state
        // found now achieves exactly that.
        if let Some(y) = meet {
            let total = (level + dist[other][&y]) as usize;
            result.depth = total;
            result.visited_count = (dist[0].len() + dist[1].len()) as u64;
            if total > depth_limit {
                return Err(Error::DepthLimitExceeded { limit: depth_limit });
            }
            if witness {
                result.witness = Some(reconstruct(n, y, &dist, gens)?);
            }
            return Ok(result);
        }
    }
}

/// Walks the distance maps from the meeting state back to both ends.
fn reconstruct(n: usize, meet: u64, dist: &[HashMap<u64, u32>; 2], gens: &Generators) -> Result<Circuit> {
    let step = |map: &HashMap<u64, u32>, cur: u64| -> (usize, u64) {
        let d = map[&cur];
        gens.masks
            .iter()
            .enumerate()
            .find_map(|(g, mask)| {
                let prev = mask.apply(cur);
                (map.get(&prev) == Some(&(d - 1))).then_some((g, prev))
            })
            .expect("a neighbour one level closer exists")
    };
    let mut slices = Vec::new();
    let mut cur = meet;
    while dist[0][&cur] > 0 {
        let (g, prev) = step(&dist[0], cur);
        slices.push(gens.slices[g].clone());
        cur = prev;
    }
    slices.reverse();
    let mut cur = meet;
    while dist[1][&cur] > 0 {
        let (g, next) = step(&dist[1], cur);
        slices.push(gens.slices[g].clone());
        cur = next;
    }
    Ok(Circuit::from_slices(n, slices))
}

/// A bit per packed state.
struct AtomicBitmap {
    words: Vec<AtomicU64>,
}

impl AtomicBitmap {
    fn new(bits: u64) -> Self {
        let words = bits.div_ceil(64) as usize;
        Self {
            words: (0..words).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    /// Sets the bit; true if this call changed it.
    #[inline]
    fn claim(&self, x: u64) -> bool {
        let bit = 1u64 << (x & 63);
        self.words[(x >> 6) as usize].fetch_or(bit, Ordering::Relaxed) & bit == 0
    }
}

fn state_bits(n: usize) -> u64 {
    1u64 << (n * n)
}

fn bitmap_bytes(n: usize) -> u64 {
    state_bits(n) / 8
}

/// Eccentricity of `I` in the Cayley graph: the maximum over GL_n(2) of the
/// minimum circuit depth. `n = 6` needs `allow_huge`; it keeps three
/// 2³⁶-bit maps (about 26 GB).
pub fn max_depth(n: usize, allow_huge: bool) -> Result<SearchResult> {
    if !(2..=MAX_DIAMETER_WIRES).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if n > MAX_ROUTINE_DIAMETER_WIRES && !allow_huge {
        return Err(Error::ResourceRefused {
            n,
            reason: format!(
                "a full diameter search needs about {:.1} GB of state bitmaps",
                3.0 * bitmap_bytes(n) as f64 / 1e9
            ),
        });
    }
    let gens = Generators::new(n, slice_generators(n)?);
    if n > MAX_ROUTINE_DIAMETER_WIRES {
        Ok(diameter_bitmap_frontier(n, &gens))
    } else {
        Ok(diameter_vec_frontier(n, &gens))
    }
}

/// Diameter search using only maximal slices as generators.
pub fn max_depth_maximal_slices(n: usize) -> Result<SearchResult> {
    if !(2..=MAX_ROUTINE_DIAMETER_WIRES).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let gens = Generators::new(n, maximal_slice_generators(n)?);
    Ok(diameter_vec_frontier(n, &gens))
}

fn diameter_result(n: usize, level_sizes: Vec<u64>, last_level: &[u64]) -> SearchResult {
    SearchResult {
        n,
        mode: SearchMode::Diameter,
        depth: level_sizes.len() - 1,
        witness: None,
        visited_count: level_sizes.iter().sum(),
        level_sizes,
        extremal: last_level
            .iter()
            .min()
            .map(|&x| BitMatrix::unpack_row_major(n, x)),
    }
}

fn expand_chunk(chunk: &[u64], gens: &Generators, visited: &AtomicBitmap) -> Vec<u64> {
    let mut out = Vec::new();
    for &x in chunk {
        for mask in &gens.masks {
            let y = mask.apply(x);
            if visited.claim(y) {
                out.push(y);
            }
        }
    }
    out
}

fn diameter_vec_frontier(n: usize, gens: &Generators) -> SearchResult {
    let visited = AtomicBitmap::new(state_bits(n));
    let start = identity_word(n);
    visited.claim(start);
    let mut frontier = vec![start];
    let mut level_sizes = vec![1u64];
    loop {
        let next: Vec<u64> = if frontier.len() < PARALLEL_THRESHOLD {
            expand_chunk(&frontier, gens, &visited)
        } else {
            frontier
                .par_chunks(PARALLEL_THRESHOLD)
                .map(|chunk| expand_chunk(chunk, gens, &visited))
                .flatten()
                .collect()
        };
        if next.is_empty() {
            return diameter_result(n, level_sizes, &frontier);
        }
        level_sizes.push(next.len() as u64);
        frontier = next;
    }
}

/// Frontier kept as a bitmap too, so memory stays at three state maps
/// regardless of level width.
fn diameter_bitmap_frontier(n: usize, gens: &Generators) -> SearchResult {
    let visited = AtomicBitmap::new(state_bits(n));
    let mut current = AtomicBitmap::new(state_bits(n));
    let mut next = AtomicBitmap::new(state_bits(n));
    let start = identity_word(n);
    visited.claim(start);
    current.claim(start);
    let mut level_sizes = vec![1u64];
    loop {
        let found: u64 = current
            .words
            .par_iter()
            .enumerate()
            .map(|(w, word)| {
                let mut bits = word.load(Ordering::Relaxed);
                let mut count = 0;
                while bits != 0 {
                    let x = ((w as u64) << 6) | bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    for mask in &gens.masks {
                        let y = mask.apply(x);
                        if visited.claim(y) {
                            next.claim(y);
                            count += 1;
                        }
                    }
                }
                count
            })
            .sum();
        if found == 0 {
            let last: Vec<u64> = current
                .words
                .iter()
                .enumerate()
                .find(|(_, w)| w.load(Ordering::Relaxed) != 0)
                .map(|(w, word)| {
                    let bits = word.load(Ordering::Relaxed);
                    vec![((w as u64) << 6) | bits.trailing_zeros() as u64]
                })
                .unwrap_or_default();
            return diameter_result(n, level_sizes, &last);
        }
        level_sizes.push(found);
        std::mem::swap(&mut current, &mut next);
        next.words.par_iter().for_each(|w| w.store(0, Ordering::Relaxed));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{add_circuit, reverse_circuit, rotate_circuit, swap_circuit};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn g(t: usize) -> usize {
        match t {
            0 => 1,
            1 => 3,
            _ => g(t - 1) + 2 * g(t - 2),
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(slice_generators(2).unwrap().len(), 2);
        let three = slice_generators(3).unwrap();
        assert_eq!(three.len(), 4);
        assert!(three.iter().all(|s| s.len() == 1));
        assert_eq!(slice_generators(6).unwrap().len(), 42);
        for n in 2..=8 {
            let gens = slice_generators(n).unwrap();
            assert_eq!(gens.len(), g(n - 1) - 1);
            for s in &gens {
                let c = Circuit::from_slices(n, vec![s.clone()]);
                assert!(c.validate().is_ok());
            }
        }
        assert!(slice_generators(9).is_err());
        assert!(slice_generators(1).is_err());
    }

    #[test]
    fn masks_match_simulation() {
        let mut rng = StdRng::seed_from_u64(41);
        for n in 2..=8 {
            for s in slice_generators(n).unwrap() {
                let mask = SliceMask::new(n, &s);
                let m = BitMatrix::random(n, &mut rng);
                let expect = Circuit::from_slices(n, vec![s.clone()]).apply(&m).unwrap();
                assert_eq!(mask.apply(m.pack_row_major()), expect.pack_row_major());
                // Each slice is an involution.
                assert_eq!(mask.apply(mask.apply(m.pack_row_major())), m.pack_row_major());
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(2), 6);
        assert_eq!(group_order(3), 168);
        assert_eq!(group_order(4), 20160);
        assert_eq!(group_order(5), 9_999_360);
    }

    #[test]
    fn distance_examples() {
        let r = distance(&BitMatrix::identity(4), 10, true).unwrap();
        assert_eq!(r.depth, 0);
        assert_eq!(r.witness.unwrap().depth(), 0);
        assert_eq!(distance(&BitMatrix::anti_identity(2), 10, false).unwrap().depth, 3);
        assert_eq!(distance(&BitMatrix::anti_identity(4), 20, false).unwrap().depth, 10);
        assert!(matches!(
            distance(&BitMatrix::anti_identity(4), 9, false),
            Err(Error::DepthLimitExceeded { limit: 9 })
        ));
        assert_eq!(distance(&BitMatrix::zero(3), 5, false), Err(Error::Singular));
    }

    #[test]
    fn witnesses_are_optimal_circuits() {
        let mut rng = StdRng::seed_from_u64(42);
        for n in 2..=5 {
            for _ in 0..10 {
                let m = BitMatrix::random_invertible(n, &mut rng);
                let r = distance(&m, 4 * n, true).unwrap();
                let w = r.witness.unwrap();
                assert!(w.validate().is_ok());
                assert_eq!(w.depth(), r.depth);
                assert_eq!(w.matrix(), m);
            }
        }
    }

    #[test]
    fn distance_never_exceeds_construction_depth() {
        for n in 2..=5 {
            for c in [
                add_circuit(n).unwrap(),
                swap_circuit(n).unwrap(),
                rotate_circuit(n).unwrap(),
                reverse_circuit(n).unwrap(),
            ] {
                let r = distance(&c.matrix(), c.depth(), false).unwrap();
                assert!(r.depth <= c.depth());
            }
        }
    }

    #[test]
    fn reversal_construction_is_optimal_small() {
        for n in 2..=4 {
            let r = distance(&BitMatrix::anti_identity(n), 30, false).unwrap();
            assert_eq!(r.depth, reverse_circuit(n).unwrap().depth());
        }
    }

    #[test]
    fn small_diameters() {
        for (n, expect) in [(2, 3), (3, 8), (4, 10)] {
            let r = max_depth(n, false).unwrap();
            assert_eq!(r.depth, expect);
            assert_eq!(r.visited_count as u128, group_order(n));
            let far = r.extremal.unwrap();
            assert_eq!(distance(&far, 20, false).unwrap().depth, expect);
        }
        assert!(matches!(max_depth(6, false), Err(Error::ResourceRefused { n: 6, .. })));
        assert!(max_depth(7, true).is_err());
    }

    #[test]
    fn bitmap_frontier_agrees() {
        for n in 2..=4 {
            let gens = Generators::new(n, slice_generators(n).unwrap());
            let a = diameter_vec_frontier(n, &gens);
            let b = diameter_bitmap_frontier(n, &gens);
            assert_eq!(a.level_sizes, b.level_sizes);
        }
    }

    #[test]
    fn maximal_slices() {
        assert_eq!(maximal_slice_generators(3).unwrap().len(), 4);
        // n = 4: {u1|d1} × {u3|d3}, plus u2 and d2 alone.
        assert_eq!(maximal_slice_generators(4).unwrap().len(), 6);
    }

    /// Padding a slice to a maximal one changes the matrix it applies, so
    /// the two generator sets give different distances from n = 4 on.
    #[test]
    fn maximal_slices_are_not_equivalent() {
        for (n, expect) in [(2, 3), (3, 8), (4, 11)] {
            assert_eq!(max_depth_maximal_slices(n).unwrap().depth, expect);
        }
        let full = max_depth(4, false).unwrap();
        let maximal = max_depth_maximal_slices(4).unwrap();
        assert_eq!(full.visited_count, maximal.visited_count);
        assert_ne!(full.level_sizes, maximal.level_sizes);
        // A single gate away from the middle is one slice only in the full set.
        let m = Circuit::from_slices(4, vec![TimeSlice::new(vec![Gate::up(1)])]).matrix();
        assert_eq!(distance(&m, 5, false).unwrap().depth, 1);
        let gens = Generators::new(4, maximal_slice_generators(4).unwrap());
        assert!(distance_with(4, &m, 20, false, &gens).unwrap().depth > 1);
    }

    #[test]
    fn diameter_five() {
        let r = max_depth(5, false).unwrap();
        assert_eq!(r.depth, 13);
        assert_eq!(r.visited_count as u128, group_order(5));
        assert_eq!(r.level_sizes.last(), Some(&40));
    }
}
