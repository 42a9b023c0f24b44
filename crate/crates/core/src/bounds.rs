//! Lower-bound certificates from block ranks across each cut.
//!
//! Split the wire state after row and column `k` into blocks
//! `W X / Y Z`. Every circuit starts at `I`, where the ranks are
//! `(k, 0, 0, n−k)`. Only gates between wires `k` and `k+1` change these
//! ranks: an upward gate moves `rank W` and `rank Y` by at most one, a
//! downward gate moves `rank X` and `rank Z` by at most one. The final ranks
//! of the target therefore force a minimum number of gates across the cut.
//! These bounds depend only on the target matrix.

use std::fmt;

use crate::constructions::inversion_count;
use crate::error::{Error, Result};
use crate::f2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    RankCut,
    ReversalClosedForm,
    InversionCount,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::RankCut => "rank-cut",
            BoundMethod::ReversalClosedForm => "reversal-closed-form",
            BoundMethod::InversionCount => "inversion-count",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// `(k, minimum gates between wires k and k+1)`.
    pub per_cut: Vec<(usize, usize)>,
    pub depth_lb: usize,
    /// Gates for the rank and reversal methods; adjacent swaps for
    /// [`BoundMethod::InversionCount`].
    pub size_lb: usize,
    pub method: BoundMethod,
}

impl BoundReport {
    /// `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut out = format!(
            "method={}\ndepth_lb={}\nsize_lb={}\n",
            self.method, self.depth_lb, self.size_lb
        );
        for (k, b) in &self.per_cut {
            out.push_str(&format!("cut.{k}={b}\n"));
        }
        out
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method    {}", self.method)?;
        writeln!(f, "depth_lb  {}", self.depth_lb)?;
        writeln!(f, "size_lb   {}", self.size_lb)?;
        if !self.per_cut.is_empty() {
            let width = self.per_cut.last().map_or(1, |(k, _)| k.to_string().len());
            writeln!(f, "cut  gates")?;
            for (k, b) in &self.per_cut {
                writeln!(f, "{k:>width$}  {b:>5}", width = width.max(3))?;
            }
        }
        Ok(())
    }
}

/// Minimum number of gates between wires `k` and `k + 1` in any circuit
/// computing `m`: `max(k − rank W, rank Y)` upward plus
/// `max(rank X, (n−k) − rank Z)` downward.
pub fn cut_lower_bound(m: &BitMatrix, k: usize) -> Result<usize> {
    let [w, x, y, z] = m.blocks(k)?.ranks();
    let n = m.dim();
    let up = (k - w).max(y);
    let down = x.max(n - k - z);
    Ok(up + down)
}

/// Gates between wires `k` and `k+1` in any reversal: `2k + 1` for
/// `1 ≤ k ≤ n/2`. The extra gate is the first one across the cut, which
/// cannot yet change the rank it is counted against.
pub fn reversal_cut_bound(n: usize, k: usize) -> Result<usize> {
    if k == 0 || 2 * k > n {
        return Err(Error::CutOutOfRange { n, k });
    }
    Ok(2 * k + 1)
}

/// `(2n + 1, ⌊n²/2⌋ + n)` for reversing `n ≥ 3` wires.
pub fn reversal_bounds(n: usize) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok((2 * n + 1, n * n / 2 + n))
}

/// The closed-form reversal bounds as a report; `per_cut` lists the
/// `2k + 1` bound on both mirrored cuts.
pub fn reversal_report(n: usize) -> Result<BoundReport> {
    let (depth_lb, size_lb) = reversal_bounds(n)?;
    let per_cut = (1..n)
        .map(|k| {
            let near = k.min(n - k);
            (k, 2 * near + 1)
        })
        .collect();
    Ok(BoundReport {
        per_cut,
        depth_lb,
        size_lb,
        method: BoundMethod::ReversalClosedForm,
    })
}

/// Per-cut bounds summed for size; for depth, the gates at cuts `w−1` and
/// `w` all occupy wire `w` and so sit in distinct slices.
pub fn matrix_lower_bounds(m: &BitMatrix) -> Result<BoundReport> {
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let n = m.dim();
    let cuts = (1..n)
        .map(|k| cut_lower_bound(m, k))
        .collect::<Result<Vec<_>>>()?;
    let at = |k: usize| if k == 0 || k == n { 0 } else { cuts[k - 1] };
    let depth_lb = (1..=n).map(|w| at(w - 1) + at(w)).max().unwrap_or(0);
    Ok(BoundReport {
        size_lb: cuts.iter().sum(),
        per_cut: (1..n).zip(cuts).collect(),
        depth_lb,
        method: BoundMethod::RankCut,
    })
}

/// Any network of adjacent swaps realizing `σ` has at least `inv(σ)`
/// swaps: each swap changes the inversion count by exactly one.
pub fn permutation_swap_lower(sigma: &[usize]) -> Result<BoundReport> {
    crate::constructions::check_permutation(sigma)?;
    Ok(BoundReport {
        per_cut: Vec::new(),
        depth_lb: 0,
        size_lb: inversion_count(sigma),
        method: BoundMethod::InversionCount,
    })
}
