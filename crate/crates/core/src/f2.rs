//! Exact linear algebra over F₂.
//!
//! Vectors and square matrices are bit-packed into `u64` words, so every
//! dimension is capped at [`MAX_DIM`] = 64. All public indices are 1-based:
//! coordinate `i` of a vector lives in bit `i - 1`.
//!
//! A [`BitMatrix`] is stored column by column. Column `j` is the current
//! value of wire `j`, written over the initial wire values `a_1..a_n`, so
//! entry `(i, j)` is set iff wire `j` depends on `a_i`. Gates act on the
//! right as column operations, which makes a gate a single word XOR.

use std::fmt;
use std::ops::{BitXor, BitXorAssign, Mul};
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported wire count.
pub const MAX_DIM: usize = 64;

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// A vector in F₂ⁿ.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    n: usize,
    bits: u64,
}

impl BitVector {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Self { n, bits: 0 }
    }

    /// The standard basis vector `e_k`.
    pub fn unit(n: usize, k: usize) -> Self {
        assert!((1..=n).contains(&k), "coordinate {k} out of range 1..={n}");
        Self::from_bits(n, 1u64 << (k - 1))
    }

    /// Bits beyond position `n` are discarded.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Self {
            n,
            bits: bits & low_mask(n),
        }
    }

    /// Builds a vector from its set coordinates.
    pub fn from_coords(n: usize, coords: &[usize]) -> Self {
        coords
            .iter()
            .fold(Self::zero(n), |v, &k| v ^ Self::unit(n, k))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, k: usize) -> bool {
        assert!((1..=self.n).contains(&k));
        self.bits >> (k - 1) & 1 == 1
    }

    pub fn set(&mut self, k: usize, value: bool) {
        assert!((1..=self.n).contains(&k));
        if value {
            self.bits |= 1 << (k - 1);
        } else {
            self.bits &= !(1 << (k - 1));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// The F₂ dot product.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.n, other.n);
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Highest set coordinate, if any.
    pub fn leading(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(64 - self.bits.leading_zeros() as usize)
        }
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&k| self.get(k))
    }
}

impl BitXor for BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: BitVector) -> BitVector {
        debug_assert_eq!(self.n, rhs.n);
        BitVector {
            n: self.n,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl BitXorAssign for BitVector {
    fn bitxor_assign(&mut self, rhs: BitVector) {
        debug_assert_eq!(self.n, rhs.n);
        self.bits ^= rhs.bits;
    }
}

/// The lexicographic order: the highest coordinate where the vectors differ
/// decides. Because coordinate `k` is bit `k - 1`, this is integer order on
/// the packed words.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits.cmp(&other.bits).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for k in 1..=self.n {
            write!(f, "{}", u8::from(self.get(k)))?;
        }
        write!(f, ")")
    }
}

/// `u ≺ v`: some coordinate `k` has `u_k = 0`, `v_k = 1`, and the vectors
/// agree on every coordinate above `k`.
pub fn lex_less(u: &BitVector, v: &BitVector) -> bool {
    assert_eq!(u.n, v.n, "lex_less needs equal dimensions");
    u.bits < v.bits
}

/// A basis of a subspace, indexed by leading coordinate.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    n: usize,
    /// `pivots[h]` has leading bit `h` (0-based), or is zero.
    pivots: Vec<u64>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            pivots: vec![0; n],
            rank: 0,
        }
    }

    pub fn from_vectors<'a>(n: usize, vectors: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut basis = Self::new(n);
        for v in vectors {
            basis.insert(v);
        }
        basis
    }

    /// Adds `v` to the span. Returns false if it was already in it.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.n, self.n);
        let x = self.reduce_bits(v.bits);
        if x == 0 {
            return false;
        }
        let h = 63 - x.leading_zeros() as usize;
        self.pivots[h] = x;
        self.rank += 1;
        true
    }

    fn reduce_bits(&self, mut x: u64) -> u64 {
        while x != 0 {
            let h = 63 - x.leading_zeros() as usize;
            let p = self.pivots[h];
            if p == 0 {
                break;
            }
            x ^= p;
        }
        x
    }

    /// Cancels every bit of `a` that some basis vector leads with, from the
    /// top down. The result is the ≺-least element of `a ⊕ span`.
    pub fn minimize(&self, a: &BitVector) -> BitVector {
        assert_eq!(a.n, self.n);
        let mut x = a.bits;
        for h in (0..self.n).rev() {
            if x >> h & 1 == 1 && self.pivots[h] != 0 {
                x ^= self.pivots[h];
            }
        }
        BitVector::from_bits(self.n, x)
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce_bits(v.bits) == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// The ≺-least element of the coset `a ⊕ span(spanning_set)`.
pub fn lex_min_coset(a: &BitVector, spanning_set: &[BitVector]) -> BitVector {
    EchelonBasis::from_vectors(a.n, spanning_set).minimize(a)
}

/// Rank over F₂ of a set of packed words.
fn rank_of_words(words: impl IntoIterator<Item = u64>) -> usize {
    let mut pivots = [0u64; 64];
    let mut rank = 0;
    for mut x in words {
        while x != 0 {
            let h = 63 - x.leading_zeros() as usize;
            if pivots[h] == 0 {
                pivots[h] = x;
                rank += 1;
                break;
            }
            x ^= pivots[h];
        }
    }
    rank
}

/// A rectangular block, stored as row words (bit `c - 1` = column `c`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitBlock {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BitBlock {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_DIM);
        Self {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        self.data[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j));
        if value {
            self.data[i - 1] |= 1 << (j - 1);
        } else {
            self.data[i - 1] &= !(1 << (j - 1));
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_words(self.data.iter().copied())
    }
}

/// The four blocks of a matrix split after row and column `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutBlocks {
    pub k: usize,
    /// Rows `1..=k`, columns `1..=k`.
    pub w: BitBlock,
    /// Rows `1..=k`, columns `k+1..=n`.
    pub x: BitBlock,
    /// Rows `k+1..=n`, columns `1..=k`.
    pub y: BitBlock,
    /// Rows `k+1..=n`, columns `k+1..=n`.
    pub z: BitBlock,
}

impl CutBlocks {
    pub fn ranks(&self) -> [usize; 4] {
        [self.w.rank(), self.x.rank(), self.y.rank(), self.z.rank()]
    }

    pub fn reassemble(&self) -> BitMatrix {
        let k = self.k;
        let n = k + self.z.rows();
        BitMatrix::from_fn(n, |i, j| match (i <= k, j <= k) {
            (true, true) => self.w.get(i, j),
            (true, false) => self.x.get(i, j - k),
            (false, true) => self.y.get(i - k, j),
            (false, false) => self.z.get(i - k, j - k),
        })
    }
}

/// An n×n matrix over F₂, 2 ≤ n ≤ 64.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    cols: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(n: usize) -> Self {
        check_dim(n).expect("unsupported dimension");
        Self {
            n,
            cols: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for (j, c) in m.cols.iter_mut().enumerate() {
            *c = 1 << j;
        }
        m
    }

    /// The anti-identity `J`: ones on the anti-diagonal. As a wire state it
    /// is the reversal of all wires.
    pub fn anti_identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for (j, c) in m.cols.iter_mut().enumerate() {
            *c = 1 << (n - 1 - j);
        }
        m
    }

    /// The permutation state with `column σ(i) = e_i`.
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        check_dim(n)?;
        crate::constructions::check_permutation(sigma)?;
        let mut m = Self::zero(n);
        for (i, &s) in sigma.iter().enumerate() {
            m.cols[s - 1] = 1 << i;
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(n);
        for j in 1..=n {
            for i in 1..=n {
                if f(i, j) {
                    m.cols[j - 1] |= 1 << (i - 1);
                }
            }
        }
        m
    }

    pub fn from_columns(columns: &[BitVector]) -> Result<Self> {
        let n = columns.len();
        check_dim(n)?;
        let mut m = Self::zero(n);
        for (j, c) in columns.iter().enumerate() {
            if c.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.n,
                });
            }
            m.cols[j] = c.bits;
        }
        Ok(m)
    }

    /// Uniformly random element of GL_n(2), by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut m = Self::zero(n);
        for c in &mut m.cols {
            *c = rng.gen::<u64>() & low_mask(n);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.cols[j - 1] >> (i - 1) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        if value {
            self.cols[j - 1] |= 1 << (i - 1);
        } else {
            self.cols[j - 1] &= !(1 << (i - 1));
        }
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits(self.n, self.cols[j - 1])
    }

    pub fn columns(&self) -> impl Iterator<Item = BitVector> + '_ {
        self.cols.iter().map(|&c| BitVector::from_bits(self.n, c))
    }

    pub fn row(&self, i: usize) -> BitVector {
        assert!((1..=self.n).contains(&i));
        let bits = self
            .cols
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | (c >> (i - 1) & 1) << j);
        BitVector::from_bits(self.n, bits)
    }

    /// `column target ⊕= column source`: the effect of one CNOT.
    #[inline]
    pub fn add_column(&mut self, target: usize, source: usize) {
        self.cols[target - 1] ^= self.cols[source - 1];
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        self.cols.swap(a - 1, b - 1);
    }

    pub fn rank(&self) -> usize {
        rank_of_words(self.cols.iter().copied())
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, &c)| c == 1 << j)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Gauss–Jordan by column operations: the operations that reduce `self`
    /// to `I`, applied to `I`, give the inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.cols.clone();
        let mut inv = Self::identity(n).cols;
        for r in 0..n {
            let pivot = (r..n).find(|&c| a[c] >> r & 1 == 1).ok_or(Error::Singular)?;
            a.swap(r, pivot);
            inv.swap(r, pivot);
            for c in 0..n {
                if c != r && a[c] >> r & 1 == 1 {
                    a[c] ^= a[r];
                    inv[c] ^= inv[r];
                }
            }
        }
        Ok(Self { n, cols: inv })
    }

    /// `M_ij = 0` whenever `i + j > n + 1`.
    pub fn is_northwest_triangular(&self) -> bool {
        // Column j may only use rows 1..=n+1-j.
        self.cols
            .iter()
            .enumerate()
            .all(|(j, &c)| c & !low_mask(self.n - j) == 0)
    }

    pub fn blocks(&self, k: usize) -> Result<CutBlocks> {
        let n = self.n;
        if k == 0 || k >= n {
            return Err(Error::CutOutOfRange { n, k });
        }
        let mut w = BitBlock::zero(k, k);
        let mut x = BitBlock::zero(k, n - k);
        let mut y = BitBlock::zero(n - k, k);
        let mut z = BitBlock::zero(n - k, n - k);
        for i in 1..=n {
            for j in 1..=n {
                let v = self.get(i, j);
                match (i <= k, j <= k) {
                    (true, true) => w.set(i, j, v),
                    (true, false) => x.set(i, j - k, v),
                    (false, true) => y.set(i - k, j, v),
                    (false, false) => z.set(i - k, j - k, v),
                }
            }
        }
        Ok(CutBlocks { k, w, x, y, z })
    }

    /// Packs an n ≤ 8 matrix row-major into one word: entry `(i, j)` at bit
    /// `(i - 1)·n + (j - 1)`.
    pub fn pack_row_major(&self) -> u64 {
        assert!(self.n <= 8, "row-major packing needs n ≤ 8");
        let mut word = 0u64;
        for i in 1..=self.n {
            for j in 1..=self.n {
                if self.get(i, j) {
                    word |= 1 << ((i - 1) * self.n + (j - 1));
                }
            }
        }
        word
    }

    pub fn unpack_row_major(n: usize, word: u64) -> Self {
        assert!(n <= 8, "row-major packing needs n ≤ 8");
        Self::from_fn(n, |i, j| word >> ((i - 1) * n + (j - 1)) & 1 == 1)
    }
}

impl Mul for &BitMatrix {
    type Output = BitMatrix;

    /// Column `j` of `AB` is the XOR of the columns of `A` selected by
    /// column `j` of `B`.
    fn mul(self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let cols = rhs
            .cols
            .iter()
            .map(|&b| {
                let mut acc = 0u64;
                let mut bits = b;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    acc ^= self.cols[i];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BitMatrix { n: self.n, cols }
    }
}

impl Mul for BitMatrix {
    type Output = BitMatrix;

    fn mul(self, rhs: BitMatrix) -> BitMatrix {
        &self * &rhs
    }
}

/// Returns `d` with `x·d` equal to the coefficient of `w_k` when `x` is
/// expanded in the basis `w_1..w_n`. In particular `x` lies in the span of
/// the other basis vectors iff `x·d = 0`.
pub fn dual_functional(basis: &[BitVector], k: usize) -> Result<BitVector> {
    let b = BitMatrix::from_columns(basis)?;
    if !(1..=b.n).contains(&k) {
        return Err(Error::InvalidPositions(format!(
            "basis index {k} out of range 1..={}",
            b.n
        )));
    }
    Ok(b.inverse()?.row(k))
}

/// All `n` dual functionals of a basis at once.
pub fn dual_basis(basis: &[BitVector]) -> Result<Vec<BitVector>> {
    let inv = BitMatrix::from_columns(basis)?.inverse()?;
    Ok((1..=basis.len()).map(|k| inv.row(k)).collect())
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}) [", self.n)?;
        for i in 1..=self.n {
            write!(f, "  ")?;
            for j in 1..=self.n {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Text format: a line holding `n`, then `n` rows of `0`/`1`.
impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 1..=self.n {
            for j in 1..=self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("expected a dimension, found {header:?}"),
        })?;
        check_dim(n)?;
        let mut m = Self::zero(n);
        let mut rows = 0;
        for (idx, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() && rows == n {
                continue;
            }
            rows += 1;
            if rows > n {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("more than {n} rows"),
                });
            }
            if line.len() != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {n} entries, found {}", line.len()),
                });
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(rows, j + 1, true),
                    other => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        if rows != n {
            return Err(Error::Parse {
                line: rows + 2,
                msg: format!("expected {n} rows, found {rows}"),
            });
        }
        Ok(m)
    }
}
