//! Adjacent-wire CNOT circuits: gates, time slices, scheduling, simulation.
//!
//! Composition convention: `a.then(&b)` runs `a` first and concatenates the
//! slice lists. Circuits act on the right of the wire-state matrix, so
//! `a.then(&b).matrix() == a.matrix() * b.matrix()`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, MAX_DIM};

/// `bit[target] ⊕= bit[source]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    pub target: usize,
    pub source: usize,
}

impl Gate {
    pub const fn new(target: usize, source: usize) -> Self {
        Self { target, source }
    }

    /// `bit[i] ⊕= bit[i+1]`, written `u<i>` in the text format.
    pub const fn up(i: usize) -> Self {
        Self::new(i, i + 1)
    }

    /// `bit[i+1] ⊕= bit[i]`, written `d<i>`.
    pub const fn down(i: usize) -> Self {
        Self::new(i + 1, i)
    }

    /// The upper of the two wires.
    pub fn upper(&self) -> usize {
        self.target.min(self.source)
    }

    /// True for `bit[i] ⊕= bit[i+1]` gates (writing the upper wire).
    pub fn is_up(&self) -> bool {
        self.target < self.source
    }

    pub fn touches(&self, wire: usize) -> bool {
        self.target == wire || self.source == wire
    }

    pub fn shares_wire(&self, other: &Gate) -> bool {
        self.touches(other.target) || self.touches(other.source)
    }

    pub fn is_adjacent(&self) -> bool {
        self.target.abs_diff(self.source) == 1
    }

    pub fn in_range(&self, n: usize) -> bool {
        (1..=n).contains(&self.target) && (1..=n).contains(&self.source)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.is_adjacent() && self.in_range(n) {
            Ok(())
        } else {
            Err(Error::InvalidGate {
                n,
                target: self.target,
                control: self.source,
            })
        }
    }

    /// The same gate with its wires relabelled `i ↦ n + 1 − i`.
    pub fn mirrored(&self, n: usize) -> Self {
        Self::new(n + 1 - self.target, n + 1 - self.source)
    }

    /// Target and source exchanged in place.
    pub fn transposed(&self) -> Self {
        Self::new(self.source, self.target)
    }

    fn token(&self) -> String {
        if self.is_up() {
            format!("u{}", self.target)
        } else {
            format!("d{}", self.source)
        }
    }
}

/// Gates executed at the same time; they must touch pairwise distinct wires.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TimeSlice {
    gates: Vec<Gate>,
}

impl TimeSlice {
    /// Gates are kept sorted by upper wire.
    pub fn new(mut gates: Vec<Gate>) -> Self {
        gates.sort_by_key(|g| (g.upper(), g.target));
        Self { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { slice: usize, gate: Gate },
    NotAdjacent { slice: usize, gate: Gate },
    WireConflict { slice: usize, wire: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub depth: usize,
    pub size: usize,
    /// `size / (depth·⌊n/2⌋)`, zero for the empty circuit.
    pub density: f64,
}

/// Gates crossing the cut between wires `k` and `k + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutCrossing {
    pub k: usize,
    pub up: usize,
    pub down: usize,
}

impl CutCrossing {
    pub fn total(&self) -> usize {
        self.up + self.down
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    slices: Vec<TimeSlice>,
}

impl Circuit {
    pub fn empty(n: usize) -> Self {
        assert!((2..=MAX_DIM).contains(&n), "unsupported wire count {n}");
        Self {
            n,
            slices: Vec::new(),
        }
    }

    /// Wraps slices as given; empty slices are dropped. Use
    /// [`Circuit::validate`] to check the result.
    pub fn from_slices(n: usize, slices: Vec<TimeSlice>) -> Self {
        let mut c = Self::empty(n);
        c.slices = slices.into_iter().filter(|s| !s.is_empty()).collect();
        c
    }

    /// Greedy earliest-slice placement: each gate lands in the first slice
    /// after every earlier gate that shares a wire with it.
    pub fn schedule(n: usize, gates: &[Gate]) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut ready = vec![0usize; n + 1];
        let mut slices: Vec<Vec<Gate>> = Vec::new();
        for g in gates {
            g.check(n)?;
            let at = ready[g.target].max(ready[g.source]);
            if at == slices.len() {
                slices.push(Vec::new());
            }
            slices[at].push(*g);
            ready[g.target] = at + 1;
            ready[g.source] = at + 1;
        }
        Ok(Self {
            n,
            slices: slices.into_iter().map(TimeSlice::new).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slices(&self) -> &[TimeSlice] {
        &self.slices
    }

    /// All gates in execution order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.slices.iter().flat_map(|s| s.gates.iter())
    }

    pub fn depth(&self) -> usize {
        self.slices.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn size(&self) -> usize {
        self.slices.iter().map(TimeSlice::len).sum()
    }

    pub fn density(&self) -> f64 {
        let cap = self.depth() * (self.n / 2);
        if cap == 0 {
            0.0
        } else {
            self.size() as f64 / cap as f64
        }
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            depth: self.depth(),
            size: self.size(),
            density: self.density(),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for (idx, slice) in self.slices.iter().enumerate() {
            let mut used = vec![false; self.n + 2];
            for &gate in &slice.gates {
                if !gate.in_range(self.n) {
                    violations.push(Violation::OutOfRange { slice: idx, gate });
                    continue;
                }
                if !gate.is_adjacent() {
                    violations.push(Violation::NotAdjacent { slice: idx, gate });
                }
                for wire in [gate.target, gate.source] {
                    if used[wire] {
                        violations.push(Violation::WireConflict { slice: idx, wire });
                    }
                    used[wire] = true;
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Runs the circuit on the wire state `m`.
    pub fn apply(&self, m: &BitMatrix) -> Result<BitMatrix> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.dim(),
            });
        }
        let mut state = m.clone();
        for g in self.gates() {
            state.add_column(g.target, g.source);
        }
        Ok(state)
    }

    /// The transformation performed starting from the identity state.
    pub fn matrix(&self) -> BitMatrix {
        self.apply(&BitMatrix::identity(self.n))
            .expect("dimensions agree by construction")
    }

    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        Ok(Self { n: self.n, slices })
    }

    /// Slices in reverse order. Every CNOT is its own inverse.
    pub fn inverse(&self) -> Circuit {
        Self {
            n: self.n,
            slices: self.slices.iter().rev().cloned().collect(),
        }
    }

    /// Turns the circuit upside down: wire `i` becomes wire `n + 1 − i`.
    /// The result computes `J·M·J` where `J` is the anti-identity.
    pub fn flip(&self) -> Circuit {
        self.map_gates(|g| g.mirrored(self.n))
    }

    /// Exchanges target and source of every gate in place. The result
    /// computes the inverse transpose of the original transformation.
    pub fn transposed(&self) -> Circuit {
        self.map_gates(|g| g.transposed())
    }

    fn map_gates(&self, f: impl Fn(&Gate) -> Gate) -> Circuit {
        Self {
            n: self.n,
            slices: self
                .slices
                .iter()
                .map(|s| TimeSlice::new(s.gates.iter().map(&f).collect()))
                .collect(),
        }
    }

    /// Up and down gate counts across every cut `k = 1..n`.
    pub fn crossings(&self) -> Vec<CutCrossing> {
        let mut cuts: Vec<CutCrossing> = (1..self.n)
            .map(|k| CutCrossing { k, up: 0, down: 0 })
            .collect();
        for g in self.gates() {
            let c = &mut cuts[g.upper() - 1];
            if g.is_up() {
                c.up += 1;
            } else {
                c.down += 1;
            }
        }
        cuts
    }
}

/// Text format: `n <n>`, then one line of `u<i>`/`d<i>` tokens per slice.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for slice in self.slices.iter().filter(|s| !s.is_empty()) {
            let tokens: Vec<String> = slice.gates.iter().map(Gate::token).collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

fn parse_token(token: &str, line: usize) -> Result<Gate> {
    let err = || Error::Parse {
        line,
        msg: format!("bad gate token {token:?}"),
    };
    let (kind, rest) = token.split_at_checked(1).ok_or_else(err)?;
    let i: usize = rest.parse().map_err(|_| err())?;
    if i == 0 {
        return Err(err());
    }
    match kind {
        "u" => Ok(Gate::up(i)),
        "d" => Ok(Gate::down(i)),
        _ => Err(err()),
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let n = header
            .strip_prefix("n ")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected \"n <count>\", found {header:?}"),
            })?;
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut slices = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "empty slice".into(),
                });
            }
            let gates = line
                .split_whitespace()
                .map(|t| parse_token(t, line_no))
                .collect::<Result<Vec<_>>>()?;
            slices.push(TimeSlice::new(gates));
        }
        let circuit = Circuit { n, slices };
        circuit.validate().map_err(Error::InvalidCircuit)?;
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitVector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub(crate) fn random_gates(n: usize, len: usize, rng: &mut impl Rng) -> Vec<Gate> {
        (0..len)
            .map(|_| {
                let i = rng.gen_range(1..n);
                if rng.gen() {
                    Gate::up(i)
                } else {
                    Gate::down(i)
                }
            })
            .collect()
    }

    fn sequential(n: usize, gates: &[Gate]) -> BitMatrix {
        let mut m = BitMatrix::identity(n);
        for g in gates {
            m.add_column(g.target, g.source);
        }
        m
    }

    /// Every circuit of depth ≤ `max_depth` on `n` wires.
    fn all_circuits(n: usize, max_depth: usize) -> Vec<Circuit> {
        let slices = crate::search::slice_generators(n).unwrap();
        let mut out = vec![Circuit::empty(n)];
        let mut layer = vec![Circuit::empty(n)];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for c in &layer {
                for s in &slices {
                    let mut d = c.clone();
                    d.slices.push(s.clone());
                    next.push(d);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn schedule_examples() {
        assert_eq!(Circuit::schedule(3, &[]).unwrap().depth(), 0);
        let c = Circuit::schedule(3, &[Gate::up(1), Gate::up(2)]).unwrap();
        assert_eq!(c.depth(), 2);
        let c = Circuit::schedule(4, &[Gate::up(1), Gate::up(3)]).unwrap();
        assert_eq!(c.depth(), 1);
        assert!(Circuit::schedule(4, &[Gate::new(1, 3)]).is_err());
        assert!(Circuit::schedule(4, &[Gate::up(4)]).is_err());
    }

    #[test]
    fn schedule_preserves_semantics() {
        let mut rng = StdRng::seed_from_u64(1);
        for n in 2..=12 {
            for _ in 0..30 {
                let gates = random_gates(n, 40, &mut rng);
                let c = Circuit::schedule(n, &gates).unwrap();
                assert!(c.validate().is_ok());
                assert_eq!(c.size(), gates.len());
                assert_eq!(c.matrix(), sequential(n, &gates));
            }
        }
    }

    #[test]
    fn apply_examples() {
        let m = BitMatrix::from_fn(3, |i, j| i <= j);
        assert_eq!(Circuit::empty(3).apply(&m).unwrap(), m);
        let c = Circuit::schedule(2, &[Gate::down(1)]).unwrap();
        let state = c.matrix();
        assert_eq!(state.column(1), BitVector::unit(2, 1));
        assert_eq!(state.column(2), BitVector::from_coords(2, &[1, 2]));
        let c = Circuit::schedule(2, &[Gate::up(1)]).unwrap();
        assert_eq!(c.matrix().column(1), BitVector::from_coords(2, &[1, 2]));
        assert_eq!(c.matrix().column(2), BitVector::unit(2, 2));
        assert!(c.apply(&BitMatrix::identity(3)).is_err());
    }

    #[test]
    fn inverse_undoes_random_circuits() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..50 {
            let c = Circuit::schedule(6, &random_gates(6, 30, &mut rng)).unwrap();
            let m = BitMatrix::random(6, &mut rng);
            assert_eq!(c.inverse().apply(&c.apply(&m).unwrap()).unwrap(), m);
            assert!((&c.matrix() * &c.inverse().matrix()).is_identity());
        }
        assert_eq!(Circuit::empty(4).inverse(), Circuit::empty(4));
        let single = Circuit::schedule(3, &[Gate::down(2)]).unwrap();
        assert_eq!(single.inverse(), single);
    }

    #[test]
    fn composition_is_a_homomorphism() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Circuit::schedule(5, &random_gates(5, 12, &mut rng)).unwrap();
            let b = Circuit::schedule(5, &random_gates(5, 12, &mut rng)).unwrap();
            assert_eq!(a.then(&b).unwrap().matrix(), &a.matrix() * &b.matrix());
        }
    }

    #[test]
    fn flip_examples() {
        let c = Circuit::schedule(2, &[Gate::up(1)]).unwrap();
        assert_eq!(c.flip(), Circuit::schedule(2, &[Gate::down(1)]).unwrap());
        let mut rng = StdRng::seed_from_u64(4);
        let c = Circuit::schedule(7, &random_gates(7, 25, &mut rng)).unwrap();
        assert_eq!(c.flip().flip(), c);
        assert_eq!(c.transposed().transposed(), c);
    }

    /// Pins the algebra of both flips on every circuit of depth ≤ 3 for
    /// n = 2, 3: mirroring conjugates by `J`, transposing every gate in
    /// place gives the inverse transpose.
    #[test]
    fn flip_identities_exhaustive() {
        for n in [2, 3] {
            let j = BitMatrix::anti_identity(n);
            for c in all_circuits(n, 3) {
                let m = c.matrix();
                let inv_t = m.inverse().unwrap().transpose();
                assert_eq!(c.flip().matrix(), &(&j * &m) * &j);
                assert_eq!(c.transposed().matrix(), inv_t);
                assert!((&c.inverse().matrix() * &m).is_identity());
            }
        }
    }

    /// The conjugated inverse transpose `J·M⁻ᵀ·J` is not what the mirror
    /// computes in general.
    #[test]
    fn mirror_is_not_conjugated_inverse_transpose() {
        let c = Circuit::schedule(3, &[Gate::up(1), Gate::up(2)]).unwrap();
        let j = BitMatrix::anti_identity(3);
        let m = c.matrix();
        let conj_inv_t = &(&j * &m.inverse().unwrap().transpose()) * &j;
        assert_ne!(c.flip().matrix(), conj_inv_t);
    }

    #[test]
    fn flip_identities_random() {
        let mut rng = StdRng::seed_from_u64(5);
        let j = BitMatrix::anti_identity(5);
        for _ in 0..100 {
            let c = Circuit::schedule(5, &random_gates(5, 20, &mut rng)).unwrap();
            let m = c.matrix();
            assert_eq!(c.flip().matrix(), &(&j * &m) * &j);
            assert_eq!(c.transposed().matrix(), m.inverse().unwrap().transpose());
        }
    }

    #[test]
    fn metrics_examples() {
        let e = Circuit::empty(4).metrics();
        assert_eq!((e.depth, e.size, e.density), (0, 0, 0.0));
        let full = Circuit::schedule(4, &[Gate::up(1), Gate::down(3)]).unwrap();
        let m = full.metrics();
        assert_eq!((m.depth, m.size, m.density), (1, 2, 1.0));
    }

    #[test]
    fn validate_examples() {
        assert!(Circuit::empty(3).validate().is_ok());
        let bad = Circuit::from_slices(3, vec![TimeSlice::new(vec![Gate::up(1), Gate::up(2)])]);
        assert_eq!(
            bad.validate(),
            Err(vec![Violation::WireConflict { slice: 0, wire: 2 }])
        );
        let bad = Circuit::from_slices(3, vec![TimeSlice::new(vec![Gate::new(1, 3)])]);
        assert_eq!(
            bad.validate(),
            Err(vec![Violation::NotAdjacent {
                slice: 0,
                gate: Gate::new(1, 3)
            }])
        );
        let bad = Circuit::from_slices(3, vec![TimeSlice::new(vec![Gate::down(3)])]);
        assert!(matches!(
            bad.validate(),
            Err(v) if matches!(v[0], Violation::OutOfRange { .. })
        ));
    }

    #[test]
    fn crossings_count_by_cut() {
        let c = Circuit::schedule(4, &[Gate::up(1), Gate::down(1), Gate::up(3), Gate::up(2)])
            .unwrap();
        let cuts = c.crossings();
        assert_eq!(cuts[0], CutCrossing { k: 1, up: 1, down: 1 });
        assert_eq!(cuts[1], CutCrossing { k: 2, up: 1, down: 0 });
        assert_eq!(cuts[2], CutCrossing { k: 3, up: 1, down: 0 });
    }

    #[test]
    fn text_format() {
        let c = Circuit::schedule(4, &[Gate::up(1), Gate::down(3), Gate::down(2)]).unwrap();
        let text = c.to_string();
        assert_eq!(text, "n 4\nu1 d3\nd2\n");
        assert_eq!(text.parse::<Circuit>().unwrap(), c);
        assert_eq!("n 3\n".parse::<Circuit>().unwrap(), Circuit::empty(3));
        assert!("n 3\n\nu1\n".parse::<Circuit>().is_err());
        assert!("n 3\nu1 u2\n".parse::<Circuit>().is_err());
        assert!("n 3\nu3\n".parse::<Circuit>().is_err());
        assert!("n 3\nx1\n".parse::<Circuit>().is_err());
        assert!("3\nu1\n".parse::<Circuit>().is_err());
    }

    proptest::proptest! {
        #[test]
        fn schedule_preserves_gate_order_semantics(n in 2usize..=24, len in 0usize..120, seed: u64) {
            let gates = random_gates(n, len, &mut StdRng::seed_from_u64(seed));
            let c = Circuit::schedule(n, &gates).unwrap();
            let mut m = BitMatrix::identity(n);
            for g in &gates {
                m.add_column(g.target, g.source);
            }
            proptest::prop_assert_eq!(c.matrix(), m);
            proptest::prop_assert!(c.validate().is_ok());
            proptest::prop_assert_eq!(c.size(), len);
            proptest::prop_assert!((c.matrix() * c.inverse().matrix()).is_identity());
            proptest::prop_assert_eq!(c.to_string().parse::<Circuit>().unwrap(), c.clone());
            proptest::prop_assert_eq!(crate::render::parse_diagram(&crate::render::render(&c)).unwrap(), c);
        }
    }
}
