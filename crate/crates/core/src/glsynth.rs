//! Synthesis of an arbitrary invertible matrix in depth at most 5n.
//!
//! Two passes over a sorting network, each comparator replaced by a
//! two-wire box:
//!
//! 1. a *clearing* pass of depth-≤2 boxes drives the state `M` to a
//!    northwest-triangular `N = MC`;
//! 2. a *reduction* pass of depth-≤3 boxes over the reversal sub-network
//!    drives `N` to the identity, `NR = I`.
//!
//! Then `R⁻¹` followed by `C⁻¹` computes `M`.

use crate::circuit::{Circuit, Gate};
use crate::constructions::{box_circuit, odd_even_network, BoxOutput, BoxSpec, ComparatorNetwork};
use crate::error::{Error, Result};
use crate::f2::{dual_basis, lex_min_coset, BitMatrix, BitVector};

/// The lower-triangular basis change used by the clearing pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NorthwestBasis {
    /// `v_i`: the ≺-least element of `a_i ⊕ span{a_j : j > i}`.
    pub v: Vec<BitVector>,
    /// `π(i)`: smallest `j` with `v_i·e_{n+1−j} = 1`. 1-based images.
    pub pi: Vec<usize>,
    /// `w_j = v_{π⁻¹(j)}`, so `w_j ∈ e_{n+1−j} ⊕ span{e_k : k < n+1−j}`.
    pub w: Vec<BitVector>,
}

pub fn northwest_basis(m: &BitMatrix) -> Result<NorthwestBasis> {
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let n = m.dim();
    let cols: Vec<BitVector> = m.columns().collect();
    let v: Vec<BitVector> = (0..n).map(|i| lex_min_coset(&cols[i], &cols[i + 1..])).collect();
    let pi: Vec<usize> = v
        .iter()
        .map(|vi| n + 1 - vi.leading().expect("invertible columns are nonzero"))
        .collect();
    let mut w = vec![BitVector::zero(n); n];
    let mut seen = vec![false; n + 1];
    for (i, &p) in pi.iter().enumerate() {
        debug_assert!(!seen[p], "π must be injective");
        seen[p] = true;
        w[p - 1] = v[i];
    }
    Ok(NorthwestBasis { v, pi, w })
}

/// Wire values with a label per wire, plus the fixed basis `w` and its
/// dual functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledWireState {
    pub values: BitMatrix,
    /// `labels[i - 1]` is the label on wire `i`.
    pub labels: Vec<usize>,
    pub w_basis: Vec<BitVector>,
    pub duals: Vec<BitVector>,
}

impl LabeledWireState {
    /// Coefficient of `w_label` in `x`.
    pub fn coefficient(&self, x: &BitVector, label: usize) -> bool {
        x.dot(&self.duals[label - 1])
    }

    /// No wire has a nonzero coefficient on a label carried by a wire above
    /// it.
    pub fn clearing_invariant_holds(&self) -> bool {
        let n = self.values.dim();
        (1..=n).all(|i| {
            let x = self.values.column(i);
            self.labels[..i - 1]
                .iter()
                .all(|&l| !self.coefficient(&x, l))
        })
    }
}

/// Labels and values during the reduction pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    pub values: BitMatrix,
    pub labels: Vec<usize>,
}

impl ReductionState {
    /// (1) the value `u` on a wire labelled `k` has `u·e_k = 1` and
    /// `u·e_ℓ = 0` for `ℓ > k`; (2) if wire `h < i` carries a label `j`
    /// smaller than wire `i`'s label, then wire `i`'s value has `u·e_j = 0`.
    pub fn invariants_hold(&self) -> bool {
        let n = self.values.dim();
        (1..=n).all(|i| {
            let u = self.values.column(i);
            let k = self.labels[i - 1];
            let leading_ok = u.leading() == Some(k);
            let above_ok = self.labels[..i - 1]
                .iter()
                .all(|&j| j > k || !u.get(j));
            leading_ok && above_ok
        })
    }
}

/// Per-layer record of a pass, for checking invariants.
#[derive(Clone, Debug)]
pub struct PassTrace<S> {
    /// State after each network layer.
    pub states: Vec<S>,
    /// Each emitted box as (layer, upper wire, outputs).
    pub boxes: Vec<(usize, usize, (BoxOutput, BoxOutput))>,
}

fn apply_gates(values: &mut BitMatrix, gates: &[Gate]) {
    for g in gates {
        values.add_column(g.target, g.source);
    }
}

fn check_network(m: &BitMatrix, net: &ComparatorNetwork) -> Result<()> {
    if net.n() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: net.n(),
        });
    }
    Ok(())
}

/// Circuit `C` with `MC` northwest-triangular and depth at most twice the
/// network depth. `net` must sort every labeling.
pub fn clearing_circuit(m: &BitMatrix, net: &ComparatorNetwork) -> Result<Circuit> {
    clearing_pass(m, net, None)
}

pub fn clearing_circuit_traced(
    m: &BitMatrix,
    net: &ComparatorNetwork,
) -> Result<(Circuit, PassTrace<LabeledWireState>)> {
    let mut trace = PassTrace { states: Vec::new(), boxes: Vec::new() };
    let c = clearing_pass(m, net, Some(&mut trace))?;
    Ok((c, trace))
}

fn clearing_pass(
    m: &BitMatrix,
    net: &ComparatorNetwork,
    mut trace: Option<&mut PassTrace<LabeledWireState>>,
) -> Result<Circuit> {
    check_network(m, net)?;
    let n = m.dim();
    let basis = northwest_basis(m)?;
    let duals = dual_basis(&basis.w)?;
    let mut state = LabeledWireState {
        values: m.clone(),
        labels: basis.pi,
        w_basis: basis.w,
        duals,
    };
    debug_assert!(state.clearing_invariant_holds());

    let mut gates = Vec::new();
    for (l, layer) in net.layers().iter().enumerate() {
        for &i in layer {
            let (upper, lower) = (state.labels[i - 1], state.labels[i]);
            if upper < lower {
                continue;
            }
            // Label `lower` moves up past wire i + 1, so the new lower value
            // must lie in W = span{w_ℓ : ℓ ≠ lower}.
            let u = state.values.column(i);
            let v = state.values.column(i + 1);
            let d = &state.duals[lower - 1];
            let second = if !v.dot(d) {
                BoxOutput::V
            } else if !(u ^ v).dot(d) {
                BoxOutput::UV
            } else {
                BoxOutput::U
            };
            let spec = BoxSpec::second_only(second);
            let box_gates = box_circuit(i, spec)?;
            apply_gates(&mut state.values, &box_gates);
            gates.extend(box_gates);
            state.labels.swap(i - 1, i);
            if let Some(t) = trace.as_deref_mut() {
                t.boxes.push((l, i, spec.resolve()?));
            }
        }
        debug_assert!(state.clearing_invariant_holds());
        if let Some(t) = trace.as_deref_mut() {
            t.states.push(state.clone());
        }
    }
    Circuit::schedule(n, &gates)
}

/// Circuit `R` with `NR = I` for an invertible northwest-triangular `N`;
/// depth at most three times the network depth.
pub fn triangular_reduction_circuit(n_mat: &BitMatrix, net: &ComparatorNetwork) -> Result<Circuit> {
    reduction_pass(n_mat, net, None)
}

pub fn triangular_reduction_circuit_traced(
    n_mat: &BitMatrix,
    net: &ComparatorNetwork,
) -> Result<(Circuit, PassTrace<ReductionState>)> {
    let mut trace = PassTrace { states: Vec::new(), boxes: Vec::new() };
    let c = reduction_pass(n_mat, net, Some(&mut trace))?;
    Ok((c, trace))
}

fn reduction_pass(
    n_mat: &BitMatrix,
    net: &ComparatorNetwork,
    mut trace: Option<&mut PassTrace<ReductionState>>,
) -> Result<Circuit> {
    check_network(n_mat, net)?;
    if !n_mat.is_northwest_triangular() {
        return Err(Error::NotNorthwestTriangular);
    }
    if !n_mat.is_invertible() {
        return Err(Error::Singular);
    }
    let n = n_mat.dim();
    let rev = net.reversal_network();
    let mut state = ReductionState {
        values: n_mat.clone(),
        labels: (1..=n).rev().collect(),
    };
    debug_assert!(state.invariants_hold());

    let mut gates = Vec::new();
    for (l, layer) in rev.layers().iter().enumerate() {
        for &i in layer {
            let (k, j) = (state.labels[i - 1], state.labels[i]);
            debug_assert!(k > j, "reversal network swaps only inverted labels");
            let u = state.values.column(i);
            let outputs = if u.get(j) {
                (BoxOutput::V, BoxOutput::UV)
            } else {
                (BoxOutput::V, BoxOutput::U)
            };
            let box_gates = box_circuit(i, BoxSpec::new(outputs.0, outputs.1))?;
            apply_gates(&mut state.values, &box_gates);
            gates.extend(box_gates);
            state.labels.swap(i - 1, i);
            if let Some(t) = trace.as_deref_mut() {
                t.boxes.push((l, i, outputs));
            }
        }
        debug_assert!(state.invariants_hold());
        if let Some(t) = trace.as_deref_mut() {
            t.states.push(state.clone());
        }
    }
    debug_assert!(state.values.is_identity());
    Circuit::schedule(n, &gates)
}

/// The two passes and the assembled result of [`synthesize`].
#[derive(Clone, Debug)]
pub struct Synthesis {
    pub clearing: Circuit,
    pub reduction: Circuit,
    /// `reduction⁻¹` followed by `clearing⁻¹`.
    pub circuit: Circuit,
}

pub fn synthesize_stages(m: &BitMatrix) -> Result<Synthesis> {
    let net = odd_even_network(m.dim())?;
    let clearing = clearing_circuit(m, &net)?;
    let cleared = clearing.apply(m)?;
    let reduction = triangular_reduction_circuit(&cleared, &net)?;
    let circuit = reduction.inverse().then(&clearing.inverse())?;
    Ok(Synthesis {
        clearing,
        reduction,
        circuit,
    })
}

/// A circuit computing `m` in depth at most `5n`.
pub fn synthesize(m: &BitMatrix) -> Result<Circuit> {
    Ok(synthesize_stages(m)?.circuit)
}
