//! Two-wire boxes: every element of GL₂(2) on wires `i`, `i + 1`.

use crate::circuit::Gate;
use crate::error::{Error, Result};

/// One output of a box over inputs `u` (upper wire) and `v` (lower wire).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxOutput {
    U,
    V,
    UV,
}

/// Requested outputs for the upper and lower wire. `None` leaves that output
/// free; at most one output may be free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxSpec {
    pub first: Option<BoxOutput>,
    pub second: Option<BoxOutput>,
}

impl BoxSpec {
    pub const fn new(first: BoxOutput, second: BoxOutput) -> Self {
        Self {
            first: Some(first),
            second: Some(second),
        }
    }

    pub const fn second_only(second: BoxOutput) -> Self {
        Self {
            first: None,
            second: Some(second),
        }
    }

    pub const fn first_only(first: BoxOutput) -> Self {
        Self {
            first: Some(first),
            second: None,
        }
    }

    /// The cheapest fully specified pair satisfying this spec.
    pub fn resolve(&self) -> Result<(BoxOutput, BoxOutput)> {
        use BoxOutput::*;
        match (self.first, self.second) {
            (None, None) => Err(Error::InvalidBox("both outputs free")),
            (Some(a), Some(b)) if a == b => Err(Error::InvalidBox("outputs must be distinct")),
            (Some(a), Some(b)) => Ok((a, b)),
            (None, Some(V)) => Ok((U, V)),
            (None, Some(UV)) => Ok((U, UV)),
            (None, Some(U)) => Ok((UV, U)),
            (Some(U), None) => Ok((U, V)),
            (Some(UV), None) => Ok((UV, V)),
            (Some(V), None) => Ok((V, UV)),
        }
    }
}

/// Gates of the box on wires `i`, `i + 1`, in execution order.
pub fn box_circuit(i: usize, spec: BoxSpec) -> Result<Vec<Gate>> {
    use BoxOutput::*;
    Ok(match spec.resolve()? {
        (U, V) => vec![],
        (U, UV) => vec![Gate::down(i)],
        (UV, V) => vec![Gate::up(i)],
        (UV, U) => vec![Gate::up(i), Gate::down(i)],
        (V, UV) => vec![Gate::down(i), Gate::up(i)],
        (V, U) => super::swap_gates(i).to_vec(),
        _ => unreachable!("resolve only yields distinct pairs"),
    })
}

/// Depth of the box: every gate of a box shares both wires, so depth is
/// the gate count.
pub fn box_depth(spec: BoxSpec) -> Result<usize> {
    Ok(box_circuit(1, spec)?.len())
}

#[cfg(test)]
mod tests {
    use super::BoxOutput::*;
    use super::*;
    use crate::circuit::Circuit;
    use crate::f2::BitVector;

    /// Simulates on `u = e₁`, `v = e₂` and reads back the output labels.
    fn outputs(gates: &[Gate]) -> (BoxOutput, BoxOutput) {
        let m = Circuit::schedule(2, gates).unwrap().matrix();
        let label = |v: BitVector| match v.bits() {
            0b01 => U,
            0b10 => V,
            0b11 => UV,
            _ => unreachable!(),
        };
        (label(m.column(1)), label(m.column(2)))
    }

    #[test]
    fn table_depths() {
        let table = [
            ((U, V), 0),
            ((U, UV), 1),
            ((UV, V), 1),
            ((UV, U), 2),
            ((V, UV), 2),
            ((V, U), 3),
        ];
        for ((a, b), depth) in table {
            let gates = box_circuit(1, BoxSpec::new(a, b)).unwrap();
            assert_eq!(outputs(&gates), (a, b));
            assert_eq!(Circuit::schedule(2, &gates).unwrap().depth(), depth);
        }
    }

    #[test]
    fn v_uv_gate_order() {
        let gates = box_circuit(4, BoxSpec::new(V, UV)).unwrap();
        assert_eq!(gates, vec![Gate::down(4), Gate::up(4)]);
        // The other order gives a different box.
        assert_eq!(outputs(&[Gate::up(1), Gate::down(1)]), (UV, U));
    }

    #[test]
    fn half_specified_boxes_are_shallow() {
        for out in [U, V, UV] {
            for spec in [BoxSpec::first_only(out), BoxSpec::second_only(out)] {
                let gates = box_circuit(1, spec).unwrap();
                assert!(gates.len() <= 2);
                let (a, b) = outputs(&gates);
                if let Some(f) = spec.first {
                    assert_eq!(a, f);
                }
                if let Some(s) = spec.second {
                    assert_eq!(b, s);
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(box_circuit(1, BoxSpec::new(U, U)).is_err());
        assert!(box_circuit(1, BoxSpec { first: None, second: None }).is_err());
    }
}
