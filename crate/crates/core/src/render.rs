//! ASCII circuit diagrams: wire 1 on top, time left to right, one
//! three-character column per slice. Controls are `*`, targets `+`.
//!
//! ```text
//! 1 --+-----
//!     |
//! 2 --*--*--
//!        |
//! 3 -----+--
//! ```

use crate::circuit::{Circuit, Gate, TimeSlice};
use crate::error::{Error, Result};

const CONTROL: u8 = b'*';
const TARGET: u8 = b'+';

pub fn render(c: &Circuit) -> String {
    let n = c.n();
    let width = n.to_string().len();
    let mut out = String::new();
    for wire in 1..=n {
        out.push_str(&format!("{wire:>width$} -"));
        for s in c.slices() {
            let cell = match s.gates().iter().find(|g| g.touches(wire)) {
                Some(g) if g.target == wire => "-+-",
                Some(_) => "-*-",
                None => "---",
            };
            out.push_str(cell);
        }
        out.push_str("-\n");
        if wire < n {
            let mut spacer = " ".repeat(width + 2);
            for s in c.slices() {
                let crosses = s.gates().iter().any(|g| g.upper() == wire);
                spacer.push_str(if crosses { " | " } else { "   " });
            }
            out.push_str(spacer.trim_end());
            out.push('\n');
        }
    }
    out
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads a diagram produced by [`render`].
pub fn parse_diagram(text: &str) -> Result<Circuit> {
    let lines: Vec<&str> = text.lines().collect();
    // Wire rows sit on even lines, spacers between them.
    let wire_rows: Vec<(usize, &str)> = lines.iter().copied().enumerate().step_by(2).collect();
    let n = wire_rows.len();
    if n < 2 || lines.len() != 2 * n - 1 {
        return Err(bad(1, "expected wire rows separated by spacer rows"));
    }
    let width = n.to_string().len();
    let mut cells: Vec<&[u8]> = Vec::with_capacity(n);
    for (wire, &(idx, row)) in wire_rows.iter().enumerate() {
        let prefix = format!("{:>width$} -", wire + 1);
        let body = row
            .strip_prefix(prefix.as_str())
            .and_then(|r| r.strip_suffix('-'))
            .ok_or_else(|| bad(idx + 1, format!("expected row for wire {}", wire + 1)))?;
        if body.len() % 3 != 0 {
            return Err(bad(idx + 1, "ragged wire row"));
        }
        cells.push(body.as_bytes());
    }
    let depth = cells[0].len() / 3;
    if let Some(w) = cells.iter().position(|c| c.len() != 3 * depth) {
        return Err(bad(2 * w + 1, "wire rows differ in length"));
    }
    let mut slices = Vec::with_capacity(depth);
    for t in 0..depth {
        let mut gates = Vec::new();
        let mut wire = 1;
        while wire <= n {
            let glyph = |w: usize| -> Result<u8> {
                let cell = &cells[w - 1][3 * t..3 * t + 3];
                match cell {
                    [b'-', g @ (b'-' | CONTROL | TARGET), b'-'] => Ok(*g),
                    _ => Err(bad(2 * w - 1, format!("bad cell in column {}", t + 1))),
                }
            };
            let here = glyph(wire)?;
            if here == b'-' {
                wire += 1;
                continue;
            }
            if wire == n {
                return Err(bad(2 * wire - 1, "gate end without partner"));
            }
            let gate = match (here, glyph(wire + 1)?) {
                (TARGET, CONTROL) => Gate::up(wire),
                (CONTROL, TARGET) => Gate::down(wire),
                _ => return Err(bad(2 * wire - 1, "gate end without partner")),
            };
            let spacer = lines[2 * wire - 1].as_bytes();
            let col = width + 2 + 3 * t + 1;
            if spacer.get(col) != Some(&b'|') {
                return Err(bad(2 * wire, "missing gate connector"));
            }
            gates.push(gate);
            wire += 2;
        }
        if gates.is_empty() {
            return Err(bad(1, format!("empty column {}", t + 1)));
        }
        slices.push(TimeSlice::new(gates));
    }
    Ok(Circuit::from_slices(n, slices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{add_circuit, reverse_circuit, swap_circuit};

    #[test]
    fn empty_and_single_gate() {
        assert_eq!(render(&Circuit::empty(3)), "1 --\n\n2 --\n\n3 --\n");
        let c: Circuit = "n 2\nu1\n".parse().unwrap();
        assert_eq!(render(&c), "1 --+--\n    |\n2 --*--\n");
    }

    #[test]
    fn layout() {
        let c: Circuit = "n 3\nu1\nd2\n".parse().unwrap();
        let expect = "1 --+-----\n    |\n2 --*--*--\n       |\n3 -----+--\n";
        assert_eq!(render(&c), expect);
    }

    #[test]
    fn columns_match_depth() {
        let c = add_circuit(10).unwrap();
        let text = render(&c);
        let first = text.lines().next().unwrap();
        assert_eq!(first.len(), "10 -".len() + 3 * 13 + 1);
    }

    #[test]
    fn round_trip() {
        for n in 2..=12 {
            for c in [add_circuit(n).unwrap(), swap_circuit(n).unwrap(), reverse_circuit(n).unwrap()] {
                let text = render(&c);
                assert_eq!(parse_diagram(&text).unwrap(), c);
                assert_eq!(render(&c), text);
            }
        }
        let e = Circuit::empty(4);
        assert_eq!(parse_diagram(&render(&e)).unwrap(), e);
    }

    #[test]
    fn rejects_damage() {
        assert!(parse_diagram("1 --+--\n\n2 --*--\n").is_err());
        assert!(parse_diagram("1 --+--\n   |\n2 --+--\n").is_err());
        assert!(parse_diagram("1 -----\n   |\n2 -----\n").is_err());
        assert!(parse_diagram("1 --\n").is_err());
    }
}
