// SPDX-License-Identifier: Apache-2.0

//! Backward liveness of classical cells and qubits over a halt segment.
//!
//! Readout cells are read once more after the segment ends. A qubit is live
//! while a later multi-qubit gate or a measurement into a live cell still
//! uses it; a `RESET` ends its lifetime.

use std::collections::BTreeSet;

use crate::ir::{resources, MemoryRef, Op, Program, Resource};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LivenessResult {
    /// `(position, cell)`: the value written to `cell` at `position` is never
    /// read.
    pub dead_classical: BTreeSet<(usize, MemoryRef)>,
    /// `(position, qubit)`: neither the instruction at `position` nor anything
    /// after it observes `qubit`.
    pub dead_qubit: BTreeSet<(usize, u32)>,
}

impl LivenessResult {
    pub fn cell_dead(&self, pos: usize, r: &MemoryRef) -> bool {
        self.dead_classical.contains(&(pos, r.clone()))
    }

    pub fn qubit_dead(&self, pos: usize, q: u32) -> bool {
        self.dead_qubit.contains(&(pos, q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("liveness is only computed on halt segments")]
pub struct NotHaltSegment;

#[derive(Default)]
struct QubitLive {
    set: BTreeSet<u32>,
}

/// Runs the analysis over the program positions `seq` of a halt segment.
pub fn live_variables(program: &Program, seq: &[usize], halts: bool) -> Result<LivenessResult, NotHaltSegment> {
    if !halts {
        return Err(NotHaltSegment);
    }
    let mut result = LivenessResult::default();
    let mut live_cells: BTreeSet<MemoryRef> = program.readout_cells().into_iter().collect();
    let mut live_qubits = QubitLive::default();

    for &pos in seq.iter().rev() {
        let instr = &program.instructions()[pos];
        let res = resources(instr);

        for w in &res.writes {
            if let Resource::Cell(r) = w {
                if !live_cells.contains(r) {
                    result.dead_classical.insert((pos, r.clone()));
                }
            }
        }
        // A measurement only observes its qubit if the stored result is used.
        let observes = match &instr.op {
            Op::Measure { target: Some(t), .. } => live_cells.contains(t),
            _ => false,
        };
        for q in instr.op.qubits() {
            if !observes && !live_qubits.set.contains(&q) {
                result.dead_qubit.insert((pos, q));
            }
        }

        for w in &res.writes {
            if let Resource::Cell(r) = w {
                live_cells.remove(r);
            }
        }
        for r in &res.reads {
            if let Resource::Cell(r) = r {
                live_cells.insert(r.clone());
            }
        }

        match &instr.op {
            Op::Gate { qubits, .. } | Op::ParamGate { qubits, .. } if qubits.len() > 1 => {
                live_qubits.set.extend(qubits.iter().copied());
            }
            Op::Measure { qubit, .. } if observes => {
                live_qubits.set.insert(*qubit);
            }
            Op::Reset(Some(q)) => {
                live_qubits.set.remove(q);
            }
            Op::Reset(None) => live_qubits.set.clear(),
            _ => {}
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse;

    fn run(src: &str) -> LivenessResult {
        let p = parse(src).unwrap();
        let seq: Vec<usize> = (0..p.len()).collect();
        live_variables(&p, &seq, true).unwrap()
    }

    #[test]
    fn classical_example() {
        let src = "DECLARE a INTEGER\nDECLARE b INTEGER\nMOVE a 3\nADD a 10\nMOVE b 7\nMOVE a 10";
        let p = parse(src).unwrap().with_readout(["a".to_string()].into()).unwrap();
        let seq: Vec<usize> = (0..p.len()).collect();
        let r = live_variables(&p, &seq, true).unwrap();
        let a = MemoryRef::new("a", 0);
        let b = MemoryRef::new("b", 0);
        assert!(r.cell_dead(3, &a));
        assert!(r.cell_dead(4, &b));
        assert!(!r.cell_dead(2, &a));
        assert!(!r.cell_dead(5, &a));
    }

    #[test]
    fn measured_qubit_stays_alive() {
        let r = run("DECLARE ro BIT\nH 0\nX 0\nMEASURE 0 ro");
        assert!(r.dead_qubit.is_empty());
    }

    #[test]
    fn entangled_but_unobserved_qubit_dies() {
        let r = run("DECLARE ro BIT\nH 0\nCNOT 0 1\nX 1\nMEASURE 0 ro");
        assert!(r.qubit_dead(3, 1));
        assert!(r.qubit_dead(2, 1));
        assert!(!r.qubit_dead(2, 0));
        assert!(!r.qubit_dead(1, 0));
    }

    #[test]
    fn measurement_into_dead_cell_does_not_observe() {
        let r = run("DECLARE ro BIT\nDECLARE t BIT\nH 1\nMEASURE 1 t\nMEASURE 0 ro");
        assert!(r.qubit_dead(2, 1));
        assert!(r.qubit_dead(3, 1));
        assert!(r.cell_dead(3, &MemoryRef::new("t", 0)));
    }

    #[test]
    fn reset_ends_lifetime() {
        let r = run("DECLARE ro BIT\nX 0\nRESET 0\nMEASURE 0 ro");
        assert!(r.qubit_dead(1, 0));
        assert!(!r.qubit_dead(3, 0));
    }

    #[test]
    fn rejects_non_halt_segments() {
        let p = parse("H 0").unwrap();
        assert_eq!(live_variables(&p, &[0], false), Err(NotHaltSegment));
    }
}
