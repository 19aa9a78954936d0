// SPDX-License-Identifier: Apache-2.0

//! Forward constant propagation over one segment. Classical cells carry a
//! constant value or nothing; qubits carry a Pauli eigenstate or nothing.

use std::collections::BTreeMap;

use super::pauli::{pauli_transition, PauliState};
use crate::ir::{
    binary_op, store_convert, unary_op, Instruction, MemoryRef, Op, Opcode, Operand, Program, Value,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractState {
    cells: BTreeMap<MemoryRef, Value>,
    qubits: BTreeMap<u32, Option<PauliState>>,
    /// State of every qubit without an explicit entry.
    others: Option<PauliState>,
}

impl AbstractState {
    /// Facts at program entry: every qubit is |0>, no cell is known.
    pub fn program_entry() -> Self {
        AbstractState {
            cells: BTreeMap::new(),
            qubits: BTreeMap::new(),
            others: Some(PauliState::ZPlus),
        }
    }

    pub fn unknown() -> Self {
        AbstractState {
            cells: BTreeMap::new(),
            qubits: BTreeMap::new(),
            others: None,
        }
    }

    pub fn cell(&self, r: &MemoryRef) -> Option<Value> {
        self.cells.get(r).copied()
    }

    pub fn qubit(&self, q: u32) -> Option<PauliState> {
        self.qubits.get(&q).copied().unwrap_or(self.others)
    }

    pub fn constant_cells(&self) -> &BTreeMap<MemoryRef, Value> {
        &self.cells
    }

    /// Qubits `0..n` with a known state.
    pub fn known_qubits(&self, n: u32) -> BTreeMap<u32, PauliState> {
        (0..n).filter_map(|q| self.qubit(q).map(|s| (q, s))).collect()
    }

    fn set_cell(&mut self, r: &MemoryRef, v: Option<Value>) {
        match v {
            Some(v) => self.cells.insert(r.clone(), v),
            None => self.cells.remove(r),
        };
    }

    fn set_qubit(&mut self, q: u32, s: Option<PauliState>) {
        self.qubits.insert(q, s);
    }

    /// Facts that hold in both states.
    pub fn meet(&self, other: &AbstractState) -> AbstractState {
        let cells = self
            .cells
            .iter()
            .filter(|(r, v)| other.cells.get(*r) == Some(*v))
            .map(|(r, v)| (r.clone(), *v))
            .collect();
        let others = if self.others == other.others { self.others } else { None };
        let qubits = self
            .qubits
            .keys()
            .chain(other.qubits.keys())
            .map(|&q| {
                let (a, b) = (self.qubit(q), other.qubit(q));
                (q, if a == b { a } else { None })
            })
            .collect();
        AbstractState { cells, qubits, others }
    }

    /// Applies one instruction.
    pub fn step(&mut self, instr: &Instruction, program: &Program) {
        match &instr.op {
            Op::Declare(region) => {
                for i in 0..region.length {
                    self.cells.remove(&MemoryRef::new(region.name.clone(), i));
                }
            }
            Op::Gate { name, qubits, .. } => {
                if let [q] = qubits[..] {
                    let next = self.qubit(q).and_then(|s| pauli_transition(*name, s));
                    self.set_qubit(q, next);
                } else {
                    for &q in qubits {
                        self.set_qubit(q, None);
                    }
                }
            }
            Op::ParamGate { qubits, .. } => {
                for &q in qubits {
                    self.set_qubit(q, None);
                }
            }
            Op::Classical { opcode, operands } => {
                if *opcode == Opcode::Exchange {
                    let (a, b) = (operands[0].as_ref().unwrap(), operands[1].as_ref().unwrap());
                    let (va, vb) = (self.cell(a), self.cell(b));
                    let conv = |v: Option<Value>, r: &MemoryRef| {
                        v.map(|v| store_convert(v, program.kind_of(r).expect("validated reference")))
                    };
                    self.set_cell(a, conv(vb, a));
                    self.set_cell(b, conv(va, b));
                } else {
                    let dest = operands[0].as_ref().expect("validated destination");
                    let v = evaluate(self, *opcode, operands, program).and_then(Result::ok);
                    self.set_cell(dest, v);
                }
            }
            Op::Measure { qubit, target } => {
                let state = self.qubit(*qubit);
                let outcome = state.and_then(PauliState::z_outcome);
                if outcome.is_none() {
                    self.set_qubit(*qubit, None);
                }
                if let Some(t) = target {
                    let kind = program.kind_of(t).expect("validated reference");
                    self.set_cell(t, outcome.map(|o| store_convert(Value::Int(o), kind)));
                }
            }
            Op::Reset(Some(q)) => self.set_qubit(*q, Some(PauliState::ZPlus)),
            Op::Reset(None) => {
                self.qubits.clear();
                self.others = Some(PauliState::ZPlus);
            }
            Op::Label(_) | Op::Jump(_) | Op::JumpWhen { .. } | Op::JumpUnless { .. } | Op::Halt => {}
        }
    }
}

fn operand_value(state: &AbstractState, o: &Operand) -> Option<Value> {
    match o {
        Operand::Lit(v) => Some(*v),
        Operand::Ref(r) => state.cell(r),
    }
}

/// Result of a classical instruction when every operand it reads is
/// constant, already converted to the destination's kind. `None` when some
/// read is unknown; `Some(Err)` when the arithmetic itself fails.
pub fn evaluate(
    state: &AbstractState,
    opcode: Opcode,
    operands: &[Operand],
    program: &Program,
) -> Option<Result<Value, crate::ir::ArithError>> {
    let dest = operands[0].as_ref()?;
    let kind = program.kind_of(dest)?;
    let result = match opcode {
        Opcode::Exchange => return None,
        Opcode::Move => Ok(operand_value(state, &operands[1])?),
        Opcode::Neg | Opcode::Not => unary_op(opcode, state.cell(dest)?),
        _ => binary_op(opcode, state.cell(dest)?, operand_value(state, &operands[1])?),
    };
    Some(result.map(|v| store_convert(v, kind)))
}

/// Facts before each position of `seq` plus the facts after the last one.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstFacts {
    pub before: Vec<AbstractState>,
    pub exit: AbstractState,
}

/// Runs the analysis over the program positions `seq` from `entry`.
pub fn constant_propagation(program: &Program, seq: &[usize], entry: AbstractState) -> ConstFacts {
    let mut state = entry;
    let mut before = Vec::with_capacity(seq.len());
    for &p in seq {
        before.push(state.clone());
        state.step(&program.instructions()[p], program);
    }
    ConstFacts { before, exit: state }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse;

    fn run(src: &str) -> (Program, ConstFacts) {
        let p = parse(src).unwrap();
        let seq: Vec<usize> = (0..p.len()).collect();
        let f = constant_propagation(&p, &seq, AbstractState::program_entry());
        (p, f)
    }

    fn cell(name: &str) -> MemoryRef {
        MemoryRef::new(name, 0)
    }

    #[test]
    fn move_then_add() {
        let (_, f) = run("DECLARE a INTEGER\nDECLARE b INTEGER\nMOVE a 10\nADD b a");
        assert_eq!(f.before[3].cell(&cell("a")), Some(Value::Int(10)));
        assert_eq!(f.exit.cell(&cell("b")), None);
    }

    #[test]
    fn qubits_start_at_zero_and_follow_cliffords() {
        let (_, f) = run("H 0\nS 0\nT 1\nCNOT 2 3");
        assert_eq!(f.before[0].qubit(0), Some(PauliState::ZPlus));
        assert_eq!(f.before[1].qubit(0), Some(PauliState::XPlus));
        assert_eq!(f.before[2].qubit(0), Some(PauliState::YPlus));
        assert_eq!(f.exit.qubit(1), None);
        assert_eq!(f.exit.qubit(2), None);
        assert_eq!(f.exit.qubit(9), Some(PauliState::ZPlus));
    }

    #[test]
    fn measurement_of_basis_state() {
        let (_, f) = run("DECLARE m BIT[2]\nX 0\nMEASURE 0 m[0]\nH 1\nMEASURE 1 m[1]");
        assert_eq!(f.exit.cell(&MemoryRef::new("m", 0)), Some(Value::Int(1)));
        assert_eq!(f.exit.qubit(0), Some(PauliState::ZMinus));
        assert_eq!(f.exit.cell(&MemoryRef::new("m", 1)), None);
        assert_eq!(f.exit.qubit(1), None);
    }

    #[test]
    fn reset_restores_zero() {
        let (_, f) = run("H 0\nCNOT 0 1\nRESET 0\nRESET");
        assert_eq!(f.before[3].qubit(0), Some(PauliState::ZPlus));
        assert_eq!(f.before[3].qubit(1), None);
        assert_eq!(f.exit.qubit(1), Some(PauliState::ZPlus));
    }

    #[test]
    fn exchange_and_storage_kind() {
        let (_, f) = run("DECLARE a BIT\nDECLARE b INTEGER\nMOVE b 3\nEXCHANGE a b\nMOVE a 3");
        assert_eq!(f.before[4].cell(&cell("a")), Some(Value::Int(1)));
        assert_eq!(f.before[4].cell(&cell("b")), None);
        assert_eq!(f.exit.cell(&cell("a")), Some(Value::Int(1)));
    }

    #[test]
    fn meet_keeps_agreement() {
        let mut a = AbstractState::program_entry();
        let b = AbstractState::unknown();
        a.set_cell(&cell("x"), Some(Value::Int(1)));
        let m = a.meet(&a.clone());
        assert_eq!(m, a);
        let m = a.meet(&b);
        assert_eq!(m.cell(&cell("x")), None);
        assert_eq!(m.qubit(0), None);
    }
}
