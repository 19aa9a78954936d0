// SPDX-License-Identifier: Apache-2.0

//! The Quil subset: memory regions, instructions, device classes and
//! read/write resource sets.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

mod emit;
mod parse;
mod value;

pub use parse::{parse, ParseError};
pub use value::{binary_op, store_convert, unary_op, ArithError, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScalarKind {
    Bit,
    Octet,
    Integer,
    Real,
}

impl ScalarKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ScalarKind::Bit => "BIT",
            ScalarKind::Octet => "OCTET",
            ScalarKind::Integer => "INTEGER",
            ScalarKind::Real => "REAL",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "BIT" => ScalarKind::Bit,
            "OCTET" => ScalarKind::Octet,
            "INTEGER" => ScalarKind::Integer,
            "REAL" => ScalarKind::Real,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MemoryRegion {
    pub name: String,
    pub kind: ScalarKind,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoryRef {
    pub region: String,
    pub index: usize,
}

impl MemoryRef {
    pub fn new(region: impl Into<String>, index: usize) -> Self {
        MemoryRef {
            region: region.into(),
            index,
        }
    }
}

impl fmt::Display for MemoryRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.region, self.index)
    }
}

/// Gates the optimizer understands. Anything else is rejected by the parser.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateName {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rx,
    Ry,
    Rz,
    Phase,
    Cnot,
    Cz,
    Ccnot,
    Swap,
}

impl GateName {
    pub const ALL: [GateName; 15] = [
        GateName::I,
        GateName::X,
        GateName::Y,
        GateName::Z,
        GateName::H,
        GateName::S,
        GateName::T,
        GateName::Rx,
        GateName::Ry,
        GateName::Rz,
        GateName::Phase,
        GateName::Cnot,
        GateName::Cz,
        GateName::Ccnot,
        GateName::Swap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::I => "I",
            GateName::X => "X",
            GateName::Y => "Y",
            GateName::Z => "Z",
            GateName::H => "H",
            GateName::S => "S",
            GateName::T => "T",
            GateName::Rx => "RX",
            GateName::Ry => "RY",
            GateName::Rz => "RZ",
            GateName::Phase => "PHASE",
            GateName::Cnot => "CNOT",
            GateName::Cz => "CZ",
            GateName::Ccnot => "CCNOT",
            GateName::Swap => "SWAP",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        GateName::ALL.iter().copied().find(|g| g.as_str() == s)
    }

    pub fn qubit_count(self) -> usize {
        match self {
            GateName::Cnot | GateName::Cz | GateName::Swap => 2,
            GateName::Ccnot => 3,
            _ => 1,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateName::Rx | GateName::Ry | GateName::Rz | GateName::Phase => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opcode {
    Move,
    Exchange,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Not,
    And,
    Ior,
    Xor,
}

impl Opcode {
    pub const ALL: [Opcode; 11] = [
        Opcode::Move,
        Opcode::Exchange,
        Opcode::Add,
        Opcode::Sub,
        Opcode::Mul,
        Opcode::Div,
        Opcode::Neg,
        Opcode::Not,
        Opcode::And,
        Opcode::Ior,
        Opcode::Xor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Opcode::Move => "MOVE",
            Opcode::Exchange => "EXCHANGE",
            Opcode::Add => "ADD",
            Opcode::Sub => "SUB",
            Opcode::Mul => "MUL",
            Opcode::Div => "DIV",
            Opcode::Neg => "NEG",
            Opcode::Not => "NOT",
            Opcode::And => "AND",
            Opcode::Ior => "IOR",
            Opcode::Xor => "XOR",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Opcode::ALL.iter().copied().find(|o| o.as_str() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Opcode::Neg | Opcode::Not => 1,
            _ => 2,
        }
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Opcode::Not | Opcode::And | Opcode::Ior | Opcode::Xor)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Ref(MemoryRef),
    Lit(Value),
}

impl Operand {
    pub fn as_ref(&self) -> Option<&MemoryRef> {
        match self {
            Operand::Ref(r) => Some(r),
            Operand::Lit(_) => None,
        }
    }
}

/// A gate parameter: either a fixed real or a classical memory cell read at
/// execution time.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Lit(f64),
    Ref(MemoryRef),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Declare(MemoryRegion),
    Gate {
        name: GateName,
        params: Vec<f64>,
        qubits: Vec<u32>,
    },
    /// Gate with at least one memory-reference parameter.
    ParamGate {
        name: GateName,
        params: Vec<Param>,
        qubits: Vec<u32>,
    },
    Classical {
        opcode: Opcode,
        operands: Vec<Operand>,
    },
    Measure {
        qubit: u32,
        target: Option<MemoryRef>,
    },
    Reset(Option<u32>),
    Label(String),
    Jump(String),
    JumpWhen {
        target: String,
        condition: MemoryRef,
    },
    JumpUnless {
        target: String,
        condition: MemoryRef,
    },
    Halt,
}

impl Op {
    /// Builds a gate, choosing `Gate` when every parameter is a literal.
    pub fn gate(name: GateName, params: Vec<Param>, qubits: Vec<u32>) -> Op {
        if params.iter().all(|p| matches!(p, Param::Lit(_))) {
            let params = params
                .into_iter()
                .map(|p| match p {
                    Param::Lit(v) => v,
                    Param::Ref(_) => unreachable!(),
                })
                .collect();
            Op::Gate {
                name,
                params,
                qubits,
            }
        } else {
            Op::ParamGate {
                name,
                params,
                qubits,
            }
        }
    }

    pub fn classical(opcode: Opcode, operands: Vec<Operand>) -> Op {
        Op::Classical { opcode, operands }
    }

    pub fn is_label(&self) -> bool {
        matches!(self, Op::Label(_))
    }

    pub fn is_conditional_jump(&self) -> bool {
        matches!(self, Op::JumpWhen { .. } | Op::JumpUnless { .. })
    }

    pub fn jump_target(&self) -> Option<&str> {
        match self {
            Op::Jump(t) => Some(t),
            Op::JumpWhen { target, .. } | Op::JumpUnless { target, .. } => Some(target),
            _ => None,
        }
    }

    /// Qubits the instruction acts on. `RESET` without operand is reported as
    /// touching no specific qubit.
    pub fn qubits(&self) -> Vec<u32> {
        match self {
            Op::Gate { qubits, .. } | Op::ParamGate { qubits, .. } => qubits.clone(),
            Op::Measure { qubit, .. } => vec![*qubit],
            Op::Reset(Some(q)) => vec![*q],
            _ => Vec::new(),
        }
    }

    pub fn memory_refs(&self) -> Vec<&MemoryRef> {
        match self {
            Op::ParamGate { params, .. } => params
                .iter()
                .filter_map(|p| match p {
                    Param::Ref(r) => Some(r),
                    Param::Lit(_) => None,
                })
                .collect(),
            Op::Classical { operands, .. } => operands.iter().filter_map(Operand::as_ref).collect(),
            Op::Measure {
                target: Some(t), ..
            } => vec![t],
            Op::JumpWhen { condition, .. } | Op::JumpUnless { condition, .. } => vec![condition],
            _ => Vec::new(),
        }
    }
}

/// One Quil statement. Equality ignores the source line.
#[derive(Clone, Debug)]
pub struct Instruction {
    pub op: Op,
    pub line: usize,
}

impl PartialEq for Instruction {
    fn eq(&self, other: &Self) -> bool {
        self.op == other.op
    }
}

impl Instruction {
    pub fn new(op: Op) -> Self {
        Instruction { op, line: 0 }
    }

    pub fn at_line(op: Op, line: usize) -> Self {
        Instruction { op, line }
    }

    pub fn device_class(&self) -> DeviceClass {
        classify(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeviceClass {
    Quantum,
    Classical,
    Hybrid,
}

/// Which device(s) must execute the instruction.
pub fn classify(instruction: &Instruction) -> DeviceClass {
    match &instruction.op {
        Op::Gate { .. } => DeviceClass::Quantum,
        Op::Classical { .. } | Op::Declare(_) => DeviceClass::Classical,
        Op::ParamGate { .. }
        | Op::Measure { .. }
        | Op::Reset(_)
        | Op::Label(_)
        | Op::Jump(_)
        | Op::JumpWhen { .. }
        | Op::JumpUnless { .. }
        | Op::Halt => DeviceClass::Hybrid,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resource {
    Cell(MemoryRef),
    Qubit(u32),
    /// Every qubit at once; written by a bare `RESET`.
    AllQubits,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Resources {
    pub reads: BTreeSet<Resource>,
    pub writes: BTreeSet<Resource>,
}

impl Resources {
    fn read(&mut self, r: Resource) {
        self.reads.insert(r);
    }

    fn write(&mut self, r: Resource) {
        self.writes.insert(r);
    }

    fn touch(&mut self, r: Resource) {
        self.reads.insert(r.clone());
        self.writes.insert(r);
    }

    /// True when executing `self` and `later` in the opposite order could
    /// change the result.
    pub fn conflicts_with(&self, later: &Resources) -> bool {
        let overlaps = |a: &BTreeSet<Resource>, b: &BTreeSet<Resource>| {
            a.iter().any(|x| b.iter().any(|y| resources_alias(x, y)))
        };
        overlaps(&self.writes, &later.reads)
            || overlaps(&self.writes, &later.writes)
            || overlaps(&self.reads, &later.writes)
    }
}

fn resources_alias(a: &Resource, b: &Resource) -> bool {
    match (a, b) {
        (Resource::AllQubits, Resource::Qubit(_) | Resource::AllQubits)
        | (Resource::Qubit(_), Resource::AllQubits) => true,
        _ => a == b,
    }
}

/// Read and write sets of an instruction. `DECLARE` writes every cell of its
/// region.
pub fn resources(instruction: &Instruction) -> Resources {
    let mut res = Resources::default();
    match &instruction.op {
        Op::Declare(region) => {
            for i in 0..region.length {
                res.write(Resource::Cell(MemoryRef::new(region.name.clone(), i)));
            }
        }
        Op::Gate { qubits, .. } => {
            for q in qubits {
                res.touch(Resource::Qubit(*q));
            }
        }
        Op::ParamGate { params, qubits, .. } => {
            for q in qubits {
                res.touch(Resource::Qubit(*q));
            }
            for p in params {
                if let Param::Ref(r) = p {
                    res.read(Resource::Cell(r.clone()));
                }
            }
        }
        Op::Classical { opcode, operands } => {
            let cell = |o: &Operand| o.as_ref().map(|r| Resource::Cell(r.clone()));
            match opcode {
                Opcode::Move => {
                    if let Some(r) = cell(&operands[0]) {
                        res.write(r);
                    }
                    if let Some(r) = operands.get(1).and_then(cell) {
                        res.read(r);
                    }
                }
                Opcode::Exchange => {
                    for o in operands {
                        if let Some(r) = cell(o) {
                            res.touch(r);
                        }
                    }
                }
                _ => {
                    if let Some(r) = cell(&operands[0]) {
                        res.touch(r);
                    }
                    for o in &operands[1..] {
                        if let Some(r) = cell(o) {
                            res.read(r);
                        }
                    }
                }
            }
        }
        Op::Measure { qubit, target } => {
            res.touch(Resource::Qubit(*qubit));
            if let Some(t) = target {
                res.write(Resource::Cell(t.clone()));
            }
        }
        Op::Reset(Some(q)) => res.write(Resource::Qubit(*q)),
        Op::Reset(None) => res.write(Resource::AllQubits),
        Op::JumpWhen { condition, .. } | Op::JumpUnless { condition, .. } => {
            res.read(Resource::Cell(condition.clone()))
        }
        Op::Label(_) | Op::Jump(_) | Op::Halt => {}
    }
    res
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("duplicate memory region `{0}`")]
    DuplicateRegion(String),
    #[error("memory region `{0}` must have length >= 1")]
    EmptyRegion(String),
    #[error("reference to undeclared memory region `{0}`")]
    UndeclaredRegion(String),
    #[error("index {index} out of bounds for region `{region}` of length {length}")]
    IndexOutOfBounds {
        region: String,
        index: usize,
        length: usize,
    },
    #[error("duplicate label `@{0}`")]
    DuplicateLabel(String),
    #[error("jump to undefined label `@{0}`")]
    UndefinedLabel(String),
    #[error("{0}")]
    Malformed(String),
}

/// A validated program. Regions mirror the `DECLARE` instructions, which also
/// occupy their own positions in `instructions`.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    regions: Vec<MemoryRegion>,
    instructions: Vec<Instruction>,
    readout: BTreeSet<String>,
}

impl Program {
    /// Validates `instructions`. Without an explicit readout set the region
    /// named `ro` is used if declared, otherwise every region.
    pub fn new(
        instructions: Vec<Instruction>,
        readout: Option<BTreeSet<String>>,
    ) -> Result<Program, ValidationError> {
        let mut regions: Vec<MemoryRegion> = Vec::new();
        let mut seen = HashSet::new();
        for instr in &instructions {
            if let Op::Declare(region) = &instr.op {
                if !seen.insert(region.name.clone()) {
                    return Err(ValidationError::DuplicateRegion(region.name.clone()));
                }
                if region.length == 0 {
                    return Err(ValidationError::EmptyRegion(region.name.clone()));
                }
                regions.push(region.clone());
            }
        }
        let readout = match readout {
            Some(set) => set,
            None if seen.contains("ro") => BTreeSet::from(["ro".to_string()]),
            None => regions.iter().map(|r| r.name.clone()).collect(),
        };
        let program = Program {
            regions,
            instructions,
            readout,
        };
        program.validate()?;
        Ok(program)
    }

    pub fn empty() -> Program {
        Program {
            regions: Vec::new(),
            instructions: Vec::new(),
            readout: BTreeSet::new(),
        }
    }

    fn validate(&self) -> Result<(), ValidationError> {
        for name in &self.readout {
            if self.region(name).is_none() {
                return Err(ValidationError::UndeclaredRegion(name.clone()));
            }
        }
        let mut labels = HashSet::new();
        for instr in &self.instructions {
            if let Op::Label(l) = &instr.op {
                if !labels.insert(l.as_str()) {
                    return Err(ValidationError::DuplicateLabel(l.clone()));
                }
            }
        }
        for instr in &self.instructions {
            if let Some(t) = instr.op.jump_target() {
                if !labels.contains(t) {
                    return Err(ValidationError::UndefinedLabel(t.to_string()));
                }
            }
            for r in instr.op.memory_refs() {
                self.check_ref(r)?;
            }
            self.check_shape(&instr.op)?;
        }
        Ok(())
    }

    fn check_ref(&self, r: &MemoryRef) -> Result<(), ValidationError> {
        let region = self
            .region(&r.region)
            .ok_or_else(|| ValidationError::UndeclaredRegion(r.region.clone()))?;
        if r.index >= region.length {
            return Err(ValidationError::IndexOutOfBounds {
                region: r.region.clone(),
                index: r.index,
                length: region.length,
            });
        }
        Ok(())
    }

    fn check_shape(&self, op: &Op) -> Result<(), ValidationError> {
        let malformed = |m: String| Err(ValidationError::Malformed(m));
        match op {
            Op::Gate {
                name,
                params,
                qubits,
            } => {
                check_gate_shape(*name, params.len(), qubits)?;
            }
            Op::ParamGate {
                name,
                params,
                qubits,
            } => {
                check_gate_shape(*name, params.len(), qubits)?;
                if !params.iter().any(|p| matches!(p, Param::Ref(_))) {
                    return malformed(format!("{} has no memory-reference parameter", name.as_str()));
                }
            }
            Op::Classical { opcode, operands } => {
                if operands.len() != opcode.arity() {
                    return malformed(format!(
                        "{} takes {} operand(s), got {}",
                        opcode.as_str(),
                        opcode.arity(),
                        operands.len()
                    ));
                }
                if operands[0].as_ref().is_none() {
                    return malformed(format!("{} destination must be a memory reference", opcode.as_str()));
                }
                if *opcode == Opcode::Exchange && operands[1].as_ref().is_none() {
                    return malformed("EXCHANGE operands must both be memory references".into());
                }
                if opcode.is_logical() {
                    for o in operands {
                        let real = match o {
                            Operand::Ref(r) => self.kind_of(r) == Some(ScalarKind::Real),
                            Operand::Lit(v) => matches!(v, Value::Real(_)),
                        };
                        if real {
                            return malformed(format!("{} is not defined on REAL operands", opcode.as_str()));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn regions(&self) -> &[MemoryRegion] {
        &self.regions
    }

    pub fn region(&self, name: &str) -> Option<&MemoryRegion> {
        self.regions.iter().find(|r| r.name == name)
    }

    pub fn kind_of(&self, r: &MemoryRef) -> Option<ScalarKind> {
        self.region(&r.region).map(|reg| reg.kind)
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn readout(&self) -> &BTreeSet<String> {
        &self.readout
    }

    /// All cells of the readout regions, in region-name order.
    pub fn readout_cells(&self) -> Vec<MemoryRef> {
        self.readout
            .iter()
            .filter_map(|name| self.region(name))
            .flat_map(|reg| (0..reg.length).map(move |i| MemoryRef::new(reg.name.clone(), i)))
            .collect()
    }

    pub fn with_readout(&self, readout: BTreeSet<String>) -> Result<Program, ValidationError> {
        Program::new(self.instructions.clone(), Some(readout))
    }

    /// Replaces the instruction list, keeping the readout set.
    pub fn with_instructions(&self, instructions: Vec<Instruction>) -> Result<Program, ValidationError> {
        Program::new(instructions, Some(self.readout.clone()))
    }

    pub fn label_positions(&self) -> BTreeMap<&str, usize> {
        self.instructions
            .iter()
            .enumerate()
            .filter_map(|(i, instr)| match &instr.op {
                Op::Label(l) => Some((l.as_str(), i)),
                _ => None,
            })
            .collect()
    }

    pub fn qubit_count(&self) -> usize {
        self.instructions
            .iter()
            .flat_map(|i| i.op.qubits())
            .max()
            .map_or(0, |q| q as usize + 1)
    }

    /// Quil text of a single instruction using this program's region table.
    pub fn instruction_text(&self, position: usize) -> String {
        emit::instruction_to_quil(&self.instructions[position], self)
    }

    pub fn to_quil(&self) -> String {
        emit::program_to_quil(self)
    }
}

fn check_gate_shape(name: GateName, params: usize, qubits: &[u32]) -> Result<(), ValidationError> {
    if params != name.param_count() {
        return Err(ValidationError::Malformed(format!(
            "{} takes {} parameter(s), got {}",
            name.as_str(),
            name.param_count(),
            params
        )));
    }
    if qubits.len() != name.qubit_count() {
        return Err(ValidationError::Malformed(format!(
            "{} acts on {} qubit(s), got {}",
            name.as_str(),
            name.qubit_count(),
            qubits.len()
        )));
    }
    let distinct: HashSet<_> = qubits.iter().collect();
    if distinct.len() != qubits.len() {
        return Err(ValidationError::Malformed(format!(
            "{} qubit operands must be distinct",
            name.as_str()
        )));
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_quil())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(src: &str) -> Instruction {
        let p = parse(src).unwrap();
        p.instructions().last().unwrap().clone()
    }

    fn cell(name: &str) -> Resource {
        Resource::Cell(MemoryRef::new(name, 0))
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&single("H 0")), DeviceClass::Quantum);
        assert_eq!(classify(&single("DECLARE r INTEGER\nMOVE r 2")), DeviceClass::Classical);
        assert_eq!(classify(&single("DECLARE m BIT\nMEASURE 0 m")), DeviceClass::Hybrid);
        assert_eq!(classify(&single("DECLARE r REAL\nRZ(r) 0")), DeviceClass::Hybrid);
        assert_eq!(classify(&single("RZ(1.57) 0")), DeviceClass::Quantum);
        assert_eq!(classify(&single("DECLARE r REAL")), DeviceClass::Classical);
        assert_eq!(classify(&single("MEASURE 1")), DeviceClass::Hybrid);
        assert_eq!(classify(&single("RESET")), DeviceClass::Hybrid);
        assert_eq!(classify(&single("LABEL @a")), DeviceClass::Hybrid);
        assert_eq!(classify(&single("HALT")), DeviceClass::Hybrid);
    }

    #[test]
    fn resources_of_add() {
        let r = resources(&single("DECLARE a INTEGER\nDECLARE b INTEGER\nADD a b"));
        assert_eq!(r.reads, BTreeSet::from([cell("a"), cell("b")]));
        assert_eq!(r.writes, BTreeSet::from([cell("a")]));
    }

    #[test]
    fn resources_of_measure() {
        let r = resources(&single("DECLARE m BIT\nMEASURE 0 m"));
        assert_eq!(r.reads, BTreeSet::from([Resource::Qubit(0)]));
        assert_eq!(r.writes, BTreeSet::from([Resource::Qubit(0), cell("m")]));
    }

    #[test]
    fn resources_of_cnot_and_move() {
        let r = resources(&single("CNOT 0 1"));
        let both = BTreeSet::from([Resource::Qubit(0), Resource::Qubit(1)]);
        assert_eq!(r.reads, both);
        assert_eq!(r.writes, both);

        let r = resources(&single("DECLARE a INTEGER\nDECLARE b INTEGER\nMOVE a b"));
        assert_eq!(r.reads, BTreeSet::from([cell("b")]));
        assert_eq!(r.writes, BTreeSet::from([cell("a")]));
    }

    #[test]
    fn only_markers_touch_nothing() {
        let src = "DECLARE a BIT[2]\nLABEL @x\nJUMP-WHEN @x a[1]\nJUMP @x\nHALT\nRESET\nEXCHANGE a[0] a[1]\nRZ(a[0]) 2";
        let p = parse(src).unwrap();
        for instr in p.instructions() {
            let r = resources(instr);
            let empty = r.reads.is_empty() && r.writes.is_empty();
            let marker = matches!(instr.op, Op::Label(_) | Op::Jump(_) | Op::Halt);
            assert_eq!(empty, marker, "{:?}", instr.op);
        }
    }

    #[test]
    fn default_readout_prefers_ro() {
        let p = parse("DECLARE ro BIT[2]\nDECLARE tmp INTEGER").unwrap();
        assert_eq!(p.readout(), &BTreeSet::from(["ro".to_string()]));
        let p = parse("DECLARE a BIT\nDECLARE b INTEGER").unwrap();
        assert_eq!(p.readout().len(), 2);
    }

    #[test]
    fn logical_ops_reject_reals() {
        assert!(parse("DECLARE r REAL\nNOT r").is_err());
        assert!(parse("DECLARE b BIT\nAND b 1.5").is_err());
    }
}
