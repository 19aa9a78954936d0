// SPDX-License-Identifier: Apache-2.0

//! Reference interpreter. Every measurement outcome is followed as its own
//! branch, so the result is the exact distribution over readout values up to
//! pruning and the step limit.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::ir::{
    binary_op, store_convert, unary_op, ArithError, GateName, MemoryRef, Op, Opcode, Operand, Param, Program,
    Value,
};

pub const MAX_QUBITS: usize = 10;
pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_PRUNE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("program uses {0} qubits, the interpreter supports at most {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("position {position}: {source}")]
    Arithmetic { position: usize, source: ArithError },
    #[error("jump to undefined label `@{0}`")]
    InvalidJump(String),
    #[error("readout regions differ between the programs")]
    ReadoutMismatch,
    #[error("max-steps must be at least 1")]
    NoSteps,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReadoutDistribution {
    /// Readout valuation, rendered as `cell=value` pairs, to probability.
    pub probabilities: BTreeMap<String, f64>,
    /// Probability lost to pruning or the step limit.
    pub truncated_mass: f64,
}

impl ReadoutDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Half the L1 distance between the two distributions.
    pub fn total_variation(&self, other: &ReadoutDistribution) -> f64 {
        let keys: std::collections::BTreeSet<&String> =
            self.probabilities.keys().chain(other.probabilities.keys()).collect();
        0.5 * keys
            .into_iter()
            .map(|k| {
                let a = self.probabilities.get(k).copied().unwrap_or(0.0);
                let b = other.probabilities.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .sum::<f64>()
    }
}

#[derive(Clone, Debug)]
struct Branch {
    amps: Vec<Complex64>,
    memory: BTreeMap<String, Vec<Value>>,
    prob: f64,
    pc: usize,
    steps: usize,
}

impl Branch {
    fn read(&self, r: &MemoryRef) -> Value {
        self.memory[&r.region][r.index]
    }

    fn write(&mut self, program: &Program, r: &MemoryRef, v: Value) {
        let kind = program.kind_of(r).expect("validated reference");
        self.memory.get_mut(&r.region).expect("declared region")[r.index] = store_convert(v, kind);
    }

    fn operand(&self, o: &Operand) -> Value {
        match o {
            Operand::Lit(v) => *v,
            Operand::Ref(r) => self.read(r),
        }
    }

    fn prob_one(&self, q: u32) -> f64 {
        let mask = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Keeps the amplitudes where qubit `q` equals `bit` and renormalizes.
    fn collapse(&mut self, q: u32, bit: bool, p: f64) {
        let mask = 1usize << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == bit {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }
}

pub fn gate_matrix(name: GateName, params: &[f64]) -> Option<[[Complex64; 2]; 2]> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match name {
        GateName::I => [[one, z], [z, one]],
        GateName::X => [[z, one], [one, z]],
        GateName::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        GateName::Z => [[one, z], [z, -one]],
        GateName::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateName::S => [[one, z], [z, c(0.0, 1.0)]],
        GateName::T => [[one, z], [z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        GateName::Rx => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateName::Ry => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateName::Rz => [
            [Complex64::from_polar(1.0, -params[0] / 2.0), z],
            [z, Complex64::from_polar(1.0, params[0] / 2.0)],
        ],
        GateName::Phase => [[one, z], [z, Complex64::from_polar(1.0, params[0])]],
        GateName::Cnot | GateName::Cz | GateName::Ccnot | GateName::Swap => return None,
    })
}

fn apply_gate(amps: &mut [Complex64], name: GateName, params: &[f64], qubits: &[u32]) {
    let bit = |i: usize, q: u32| i & (1usize << q) != 0;
    match name {
        GateName::Cnot | GateName::Ccnot => {
            let target = *qubits.last().expect("gate has qubits");
            let controls = &qubits[..qubits.len() - 1];
            let tmask = 1usize << target;
            for i in 0..amps.len() {
                if !bit(i, target) && controls.iter().all(|&c| bit(i, c)) {
                    amps.swap(i, i | tmask);
                }
            }
        }
        GateName::Cz => {
            for (i, a) in amps.iter_mut().enumerate() {
                if bit(i, qubits[0]) && bit(i, qubits[1]) {
                    *a = -*a;
                }
            }
        }
        GateName::Swap => {
            let (a, b) = (qubits[0], qubits[1]);
            for i in 0..amps.len() {
                if bit(i, a) && !bit(i, b) {
                    let j = (i & !(1usize << a)) | (1usize << b);
                    amps.swap(i, j);
                }
            }
        }
        _ => {
            let m = gate_matrix(name, params).expect("single-qubit gate");
            let mask = 1usize << qubits[0];
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let (a0, a1) = (amps[i], amps[i | mask]);
                    amps[i] = m[0][0] * a0 + m[0][1] * a1;
                    amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
    }
}

enum Outcome {
    Continue(Branch),
    Split(Vec<Branch>),
    Done(Branch),
}

fn step(program: &Program, labels: &BTreeMap<&str, usize>, mut b: Branch) -> Result<Outcome, OracleError> {
    let pos = b.pc;
    let instr = &program.instructions()[pos];
    b.pc += 1;
    b.steps += 1;
    let arith = |source| OracleError::Arithmetic { position: pos, source };
    let jump = |t: &str| labels.get(t).copied().ok_or_else(|| OracleError::InvalidJump(t.to_string()));
    match &instr.op {
        Op::Declare(_) | Op::Label(_) => {}
        Op::Gate { name, params, qubits } => apply_gate(&mut b.amps, *name, params, qubits),
        Op::ParamGate { name, params, qubits } => {
            let values: Vec<f64> = params
                .iter()
                .map(|p| match p {
                    Param::Lit(v) => *v,
                    Param::Ref(r) => b.read(r).as_f64(),
                })
                .collect();
            apply_gate(&mut b.amps, *name, &values, qubits);
        }
        Op::Classical { opcode, operands } => {
            let dest = operands[0].as_ref().expect("validated destination");
            match opcode {
                Opcode::Exchange => {
                    let other = operands[1].as_ref().expect("validated operand");
                    let (va, vb) = (b.read(dest), b.read(other));
                    b.write(program, dest, vb);
                    b.write(program, other, va);
                }
                Opcode::Neg | Opcode::Not => {
                    let v = unary_op(*opcode, b.read(dest)).map_err(arith)?;
                    b.write(program, dest, v);
                }
                _ => {
                    let v = binary_op(*opcode, b.read(dest), b.operand(&operands[1])).map_err(arith)?;
                    b.write(program, dest, v);
                }
            }
        }
        Op::Measure { qubit, target } => {
            let branches = split_on(b, *qubit, false)
                .into_iter()
                .map(|(mut br, bit)| {
                    if let Some(t) = target {
                        br.write(program, t, Value::Int(bit as i64));
                    }
                    br
                })
                .collect();
            return Ok(Outcome::Split(branches));
        }
        Op::Reset(q) => {
            let qubits: Vec<u32> = match q {
                Some(q) => vec![*q],
                None => (0..b.amps.len().trailing_zeros()).collect(),
            };
            let mut branches = vec![b];
            for q in qubits {
                branches = branches.into_iter().flat_map(|br| split_on(br, q, true)).map(|(br, _)| br).collect();
            }
            return Ok(Outcome::Split(branches));
        }
        Op::Jump(t) => b.pc = jump(t)?,
        Op::JumpWhen { target, condition } => {
            if b.read(condition).is_nonzero() {
                b.pc = jump(target)?;
            }
        }
        Op::JumpUnless { target, condition } => {
            if !b.read(condition).is_nonzero() {
                b.pc = jump(target)?;
            }
        }
        Op::Halt => return Ok(Outcome::Done(b)),
    }
    Ok(Outcome::Continue(b))
}

/// Projects qubit `q` onto each outcome with nonzero probability. With
/// `reset`, the outcome-1 branch is flipped back to |0>.
fn split_on(b: Branch, q: u32, reset: bool) -> Vec<(Branch, bool)> {
    let p1 = b.prob_one(q).clamp(0.0, 1.0);
    let p0 = 1.0 - p1;
    let mut out = Vec::with_capacity(2);
    for (bit, p) in [(false, p0), (true, p1)] {
        if p <= 0.0 {
            continue;
        }
        let mut br = b.clone();
        br.collapse(q, bit, p);
        br.prob *= p;
        if reset && bit {
            apply_gate(&mut br.amps, GateName::X, &[], &[q]);
        }
        out.push((br, bit));
    }
    out
}

fn readout_key(program: &Program, b: &Branch) -> String {
    program
        .readout_cells()
        .iter()
        .map(|r| format!("{r}={}", b.read(r)))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn interpret(program: &Program, max_steps: usize, prune: f64) -> Result<ReadoutDistribution, OracleError> {
    if max_steps == 0 {
        return Err(OracleError::NoSteps);
    }
    let n = program.qubit_count();
    if n > MAX_QUBITS {
        return Err(OracleError::TooManyQubits(n));
    }
    let labels = program.label_positions();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    let memory = program
        .regions()
        .iter()
        .map(|r| (r.name.clone(), vec![Value::zero(r.kind); r.length]))
        .collect();
    let mut stack = vec![Branch {
        amps,
        memory,
        prob: 1.0,
        pc: 0,
        steps: 0,
    }];
    let mut dist = ReadoutDistribution::default();
    let finish = |dist: &mut ReadoutDistribution, b: &Branch| {
        *dist.probabilities.entry(readout_key(program, b)).or_insert(0.0) += b.prob;
    };
    while let Some(mut b) = stack.pop() {
        loop {
            if b.pc >= program.len() {
                finish(&mut dist, &b);
                break;
            }
            if b.steps >= max_steps {
                dist.truncated_mass += b.prob;
                break;
            }
            match step(program, &labels, b)? {
                Outcome::Continue(next) => b = next,
                Outcome::Done(done) => {
                    finish(&mut dist, &done);
                    break;
                }
                Outcome::Split(branches) => {
                    for br in branches.into_iter().rev() {
                        if br.prob < prune {
                            dist.truncated_mass += br.prob;
                        } else {
                            stack.push(br);
                        }
                    }
                    break;
                }
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub distance: f64,
    pub truncated: (f64, f64),
}

pub fn equivalent(
    a: &Program,
    b: &Program,
    tolerance: f64,
    max_steps: usize,
    prune: f64,
) -> Result<Equivalence, OracleError> {
    let shape = |p: &Program| {
        p.readout()
            .iter()
            .map(|name| p.region(name).map(|r| (r.name.clone(), r.kind, r.length)))
            .collect::<Vec<_>>()
    };
    if shape(a) != shape(b) {
        return Err(OracleError::ReadoutMismatch);
    }
    let da = interpret(a, max_steps, prune)?;
    let db = interpret(b, max_steps, prune)?;
    let distance = da.total_variation(&db);
    Ok(Equivalence {
        equivalent: distance <= tolerance && da.truncated_mass <= tolerance && db.truncated_mass <= tolerance,
        distance,
        truncated: (da.truncated_mass, db.truncated_mass),
    })
}
