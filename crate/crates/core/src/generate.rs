// SPDX-License-Identifier: Apache-2.0

//! Seeded random programs for property checks. Jumps only go forward, so
//! every generated program terminates.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ir::{
    GateName, Instruction, MemoryRef, MemoryRegion, Op, Opcode, Operand, Param, Program, ScalarKind, Value,
};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_qubits: u32,
    pub max_instructions: usize,
    pub max_conditional_jumps: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_qubits: 6,
            max_instructions: 40,
            max_conditional_jumps: 2,
        }
    }
}

fn cell(name: &str, i: usize) -> MemoryRef {
    MemoryRef::new(name, i)
}

fn r(name: &str, i: usize) -> Operand {
    Operand::Ref(cell(name, i))
}

fn int(v: i64) -> Operand {
    Operand::Lit(Value::Int(v))
}

fn real(v: f64) -> Operand {
    Operand::Lit(Value::Real(v))
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    // a quarter of the time a multiple of pi/2, otherwise arbitrary
    if rng.gen_bool(0.25) {
        std::f64::consts::FRAC_PI_2 * rng.gen_range(-4..=4) as f64
    } else {
        (rng.gen_range(-4000..4000) as f64) / 1000.0
    }
}

fn random_op(rng: &mut ChaCha8Rng, nq: u32) -> Op {
    let q = |rng: &mut ChaCha8Rng| rng.gen_range(0..nq);
    let distinct = |rng: &mut ChaCha8Rng, k: usize| {
        let mut all: Vec<u32> = (0..nq).collect();
        all.shuffle(rng);
        all.truncate(k);
        all
    };
    let bit_cell = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => r("ro", 0),
        1 => r("ro", 1),
        _ => r("b", 0),
    };
    loop {
        let op = match rng.gen_range(0..20) {
            0..=4 => {
                let g = *[GateName::I, GateName::X, GateName::Y, GateName::Z, GateName::H, GateName::S, GateName::T]
                    .choose(rng)
                    .unwrap();
                Op::gate(g, vec![], vec![q(rng)])
            }
            5 => {
                let g = *[GateName::Rx, GateName::Ry, GateName::Rz, GateName::Phase].choose(rng).unwrap();
                Op::gate(g, vec![Param::Lit(angle(rng))], vec![q(rng)])
            }
            6 | 7 if nq >= 2 => {
                let g = *[GateName::Cnot, GateName::Cz, GateName::Swap].choose(rng).unwrap();
                Op::gate(g, vec![], distinct(rng, 2))
            }
            8 if nq >= 3 => Op::gate(GateName::Ccnot, vec![], distinct(rng, 3)),
            9 => {
                let g = *[GateName::Rx, GateName::Ry, GateName::Rz, GateName::Phase].choose(rng).unwrap();
                Op::gate(g, vec![Param::Ref(cell("r", 0))], vec![q(rng)])
            }
            10 | 11 => {
                let target = match rng.gen_range(0..5) {
                    0 => None,
                    1 => Some(cell("b", 0)),
                    2 => Some(cell("i", 0)),
                    k => Some(cell("ro", k - 3)),
                };
                Op::Measure { qubit: q(rng), target }
            }
            12 => Op::Reset(if rng.gen_bool(0.9) { Some(q(rng)) } else { None }),
            13 => Op::classical(Opcode::Move, vec![r("i", 0), int(rng.gen_range(-5..10))]),
            14 => {
                let opc = *[Opcode::Add, Opcode::Sub, Opcode::Mul].choose(rng).unwrap();
                let src = if rng.gen_bool(0.5) { int(rng.gen_range(-3..4)) } else { bit_cell(rng) };
                Op::classical(opc, vec![r("i", 0), src])
            }
            15 => match rng.gen_range(0..4) {
                0 => Op::classical(Opcode::Move, vec![r("r", 0), real(angle(rng))]),
                1 => Op::classical(Opcode::Add, vec![r("r", 0), r("i", 0)]),
                2 => Op::classical(Opcode::Mul, vec![r("r", 0), real(0.5)]),
                _ => Op::classical(Opcode::Div, vec![r("r", 0), real(2.0)]),
            },
            16 => {
                let opc = *[Opcode::And, Opcode::Ior, Opcode::Xor].choose(rng).unwrap();
                let src = if rng.gen_bool(0.5) { int(rng.gen_range(0..2)) } else { bit_cell(rng) };
                Op::classical(opc, vec![r("b", 0), src])
            }
            17 => {
                let opc = *[Opcode::Not, Opcode::Neg].choose(rng).unwrap();
                let dest = if opc == Opcode::Not { bit_cell(rng) } else { r("i", 0) };
                Op::classical(opc, vec![dest])
            }
            18 => Op::classical(Opcode::Move, vec![bit_cell(rng), bit_cell(rng)]),
            19 => Op::classical(Opcode::Exchange, vec![r("b", 0), r("ro", rng.gen_range(0..2))]),
            _ => continue,
        };
        return op;
    }
}

/// A valid program with at most `max_qubits` qubits, `max_instructions`
/// instructions and `max_conditional_jumps` conditional jumps. Readout is
/// the two-bit region `ro`.
pub fn random_program(seed: u64, cfg: &GenConfig) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nq = rng.gen_range(1..=cfg.max_qubits.max(1));
    let declares = [
        ("ro", ScalarKind::Bit, 2),
        ("b", ScalarKind::Bit, 1),
        ("i", ScalarKind::Integer, 1),
        ("r", ScalarKind::Real, 1),
    ];
    let cond = rng.gen_range(0..=cfg.max_conditional_jumps);
    let uncond = usize::from(rng.gen_bool(0.3));
    let jumps = cond + uncond;
    let budget = cfg.max_instructions.saturating_sub(declares.len() + 2 * jumps);
    let body_len = rng.gen_range(budget.min(4)..=budget);
    let body: Vec<Op> = (0..body_len).map(|_| random_op(&mut rng, nq)).collect();

    // (slot, order, op): jumps sort before labels in the same slot
    let mut events: Vec<(usize, usize, Op)> = body.into_iter().enumerate().map(|(i, op)| (i, 2, op)).collect();
    for k in 0..jumps {
        let src = rng.gen_range(0..=body_len);
        let dst = rng.gen_range(src..=body_len);
        let label = format!("l{k}");
        let jump = if k < cond {
            let condition = match rng.gen_range(0..3) {
                0 => cell("b", 0),
                1 => cell("ro", 0),
                _ => cell("i", 0),
            };
            if rng.gen_bool(0.5) {
                Op::JumpWhen { target: label.clone(), condition }
            } else {
                Op::JumpUnless { target: label.clone(), condition }
            }
        } else {
            Op::Jump(label.clone())
        };
        events.push((src, 0, jump));
        events.push((dst, 1, Op::Label(label)));
    }
    events.sort_by_key(|(slot, order, _)| (*slot, *order));

    let mut instrs: Vec<Instruction> = declares
        .iter()
        .map(|(name, kind, length)| {
            Instruction::new(Op::Declare(MemoryRegion {
                name: name.to_string(),
                kind: *kind,
                length: *length,
            }))
        })
        .collect();
    instrs.extend(events.into_iter().map(|(_, _, op)| Instruction::new(op)));
    Program::new(instrs, Some(["ro".to_string()].into())).expect("generator emits valid programs")
}
