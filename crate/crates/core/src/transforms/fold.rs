// SPDX-License-Identifier: Apache-2.0

//! Constant folding from constant-propagation facts.

use std::collections::BTreeMap;

use super::{Change, TransformError, TransformResult};
use crate::analyses::{evaluate, AbstractState};
use crate::ir::{Instruction, Op, Opcode, Operand, Param, Program, ScalarKind, Value};

/// Literal for a constant stored in a cell of `kind`.
fn literal(v: Value, kind: ScalarKind) -> Value {
    match kind {
        ScalarKind::Real => Value::Real(v.as_f64()),
        _ => v,
    }
}

/// The folded form of `instr` given the facts that hold before it, if any
/// operand or the whole instruction can be replaced.
fn fold_one(instr: &Instruction, state: &AbstractState, program: &Program) -> Result<Option<Op>, String> {
    match &instr.op {
        Op::Classical { opcode, operands } if *opcode != Opcode::Exchange => {
            let dest = operands[0].as_ref().expect("validated destination");
            let kind = program.kind_of(dest).expect("validated reference");
            if let Some(result) = evaluate(state, *opcode, operands, program) {
                let v = result.map_err(|e| e.to_string())?;
                let moved = Op::classical(
                    Opcode::Move,
                    vec![Operand::Ref(dest.clone()), Operand::Lit(literal(v, kind))],
                );
                return Ok((moved != instr.op).then_some(moved));
            }
            let mut ops = operands.clone();
            let mut changed = false;
            if operands.len() == 2 {
                if let Operand::Ref(r) = &operands[1] {
                    if let Some(v) = state.cell(r) {
                        let k = program.kind_of(r).expect("validated reference");
                        ops[1] = Operand::Lit(literal(v, k));
                        changed = true;
                    }
                }
            }
            Ok(changed.then(|| Op::classical(*opcode, ops)))
        }
        Op::ParamGate { name, params, qubits } => {
            let mut changed = false;
            let params: Vec<Param> = params
                .iter()
                .map(|p| match p {
                    Param::Ref(r) => match state.cell(r) {
                        Some(v) => {
                            changed = true;
                            Param::Lit(v.as_f64())
                        }
                        None => p.clone(),
                    },
                    Param::Lit(_) => p.clone(),
                })
                .collect();
            Ok(changed.then(|| Op::gate(*name, params, qubits.clone())))
        }
        _ => Ok(None),
    }
}

/// Folds every position that has facts in `states`.
pub fn constant_fold_at(
    program: &Program,
    states: &BTreeMap<usize, AbstractState>,
) -> Result<TransformResult, TransformError> {
    let mut instrs = program.instructions().to_vec();
    let mut changes = Vec::new();
    let mut warnings = Vec::new();
    for (&pos, state) in states {
        match fold_one(&instrs[pos], state, program) {
            Ok(Some(op)) => {
                let before = program.instruction_text(pos);
                instrs[pos] = Instruction::at_line(op, instrs[pos].line);
                changes.push(Change {
                    position: pos,
                    description: format!("folded `{before}`"),
                });
            }
            Ok(None) => {}
            Err(e) => warnings.push(format!("position {pos}: {e}; left unfolded")),
        }
    }
    let out = program.with_instructions(instrs)?;
    let mut result = TransformResult::new(out, changes);
    for c in &mut result.changes {
        c.description = format!("{} to `{}`", c.description, result.program.instruction_text(c.position));
    }
    result.warnings = warnings;
    Ok(result)
}

/// Folds one segment given its facts.
pub fn constant_fold(
    program: &Program,
    seq: &[usize],
    facts: &crate::analyses::ConstFacts,
) -> Result<TransformResult, TransformError> {
    let states = seq.iter().copied().zip(facts.before.iter().cloned()).collect();
    constant_fold_at(program, &states)
}
