// SPDX-License-Identifier: Apache-2.0

//! Dead code elimination from liveness facts.

use std::collections::BTreeSet;

use super::{Change, TransformError, TransformResult};
use crate::analyses::LivenessResult;
use crate::ir::{resources, Op, Program, Resource};

fn is_dead(program: &Program, pos: usize, live: &LivenessResult) -> bool {
    let instr = &program.instructions()[pos];
    match &instr.op {
        Op::Classical { .. } => resources(instr).writes.iter().all(|w| match w {
            Resource::Cell(r) => live.cell_dead(pos, r),
            _ => false,
        }),
        Op::Gate { qubits, .. } | Op::ParamGate { qubits, .. } => {
            qubits.iter().all(|&q| live.qubit_dead(pos, q))
        }
        Op::Measure { qubit, target } => {
            live.qubit_dead(pos, *qubit) && target.as_ref().is_none_or(|t| live.cell_dead(pos, t))
        }
        _ => false,
    }
}

/// Removes dead instructions, then every `DECLARE` of a region that is
/// neither read out nor referenced any more.
pub fn dead_code_elim(program: &Program, live: &LivenessResult) -> Result<TransformResult, TransformError> {
    let positions: BTreeSet<usize> = live
        .dead_classical
        .iter()
        .map(|(p, _)| *p)
        .chain(live.dead_qubit.iter().map(|(p, _)| *p))
        .collect();
    let mut removed: BTreeSet<usize> = positions
        .into_iter()
        .filter(|&p| is_dead(program, p, live))
        .collect();

    let referenced: BTreeSet<&str> = program
        .instructions()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .flat_map(|(_, instr)| instr.op.memory_refs())
        .map(|r| r.region.as_str())
        .collect();
    for (i, instr) in program.instructions().iter().enumerate() {
        if let Op::Declare(region) = &instr.op {
            if !referenced.contains(region.name.as_str()) && !program.readout().contains(&region.name) {
                removed.insert(i);
            }
        }
    }

    let changes = removed
        .iter()
        .map(|&p| Change {
            position: p,
            description: format!("removed `{}`", program.instruction_text(p)),
        })
        .collect();
    let instrs = program
        .instructions()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, instr)| instr.clone())
        .collect();
    Ok(TransformResult::new(program.with_instructions(instrs)?, changes))
}
