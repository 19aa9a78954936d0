// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::{Instruction, MemoryRef, Op, Operand, Param, Program};

fn ref_text(r: &MemoryRef, program: &Program) -> String {
    match program.region(&r.region) {
        Some(reg) if reg.length == 1 && r.index == 0 => r.region.clone(),
        _ => r.to_string(),
    }
}

pub(crate) fn instruction_to_quil(instr: &Instruction, program: &Program) -> String {
    let mut out = String::new();
    match &instr.op {
        Op::Declare(region) => {
            let _ = write!(out, "DECLARE {} {}", region.name, region.kind.keyword());
            if region.length != 1 {
                let _ = write!(out, "[{}]", region.length);
            }
        }
        Op::Gate {
            name,
            params,
            qubits,
        } => {
            out.push_str(name.as_str());
            if !params.is_empty() {
                let ps: Vec<String> = params.iter().map(|p| format!("{p:?}")).collect();
                let _ = write!(out, "({})", ps.join(", "));
            }
            push_qubits(&mut out, qubits);
        }
        Op::ParamGate {
            name,
            params,
            qubits,
        } => {
            out.push_str(name.as_str());
            let ps: Vec<String> = params
                .iter()
                .map(|p| match p {
                    Param::Lit(v) => format!("{v:?}"),
                    Param::Ref(r) => ref_text(r, program),
                })
                .collect();
            let _ = write!(out, "({})", ps.join(", "));
            push_qubits(&mut out, qubits);
        }
        Op::Classical { opcode, operands } => {
            out.push_str(opcode.as_str());
            for o in operands {
                out.push(' ');
                match o {
                    Operand::Ref(r) => out.push_str(&ref_text(r, program)),
                    Operand::Lit(v) => out.push_str(&v.to_string()),
                }
            }
        }
        Op::Measure { qubit, target } => {
            let _ = write!(out, "MEASURE {qubit}");
            if let Some(t) = target {
                let _ = write!(out, " {}", ref_text(t, program));
            }
        }
        Op::Reset(q) => {
            out.push_str("RESET");
            if let Some(q) = q {
                let _ = write!(out, " {q}");
            }
        }
        Op::Label(l) => {
            let _ = write!(out, "LABEL @{l}");
        }
        Op::Jump(t) => {
            let _ = write!(out, "JUMP @{t}");
        }
        Op::JumpWhen { target, condition } => {
            let _ = write!(out, "JUMP-WHEN @{target} {}", ref_text(condition, program));
        }
        Op::JumpUnless { target, condition } => {
            let _ = write!(out, "JUMP-UNLESS @{target} {}", ref_text(condition, program));
        }
        Op::Halt => out.push_str("HALT"),
    }
    out
}

fn push_qubits(out: &mut String, qubits: &[u32]) {
    for q in qubits {
        let _ = write!(out, " {q}");
    }
}

pub(crate) fn program_to_quil(program: &Program) -> String {
    let mut out = String::new();
    for instr in program.instructions() {
        out.push_str(&instruction_to_quil(instr, program));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::ir::parse;

    const LISTING: &str = "DECLARE m BIT
H 0
MEASURE 0 m
JUMP-WHEN @label m
Y 0
LABEL @label
Z 0
MEASURE 0 m
";

    #[test]
    fn listing_round_trips_byte_equal() {
        let p = parse(LISTING).unwrap();
        assert_eq!(p.to_quil(), LISTING);
    }

    #[test]
    fn empty_program_emits_nothing() {
        assert_eq!(parse("").unwrap().to_quil(), "");
    }

    #[test]
    fn indexed_and_literal_forms() {
        let src = "DECLARE ro BIT[2]\nDECLARE th REAL\nRZ(th) 1\nRX(-1.5) 0\nMOVE th 0.25\nMEASURE 1 ro[1]\nRESET\n";
        let p = parse(src).unwrap();
        assert_eq!(p.to_quil(), src);
        assert_eq!(parse(&p.to_quil()).unwrap(), p);
    }
}
