// SPDX-License-Identifier: Apache-2.0

//! Control-flow graph whose blocks are split by device. Between two hybrid
//! instructions the classical and quantum work form a pair of parallel blocks.

use serde::Serialize;

use crate::ir::{DeviceClass, Op, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    QuantumOnly,
    ClassicalOnly,
    HybridControl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicBlock {
    pub id: usize,
    pub kind: BlockKind,
    /// Program positions.
    pub instructions: Vec<usize>,
    pub partner: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cfg {
    pub blocks: Vec<BasicBlock>,
    pub edges: Vec<(usize, usize)>,
    pub entry: Option<usize>,
}

/// Blocks sharing one position in the flow: a single hybrid block or a
/// classical/quantum pair.
type Group = Vec<usize>;

pub fn build_cfg(program: &Program) -> Cfg {
    let instrs = program.instructions();
    let n = instrs.len();
    let mut leader = vec![false; n + 1];
    if n > 0 {
        leader[0] = true;
    }
    for (i, instr) in instrs.iter().enumerate() {
        match &instr.op {
            Op::Label(_) => leader[i] = true,
            Op::Jump(_) | Op::JumpWhen { .. } | Op::JumpUnless { .. } | Op::Halt => leader[i + 1] = true,
            _ => {}
        }
    }

    let mut cfg = Cfg::default();
    let mut first_group_at = vec![None; n];
    // (groups of this straight-line block, last position)
    let mut straight: Vec<(Vec<Group>, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let start = i;
        let mut end = i + 1;
        while end < n && !leader[end] {
            end += 1;
        }
        let mut groups: Vec<Group> = Vec::new();
        let mut classical = Vec::new();
        let mut quantum = Vec::new();
        let flush = |cfg: &mut Cfg, groups: &mut Vec<Group>, c: &mut Vec<usize>, q: &mut Vec<usize>| {
            let mut group = Vec::new();
            for (kind, list) in [(BlockKind::ClassicalOnly, c), (BlockKind::QuantumOnly, q)] {
                if !list.is_empty() {
                    group.push(push_block(cfg, kind, std::mem::take(list)));
                }
            }
            if let [a, b] = group[..] {
                cfg.blocks[a].partner = Some(b);
                cfg.blocks[b].partner = Some(a);
            }
            if !group.is_empty() {
                groups.push(group);
            }
        };
        for (pos, instr) in instrs.iter().enumerate().take(end).skip(start) {
            match instr.device_class() {
                DeviceClass::Classical => classical.push(pos),
                DeviceClass::Quantum => quantum.push(pos),
                DeviceClass::Hybrid => {
                    flush(&mut cfg, &mut groups, &mut classical, &mut quantum);
                    groups.push(vec![push_block(&mut cfg, BlockKind::HybridControl, vec![pos])]);
                }
            }
        }
        flush(&mut cfg, &mut groups, &mut classical, &mut quantum);
        first_group_at[start] = Some(groups[0].clone());
        for w in groups.windows(2) {
            connect(&mut cfg, &w[0], &w[1]);
        }
        straight.push((groups, end - 1));
        i = end;
    }

    let labels = program.label_positions();
    for (k, (groups, last)) in straight.iter().enumerate() {
        let tail = groups.last().expect("blocks are never empty");
        let op = &instrs[*last].op;
        if let Some(target) = op.jump_target() {
            let tpos = labels[target];
            let head = first_group_at[tpos].as_ref().expect("labels lead blocks");
            connect(&mut cfg, tail, head);
        }
        let falls_through = !matches!(op, Op::Jump(_) | Op::Halt);
        if falls_through {
            if let Some((next, _)) = straight.get(k + 1) {
                connect(&mut cfg, tail, &next[0]);
            }
        }
    }
    cfg.edges.sort_unstable();
    cfg.edges.dedup();
    cfg.entry = straight.first().map(|(g, _)| g[0][0]);
    cfg
}

fn push_block(cfg: &mut Cfg, kind: BlockKind, instructions: Vec<usize>) -> usize {
    let id = cfg.blocks.len();
    cfg.blocks.push(BasicBlock {
        id,
        kind,
        instructions,
        partner: None,
    });
    id
}

fn connect(cfg: &mut Cfg, from: &Group, to: &Group) {
    for &a in from {
        for &b in to {
            cfg.edges.push((a, b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse;

    fn kinds(cfg: &Cfg) -> Vec<BlockKind> {
        cfg.blocks.iter().map(|b| b.kind).collect()
    }

    #[test]
    fn interleaved_run_becomes_parallel_pair() {
        let p = parse("DECLARE a INTEGER\nH 0\nMOVE a 1\nX 0").unwrap();
        let cfg = build_cfg(&p);
        assert_eq!(kinds(&cfg), vec![BlockKind::ClassicalOnly, BlockKind::QuantumOnly]);
        assert_eq!(cfg.blocks[0].instructions, vec![0, 2]);
        assert_eq!(cfg.blocks[1].instructions, vec![1, 3]);
        assert_eq!(cfg.blocks[0].partner, Some(1));
        assert!(cfg.edges.is_empty());
    }

    #[test]
    fn classical_only() {
        let p = parse("DECLARE a INTEGER\nMOVE a 1\nADD a 2").unwrap();
        let cfg = build_cfg(&p);
        assert_eq!(kinds(&cfg), vec![BlockKind::ClassicalOnly]);
        assert!(cfg.edges.is_empty());
        assert_eq!(cfg.entry, Some(0));
    }

    #[test]
    fn listing_splits_at_jump_and_label() {
        let src = "DECLARE m BIT\nH 0\nMEASURE 0 m\nJUMP-WHEN @label m\nY 0\nLABEL @label\nZ 0\nMEASURE 0 m";
        let cfg = build_cfg(&parse(src).unwrap());
        use BlockKind::*;
        assert_eq!(
            kinds(&cfg),
            vec![ClassicalOnly, QuantumOnly, HybridControl, HybridControl, QuantumOnly, HybridControl, QuantumOnly, HybridControl]
        );
        // jump edge to the label block and fall-through into Y 0
        assert!(cfg.edges.contains(&(3, 5)));
        assert!(cfg.edges.contains(&(3, 4)));
        assert!(cfg.edges.contains(&(4, 5)));
        assert!(cfg.edges.contains(&(0, 2)) && cfg.edges.contains(&(1, 2)));
    }

    #[test]
    fn halt_has_no_fall_through() {
        let cfg = build_cfg(&parse("HALT\nX 0").unwrap());
        assert!(cfg.edges.is_empty());
    }

    #[test]
    fn empty_program() {
        let cfg = build_cfg(&crate::ir::Program::empty());
        assert!(cfg.blocks.is_empty());
        assert_eq!(cfg.entry, None);
    }
}
