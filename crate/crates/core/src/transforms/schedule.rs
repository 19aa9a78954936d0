// SPDX-License-Identifier: Apache-2.0

//! Shared plumbing for the reordering transforms: the graph they schedule
//! on and writing a new node order back into the program.

use fixedbitset::FixedBitSet;

use super::{Change, TransformError};
use crate::graphs::Ddg;
use crate::ir::{DeviceClass, Program};

/// The DDG plus ordering constraints that keep every node inside its
/// straight-line block and the terminator last.
pub(crate) struct SchedGraph {
    pub preds: Vec<Vec<usize>>,
    pub class: Vec<DeviceClass>,
}

impl SchedGraph {
    pub fn new(ddg: &Ddg, program: &Program) -> Self {
        let n = ddg.len();
        let mut preds: Vec<Vec<usize>> = ddg.predecessors();
        let mut prev_block: Vec<usize> = Vec::new();
        let mut cur_block: Vec<usize> = Vec::new();
        for (i, p) in preds.iter_mut().enumerate().take(n) {
            if i > 0 && ddg.blocks[i] != ddg.blocks[i - 1] {
                prev_block = std::mem::take(&mut cur_block);
            }
            p.extend(prev_block.iter().copied());
            cur_block.push(i);
        }
        if let Some(t) = ddg.terminator {
            preds[t].extend((0..n).filter(|&i| i != t));
        }
        for p in &mut preds {
            p.sort_unstable();
            p.dedup();
        }
        let class = ddg
            .nodes
            .iter()
            .map(|&p| program.instructions()[p].device_class())
            .collect();
        SchedGraph { preds, class }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn executable(&self, node: usize, done: &FixedBitSet) -> bool {
        !done.contains(node) && self.preds[node].iter().all(|&p| done.contains(p))
    }

    /// All ancestors of `node`.
    pub fn ancestors(&self, node: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = self.preds[node].clone();
        while let Some(n) = stack.pop() {
            if !seen.put(n) {
                stack.extend(self.preds[n].iter().copied());
            }
        }
        seen
    }
}

/// Rewrites the program so the segment's nodes appear in `order`. Each node
/// stays within the positions of its own block.
pub(crate) fn write_back(
    program: &Program,
    ddg: &Ddg,
    order: &[usize],
) -> Result<(Program, Vec<Change>), TransformError> {
    let n = ddg.len();
    let mut rank = vec![usize::MAX; n];
    for (r, &node) in order.iter().enumerate() {
        rank[node] = r;
    }
    if order.len() != n || rank.contains(&usize::MAX) {
        return Err(TransformError::NotAPermutation);
    }
    for &(a, b) in &ddg.edges {
        if rank[a] > rank[b] {
            return Err(TransformError::EdgeViolated {
                before: ddg.nodes[a],
                after: ddg.nodes[b],
            });
        }
    }
    let old = program.instructions();
    let mut instrs = old.to_vec();
    let mut changes = Vec::new();
    let mut start = 0;
    while start < n {
        let block = ddg.blocks[start];
        let end = (start..n).find(|&i| ddg.blocks[i] != block).unwrap_or(n);
        let slots = &ddg.nodes[start..end];
        let mut placed: Vec<usize> = order.iter().copied().filter(|&i| ddg.blocks[i] == block).collect();
        if placed.len() != slots.len() || placed.iter().any(|&i| i < start || i >= end) {
            return Err(TransformError::CrossesBlock);
        }
        for (&slot, node) in slots.iter().zip(placed.drain(..)) {
            let from = ddg.nodes[node];
            if from != slot {
                instrs[slot] = old[from].clone();
                changes.push(Change {
                    position: slot,
                    description: format!("moved `{}` from position {from}", program.instruction_text(from)),
                });
            }
        }
        start = end;
    }
    Ok((program.with_instructions(instrs)?, changes))
}
