// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graphs::Ddg;
use crate::ir::{DeviceClass, Program};

/// Direct dependencies of each hybrid node, as DDG node indices. Another
/// hybrid instruction blocks the search: it is recorded but its own
/// ancestors are not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HybridDependencies {
    pub deps: BTreeMap<usize, BTreeSet<usize>>,
}

impl HybridDependencies {
    /// Hybrid nodes in node order.
    pub fn hybrids(&self) -> Vec<usize> {
        self.deps.keys().copied().collect()
    }
}

pub fn is_hybrid_node(ddg: &Ddg, program: &Program, node: usize) -> bool {
    program.instructions()[ddg.nodes[node]].device_class() == DeviceClass::Hybrid
}

fn ancestors(preds: &[Vec<usize>], of: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<usize> = preds[of].iter().copied().collect();
    while let Some(n) = queue.pop_front() {
        if seen.insert(n) {
            queue.extend(preds[n].iter().copied());
        }
    }
    seen
}

pub fn find_hybrid_dependencies(ddg: &Ddg, program: &Program) -> HybridDependencies {
    let preds = ddg.predecessors();
    let mut out = HybridDependencies::default();
    for h in (0..ddg.len()).filter(|&n| is_hybrid_node(ddg, program, n)) {
        let mut found = BTreeSet::new();
        let mut queue: VecDeque<usize> = preds[h].iter().copied().collect();
        while let Some(n) = queue.pop_front() {
            if !found.insert(n) {
                continue;
            }
            if !is_hybrid_node(ddg, program, n) {
                queue.extend(preds[n].iter().copied());
            }
        }
        let covered: BTreeSet<usize> = found
            .iter()
            .filter(|&&n| is_hybrid_node(ddg, program, n))
            .flat_map(|&n| ancestors(&preds, n))
            .collect();
        let minimal = found.difference(&covered).copied().collect();
        out.deps.insert(h, minimal);
    }
    out
}
