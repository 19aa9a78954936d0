// SPDX-License-Identifier: Apache-2.0

//! Balances CPU and QPU work ahead of each hybrid instruction.

use fixedbitset::FixedBitSet;

use super::schedule::{write_back, SchedGraph};
use super::{TransformError, TransformResult};
use crate::analyses::HybridDependencies;
use crate::graphs::Ddg;
use crate::ir::{DeviceClass, Program};

/// New node order for one segment.
///
/// For every relevant instruction (the hybrid ones, then the last sink) the
/// pending ancestors are queued first. While the queued quantum and
/// classical counts differ, the earliest executable instruction of the
/// lagging class is pulled forward. Then the relevant instruction itself is
/// queued. Leftovers follow in node order.
pub(crate) fn reorder_order(ddg: &Ddg, program: &Program, deps: &HybridDependencies) -> Vec<usize> {
    let g = SchedGraph::new(ddg, program);
    let n = g.len();
    let mut relevant = deps.hybrids();
    let succs = ddg.successors();
    if let Some(sink) = (0..n).rev().find(|&i| succs[i].is_empty()) {
        if !relevant.contains(&sink) {
            relevant.push(sink);
        }
    }

    let mut done = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    for r in relevant {
        if done.contains(r) {
            continue;
        }
        let anc = g.ancestors(r);
        let (mut quantum, mut classical) = (0usize, 0usize);
        for a in anc.ones() {
            if done.put(a) {
                continue;
            }
            order.push(a);
            match g.class[a] {
                DeviceClass::Quantum => quantum += 1,
                DeviceClass::Classical => classical += 1,
                DeviceClass::Hybrid => {}
            }
        }
        while quantum != classical {
            let lagging = if quantum > classical {
                DeviceClass::Classical
            } else {
                DeviceClass::Quantum
            };
            let Some(next) = (0..n).find(|&i| i != r && g.class[i] == lagging && g.executable(i, &done)) else {
                break;
            };
            done.insert(next);
            order.push(next);
            if lagging == DeviceClass::Quantum {
                quantum += 1;
            } else {
                classical += 1;
            }
        }
        done.insert(r);
        order.push(r);
    }
    for i in 0..n {
        if !done.contains(i) {
            order.push(i);
        }
    }
    order
}

pub fn reorder_instructions(
    program: &Program,
    ddg: &Ddg,
    deps: &HybridDependencies,
) -> Result<TransformResult, TransformError> {
    let order = reorder_order(ddg, program, deps);
    let (program, changes) = write_back(program, ddg, &order)?;
    Ok(TransformResult::new(program, changes))
}
