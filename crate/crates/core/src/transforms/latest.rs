// SPDX-License-Identifier: Apache-2.0

//! Delays quantum work so the QPU starts as late as the first hybrid
//! instruction allows.

use fixedbitset::FixedBitSet;

use super::schedule::{write_back, SchedGraph};
use super::{TransformError, TransformResult};
use crate::analyses::HybridDependencies;
use crate::graphs::Ddg;
use crate::ir::{DeviceClass, Program};

/// Classical nodes that depend on no quantum or hybrid node come first, then
/// whatever else the first hybrid node needs, then the hybrid node and the
/// rest in their current order.
pub(crate) fn latest_order(ddg: &Ddg, program: &Program, deps: &HybridDependencies) -> Vec<usize> {
    let g = SchedGraph::new(ddg, program);
    let n = g.len();
    let mut done = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(n);

    let mut tainted = FixedBitSet::with_capacity(n);
    for i in 0..n {
        let from_qpu = g.preds[i]
            .iter()
            .any(|&p| tainted.contains(p) || g.class[p] != DeviceClass::Classical);
        if from_qpu {
            tainted.insert(i);
        }
    }
    for i in 0..n {
        if g.class[i] == DeviceClass::Classical && !tainted.contains(i) {
            done.insert(i);
            order.push(i);
        }
    }

    if let Some(&first) = deps.hybrids().first() {
        for a in g.ancestors(first).ones() {
            if !done.put(a) {
                order.push(a);
            }
        }
        if !done.put(first) {
            order.push(first);
        }
    }
    for i in 0..n {
        if !done.contains(i) {
            order.push(i);
        }
    }
    order
}

pub fn latest_possible_quantum(
    program: &Program,
    ddg: &Ddg,
    deps: &HybridDependencies,
) -> Result<TransformResult, TransformError> {
    let order = latest_order(ddg, program, deps);
    let (program, changes) = write_back(program, ddg, &order)?;
    Ok(TransformResult::new(program, changes))
}
