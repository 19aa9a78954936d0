// SPDX-License-Identifier: Apache-2.0

//! Program transformations and the analysis/transform pairs that drive them.

mod dce;
mod fold;
mod latest;
mod reorder;
mod schedule;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dce::dead_code_elim;
pub use fold::{constant_fold, constant_fold_at};
pub use latest::latest_possible_quantum;
pub use reorder::reorder_instructions;

use crate::analyses::{
    constant_propagation, entry_state, find_hybrid_dependencies, live_variables, AbstractState, LivenessResult,
};
use crate::graphs::{build_ddgs, GraphError};
use crate::ir::{Program, ValidationError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Change {
    pub position: usize,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    pub program: Program,
    pub changes: Vec<Change>,
    pub changed: bool,
    /// Problems that stopped a rewrite without failing the pass.
    pub warnings: Vec<String>,
}

impl TransformResult {
    pub fn new(program: Program, changes: Vec<Change>) -> Self {
        TransformResult {
            changed: !changes.is_empty(),
            program,
            changes,
            warnings: Vec::new(),
        }
    }

    fn unchanged(program: &Program) -> Self {
        TransformResult::new(program.clone(), Vec::new())
    }

    fn absorb(&mut self, next: TransformResult) {
        self.program = next.program;
        self.changed |= next.changed;
        self.changes.extend(next.changes);
        self.warnings.extend(next.warnings);
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("transformed program is invalid: {0}")]
    Invalid(#[from] ValidationError),
    #[error("reordering moved position {after} before position {before} it depends on")]
    EdgeViolated { before: usize, after: usize },
    #[error("reordering is not a permutation of the segment")]
    NotAPermutation,
    #[error("reordering moved an instruction across a label or jump")]
    CrossesBlock,
}

/// An analysis followed by the transformation it enables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PassPair {
    #[serde(rename = "const-prop-fold")]
    ConstPropFold,
    #[serde(rename = "liveness-dce")]
    LivenessDce,
    #[serde(rename = "hybrid-deps-reorder")]
    HybridDepsReorder,
    #[serde(rename = "hybrid-deps-latest-quantum")]
    HybridDepsLatestQuantum,
}

impl PassPair {
    pub const ALL: [PassPair; 4] = [
        PassPair::ConstPropFold,
        PassPair::LivenessDce,
        PassPair::HybridDepsReorder,
        PassPair::HybridDepsLatestQuantum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PassPair::ConstPropFold => "const-prop-fold",
            PassPair::LivenessDce => "liveness-dce",
            PassPair::HybridDepsReorder => "hybrid-deps-reorder",
            PassPair::HybridDepsLatestQuantum => "hybrid-deps-latest-quantum",
        }
    }
}

impl fmt::Display for PassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown pass `{0}`")]
pub struct UnknownPass(pub String);

impl FromStr for PassPair {
    type Err = UnknownPass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PassPair::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownPass(s.to_string()))
    }
}

/// Facts before each position, combined over every segment containing it.
pub fn program_facts(program: &Program) -> Result<BTreeMap<usize, AbstractState>, GraphError> {
    let set = build_ddgs(program)?;
    let mut states: BTreeMap<usize, AbstractState> = BTreeMap::new();
    for d in &set.ddgs {
        let facts = constant_propagation(program, &d.nodes, entry_state(d));
        for (&pos, st) in d.nodes.iter().zip(facts.before) {
            let merged = match states.get(&pos) {
                Some(prev) => prev.meet(&st),
                None => st,
            };
            states.insert(pos, merged);
        }
    }
    Ok(states)
}

/// Liveness of every halt segment. Segments sharing a position share its
/// whole continuation, so their results agree there.
pub fn program_liveness(program: &Program) -> Result<LivenessResult, GraphError> {
    let set = build_ddgs(program)?;
    let mut out = LivenessResult::default();
    for d in set.halt_ddgs() {
        let l = live_variables(program, &d.nodes, true).expect("halt segment");
        out.dead_classical.extend(l.dead_classical);
        out.dead_qubit.extend(l.dead_qubit);
    }
    Ok(out)
}

pub fn apply_pass(program: &Program, pass: PassPair) -> Result<TransformResult, TransformError> {
    match pass {
        PassPair::ConstPropFold => constant_fold_at(program, &program_facts(program)?),
        PassPair::LivenessDce => dead_code_elim(program, &program_liveness(program)?),
        PassPair::HybridDepsReorder | PassPair::HybridDepsLatestQuantum => {
            let count = build_ddgs(program)?.ddgs.len();
            let mut acc = TransformResult::unchanged(program);
            for i in 0..count {
                let set = build_ddgs(&acc.program)?;
                let ddg = &set.ddgs[i];
                let deps = find_hybrid_dependencies(ddg, &acc.program);
                let step = if pass == PassPair::HybridDepsReorder {
                    reorder_instructions(&acc.program, ddg, &deps)?
                } else {
                    latest_possible_quantum(&acc.program, ddg, &deps)?
                };
                acc.absorb(step);
            }
            Ok(acc)
        }
    }
}

pub fn apply_passes(program: &Program, passes: &[PassPair]) -> Result<TransformResult, TransformError> {
    let mut acc = TransformResult::unchanged(program);
    for &p in passes {
        let step = apply_pass(&acc.program, p)?;
        acc.absorb(step);
    }
    Ok(acc)
}
