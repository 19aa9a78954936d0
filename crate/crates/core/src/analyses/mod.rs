// SPDX-License-Identifier: Apache-2.0

mod constprop;
mod hybrid_deps;
mod liveness;
mod pauli;

pub use constprop::{constant_propagation, evaluate, AbstractState, ConstFacts};
pub use hybrid_deps::{find_hybrid_dependencies, is_hybrid_node, HybridDependencies};
pub use liveness::{live_variables, LivenessResult, NotHaltSegment};
pub use pauli::{pauli_transition, PauliState};

use serde_json::{json, Map, Value as Json};

use crate::graphs::{build_ddgs, Ddg, DdgRole, GraphError};
use crate::ir::Program;

/// Facts at the entry of a segment. Only the start segment knows anything.
pub fn entry_state(ddg: &Ddg) -> AbstractState {
    if ddg.role == DdgRole::Start {
        AbstractState::program_entry()
    } else {
        AbstractState::unknown()
    }
}

/// Per-point constant and liveness facts of every DDG, for debugging.
pub fn facts_json(program: &Program) -> Result<Json, GraphError> {
    let set = build_ddgs(program)?;
    let nq = program.qubit_count() as u32;
    let mut ddgs = Vec::new();
    for d in &set.ddgs {
        let facts = constant_propagation(program, &d.nodes, entry_state(d));
        let live = live_variables(program, &d.nodes, d.halts).ok();
        let deps = find_hybrid_dependencies(d, program);
        let mut points = Vec::new();
        for (i, &pos) in d.nodes.iter().enumerate() {
            let st = &facts.before[i];
            let cells: Map<String, Json> = st
                .constant_cells()
                .iter()
                .map(|(r, v)| (r.to_string(), json!(v.to_string())))
                .collect();
            let qubits: Map<String, Json> = st
                .known_qubits(nq)
                .into_iter()
                .map(|(q, s)| (q.to_string(), json!(s)))
                .collect();
            let mut point = Map::new();
            point.insert("position".into(), json!(pos));
            point.insert("instruction".into(), json!(program.instruction_text(pos)));
            point.insert("constants_before".into(), Json::Object(cells));
            point.insert("qubits_before".into(), Json::Object(qubits));
            if let Some(l) = &live {
                let dead_cells: Vec<String> = l
                    .dead_classical
                    .iter()
                    .filter(|(p, _)| *p == pos)
                    .map(|(_, r)| r.to_string())
                    .collect();
                let dead_qubits: Vec<u32> =
                    l.dead_qubit.iter().filter(|(p, _)| *p == pos).map(|(_, q)| *q).collect();
                point.insert("dead_cells".into(), json!(dead_cells));
                point.insert("dead_qubits".into(), json!(dead_qubits));
            }
            if let Some(dep) = deps.deps.get(&i) {
                let positions: Vec<usize> = dep.iter().map(|&n| d.nodes[n]).collect();
                point.insert("hybrid_deps".into(), json!(positions));
            }
            points.push(Json::Object(point));
        }
        ddgs.push(json!({ "id": d.id, "role": d.role, "points": points }));
    }
    Ok(json!({ "ddgs": ddgs }))
}
