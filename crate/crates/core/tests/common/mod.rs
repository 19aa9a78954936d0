// SPDX-License-Identifier: Apache-2.0

//! Checks shared by the property and acceptance targets. Each returns a
//! description of the first violation instead of panicking.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use quilopt::analyses::find_hybrid_dependencies;
use quilopt::graphs::build_ddgs;
use quilopt::harness::run_pairs;
use quilopt::ir::{parse, resources, Op, Program, Resource};
use quilopt::oracle::{equivalent, DEFAULT_MAX_STEPS, DEFAULT_PRUNE};
use quilopt::transforms::{
    apply_pass, latest_possible_quantum, reorder_instructions, PassPair,
};

pub const FIXTURES: [&str; 4] = ["teleportation", "msd", "rus", "ipe"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Program {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.quil"))).unwrap();
    parse(&text).unwrap()
}

/// Same program, reparsed so every instruction carries a distinct line.
fn with_lines(p: &Program) -> Program {
    parse(&p.to_quil()).unwrap().with_readout(p.readout().clone()).unwrap()
}

pub fn preserves(p: &Program, pairs: &[PassPair]) -> Result<(), String> {
    let out = run_pairs(p, pairs).map_err(|e| format!("{pairs:?}: {e}"))?;
    let e = equivalent(p, &out, 1e-9, DEFAULT_MAX_STEPS, DEFAULT_PRUNE).map_err(|e| e.to_string())?;
    if e.equivalent {
        Ok(())
    } else {
        Err(format!("{pairs:?}: distance {:e}", e.distance))
    }
}

/// Applies the reordering of each DDG on its own and checks that the
/// segment's slots hold a permutation of its instructions in which every
/// DDG edge still points forward.
pub fn reorder_respects_edges(p: &Program, latest: bool) -> Result<(), String> {
    let p = with_lines(p);
    let set = build_ddgs(&p).map_err(|e| e.to_string())?;
    for d in &set.ddgs {
        let deps = find_hybrid_dependencies(d, &p);
        let r = if latest {
            latest_possible_quantum(&p, d, &deps)
        } else {
            reorder_instructions(&p, d, &deps)
        }
        .map_err(|e| format!("ddg {}: {e}", d.id))?;
        let new = r.program.instructions();
        let mut at: BTreeMap<usize, usize> = BTreeMap::new();
        for &slot in &d.nodes {
            at.insert(new[slot].line, slot);
        }
        for &slot in &d.nodes {
            let line = p.instructions()[slot].line;
            if !at.contains_key(&line) {
                return Err(format!("ddg {}: line {line} left its segment", d.id));
            }
        }
        for &(a, b) in &d.edges {
            let la = p.instructions()[d.nodes[a]].line;
            let lb = p.instructions()[d.nodes[b]].line;
            if at[&la] > at[&lb] {
                return Err(format!("ddg {}: edge {la} -> {lb} reversed", d.id));
            }
        }
    }
    Ok(())
}

pub fn fold_idempotent(p: &Program) -> Result<(), String> {
    let once = apply_pass(p, PassPair::ConstPropFold).map_err(|e| e.to_string())?;
    let twice = apply_pass(&once.program, PassPair::ConstPropFold).map_err(|e| e.to_string())?;
    if twice.changed {
        Err(format!("second fold changed {:?}", twice.changes))
    } else {
        Ok(())
    }
}

/// Whether the readout cell written at `seq[i]` can still be observed: it is
/// read later, or nothing later overwrites it before the program ends.
fn readout_write_live(p: &Program, seq: &[usize], i: usize, cell: &Resource) -> bool {
    for &pos in &seq[i + 1..] {
        let res = resources(&p.instructions()[pos]);
        if res.reads.contains(cell) {
            return true;
        }
        if res.writes.contains(cell) {
            return false;
        }
    }
    true
}

pub fn dce_keeps_readout_writers(p: &Program) -> Result<(), String> {
    let readout: Vec<Resource> = p.readout_cells().into_iter().map(Resource::Cell).collect();
    let set = build_ddgs(p).map_err(|e| e.to_string())?;
    let out = apply_pass(p, PassPair::LivenessDce).map_err(|e| e.to_string())?;
    let removed: Vec<usize> = out
        .changes
        .iter()
        .map(|c| c.position)
        .filter(|&pos| !matches!(p.instructions()[pos].op, Op::Declare(_)))
        .collect();
    for d in set.halt_ddgs() {
        for (i, &pos) in d.nodes.iter().enumerate() {
            if !removed.contains(&pos) {
                continue;
            }
            let res = resources(&p.instructions()[pos]);
            for cell in res.writes.iter().filter(|w| readout.contains(w)) {
                if readout_write_live(p, &d.nodes, i, cell) {
                    return Err(format!(
                        "removed `{}` at {pos} though its write to {cell:?} reaches the end",
                        p.instruction_text(pos)
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn round_trips(p: &Program) -> Result<(), String> {
    let text = p.to_quil();
    let back = parse(&text).map_err(|e| format!("{e}\n{text}"))?;
    if back.instructions() != p.instructions() {
        return Err(format!("instructions differ after reparsing\n{text}"));
    }
    if back.to_quil() != text {
        return Err(format!("second emission differs\n{text}"));
    }
    Ok(())
}
