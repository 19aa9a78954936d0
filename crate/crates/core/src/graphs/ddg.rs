// SPDX-License-Identifier: Apache-2.0

//! Data-dependence graphs over straight-line segments. A segment starts at
//! program entry or at either successor of a conditional jump, threads through
//! unconditional jumps and ends at the next conditional jump, `HALT` or the
//! end of the program.

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::ir::{resources, Op, Program, Resources};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DdgRole {
    Start,
    Interior,
    Halt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ddg {
    pub id: usize,
    pub role: DdgRole,
    /// True when the segment terminates the program. The start DDG of a
    /// jump-free program has role `Start` and is also a halt DDG.
    pub halts: bool,
    /// Label the segment begins at, when entered through a jump.
    pub entry_anchor: Option<String>,
    /// Program positions in path order.
    pub nodes: Vec<usize>,
    /// Straight-line block index of each node along the path. It increases at
    /// every label and every followed unconditional jump.
    pub blocks: Vec<usize>,
    /// `(before, after)` pairs of node indices.
    pub edges: Vec<(usize, usize)>,
    /// Node index of the closing conditional jump or `HALT`.
    pub terminator: Option<usize>,
}

impl Ddg {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            preds[b].push(a);
        }
        preds
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succs = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            succs[a].push(b);
        }
        succs
    }

    /// Node index holding program position `pos`.
    pub fn node_of(&self, pos: usize) -> Option<usize> {
        self.nodes.iter().position(|&p| p == pos)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdgSet {
    /// Start DDG first, then interior DDGs, then halt DDGs, each group in
    /// discovery order.
    pub ddgs: Vec<Ddg>,
    /// Ids of the DDGs that terminate the program.
    pub halts: Vec<usize>,
}

impl DdgSet {
    pub fn start(&self) -> &Ddg {
        &self.ddgs[0]
    }

    pub fn halt_ddgs(&self) -> impl Iterator<Item = &Ddg> {
        self.halts.iter().map(|&i| &self.ddgs[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("jump to undefined label `@{0}`")]
    UnresolvedJump(String),
    #[error("unconditional jumps starting at position {0} loop forever")]
    InfiniteLoop(usize),
    #[error("dependence graph contains a cycle")]
    Cycle,
}

/// One straight-line path through the program.
#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub anchor: Option<String>,
    pub nodes: Vec<usize>,
    pub blocks: Vec<usize>,
    pub terminator: Option<usize>,
    pub halts: bool,
    /// Program position of the closing conditional jump.
    pub jump: Option<usize>,
}

fn walk(program: &Program, labels: &BTreeMap<&str, usize>, start: usize) -> Result<Segment, GraphError> {
    let instrs = program.instructions();
    let mut seg = Segment {
        anchor: None,
        nodes: Vec::new(),
        blocks: Vec::new(),
        terminator: None,
        halts: false,
        jump: None,
    };
    let mut visited = FixedBitSet::with_capacity(instrs.len());
    let mut block = 0;
    let mut pos = start;
    loop {
        if pos >= instrs.len() {
            seg.halts = true;
            return Ok(seg);
        }
        if visited.put(pos) {
            return Err(GraphError::InfiniteLoop(start));
        }
        let op = &instrs[pos].op;
        match op {
            Op::Label(_) => {
                block += 1;
                pos += 1;
            }
            Op::Jump(target) => {
                block += 1;
                pos = *labels
                    .get(target.as_str())
                    .ok_or_else(|| GraphError::UnresolvedJump(target.clone()))?;
            }
            _ => {
                seg.nodes.push(pos);
                seg.blocks.push(block);
                if op.is_conditional_jump() {
                    seg.terminator = Some(seg.nodes.len() - 1);
                    seg.jump = Some(pos);
                    return Ok(seg);
                }
                if matches!(op, Op::Halt) {
                    seg.terminator = Some(seg.nodes.len() - 1);
                    seg.halts = true;
                    return Ok(seg);
                }
                pos += 1;
            }
        }
    }
}

/// Every segment of the program in discovery order, the start segment first.
/// Each reachable conditional jump contributes its fall-through segment and
/// then its target segment; empty segments other than the start are dropped.
pub(crate) fn segments(program: &Program) -> Result<Vec<Segment>, GraphError> {
    let labels = program.label_positions();
    let mut out = Vec::new();
    let mut expanded = FixedBitSet::with_capacity(program.len());
    let mut queue = std::collections::VecDeque::from([(0usize, None::<String>)]);
    let mut first = true;
    while let Some((start, anchor)) = queue.pop_front() {
        let mut seg = walk(program, &labels, start)?;
        seg.anchor = anchor;
        if let Some(j) = seg.jump {
            if !expanded.put(j) {
                let op = &program.instructions()[j].op;
                let target = op.jump_target().expect("conditional jump has a target");
                let tpos = *labels
                    .get(target)
                    .ok_or_else(|| GraphError::UnresolvedJump(target.to_string()))?;
                queue.push_back((j + 1, None));
                queue.push_back((tpos, Some(target.to_string())));
            }
        }
        if first || !seg.nodes.is_empty() {
            out.push(seg);
        }
        first = false;
    }
    Ok(out)
}

/// Transitive reduction of the conflict relation over `res`, which is in
/// path order.
pub(crate) fn reduced_edges(res: &[Resources]) -> Vec<(usize, usize)> {
    let n = res.len();
    let mut ancestors: Vec<FixedBitSet> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for j in 0..n {
        let mut anc = FixedBitSet::with_capacity(n);
        for i in (0..j).rev() {
            if anc.contains(i) || !res[i].conflicts_with(&res[j]) {
                continue;
            }
            edges.push((i, j));
            anc.insert(i);
            anc.union_with(&ancestors[i]);
        }
        ancestors.push(anc);
    }
    edges.sort_unstable();
    edges
}

pub fn build_ddgs(program: &Program) -> Result<DdgSet, GraphError> {
    let segs = segments(program)?;
    let mut start = Vec::new();
    let mut interior = Vec::new();
    let mut halting = Vec::new();
    for (i, seg) in segs.into_iter().enumerate() {
        let res: Vec<Resources> = seg
            .nodes
            .iter()
            .map(|&p| resources(&program.instructions()[p]))
            .collect();
        let ddg = Ddg {
            id: 0,
            role: if i == 0 {
                DdgRole::Start
            } else if seg.halts {
                DdgRole::Halt
            } else {
                DdgRole::Interior
            },
            halts: seg.halts,
            entry_anchor: seg.anchor,
            edges: reduced_edges(&res),
            nodes: seg.nodes,
            blocks: seg.blocks,
            terminator: seg.terminator,
        };
        match ddg.role {
            DdgRole::Start => start.push(ddg),
            DdgRole::Interior => interior.push(ddg),
            DdgRole::Halt => halting.push(ddg),
        }
    }
    let mut ddgs: Vec<Ddg> = start.into_iter().chain(interior).chain(halting).collect();
    for (id, d) in ddgs.iter_mut().enumerate() {
        d.id = id;
    }
    let halts = ddgs.iter().filter(|d| d.halts).map(|d| d.id).collect();
    Ok(DdgSet { ddgs, halts })
}

/// Topological order of the DDG's nodes as program positions, ties broken by
/// path order.
pub fn linearize(ddg: &Ddg) -> Result<Vec<usize>, GraphError> {
    topo_order(ddg.nodes.len(), &ddg.edges)
        .map(|order| order.into_iter().map(|i| ddg.nodes[i]).collect())
}

/// Kahn's algorithm with the smallest ready index first.
pub(crate) fn topo_order(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>, GraphError> {
    let mut indeg = vec![0usize; n];
    let mut succs = vec![Vec::new(); n];
    for &(a, b) in edges {
        indeg[b] += 1;
        succs[a].push(b);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &s in &succs[i] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    if order.len() != n {
        return Err(GraphError::Cycle);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn listing_segments() {
        let p = parse(LISTING).unwrap();
        let set = build_ddgs(&p).unwrap();
        assert_eq!(set.ddgs.len(), 3);
        assert_eq!(set.ddgs[0].nodes, vec![0, 1, 2, 3]);
        assert_eq!(set.ddgs[0].edges, vec![(0, 2), (1, 2), (2, 3)]);
        assert_eq!(set.ddgs[1].nodes, vec![4, 6, 7]);
        assert_eq!(set.ddgs[1].edges, vec![(0, 1), (1, 2)]);
        assert_eq!(set.ddgs[2].nodes, vec![6, 7]);
        assert_eq!(set.ddgs[2].entry_anchor.as_deref(), Some("label"));
        assert_eq!(set.halts, vec![1, 2]);
    }

    #[test]
    fn straight_line_is_start_and_halt() {
        let p = parse("H 0\nX 1\nCNOT 0 1").unwrap();
        let set = build_ddgs(&p).unwrap();
        assert_eq!(set.ddgs.len(), 1);
        assert_eq!(set.halts, vec![0]);
        assert_eq!(set.ddgs[0].role, DdgRole::Start);
        assert_eq!(set.ddgs[0].edges, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn label_targeted_twice_yields_two_ddgs() {
        let src = "DECLARE c BIT[2]\nJUMP-WHEN @t c[0]\nJUMP-WHEN @t c[1]\nX 0\nLABEL @t\nH 0";
        let set = build_ddgs(&parse(src).unwrap()).unwrap();
        let from_t: Vec<_> = set
            .ddgs
            .iter()
            .filter(|d| d.entry_anchor.as_deref() == Some("t"))
            .collect();
        assert_eq!(from_t.len(), 2);
        assert_eq!(from_t[0].nodes, from_t[1].nodes);
    }

    #[test]
    fn unconditional_jumps_are_threaded() {
        let src = "JUMP @b\nLABEL @a\nX 0\nHALT\nLABEL @b\nH 0\nJUMP @a";
        let set = build_ddgs(&parse(src).unwrap()).unwrap();
        assert_eq!(set.ddgs.len(), 1);
        assert_eq!(set.ddgs[0].nodes, vec![5, 2, 3]);
        assert_eq!(set.ddgs[0].blocks, vec![2, 4, 4]);
        assert_eq!(set.ddgs[0].terminator, Some(2));
    }

    #[test]
    fn jump_cycle_is_an_error() {
        let src = "LABEL @a\nJUMP @a";
        assert_eq!(build_ddgs(&parse(src).unwrap()), Err(GraphError::InfiniteLoop(0)));
    }

    #[test]
    fn loops_terminate_segmentation() {
        let src = "DECLARE m BIT\nLABEL @top\nH 0\nMEASURE 0 m\nJUMP-WHEN @top m\nX 0";
        let set = build_ddgs(&parse(src).unwrap()).unwrap();
        let sizes: Vec<_> = set.ddgs.iter().map(|d| d.len()).collect();
        assert_eq!(sizes, vec![4, 3, 1]);
        assert_eq!(set.ddgs[1].role, DdgRole::Interior);
        assert_eq!(set.halts, vec![2]);
    }

    #[test]
    fn linearize_respects_path_order() {
        let set = build_ddgs(&parse(LISTING).unwrap()).unwrap();
        assert_eq!(linearize(&set.ddgs[1]).unwrap(), vec![4, 6, 7]);
        assert_eq!(topo_order(3, &[(2, 0), (1, 0)]).unwrap(), vec![1, 2, 0]);
        assert_eq!(topo_order(2, &[(0, 1), (1, 0)]), Err(GraphError::Cycle));
    }
}
