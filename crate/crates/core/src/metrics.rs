// SPDX-License-Identifier: Apache-2.0

//! Wall time, quantum instruction number (QIN) and quantum calculation time
//! (QCT) under a unit-cost model with one CPU and one QPU clock.

use serde::{Deserialize, Serialize};

use crate::graphs::{build_ddgs, linearize, Ddg, DdgRole, DdgSet, GraphError};
use crate::ir::{DeviceClass, Instruction, Op, Program};

/// Start and end time of every instruction in a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timeline {
    pub cpu: u64,
    pub qpu: u64,
    pub spans: Vec<(u64, u64)>,
}

impl Timeline {
    pub fn wall_time(&self) -> u64 {
        self.cpu.max(self.qpu)
    }
}

pub fn timeline<'a>(seq: impl IntoIterator<Item = &'a Instruction>) -> Timeline {
    let mut t = Timeline::default();
    for instr in seq {
        let span = if matches!(instr.op, Op::Label(_)) {
            let now = t.cpu.max(t.qpu);
            (now, now)
        } else {
            match instr.device_class() {
                DeviceClass::Classical => {
                    t.cpu += 1;
                    (t.cpu - 1, t.cpu)
                }
                DeviceClass::Quantum => {
                    t.qpu += 1;
                    (t.qpu - 1, t.qpu)
                }
                DeviceClass::Hybrid => {
                    let start = t.cpu.max(t.qpu);
                    t.cpu = start + 1;
                    t.qpu = start + 1;
                    (start, start + 1)
                }
            }
        };
        t.spans.push(span);
    }
    t
}

pub fn wall_time<'a>(seq: impl IntoIterator<Item = &'a Instruction>) -> u64 {
    timeline(seq).wall_time()
}

fn is_qpu_work(instr: &Instruction) -> bool {
    !matches!(instr.op, Op::Label(_)) && instr.device_class() != DeviceClass::Classical
}

fn is_hybrid(instr: &Instruction) -> bool {
    !matches!(instr.op, Op::Label(_)) && instr.device_class() == DeviceClass::Hybrid
}

fn is_quantum(instr: &Instruction) -> bool {
    instr.device_class() == DeviceClass::Quantum
}

/// Quantum plus hybrid instructions, labels excluded.
pub fn qin_of<'a>(seq: impl IntoIterator<Item = &'a Instruction>) -> usize {
    seq.into_iter().filter(|i| is_qpu_work(i)).count()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QctBreakdown {
    pub n_q_before: u64,
    pub delta_t_between: u64,
    pub n_q_after: u64,
}

impl QctBreakdown {
    pub fn total(&self) -> u64 {
        self.n_q_before + self.delta_t_between + self.n_q_after
    }
}

/// QCT terms of one straight-line sequence. `None` when it has no hybrid
/// instruction.
pub fn sequence_qct(seq: &[&Instruction]) -> Option<QctBreakdown> {
    let first = seq.iter().position(|i| is_hybrid(i))?;
    let last = seq.iter().rposition(|i| is_hybrid(i))?;
    let t = timeline(seq.iter().copied());
    Some(QctBreakdown {
        n_q_before: seq[..first].iter().filter(|i| is_quantum(i)).count() as u64,
        delta_t_between: t.spans[last].1 - t.spans[first].0,
        n_q_after: seq[last + 1..].iter().filter(|i| is_quantum(i)).count() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdgMetrics {
    pub id: usize,
    pub role: String,
    pub instr_count: usize,
    pub wall_time: u64,
    pub qin: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_ddg: Vec<DdgMetrics>,
    pub total_wall_time: u64,
    pub instr_count: usize,
    pub qin: usize,
    pub qct: u64,
    pub qct_terms: QctBreakdown,
}

impl MetricsReport {
    pub fn walls(&self) -> Vec<u64> {
        self.per_ddg.iter().map(|d| d.wall_time).collect()
    }

    pub fn instr_counts(&self) -> Vec<usize> {
        self.per_ddg.iter().map(|d| d.instr_count).collect()
    }
}

fn role_name(d: &Ddg) -> String {
    match d.role {
        DdgRole::Start => "start",
        DdgRole::Interior => "interior",
        DdgRole::Halt => "halt",
    }
    .to_string()
}

fn sequence<'p>(ddg: &Ddg, program: &'p Program) -> Result<Vec<&'p Instruction>, GraphError> {
    Ok(linearize(ddg)?
        .into_iter()
        .map(|p| &program.instructions()[p])
        .collect())
}

pub fn qin(set: &DdgSet, program: &Program) -> Result<usize, GraphError> {
    let mut total = 0;
    for d in &set.ddgs {
        total += qin_of(sequence(d, program)?);
    }
    Ok(total)
}

/// QCT over all segments.
///
/// The start DDG contributes its quantum work before the first hybrid
/// instruction and its wall time from that instruction on. Every other DDG
/// that does any QPU work adds its full wall time, and the halt DDG with the
/// most quantum instructions after its last hybrid one adds those. A single
/// DDG reduces to `n_q_before + δt + n_q_after` over its own span; without
/// any hybrid instruction QCT is the number of quantum instructions.
pub fn qct(set: &DdgSet, program: &Program) -> Result<QctBreakdown, GraphError> {
    let seqs: Vec<Vec<&Instruction>> = set
        .ddgs
        .iter()
        .map(|d| sequence(d, program))
        .collect::<Result<_, _>>()?;
    if seqs.len() == 1 {
        return Ok(sequence_qct(&seqs[0]).unwrap_or_else(|| QctBreakdown {
            n_q_before: seqs[0].iter().filter(|i| is_quantum(i)).count() as u64,
            ..QctBreakdown::default()
        }));
    }
    let start = &seqs[0];
    let mut terms = QctBreakdown::default();
    if let Some(first) = start.iter().position(|i| is_hybrid(i)) {
        let t = timeline(start.iter().copied());
        terms.n_q_before = start[..first].iter().filter(|i| is_quantum(i)).count() as u64;
        terms.delta_t_between = t.wall_time() - t.spans[first].0;
    } else {
        terms.n_q_before = start.iter().filter(|i| is_quantum(i)).count() as u64;
    }
    for seq in &seqs[1..] {
        if qin_of(seq.iter().copied()) > 0 {
            terms.delta_t_between += wall_time(seq.iter().copied());
        }
    }
    terms.n_q_after = set
        .halts
        .iter()
        .filter(|&&h| h != 0)
        .map(|&h| {
            let seq = &seqs[h];
            let after = seq.iter().rposition(|i| is_hybrid(i)).map_or(0, |l| l + 1);
            seq[after..].iter().filter(|i| is_quantum(i)).count() as u64
        })
        .max()
        .unwrap_or(0);
    Ok(terms)
}

pub fn report_for(set: &DdgSet, program: &Program) -> Result<MetricsReport, GraphError> {
    let mut per_ddg = Vec::with_capacity(set.ddgs.len());
    for d in &set.ddgs {
        let seq = sequence(d, program)?;
        per_ddg.push(DdgMetrics {
            id: d.id,
            role: role_name(d),
            instr_count: seq.len(),
            wall_time: wall_time(seq.iter().copied()),
            qin: qin_of(seq.iter().copied()),
        });
    }
    let terms = qct(set, program)?;
    Ok(MetricsReport {
        total_wall_time: per_ddg.iter().map(|d| d.wall_time).sum(),
        instr_count: per_ddg.iter().map(|d| d.instr_count).sum(),
        qin: per_ddg.iter().map(|d| d.qin).sum(),
        qct: terms.total(),
        qct_terms: terms,
        per_ddg,
    })
}

pub fn report(program: &Program) -> Result<MetricsReport, GraphError> {
    report_for(&build_ddgs(program)?, program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse;

    #[test]
    fn empty_sequence() {
        assert_eq!(wall_time(std::iter::empty()), 0);
        let r = report(&Program::empty()).unwrap();
        assert_eq!((r.total_wall_time, r.qin, r.qct), (0, 0, 0));
    }

    #[test]
    fn all_hybrid_lockstep() {
        let p = parse("DECLARE m BIT\nMEASURE 0 m\nMEASURE 1 m\nRESET\nMEASURE 0").unwrap();
        assert_eq!(wall_time(p.instructions()[1..].iter()), 4);
    }

    #[test]
    fn parallel_devices_overlap() {
        let p = parse("DECLARE a INTEGER\nH 0\nMOVE a 1\nX 0").unwrap();
        assert_eq!(wall_time(p.instructions()), 2);
    }

    #[test]
    fn qin_counts_quantum_and_hybrid() {
        let p = parse("DECLARE m BIT\nH 0\nMEASURE 0 m").unwrap();
        let r = report(&p).unwrap();
        assert_eq!(r.qin, 2);
        let p = parse("DECLARE a INTEGER\nMOVE a 1").unwrap();
        let r = report(&p).unwrap();
        assert_eq!((r.qin, r.qct), (0, 0));
    }

    #[test]
    fn no_hybrid_counts_quantum() {
        let p = parse("DECLARE a INTEGER\nH 0\nMOVE a 1\nX 0\nZ 1").unwrap();
        assert_eq!(report(&p).unwrap().qct, 3);
    }

    #[test]
    fn multi_segment_qct() {
        // start: H, MEASURE, JUMP-WHEN; halt 1: X, Z (no hybrid); halt 2: Z
        let src = "DECLARE m BIT\nH 0\nMEASURE 0 m\nJUMP-WHEN @t m\nX 0\nLABEL @t\nZ 0";
        let r = report(&parse(src).unwrap()).unwrap();
        assert_eq!(r.walls(), vec![3, 2, 1]);
        assert_eq!(r.qct_terms.n_q_before, 1);
        assert_eq!(r.qct_terms.delta_t_between, 2 + 2 + 1);
        assert_eq!(r.qct_terms.n_q_after, 2);
    }
}
