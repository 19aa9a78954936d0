// SPDX-License-Identifier: Apache-2.0

//! Random phase-ordering experiments over the four pass pairs.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphs::GraphError;
use crate::ir::Program;
use crate::metrics::{report, MetricsReport};
use crate::oracle::{equivalent, OracleError, DEFAULT_MAX_STEPS, DEFAULT_PRUNE};
use crate::transforms::{apply_pass, PassPair, TransformError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("run {run}: {source}")]
    Transform { run: usize, source: TransformError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("run {run}: {source}")]
    Oracle { run: usize, source: OracleError },
    #[error("run {run}: readout distribution changed (distance {distance:e})")]
    NotEquivalent { run: usize, distance: f64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub pairs: Vec<PassPair>,
    pub metrics: MetricsReport,
    pub verified: bool,
}

/// `(total wall time, instruction count, QIN, QCT)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MetricTuple {
    pub wall: u64,
    pub instr: usize,
    pub qin: usize,
    pub qct: u64,
}

impl MetricTuple {
    pub fn of(r: &MetricsReport) -> Self {
        MetricTuple {
            wall: r.total_wall_time,
            instr: r.instr_count,
            qin: r.qin,
            qct: r.qct,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub tuple: MetricTuple,
    pub count: usize,
    pub percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub runs: usize,
    pub pairs_per_run: usize,
    pub seed: u64,
    pub initial: Option<MetricsReport>,
    pub best_wall: Option<u64>,
    /// Per-DDG wall times of the run with the smallest total.
    pub best_walls: Option<Vec<u64>>,
    pub best_instr: Option<usize>,
    pub best_qin: Option<usize>,
    pub best_qct: Option<u64>,
    /// Most frequent first, ties by tuple.
    pub frequencies: Vec<Frequency>,
    pub records: Vec<RunRecord>,
}

impl ExperimentSummary {
    pub fn modal(&self) -> Option<&Frequency> {
        self.frequencies.first()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub pairs_per_run: usize,
    pub seed: u64,
    /// Runs `0..verify_runs` are checked against the input with the oracle.
    pub verify_runs: usize,
    pub max_steps: usize,
    pub prune: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            runs: 500,
            pairs_per_run: 25,
            seed: 0,
            verify_runs: 10,
            max_steps: DEFAULT_MAX_STEPS,
            prune: DEFAULT_PRUNE,
        }
    }
}

/// The pair sequence of one run; stream `run` of the seeded generator.
pub fn draw_pairs(seed: u64, run: usize, count: usize) -> Vec<PassPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    (0..count)
        .map(|_| PassPair::ALL[rng.gen_range(0..PassPair::ALL.len())])
        .collect()
}

pub fn run_pairs(program: &Program, pairs: &[PassPair]) -> Result<Program, TransformError> {
    let mut current = program.clone();
    for &p in pairs {
        current = apply_pass(&current, p)?.program;
    }
    Ok(current)
}

pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

pub fn run_experiment(program: &Program, cfg: &ExperimentConfig) -> Result<ExperimentSummary, HarnessError> {
    let records: Vec<RunRecord> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let pairs = draw_pairs(cfg.seed, run, cfg.pairs_per_run);
            let out = run_pairs(program, &pairs).map_err(|source| HarnessError::Transform { run, source })?;
            let verified = run < cfg.verify_runs;
            if verified {
                let e = equivalent(program, &out, EQUIVALENCE_TOLERANCE, cfg.max_steps, cfg.prune)
                    .map_err(|source| HarnessError::Oracle { run, source })?;
                if !e.equivalent {
                    return Err(HarnessError::NotEquivalent { run, distance: e.distance });
                }
            }
            let metrics = report(&out).map_err(|e| HarnessError::Transform { run, source: e.into() })?;
            Ok(RunRecord {
                run,
                seed: cfg.seed,
                pairs,
                metrics,
                verified,
            })
        })
        .collect::<Result<_, _>>()?;
    let initial = if cfg.runs > 0 { Some(report(program)?) } else { None };
    Ok(summarize(cfg, initial, records))
}

fn summarize(cfg: &ExperimentConfig, initial: Option<MetricsReport>, records: Vec<RunRecord>) -> ExperimentSummary {
    let mut counts: BTreeMap<MetricTuple, usize> = BTreeMap::new();
    for r in &records {
        *counts.entry(MetricTuple::of(&r.metrics)).or_default() += 1;
    }
    let mut frequencies: Vec<Frequency> = counts
        .into_iter()
        .map(|(tuple, count)| Frequency {
            tuple,
            count,
            percent: 100.0 * count as f64 / records.len() as f64,
        })
        .collect();
    frequencies.sort_by(|a, b| b.count.cmp(&a.count).then(a.tuple.cmp(&b.tuple)));
    let best_run = records.iter().min_by_key(|r| (r.metrics.total_wall_time, r.run));
    ExperimentSummary {
        runs: cfg.runs,
        pairs_per_run: cfg.pairs_per_run,
        seed: cfg.seed,
        initial,
        best_wall: records.iter().map(|r| r.metrics.total_wall_time).min(),
        best_walls: best_run.map(|r| r.metrics.walls()),
        best_instr: records.iter().map(|r| r.metrics.instr_count).min(),
        best_qin: records.iter().map(|r| r.metrics.qin).min(),
        best_qct: records.iter().map(|r| r.metrics.qct).min(),
        frequencies,
        records,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub metric: String,
    pub before: f64,
    pub after: f64,
    pub absolute: f64,
    pub percent: f64,
}

fn delta(metric: &str, before: f64, after: f64) -> Delta {
    let absolute = after - before;
    Delta {
        metric: metric.to_string(),
        before,
        after,
        absolute,
        percent: if before == 0.0 { 0.0 } else { 100.0 * absolute / before },
    }
}

/// Absolute and relative change of each metric. Per-DDG wall times are
/// compared when both reports have the same number of DDGs.
pub fn compare(before: &MetricsReport, after: &MetricsReport) -> Vec<Delta> {
    let mut out = vec![
        delta("total_wall_time", before.total_wall_time as f64, after.total_wall_time as f64),
        delta("instr_count", before.instr_count as f64, after.instr_count as f64),
        delta("qin", before.qin as f64, after.qin as f64),
        delta("qct", before.qct as f64, after.qct as f64),
    ];
    if before.per_ddg.len() == after.per_ddg.len() {
        for (b, a) in before.per_ddg.iter().zip(&after.per_ddg) {
            out.push(delta(&format!("wall_time[{}]", b.id), b.wall_time as f64, a.wall_time as f64));
        }
    }
    out
}

/// Reads either a bare metrics report or an experiment summary, taking the
/// best run of the latter.
pub fn metrics_from_json(text: &str) -> Result<MetricsReport, serde_json::Error> {
    if let Ok(r) = serde_json::from_str::<MetricsReport>(text) {
        return Ok(r);
    }
    let s: ExperimentSummary = serde_json::from_str(text)?;
    let best = s
        .records
        .into_iter()
        .min_by_key(|r| (r.metrics.total_wall_time, r.metrics.qct, r.run))
        .map(|r| r.metrics);
    best.or(s.initial)
        .ok_or_else(|| serde::de::Error::custom("experiment summary has no runs"))
}
