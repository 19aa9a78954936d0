// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use quilopt::analyses::facts_json;
use quilopt::graphs::{build_cfg, build_ddgs, cfg_to_dot, ddg_to_dot, DdgRole};
use quilopt::harness::{compare, metrics_from_json, run_experiment, ExperimentConfig};
use quilopt::ir::{parse, Program};
use quilopt::metrics::report;
use quilopt::oracle::{interpret, DEFAULT_MAX_STEPS, DEFAULT_PRUNE};
use quilopt::transforms::{apply_passes, PassPair};

#[derive(Parser)]
#[command(name = "quilopt", version, about = "Analyses and optimizations for hybrid Quil programs")]
struct Cli {
    /// Write per-point analysis facts of the input program as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    dump_facts: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    file: PathBuf,
    /// Comma-separated readout regions (default: `ro` if declared, else all).
    #[arg(long, value_delimiter = ',')]
    readout: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Print wall time, QIN and QCT as JSON.
    Metrics {
        #[command(flatten)]
        input: Input,
    },
    /// Apply pass pairs in order and print the resulting program.
    Optimize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        passes: Vec<PassPair>,
        /// Write the program here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random phase-ordering experiment.
    Experiment {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 500)]
        runs: usize,
        #[arg(long, default_value_t = 25)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of runs checked against the input with the oracle.
        #[arg(long, default_value_t = 10)]
        verify_runs: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write Graphviz files for the CFG or the DDGs.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "ddg", required_unless_present = "ddg")]
        cfg: bool,
        #[arg(long)]
        ddg: bool,
        #[arg(long, value_name = "DIR")]
        dot: PathBuf,
    },
    /// Print the readout distribution as JSON.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, default_value_t = DEFAULT_PRUNE)]
        prune: f64,
    },
    /// Metric deltas between two metrics or experiment JSON files.
    Compare { before: PathBuf, after: PathBuf },
}

fn load(input: &Input) -> Result<Program> {
    let text = fs::read_to_string(&input.file).with_context(|| format!("reading {}", input.file.display()))?;
    let program = parse(&text).with_context(|| format!("parsing {}", input.file.display()))?;
    match &input.readout {
        Some(names) => {
            let set: BTreeSet<String> = names.iter().cloned().collect();
            Ok(program.with_readout(set)?)
        }
        None => Ok(program),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "program".to_string())
}

fn write_graphs(program: &Program, file: &Path, cfg: bool, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let base = stem(file);
    let mut written = Vec::new();
    if cfg {
        let path = dir.join(format!("{base}-cfg.dot"));
        fs::write(&path, cfg_to_dot(&build_cfg(program), program))?;
        written.push(path);
        return Ok(written);
    }
    let set = build_ddgs(program)?;
    let (mut interior, mut halt) = (0, 0);
    for d in &set.ddgs {
        let suffix = match d.role {
            DdgRole::Start => "start".to_string(),
            DdgRole::Interior => {
                interior += 1;
                format!("interior{interior}")
            }
            DdgRole::Halt => {
                halt += 1;
                format!("halt{halt}")
            }
        };
        let path = dir.join(format!("{base}-{suffix}.dot"));
        fs::write(&path, ddg_to_dot(d, program))?;
        written.push(path);
    }
    Ok(written)
}

fn run(cli: Cli) -> Result<()> {
    let input = match &cli.command {
        Command::Metrics { input }
        | Command::Optimize { input, .. }
        | Command::Experiment { input, .. }
        | Command::Graph { input, .. }
        | Command::Oracle { input, .. } => Some(input),
        Command::Compare { .. } => None,
    };
    let program = input.map(load).transpose()?;
    if let Some(path) = &cli.dump_facts {
        let Some(p) = &program else {
            bail!("--dump-facts needs a program input");
        };
        fs::write(path, to_json(&facts_json(p)?)?)?;
    }

    match cli.command {
        Command::Metrics { .. } => {
            print!("{}", to_json(&report(program.as_ref().unwrap())?)?);
        }
        Command::Optimize { passes, output, .. } => {
            let result = apply_passes(program.as_ref().unwrap(), &passes)?;
            for c in &result.changes {
                eprintln!("{}: {}", c.position, c.description);
            }
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let text = result.program.to_quil();
            match output {
                Some(path) => fs::write(&path, text)?,
                None => print!("{text}"),
            }
        }
        Command::Experiment {
            runs,
            pairs,
            seed,
            verify_runs,
            json,
            ..
        } => {
            let cfg = ExperimentConfig {
                runs,
                pairs_per_run: pairs,
                seed,
                verify_runs,
                ..Default::default()
            };
            let summary = run_experiment(program.as_ref().unwrap(), &cfg)?;
            if let Some(init) = &summary.initial {
                println!(
                    "initial: wall {:?} = {}, instr {}, qin {}, qct {}",
                    init.walls(),
                    init.total_wall_time,
                    init.instr_count,
                    init.qin,
                    init.qct
                );
            }
            if let (Some(w), Some(i), Some(q), Some(t)) =
                (summary.best_wall, summary.best_instr, summary.best_qin, summary.best_qct)
            {
                let walls = summary.best_walls.clone().unwrap_or_default();
                println!("best:    wall {walls:?} = {w}, instr {i}, qin {q}, qct {t}");
            }
            println!("{:>6} {:>6} {:>6} {:>6} {:>8}", "wall", "instr", "qin", "qct", "freq");
            for f in &summary.frequencies {
                println!(
                    "{:>6} {:>6} {:>6} {:>6} {:>7.1}%",
                    f.tuple.wall, f.tuple.instr, f.tuple.qin, f.tuple.qct, f.percent
                );
            }
            if let Some(path) = json {
                fs::write(&path, to_json(&summary)?)?;
            }
        }
        Command::Graph { cfg, dot, input, .. } => {
            for path in write_graphs(program.as_ref().unwrap(), &input.file, cfg, &dot)? {
                println!("{}", path.display());
            }
        }
        Command::Oracle { max_steps, prune, .. } => {
            if max_steps == 0 {
                bail!("--max-steps must be at least 1");
            }
            print!("{}", to_json(&interpret(program.as_ref().unwrap(), max_steps, prune)?)?);
        }
        Command::Compare { before, after } => {
            let read = |p: &PathBuf| -> Result<_> {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                metrics_from_json(&text).with_context(|| format!("{} is not a metrics report", p.display()))
            };
            print!("{}", to_json(&compare(&read(&before)?, &read(&after)?))?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
