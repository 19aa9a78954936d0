// SPDX-License-Identifier: Apache-2.0

//! Analyses, metrics and optimizations for hybrid quantum-classical Quil
//! programs.

pub mod analyses;
pub mod generate;
pub mod graphs;
pub mod harness;
pub mod ir;
pub mod metrics;
pub mod oracle;
pub mod transforms;
