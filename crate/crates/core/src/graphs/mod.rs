// SPDX-License-Identifier: Apache-2.0

mod cfg;
mod ddg;
mod dot;

pub use cfg::{build_cfg, BasicBlock, BlockKind, Cfg};
pub use ddg::{build_ddgs, linearize, Ddg, DdgRole, DdgSet, GraphError};
pub use dot::{cfg_to_dot, ddg_to_dot};
