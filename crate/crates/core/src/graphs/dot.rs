// SPDX-License-Identifier: Apache-2.0

//! Graphviz output.

use std::fmt::Write;

use super::{Cfg, Ddg};
use crate::ir::Program;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn cfg_to_dot(cfg: &Cfg, program: &Program) -> String {
    if cfg.blocks.is_empty() {
        return "digraph { }\n".to_string();
    }
    let mut out = String::from("digraph cfg {\n  node [shape=box, fontname=monospace];\n");
    for b in &cfg.blocks {
        let text: Vec<String> = b
            .instructions
            .iter()
            .map(|&p| escape(&program.instruction_text(p)))
            .collect();
        let _ = writeln!(
            out,
            "  b{} [label=\"{}\\l\", kind=\"{:?}\"];",
            b.id,
            text.join("\\l"),
            b.kind
        );
    }
    for b in &cfg.blocks {
        if let Some(p) = b.partner.filter(|&p| p > b.id) {
            let _ = writeln!(out, "  {{ rank=same; b{}; b{}; }}", b.id, p);
        }
    }
    for (a, b) in &cfg.edges {
        let _ = writeln!(out, "  b{a} -> b{b};");
    }
    out.push_str("}\n");
    out
}

/// Edges point from an instruction to the one that must run after it.
pub fn ddg_to_dot(ddg: &Ddg, program: &Program) -> String {
    if ddg.nodes.is_empty() {
        return "digraph { }\n".to_string();
    }
    let mut out = format!("digraph ddg{} {{\n  node [shape=box, fontname=monospace];\n", ddg.id);
    for (i, &pos) in ddg.nodes.iter().enumerate() {
        let instr = &program.instructions()[pos];
        let _ = writeln!(
            out,
            "  n{i} [label=\"{}\", kind=\"{:?}\", position={pos}];",
            escape(&program.instruction_text(pos)),
            instr.device_class()
        );
    }
    for (a, b) in &ddg.edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_cfg, build_ddgs};
    use crate::ir::parse;

    #[test]
    fn empty_program_skeleton() {
        let p = Program::empty();
        assert_eq!(cfg_to_dot(&build_cfg(&p), &p), "digraph { }\n");
        let set = build_ddgs(&p).unwrap();
        assert_eq!(ddg_to_dot(set.start(), &p), "digraph { }\n");
    }

    #[test]
    fn listing_ddgs_render() {
        let src = "DECLARE m BIT\nH 0\nMEASURE 0 m\nJUMP-WHEN @label m\nY 0\nLABEL @label\nZ 0\nMEASURE 0 m";
        let p = parse(src).unwrap();
        let set = build_ddgs(&p).unwrap();
        let dots: Vec<String> = set.ddgs.iter().map(|d| ddg_to_dot(d, &p)).collect();
        assert_eq!(dots.len(), 3);
        assert!(dots[0].contains("n2 [label=\"MEASURE 0 m\""));
        assert!(dots[0].contains("n0 -> n2;"));
        assert_eq!(dots[2].matches("->").count(), 1);
    }
}
