//! Graphviz renderings of the dependency graph and of the induced preorder.

use std::fmt::Write;

use crate::cpnet::{describe_row, CpNet};
use crate::preorder::{MergeMode, PreferenceGraph};

/// Dependency digraph with each node labelled by its CPT.
pub fn dependency_graph(net: &CpNet) -> String {
    let mut out = String::from("digraph cpnet {\n  node [shape=box];\n");
    for (v, name) in net.variables().iter().enumerate() {
        let mut label = name.to_string();
        if net.is_unregulated(v) {
            label.push_str("\\n(no preferences)");
        }
        for row in net.rows(v) {
            let Some(order) = describe_row(name, row.kind) else { continue };
            label.push_str("\\n");
            if !row.context.is_top() {
                let _ = write!(label, "{}: ", row.context);
            }
            label.push_str(&order);
        }
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", name, label);
    }
    for (p, c) in net.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", net.variables()[p], net.variables()[c]);
    }
    out.push_str("}\n");
    out
}

/// Induced preorder with edges drawn from better to worse. Indifferent flips
/// between distinct nodes are drawn as dashed double-headed edges; maximal
/// nodes get a double border.
pub fn induced_graph(graph: &PreferenceGraph, mode: MergeMode) -> String {
    let net = graph.net();
    let merged = graph.merged(mode);
    let optimal = graph.optimal_outcomes();
    let mut out = String::from("digraph preorder {\n  rankdir=TB;\n  node [shape=box];\n");
    for (i, members) in merged.nodes.iter().enumerate() {
        let label: Vec<String> = members.iter().map(|&o| net.format_outcome(o)).collect();
        let extra = if members.iter().any(|o| optimal.contains(o)) { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{i} [label=\"{}\"{extra}];", label.join("\\n"));
    }
    for e in &merged.edges {
        if e.indifferent {
            let _ = writeln!(out, "  n{} -> n{} [dir=both, style=dashed];", e.better, e.worse);
        } else {
            let _ = writeln!(out, "  n{} -> n{};", e.better, e.worse);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::norm_lang::parse_norms;

    #[test]
    fn dependency_dot_shape() {
        let net = compile(&parse_norms("O(f IF d)\nO(not d)\nATOMS b").unwrap()).unwrap();
        let dot = dependency_graph(&net);
        assert!(dot.starts_with("digraph cpnet {"));
        assert!(dot.contains("\"d\" -> \"f\";"));
        assert!(dot.contains("\"f\" [label=\"f\\nd: f > not f\"];"));
        assert!(dot.contains("\"b\" [label=\"b\\n(no preferences)\"];"));
    }

    #[test]
    fn empty_norm_set_gives_isolated_nodes() {
        let net = compile(&parse_norms("ATOMS a").unwrap()).unwrap();
        let g = PreferenceGraph::build(&net).unwrap();
        let dot = induced_graph(&g, MergeMode::UniformlyIndifferentVariables);
        assert_eq!(dot.matches(" [label=").count(), 2);
        assert!(!dot.contains("->"));
    }
}
