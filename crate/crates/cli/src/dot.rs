//! Graphviz export of Hasse diagrams.

use std::fmt::Write as _;

use paradox_core::poset::Hasse;

/// Nodes are labelled in run-length form; edges point from a vector to the
/// vectors covering it.
pub fn hasse_dot(h: &Hasse) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph hasse_{}_{} {{", h.length, h.ones);
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [shape=box, fontname=\"monospace\"];");
    for (i, v) in h.nodes.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\", tooltip=\"{}\"];", v.run_length(), v.to_word());
    }
    for (a, b) in &h.edges {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use paradox_core::poset::hasse;

    #[test]
    fn chain_of_three() {
        let dot = hasse_dot(&hasse(3, 1).unwrap());
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert_eq!(dot.matches("[label=").count(), 3);
        assert!(dot.starts_with("digraph hasse_3_1 {"));
    }
}
