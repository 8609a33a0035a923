//! DOT rendering of verified squares and hexagons. Nodes carry the sentence
//! labels; subalternation is a directed edge from the stronger sentence to
//! its subaltern, contraries are dashed, subcontraries dotted, and
//! contradictories combine both patterns.

fn quote(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Clone, Copy)]
enum EdgeKind {
    Contrary,
    Subcontrary,
    Contradictory,
    Subaltern,
}

impl EdgeKind {
    fn attrs(self) -> &'static str {
        match self {
            EdgeKind::Contrary => "dir=none, style=dashed, label=\"contrary\"",
            EdgeKind::Subcontrary => "dir=none, style=dotted, label=\"subcontrary\"",
            EdgeKind::Contradictory => "dir=none, style=\"dashed,dotted\", label=\"contradictory\"",
            EdgeKind::Subaltern => "style=solid, label=\"subaltern\"",
        }
    }
}

fn render(name: &str, labels: &[String], edges: &[(usize, usize, EdgeKind)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", quote(name)));
    out.push_str("  rankdir=TB;\n  node [shape=plaintext];\n");
    for (i, label) in labels.iter().enumerate() {
        out.push_str(&format!("  n{} [label=\"{}\"];\n", i + 1, quote(label)));
    }
    for (a, b, kind) in edges {
        out.push_str(&format!("  n{} -> n{} [{}];\n", a, b, kind.attrs()));
    }
    out.push_str("}\n");
    out
}

/// The six relations of a verified square `(s1,s2,s3,s4)`.
pub fn square_dot(name: &str, labels: &[String; 4]) -> String {
    let edges = [
        (1, 2, EdgeKind::Contrary),
        (3, 4, EdgeKind::Subcontrary),
        (1, 4, EdgeKind::Contradictory),
        (2, 3, EdgeKind::Contradictory),
        (1, 3, EdgeKind::Subaltern),
        (2, 4, EdgeKind::Subaltern),
    ];
    render(name, labels, &edges)
}

/// The fifteen relations of a verified hexagon `(s1,...,s6)`.
pub fn hexagon_dot(name: &str, labels: &[String; 6]) -> String {
    let edges = [
        // the inner square
        (1, 2, EdgeKind::Contrary),
        (3, 4, EdgeKind::Subcontrary),
        (1, 4, EdgeKind::Contradictory),
        (2, 3, EdgeKind::Contradictory),
        (1, 3, EdgeKind::Subaltern),
        (2, 4, EdgeKind::Subaltern),
        // the extension vertices
        (1, 6, EdgeKind::Contrary),
        (2, 6, EdgeKind::Contrary),
        (6, 3, EdgeKind::Subaltern),
        (6, 4, EdgeKind::Subaltern),
        (1, 5, EdgeKind::Subaltern),
        (2, 5, EdgeKind::Subaltern),
        (5, 3, EdgeKind::Subcontrary),
        (5, 4, EdgeKind::Subcontrary),
        (5, 6, EdgeKind::Contradictory),
    ];
    render(name, labels, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_four_nodes_six_edges() {
        let labels = ["A(1)", "E(1)", "I(1)", "O(1)"].map(String::from);
        let dot = square_dot("S(1)", &labels);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches(" -> ").count(), 6);
    }

    #[test]
    fn hexagon_has_six_nodes_fifteen_edges() {
        let labels = ["A", "E", "I", "O", "U", "Y"].map(String::from);
        let dot = hexagon_dot("H(3/4)", &labels);
        assert_eq!(dot.matches("[label=").count(), 6);
        assert_eq!(dot.matches(" -> ").count(), 15);
    }

    #[test]
    fn labels_are_escaped() {
        let labels = ["a\"b", "c", "d", "e"].map(String::from);
        let dot = square_dot("q", &labels);
        assert!(dot.contains("a\\\"b"));
    }
}
