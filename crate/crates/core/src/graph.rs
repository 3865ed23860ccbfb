//! Labeled directed intersection graphs of chord diagrams.
//!
//! Each chord becomes a vertex labeled by its unordered strand pair. For
//! every ordered same-strand pair of endpoints (lower, upper) of distinct
//! chords, one directed edge is tallied from the lower chord to the upper
//! chord; tallies are reduced mod 2 immediately. A pair connected in both
//! directions renders as a single undirected edge.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::diagram::ChordDiagram;
use crate::formal::{FormalSum, TENSOR_SEP};

/// Unordered pair of strand colors, 0-based, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    lo: usize,
    hi: usize,
}

impl VertexLabel {
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn colors(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn is_diagonal(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, color: usize) -> bool {
        self.lo == color || self.hi == color
    }

    /// Occurrences of `color` among the two slots (0, 1 or 2).
    pub fn occurrences(&self, color: usize) -> usize {
        usize::from(self.lo == color) + usize::from(self.hi == color)
    }

    /// Removing one occurrence of `color` leaves this slot.
    pub fn other(&self, color: usize) -> usize {
        debug_assert!(self.contains(color));
        if self.lo == color {
            self.hi
        } else {
            self.lo
        }
    }

    /// Multiset color-match count with another label: the sum over this
    /// label's slots of the occurrences of that slot's color in `other`.
    pub fn match_count(&self, other: &VertexLabel) -> usize {
        other.occurrences(self.lo) + other.occurrences(self.hi)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based colors, matching SLD strand numbering.
        write!(f, "{{{},{}}}", self.lo + 1, self.hi + 1)
    }
}

/// Edge state between an ordered vertex pair after mod-2 cancellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeState {
    pub forward: bool,
    pub backward: bool,
}

impl EdgeState {
    pub fn none() -> Self {
        Self {
            forward: false,
            backward: false,
        }
    }

    pub fn is_none(&self) -> bool {
        !self.forward && !self.backward
    }

    pub fn is_both(&self) -> bool {
        self.forward && self.backward
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    NoSuchVertex(usize),
    #[error("the two vertices must be distinct")]
    SameVertex,
    #[error("color {color} is not shared by the labels of vertices {a} and {b}")]
    ColorNotShared { a: usize, b: usize, color: usize },
}

/// A labeled directed multigraph with mod-2 edge multiplicities.
///
/// Vertex identity is chord identity: vertex `v` of the graph of a diagram
/// is chord `v`, and equality (`PartialEq`) is exact on aligned vertex
/// orders. Use [`canonical_key`] for order-free comparison.
///
/// [`canonical_key`]: IntersectionGraph::canonical_key
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    labels: Vec<VertexLabel>,
    /// dir[u][v] = true iff a directed edge u -> v survives mod 2. No loops.
    dir: Vec<Vec<bool>>,
}

impl IntersectionGraph {
    pub fn new(labels: Vec<VertexLabel>) -> Self {
        let n = labels.len();
        Self {
            labels,
            dir: vec![vec![false; n]; n],
        }
    }

    /// The intersection graph of a diagram, vertices in chord-id order.
    pub fn from_diagram(d: &ChordDiagram) -> Self {
        let labels = (0..d.chord_count())
            .map(|c| {
                let (a, b) = d.chord_strands(c);
                VertexLabel::new(a, b)
            })
            .collect();
        let mut g = Self::new(labels);
        for word in d.strand_words() {
            for (i, &cu) in word.iter().enumerate() {
                for &cw in &word[i + 1..] {
                    if cu != cw {
                        g.dir[cu][cw] ^= true;
                    }
                }
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Directed edge indicator u -> v.
    pub fn directed(&self, u: usize, v: usize) -> bool {
        self.dir[u][v]
    }

    pub fn edge_state(&self, u: usize, v: usize) -> EdgeState {
        EdgeState {
            forward: self.dir[u][v],
            backward: self.dir[v][u],
        }
    }

    /// A copy with the directed bit u -> v set.
    pub fn with_directed(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        g.dir[u][v] = true;
        g
    }

    /// Disjoint union followed by the color-match rule: for `v1` in `self`
    /// and `v2` in `other`, a directed edge v1 -> v2 iff the multiset color
    /// match count is odd.
    pub fn product(&self, other: &Self) -> Self {
        let n1 = self.vertex_count();
        let n2 = other.vertex_count();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut g = Self::new(labels);
        for u in 0..n1 {
            for v in 0..n1 {
                g.dir[u][v] = self.dir[u][v];
            }
        }
        for u in 0..n2 {
            for v in 0..n2 {
                g.dir[n1 + u][n1 + v] = other.dir[u][v];
            }
        }
        for v1 in 0..n1 {
            for v2 in 0..n2 {
                if self.labels[v1].match_count(&other.labels[v2]) % 2 == 1 {
                    g.dir[v1][n1 + v2] = true;
                }
            }
        }
        g
    }

    /// The subgraph induced by the vertices with `keep[v] == true`,
    /// preserving relative vertex order.
    pub fn induced(&self, keep: &[bool]) -> Self {
        let idx: Vec<usize> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let labels = idx.iter().map(|&v| self.labels[v]).collect();
        let mut g = Self::new(labels);
        for (i, &u) in idx.iter().enumerate() {
            for (j, &v) in idx.iter().enumerate() {
                g.dir[i][j] = self.dir[u][v];
            }
        }
        g
    }

    /// Coproduct: sum over vertex subsets `J` of `G_J ⊗ G_{V∖J}` with
    /// coefficient +1, keyed by canonical graph keys.
    pub fn coproduct(&self) -> FormalSum {
        let n = self.vertex_count();
        let mut sum = FormalSum::zero();
        for mask in 0u64..(1u64 << n) {
            let in_j: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let out_j: Vec<bool> = in_j.iter().map(|&b| !b).collect();
            let left = self.induced(&in_j).canonical_key();
            let right = self.induced(&out_j).canonical_key();
            sum = sum.add(&FormalSum::term(format!("{left}{TENSOR_SEP}{right}"), 1));
        }
        sum
    }

    /// Coproduct with tensor factors swapped; equals [`coproduct`] exactly
    /// when the coproduct is co-commutative.
    ///
    /// [`coproduct`]: IntersectionGraph::coproduct
    pub fn coproduct_swapped(&self) -> FormalSum {
        let n = self.vertex_count();
        let mut sum = FormalSum::zero();
        for mask in 0u64..(1u64 << n) {
            let in_j: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let out_j: Vec<bool> = in_j.iter().map(|&b| !b).collect();
            let left = self.induced(&out_j).canonical_key();
            let right = self.induced(&in_j).canonical_key();
            sum = sum.add(&FormalSum::term(format!("{left}{TENSOR_SEP}{right}"), 1));
        }
        sum
    }

    /// Flips both direction bits between two distinct vertices.
    pub fn complement_edge(&self, a: usize, b: usize) -> Result<Self, GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(GraphError::SameVertex);
        }
        let mut g = self.clone();
        g.dir[a][b] ^= true;
        g.dir[b][a] ^= true;
        Ok(g)
    }

    /// The graph image of sliding chord `a` over chord `b` along the shared
    /// color `i`: with label(a) = {i,j} and label(b) = {i,l}, the label of
    /// `a` becomes {j,l}; the edge ab is complemented iff i != l; and for
    /// every other vertex c both direction bits between a and c absorb the
    /// corresponding bits between b and c (mod 2).
    pub fn slide_vertex(&self, a: usize, b: usize, color: usize) -> Result<Self, GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(GraphError::SameVertex);
        }
        if !self.labels[a].contains(color) || !self.labels[b].contains(color) {
            return Err(GraphError::ColorNotShared { a, b, color });
        }
        let j = self.labels[a].other(color);
        let l = self.labels[b].other(color);
        let mut g = self.clone();
        g.labels[a] = VertexLabel::new(j, l);
        if color != l {
            g.dir[a][b] ^= true;
            g.dir[b][a] ^= true;
        }
        for c in 0..self.vertex_count() {
            if c == a || c == b {
                continue;
            }
            g.dir[a][c] ^= self.dir[b][c];
            g.dir[c][a] ^= self.dir[c][b];
        }
        Ok(g)
    }

    /// The relation vector `G - G'_ab - G~_ab + G~'_ab` where `'` is the
    /// edge complement and `~` is [`slide_vertex`], keyed canonically.
    ///
    /// [`slide_vertex`]: IntersectionGraph::slide_vertex
    pub fn four_term_vector(
        &self,
        a: usize,
        b: usize,
        color: usize,
    ) -> Result<FormalSum, GraphError> {
        let complemented = self.complement_edge(a, b)?;
        let slid = self.slide_vertex(a, b, color)?;
        let slid_complemented = slid.complement_edge(a, b)?;
        Ok(FormalSum::term(self.canonical_key(), 1)
            .add(&FormalSum::term(complemented.canonical_key(), -1))
            .add(&FormalSum::term(slid.canonical_key(), -1))
            .add(&FormalSum::term(slid_complemented.canonical_key(), 1)))
    }

    /// Label parity: for distinct u, v the direction bits must XOR to the
    /// multiset color-match count mod 2.
    pub fn label_parity_holds(&self) -> bool {
        let n = self.vertex_count();
        for u in 0..n {
            for v in (u + 1)..n {
                let m = self.labels[u].match_count(&self.labels[v]);
                if (self.dir[u][v] ^ self.dir[v][u]) != (m % 2 == 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Semisymmetry: every vertex labeled {i,i} sees symmetric edge states.
    pub fn is_semisymmetric(&self) -> bool {
        let n = self.vertex_count();
        for v in 0..n {
            if !self.labels[v].is_diagonal() {
                continue;
            }
            for w in 0..n {
                if w != v && self.dir[v][w] != self.dir[w][v] {
                    return false;
                }
            }
        }
        true
    }

    /// Graph text: `vertex` lines then `edge` lines, vertices named by
    /// position.
    pub fn text(&self) -> String {
        let n = self.vertex_count();
        let mut out = String::new();
        for v in 0..n {
            out.push_str(&format!("vertex c{} {}\n", v + 1, self.labels[v]));
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let st = self.edge_state(u, v);
                let kind = match (st.forward, st.backward) {
                    (true, true) => "both",
                    (true, false) => "fwd",
                    (false, true) => "back",
                    (false, false) => continue,
                };
                out.push_str(&format!("edge c{} c{} {kind}\n", u + 1, v + 1));
            }
        }
        out
    }

    /// Reorders vertices so that position `i` holds old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.vertex_count();
        assert_eq!(perm.len(), n);
        let labels = perm.iter().map(|&v| self.labels[v]).collect();
        let mut g = Self::new(labels);
        for i in 0..n {
            for j in 0..n {
                g.dir[i][j] = self.dir[perm[i]][perm[j]];
            }
        }
        g
    }

    fn encode(&self) -> Vec<u8> {
        let n = self.vertex_count();
        let mut out = Vec::with_capacity(n * (n + 2));
        for v in 0..n {
            out.push(self.labels[v].lo as u8);
            out.push(self.labels[v].hi as u8);
        }
        for u in 0..n {
            for v in 0..n {
                out.push(self.dir[u][v] as u8);
            }
        }
        out
    }

    fn key_text(&self) -> String {
        let text = self.text();
        let trimmed = text.trim_end();
        if trimmed.is_empty() {
            "empty".to_string()
        } else {
            trimmed.replace('\n', "; ")
        }
    }

    /// Order-free canonical key: the minimum graph text over all vertex
    /// permutations. Intended for small graphs (brute force over n!).
    pub fn canonical_key(&self) -> String {
        let n = self.vertex_count();
        if n <= 1 {
            return self.key_text();
        }
        let best = (0..n)
            .permutations(n)
            .map(|perm| self.permuted(&perm).encode())
            .min()
            .expect("nonempty permutation set");
        // Decode back into a graph to render the minimal representative.
        let mut labels = Vec::with_capacity(n);
        for v in 0..n {
            labels.push(VertexLabel::new(best[2 * v] as usize, best[2 * v + 1] as usize));
        }
        let mut g = Self::new(labels);
        for u in 0..n {
            for v in 0..n {
                g.dir[u][v] = best[2 * n + u * n + v] == 1;
            }
        }
        g.key_text()
    }

    /// DOT text: one node per vertex; single directed arcs for one-way
    /// states, `dir=none` arcs for undirected (both-way) states.
    pub fn to_dot(&self) -> String {
        let n = self.vertex_count();
        let mut out = String::from("digraph G {\n");
        for v in 0..n {
            out.push_str(&format!(
                "  c{} [label=\"c{} {}\"];\n",
                v + 1,
                v + 1,
                self.labels[v]
            ));
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let st = self.edge_state(u, v);
                match (st.forward, st.backward) {
                    (true, true) => {
                        out.push_str(&format!("  c{} -> c{} [dir=none];\n", u + 1, v + 1))
                    }
                    (true, false) => out.push_str(&format!("  c{} -> c{};\n", u + 1, v + 1)),
                    (false, true) => out.push_str(&format!("  c{} -> c{};\n", v + 1, u + 1)),
                    (false, false) => {}
                }
            }
        }
        out.push('}');
        out
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::NoSuchVertex(v))
        }
    }
}
