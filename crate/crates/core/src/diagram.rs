//! Chord diagrams on string links and their SLD text format.
//!
//! A diagram has `k` ordered strands (vertical line segments, drawn bottom to
//! top) carrying the `2n` endpoints of `n` chords. Internally a strand is a
//! word of chord ids in position order, so positions are always dense and
//! 0-based. Strand indices are 0-based internally and 1-based in SLD text.
//!
//! The SLD format:
//!
//! ```text
//! strands 2
//! strand 1: a b
//! strand 2: b a
//! # comment lines start with '#'
//! ```
//!
//! Each chord name appears exactly twice in the whole file; token order on a
//! line is bottom-to-top; a strand line may be omitted or empty.

use std::fmt;

use thiserror::Error;

use crate::formal::{FormalSum, TENSOR_SEP};

/// One chord endpoint: strand index and position on that strand, both
/// 0-based. Position 0 is the bottom of the strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub strand: usize,
    pub pos: usize,
}

impl Endpoint {
    pub fn new(strand: usize, pos: usize) -> Self {
        Self { strand, pos }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based strand to match SLD text, 0-based position.
        write!(f, "s{}@{}", self.strand + 1, self.pos)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chord {name:?} appears {count} time(s), expected 2")]
    ChordArity { name: String, count: usize },
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("no endpoint at {0}")]
    NoSuchEndpoint(Endpoint),
    #[error("endpoints {0} and {1} are not adjacent on one strand")]
    NotAdjacent(Endpoint, Endpoint),
    #[error("endpoints {0} and {1} belong to the same chord")]
    SameChord(Endpoint, Endpoint),
}

/// Partition of the strands into connected components, with each chord
/// assigned to the block containing its strand(s). A chord with both
/// endpoints on one strand is a loop and does not merge blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandComponentPartition {
    /// Blocks of strand indices, each sorted, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// For each chord, the index of the block it belongs to.
    pub chord_block: Vec<usize>,
}

/// A chord diagram for a string link.
///
/// Chord ids are stable under the editing operations (slides,
/// transpositions), which is what lets intersection-graph vertices track
/// chords through moves. Diagrams are compared via [`canonical_text`], never
/// structurally.
///
/// [`canonical_text`]: ChordDiagram::canonical_text
#[derive(Clone, Debug)]
pub struct ChordDiagram {
    strands: Vec<Vec<usize>>,
    chord_count: usize,
}

impl ChordDiagram {
    /// The empty diagram on `k` strands.
    pub fn empty(strand_count: usize) -> Self {
        assert!(strand_count >= 1, "a diagram has at least one strand");
        Self {
            strands: vec![Vec::new(); strand_count],
            chord_count: 0,
        }
    }

    /// Builds a diagram from strand words of chord ids. Chord ids must be
    /// exactly `0..n` with each id occurring exactly twice overall.
    pub fn from_strands(strands: Vec<Vec<usize>>) -> Self {
        assert!(!strands.is_empty());
        let mut counts: Vec<usize> = Vec::new();
        for word in &strands {
            for &c in word {
                if c >= counts.len() {
                    counts.resize(c + 1, 0);
                }
                counts[c] += 1;
            }
        }
        assert!(
            counts.iter().all(|&c| c == 2),
            "every chord id must occur exactly twice"
        );
        let chord_count = counts.len();
        Self {
            strands,
            chord_count,
        }
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    /// Number of chords (the degree of the diagram).
    pub fn chord_count(&self) -> usize {
        self.chord_count
    }

    /// The word of chord ids on strand `s`, bottom to top.
    pub fn strand(&self, s: usize) -> &[usize] {
        &self.strands[s]
    }

    pub fn strand_words(&self) -> &[Vec<usize>] {
        &self.strands
    }

    /// The chord occupying an endpoint.
    pub fn chord_at(&self, e: Endpoint) -> Result<usize, DiagramError> {
        self.strands
            .get(e.strand)
            .and_then(|w| w.get(e.pos))
            .copied()
            .ok_or(DiagramError::NoSuchEndpoint(e))
    }

    /// The two endpoints of chord `c`, in (strand, position) order.
    pub fn endpoints_of(&self, c: usize) -> (Endpoint, Endpoint) {
        let mut found: Vec<Endpoint> = Vec::with_capacity(2);
        for (s, word) in self.strands.iter().enumerate() {
            for (p, &id) in word.iter().enumerate() {
                if id == c {
                    found.push(Endpoint::new(s, p));
                }
            }
        }
        assert_eq!(found.len(), 2, "chord {c} must have exactly two endpoints");
        (found[0], found[1])
    }

    /// The unordered strand pair carrying chord `c`, as a sorted pair.
    pub fn chord_strands(&self, c: usize) -> (usize, usize) {
        let (a, b) = self.endpoints_of(c);
        let (lo, hi) = if a.strand <= b.strand {
            (a.strand, b.strand)
        } else {
            (b.strand, a.strand)
        };
        (lo, hi)
    }

    /// Parses SLD text.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut strand_count: Option<usize> = None;
        let mut name_words: Vec<Option<Vec<String>>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if strand_count.is_none() {
                let rest = line.strip_prefix("strands").ok_or_else(|| DiagramError::Parse {
                    line: line_no,
                    msg: format!("expected `strands <k>`, found {line:?}"),
                })?;
                let k: usize = rest.trim().parse().map_err(|_| DiagramError::Parse {
                    line: line_no,
                    msg: format!("invalid strand count {:?}", rest.trim()),
                })?;
                if k == 0 {
                    return Err(DiagramError::Parse {
                        line: line_no,
                        msg: "strand count must be at least 1".into(),
                    });
                }
                strand_count = Some(k);
                name_words = vec![None; k];
                continue;
            }
            let k = strand_count.unwrap();
            let rest = line.strip_prefix("strand").ok_or_else(|| DiagramError::Parse {
                line: line_no,
                msg: format!("expected `strand <i>: ...`, found {line:?}"),
            })?;
            let (index_part, tokens_part) =
                rest.split_once(':').ok_or_else(|| DiagramError::Parse {
                    line: line_no,
                    msg: "missing `:` after strand index".into(),
                })?;
            let i: usize = index_part.trim().parse().map_err(|_| DiagramError::Parse {
                line: line_no,
                msg: format!("invalid strand index {:?}", index_part.trim()),
            })?;
            if i < 1 || i > k {
                return Err(DiagramError::Parse {
                    line: line_no,
                    msg: format!("strand index {i} out of range 1..{k}"),
                });
            }
            if name_words[i - 1].is_some() {
                return Err(DiagramError::Parse {
                    line: line_no,
                    msg: format!("duplicate line for strand {i}"),
                });
            }
            let mut tokens = Vec::new();
            for tok in tokens_part.split_whitespace() {
                if !tok.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
                    return Err(DiagramError::Parse {
                        line: line_no,
                        msg: format!("malformed token {tok:?}"),
                    });
                }
                tokens.push(tok.to_string());
            }
            name_words[i - 1] = Some(tokens);
        }

        let Some(k) = strand_count else {
            return Err(DiagramError::Parse {
                line: 1,
                msg: "missing `strands <k>` header".into(),
            });
        };

        // Assign chord ids in first-appearance order scanning strands 1..k
        // bottom to top, then check arity.
        let mut ids: Vec<(String, usize)> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut strands: Vec<Vec<usize>> = Vec::with_capacity(k);
        for word in name_words.into_iter() {
            let word = word.unwrap_or_default();
            let mut out = Vec::with_capacity(word.len());
            for name in word {
                let id = match ids.iter().find(|(n, _)| *n == name) {
                    Some((_, id)) => *id,
                    None => {
                        let id = ids.len();
                        ids.push((name.clone(), id));
                        counts.push(0);
                        id
                    }
                };
                counts[id] += 1;
                out.push(id);
            }
            strands.push(out);
        }
        for (name, id) in &ids {
            if counts[*id] != 2 {
                return Err(DiagramError::ChordArity {
                    name: name.clone(),
                    count: counts[*id],
                });
            }
        }
        Ok(Self {
            strands,
            chord_count: ids.len(),
        })
    }

    /// The renaming that canonical output uses: chord id -> canonical index,
    /// in first-appearance order scanning strand 1..k bottom to top.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut rank = vec![usize::MAX; self.chord_count];
        let mut next = 0;
        for word in &self.strands {
            for &c in word {
                if rank[c] == usize::MAX {
                    rank[c] = next;
                    next += 1;
                }
            }
        }
        rank
    }

    /// Canonical SLD text: chords renamed `c1..cn` in first-appearance order,
    /// every strand line emitted. Re-parsing it is the identity.
    pub fn canonical_text(&self) -> String {
        let rank = self.canonical_order();
        let mut out = format!("strands {}", self.strand_count());
        for (s, word) in self.strands.iter().enumerate() {
            out.push('\n');
            out.push_str(&format!("strand {}:", s + 1));
            for &c in word {
                out.push_str(&format!(" c{}", rank[c] + 1));
            }
        }
        out
    }

    /// Single-line form of [`canonical_text`], used as a `FormalSum` key and
    /// in line-oriented CLI output.
    ///
    /// [`canonical_text`]: ChordDiagram::canonical_text
    pub fn canonical_key(&self) -> String {
        self.canonical_text().replace('\n', "; ")
    }

    /// Parses the single-line key form produced by [`canonical_key`].
    ///
    /// [`canonical_key`]: ChordDiagram::canonical_key
    pub fn parse_key(key: &str) -> Result<Self, DiagramError> {
        Self::parse(&key.replace("; ", "\n"))
    }

    /// Connected components of the graph with one node per strand and one
    /// edge per chord. Loop chords do not merge blocks.
    pub fn connected_components(&self) -> StrandComponentPartition {
        let k = self.strand_count();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in 0..self.chord_count {
            let (a, b) = self.endpoints_of(c);
            let (ra, rb) = (find(&mut parent, a.strand), find(&mut parent, b.strand));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut block_of_strand = vec![usize::MAX; k];
        for s in 0..k {
            let r = find(&mut parent, s);
            let idx = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            block_of_strand[s] = idx;
        }
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); roots.len()];
        for s in 0..k {
            blocks[block_of_strand[s]].push(s);
        }
        let chord_block = (0..self.chord_count)
            .map(|c| block_of_strand[self.endpoints_of(c).0.strand])
            .collect();
        StrandComponentPartition {
            blocks,
            chord_block,
        }
    }

    /// Stacks `top` on top of `self`: strand `i` of the result is strand `i`
    /// of `self` followed by strand `i` of `top`. Chord ids of `self` come
    /// first, then `top`'s shifted up.
    pub fn stack_product(&self, top: &Self) -> Result<Self, DiagramError> {
        if self.strand_count() != top.strand_count() {
            return Err(DiagramError::StrandMismatch {
                left: self.strand_count(),
                right: top.strand_count(),
            });
        }
        let shift = self.chord_count;
        let strands = self
            .strands
            .iter()
            .zip(&top.strands)
            .map(|(lo, hi)| {
                let mut w = lo.clone();
                w.extend(hi.iter().map(|&c| c + shift));
                w
            })
            .collect();
        Ok(Self {
            strands,
            chord_count: self.chord_count + top.chord_count,
        })
    }

    /// The subdiagram keeping exactly the chords with `keep[c] == true`.
    /// Positions re-densify; kept chords are renumbered in increasing id
    /// order, so relative chord order is preserved.
    pub fn keep_chords(&self, keep: &[bool]) -> Self {
        assert_eq!(keep.len(), self.chord_count);
        let mut new_id = vec![usize::MAX; self.chord_count];
        let mut next = 0;
        for c in 0..self.chord_count {
            if keep[c] {
                new_id[c] = next;
                next += 1;
            }
        }
        let strands = self
            .strands
            .iter()
            .map(|w| w.iter().filter(|&&c| keep[c]).map(|&c| new_id[c]).collect())
            .collect();
        Self {
            strands,
            chord_count: next,
        }
    }

    /// Coproduct: one term per subset `J` of chords, with key
    /// `key(D minus J) ⊗ key(D restricted to J)` and coefficient +1.
    pub fn coproduct(&self) -> FormalSum {
        let n = self.chord_count;
        let mut sum = FormalSum::zero();
        for mask in 0u64..(1u64 << n) {
            let in_j: Vec<bool> = (0..n).map(|c| mask >> c & 1 == 1).collect();
            let out_j: Vec<bool> = in_j.iter().map(|&b| !b).collect();
            let left = self.keep_chords(&out_j).canonical_key();
            let right = self.keep_chords(&in_j).canonical_key();
            sum = sum.add(&FormalSum::term(format!("{left}{TENSOR_SEP}{right}"), 1));
        }
        sum
    }

    /// Exchanges two consecutive endpoints of distinct chords on one strand.
    pub fn adjacent_transposition(
        &self,
        p: Endpoint,
        q: Endpoint,
    ) -> Result<Self, DiagramError> {
        let cp = self.chord_at(p)?;
        let cq = self.chord_at(q)?;
        if p.strand != q.strand || p.pos.abs_diff(q.pos) != 1 {
            return Err(DiagramError::NotAdjacent(p, q));
        }
        if cp == cq {
            return Err(DiagramError::SameChord(p, q));
        }
        let mut strands = self.strands.clone();
        strands[p.strand].swap(p.pos, q.pos);
        Ok(Self {
            strands,
            chord_count: self.chord_count,
        })
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ChordDiagram {
        ChordDiagram::parse(text).expect("valid SLD")
    }

    #[test]
    fn parse_smallest_diagram() {
        let d = parse("strands 2\nstrand 1: a\nstrand 2: a");
        assert_eq!(d.strand_count(), 2);
        assert_eq!(d.chord_count(), 1);
        assert_eq!(d.chord_strands(0), (0, 1));
    }

    #[test]
    fn parse_header_only_is_empty_diagram() {
        let d = parse("strands 3");
        assert_eq!(d.strand_count(), 3);
        assert_eq!(d.chord_count(), 0);
    }

    #[test]
    fn parse_rejects_odd_arity() {
        let err = ChordDiagram::parse("strands 1\nstrand 1: a b a").unwrap_err();
        assert_eq!(
            err,
            DiagramError::ChordArity {
                name: "b".into(),
                count: 1
            }
        );
    }

    #[test]
    fn parse_rejects_bad_strand_index() {
        let err = ChordDiagram::parse("strands 2\nstrand 3: a a").unwrap_err();
        assert!(matches!(err, DiagramError::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_rejects_duplicate_strand_line() {
        let err =
            ChordDiagram::parse("strands 2\nstrand 1: a\nstrand 1: a").unwrap_err();
        assert!(matches!(err, DiagramError::Parse { line: 3, .. }));
    }

    #[test]
    fn parse_allows_comments_and_empty_strand_lines() {
        let d = parse("# a comment\nstrands 2\nstrand 2:\nstrand 1: a a");
        assert_eq!(d.chord_count(), 1);
        assert_eq!(d.strand(0), &[0, 0]);
        assert!(d.strand(1).is_empty());
    }

    #[test]
    fn canonical_text_renames_chords() {
        let d = parse("strands 2\nstrand 1: x\nstrand 2: x");
        assert_eq!(d.canonical_text(), "strands 2\nstrand 1: c1\nstrand 2: c1");
    }

    #[test]
    fn canonical_text_first_appearance_order() {
        let d = parse("strands 1\nstrand 1: b a b a");
        assert_eq!(d.canonical_text(), "strands 1\nstrand 1: c1 c2 c1 c2");
    }

    #[test]
    fn canonical_roundtrip() {
        let d = parse("strands 3\nstrand 3: z y\nstrand 1: y z");
        let canon = d.canonical_text();
        assert_eq!(parse(&canon).canonical_text(), canon);
        assert_eq!(ChordDiagram::parse_key(&d.canonical_key()).unwrap().canonical_text(), canon);
    }

    #[test]
    fn components_bridge_merges() {
        let d = parse("strands 2\nstrand 1: a\nstrand 2: a");
        let p = d.connected_components();
        assert_eq!(p.blocks, vec![vec![0, 1]]);
    }

    #[test]
    fn components_loop_does_not_merge() {
        let d = parse("strands 3\nstrand 1: a a");
        let p = d.connected_components();
        assert_eq!(p.blocks, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(p.chord_block, vec![0]);
    }

    #[test]
    fn components_chain() {
        let d = parse("strands 4\nstrand 1: a\nstrand 2: a b\nstrand 3: b");
        let p = d.connected_components();
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn stack_product_concatenates() {
        let d1 = parse("strands 3\nstrand 1: a\nstrand 2: a");
        let d2 = parse("strands 3\nstrand 1: b\nstrand 3: b");
        let p = d1.stack_product(&d2).unwrap();
        assert_eq!(
            p.canonical_text(),
            "strands 3\nstrand 1: c1 c2\nstrand 2: c1\nstrand 3: c2"
        );
    }

    #[test]
    fn stack_product_unit() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: b a");
        let e = ChordDiagram::empty(2);
        assert_eq!(d.stack_product(&e).unwrap().canonical_text(), d.canonical_text());
        assert_eq!(e.stack_product(&d).unwrap().canonical_text(), d.canonical_text());
    }

    #[test]
    fn stack_product_strand_mismatch() {
        let d1 = parse("strands 2");
        let d2 = parse("strands 3");
        assert!(matches!(
            d1.stack_product(&d2),
            Err(DiagramError::StrandMismatch { .. })
        ));
    }

    #[test]
    fn coproduct_single_chord() {
        let d = parse("strands 2\nstrand 1: a\nstrand 2: a");
        let sum = d.coproduct();
        let full = d.canonical_key();
        let empty = ChordDiagram::empty(2).canonical_key();
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.coefficient(&format!("{empty}{TENSOR_SEP}{full}")), 1.into());
        assert_eq!(sum.coefficient(&format!("{full}{TENSOR_SEP}{empty}")), 1.into());
    }

    #[test]
    fn coproduct_empty_diagram() {
        let d = ChordDiagram::empty(2);
        let sum = d.coproduct();
        let empty = d.canonical_key();
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.coefficient(&format!("{empty}{TENSOR_SEP}{empty}")), 1.into());
    }

    #[test]
    fn coproduct_mass_is_two_to_the_n() {
        let d = parse("strands 1\nstrand 1: a b c a b c");
        assert_eq!(d.coproduct().total_mass(), 8.into());
    }

    #[test]
    fn transposition_swaps_and_is_involutive() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: a b");
        let p = Endpoint::new(0, 0);
        let q = Endpoint::new(0, 1);
        let t = d.adjacent_transposition(p, q).unwrap();
        assert_eq!(
            t.canonical_text(),
            // After the swap strand 1 reads b a; renaming makes b -> c1.
            "strands 2\nstrand 1: c1 c2\nstrand 2: c2 c1"
        );
        let back = t.adjacent_transposition(p, q).unwrap();
        assert_eq!(back.canonical_text(), d.canonical_text());
    }

    #[test]
    fn transposition_rejects_same_chord_and_non_adjacent() {
        let d = parse("strands 1\nstrand 1: a a b b");
        assert!(matches!(
            d.adjacent_transposition(Endpoint::new(0, 0), Endpoint::new(0, 1)),
            Err(DiagramError::SameChord(..))
        ));
        assert!(matches!(
            d.adjacent_transposition(Endpoint::new(0, 1), Endpoint::new(0, 3)),
            Err(DiagramError::NotAdjacent(..))
        ));
    }
}
