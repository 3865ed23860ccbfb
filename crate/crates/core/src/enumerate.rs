//! Exhaustive enumeration of chord diagrams at desk scale.
//!
//! Diagrams with `k` strands and exactly `n` chords are generated by first
//! distributing the `2n` endpoint slots over the strands (compositions) and
//! then taking every perfect matching of the slots, always pairing the
//! smallest unmatched slot first. Chord ids come out in first-appearance
//! order, so each diagram is produced already canonical, exactly once.

use crate::diagram::ChordDiagram;

/// Visits every diagram with exactly `k` strands and `n` chords.
pub fn for_each_diagram<F: FnMut(&ChordDiagram)>(
    k: usize,
    n: usize,
    connected_only: bool,
    mut f: F,
) {
    assert!(k >= 1);
    let slots = 2 * n;
    let mut sizes = vec![0usize; k];
    compositions(slots, 0, &mut sizes, &mut |sizes| {
        let mut strand_of_slot = Vec::with_capacity(slots);
        for (s, &m) in sizes.iter().enumerate() {
            strand_of_slot.extend(std::iter::repeat(s).take(m));
        }
        let mut assignment = vec![usize::MAX; slots];
        matchings(&mut assignment, 0, &mut |assignment| {
            let mut strands = vec![Vec::new(); k];
            for (slot, &chord) in assignment.iter().enumerate() {
                strands[strand_of_slot[slot]].push(chord);
            }
            let d = ChordDiagram::from_strands(strands);
            if !connected_only || d.connected_components().blocks.len() == 1 {
                f(&d);
            }
        });
    });
}

/// All diagrams with exactly `k` strands and `n` chords, in generation order.
pub fn enumerate_diagrams(k: usize, n: usize, connected_only: bool) -> Vec<ChordDiagram> {
    let mut out = Vec::new();
    for_each_diagram(k, n, connected_only, |d| out.push(d.clone()));
    out
}

/// Visits diagrams for every degree `1..=n_max` (the graded pieces of
/// positive degree).
pub fn for_each_diagram_up_to<F: FnMut(&ChordDiagram)>(
    k: usize,
    n_max: usize,
    connected_only: bool,
    mut f: F,
) {
    for n in 1..=n_max {
        for_each_diagram(k, n, connected_only, &mut f);
    }
}

fn compositions<F: FnMut(&[usize])>(left: usize, idx: usize, sizes: &mut [usize], f: &mut F) {
    if idx + 1 == sizes.len() {
        sizes[idx] = left;
        f(sizes);
        return;
    }
    for take in 0..=left {
        sizes[idx] = take;
        compositions(left - take, idx + 1, sizes, f);
    }
}

/// Perfect matchings by pairing the smallest unmatched slot with each later
/// unmatched slot. `assignment[slot]` receives the chord id.
fn matchings<F: FnMut(&[usize])>(assignment: &mut Vec<usize>, next_chord: usize, f: &mut F) {
    let Some(first) = assignment.iter().position(|&c| c == usize::MAX) else {
        f(assignment);
        return;
    };
    assignment[first] = next_chord;
    for second in first + 1..assignment.len() {
        if assignment[second] != usize::MAX {
            continue;
        }
        assignment[second] = next_chord;
        matchings(assignment, next_chord + 1, f);
        assignment[second] = usize::MAX;
    }
    assignment[first] = usize::MAX;
}

/// (2n-1)!! — the number of perfect matchings of 2n points.
pub fn double_factorial_odd(n: usize) -> usize {
    (0..n).map(|i| 2 * i + 1).product()
}

/// Number of weak compositions of `2n` into `k` parts.
pub fn composition_count(k: usize, n: usize) -> usize {
    // C(2n + k - 1, k - 1)
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 1..k {
        num *= 2 * n + i;
        den *= i;
    }
    num / den
}

/// Closed-form diagram count for exactly `k` strands and `n` chords.
pub fn diagram_count(k: usize, n: usize) -> usize {
    composition_count(k, n) * double_factorial_odd(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_closed_form() {
        assert_eq!(enumerate_diagrams(1, 2, false).len(), 3);
        assert_eq!(enumerate_diagrams(2, 1, false).len(), 3);
        assert_eq!(enumerate_diagrams(2, 2, false).len(), 15);
        for k in 1..=3 {
            for n in 0..=3 {
                assert_eq!(
                    enumerate_diagrams(k, n, false).len(),
                    diagram_count(k, n),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn graded_sweep_counts() {
        let mut cases = 0;
        for_each_diagram_up_to(2, 4, false, |_| cases += 1);
        assert_eq!(cases, 1068);
        let mut knot_cases = 0;
        for_each_diagram_up_to(1, 5, false, |_| knot_cases += 1);
        assert_eq!(knot_cases, 1069);
    }

    #[test]
    fn no_duplicate_canonical_texts() {
        for (k, n) in [(1, 3), (2, 2), (3, 2)] {
            let mut seen = HashSet::new();
            for_each_diagram(k, n, false, |d| {
                assert!(seen.insert(d.canonical_text()), "duplicate at k={k} n={n}");
            });
            assert_eq!(seen.len(), diagram_count(k, n));
        }
    }

    #[test]
    fn diagrams_come_out_canonical() {
        for_each_diagram(2, 2, false, |d| {
            let reparsed = ChordDiagram::parse(&d.canonical_text()).unwrap();
            assert_eq!(reparsed.strand_words(), d.strand_words());
        });
    }

    #[test]
    fn connected_filter() {
        // k=2, n=1: bridge is connected, the two loop placements are not.
        assert_eq!(enumerate_diagrams(2, 1, true).len(), 1);
        assert_eq!(enumerate_diagrams(2, 1, false).len(), 3);
        // A single strand is always one component.
        assert_eq!(enumerate_diagrams(1, 2, true).len(), 3);
    }
}
