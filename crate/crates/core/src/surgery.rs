//! Band-surgery evaluation of the Conway and Homfly weights.
//!
//! The closure of a string link joins the top of each strand back to its own
//! bottom, so before any surgery each nonempty strand is one closed curve.
//! The closed curves are modeled by a successor permutation on endpoints;
//! orientation-preserving surgery on a chord reroutes the two incoming arcs
//! into each other's outgoing arcs, which is exactly exchanging the two
//! successor values. Each surgery changes the curve count by one.

use std::fmt;

use thiserror::Error;

use crate::diagram::ChordDiagram;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("chord {0} was already surgered")]
    AlreadySurgered(usize),
    #[error("chord {0} out of range")]
    NoSuchChord(usize),
}

/// Successor permutation on the endpoints of a diagram's closure.
#[derive(Clone, Debug)]
pub struct ClosedCurveState {
    /// succ[e] = the endpoint following e along its closed curve.
    succ: Vec<usize>,
    /// Global endpoint ids of each chord's two endpoints.
    chord_endpoints: Vec<(usize, usize)>,
    surgered: Vec<bool>,
    free_strands: usize,
}

impl ClosedCurveState {
    /// The closure of `d` before any surgery.
    pub fn new(d: &ChordDiagram) -> Self {
        let mut offsets = Vec::with_capacity(d.strand_count());
        let mut total = 0;
        let mut free_strands = 0;
        for s in 0..d.strand_count() {
            offsets.push(total);
            let len = d.strand(s).len();
            total += len;
            if len == 0 {
                free_strands += 1;
            }
        }
        let mut succ = vec![0; total];
        for s in 0..d.strand_count() {
            let len = d.strand(s).len();
            for p in 0..len {
                // Top endpoint wraps to the bottom of the same strand.
                succ[offsets[s] + p] = offsets[s] + (p + 1) % len;
            }
        }
        let mut chord_endpoints = vec![(usize::MAX, usize::MAX); d.chord_count()];
        for s in 0..d.strand_count() {
            for (p, &c) in d.strand(s).iter().enumerate() {
                let id = offsets[s] + p;
                if chord_endpoints[c].0 == usize::MAX {
                    chord_endpoints[c].0 = id;
                } else {
                    chord_endpoints[c].1 = id;
                }
            }
        }
        Self {
            succ,
            chord_endpoints,
            surgered: vec![false; d.chord_count()],
            free_strands,
        }
    }

    pub fn free_strands(&self) -> usize {
        self.free_strands
    }

    /// Surgery on one chord: exchange the successor values at its two
    /// endpoints.
    pub fn surger(&mut self, chord: usize) -> Result<(), SurgeryError> {
        let Some(&(a, b)) = self.chord_endpoints.get(chord) else {
            return Err(SurgeryError::NoSuchChord(chord));
        };
        if self.surgered[chord] {
            return Err(SurgeryError::AlreadySurgered(chord));
        }
        self.surgered[chord] = true;
        self.succ.swap(a, b);
        Ok(())
    }

    /// Number of cycles of the successor permutation.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.succ.len()];
        let mut cycles = 0;
        for start in 0..self.succ.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                e = self.succ[e];
            }
        }
        cycles
    }

    /// Closed components: successor cycles plus endpoint-free strands.
    pub fn components(&self) -> usize {
        self.cycle_count() + self.free_strands
    }
}

/// The Homfly weight of a single diagram, always a monomial a^n b^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomflyMonomial {
    pub a_exp: usize,
    pub b_exp: usize,
}

impl fmt::Display for HomflyMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a_exp, self.b_exp) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "a^{a}"),
            (0, b) => write!(f, "b^{b}"),
            (a, b) => write!(f, "a^{a} b^{b}"),
        }
    }
}

fn components_after_full_surgery(d: &ChordDiagram) -> usize {
    let mut state = ClosedCurveState::new(d);
    for c in 0..d.chord_count() {
        state.surger(c).expect("each chord surgered once");
    }
    state.components()
}

/// Conway weight: 1 iff the fully surgered closure is a single circle.
pub fn conway_weight(d: &ChordDiagram) -> u8 {
    u8::from(components_after_full_surgery(d) == 1)
}

/// Homfly weight: `a^n b^(c-1)` where n is the degree and c the component
/// count of the fully surgered closure.
pub fn homfly_weight(d: &ChordDiagram) -> HomflyMonomial {
    HomflyMonomial {
        a_exp: d.chord_count(),
        b_exp: components_after_full_surgery(d) - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ChordDiagram {
        ChordDiagram::parse(text).unwrap()
    }

    #[test]
    fn closure_of_empty_diagram() {
        let state = ClosedCurveState::new(&parse("strands 3"));
        assert_eq!(state.cycle_count(), 0);
        assert_eq!(state.free_strands(), 3);
        assert_eq!(state.components(), 3);
    }

    #[test]
    fn closure_cycles_match_strands() {
        let state = ClosedCurveState::new(&parse("strands 2\nstrand 1: a\nstrand 2: a"));
        assert_eq!(state.cycle_count(), 2);
        assert_eq!(state.free_strands(), 0);

        let knot = ClosedCurveState::new(&parse("strands 1\nstrand 1: a b a b"));
        assert_eq!(knot.cycle_count(), 1);
    }

    #[test]
    fn surgery_merges_and_splits() {
        // Two 1-cycles joined by a chord merge into one 2-cycle.
        let mut state = ClosedCurveState::new(&parse("strands 2\nstrand 1: a\nstrand 2: a"));
        state.surger(0).unwrap();
        assert_eq!(state.cycle_count(), 1);

        // A loop chord on one strand splits the 2-cycle.
        let mut state = ClosedCurveState::new(&parse("strands 1\nstrand 1: a a"));
        assert_eq!(state.cycle_count(), 1);
        state.surger(0).unwrap();
        assert_eq!(state.cycle_count(), 2);
    }

    #[test]
    fn surger_twice_is_an_error() {
        let mut state = ClosedCurveState::new(&parse("strands 1\nstrand 1: a a"));
        state.surger(0).unwrap();
        assert_eq!(state.surger(0), Err(SurgeryError::AlreadySurgered(0)));
    }

    #[test]
    fn conway_examples() {
        assert_eq!(conway_weight(&parse("strands 2\nstrand 1: a\nstrand 2: a")), 1);
        assert_eq!(conway_weight(&parse("strands 2")), 0);
        assert_eq!(conway_weight(&parse("strands 2\nstrand 1: a b\nstrand 2: b a")), 0);
    }

    #[test]
    fn homfly_examples() {
        let h = homfly_weight(&parse("strands 2\nstrand 1: a\nstrand 2: a"));
        assert_eq!((h.a_exp, h.b_exp), (1, 0));
        assert_eq!(h.to_string(), "a^1");

        let unlink = homfly_weight(&parse("strands 2"));
        assert_eq!((unlink.a_exp, unlink.b_exp), (0, 1));
        assert_eq!(unlink.to_string(), "b^1");

        let crossing = homfly_weight(&parse("strands 2\nstrand 1: a b\nstrand 2: b a"));
        assert_eq!((crossing.a_exp, crossing.b_exp), (2, 1));
        assert_eq!(crossing.to_string(), "a^2 b^1");

        assert_eq!(homfly_weight(&parse("strands 1")).to_string(), "1");
    }

    #[test]
    fn conway_is_homfly_at_b_zero() {
        for text in [
            "strands 2\nstrand 1: a\nstrand 2: a",
            "strands 2\nstrand 1: a b\nstrand 2: b a",
            "strands 1\nstrand 1: a b a b",
            "strands 3\nstrand 1: a a b\nstrand 2: b",
        ] {
            let d = parse(text);
            assert_eq!(conway_weight(&d) == 1, homfly_weight(&d).b_exp == 0);
        }
    }

    #[test]
    fn full_surgery_is_order_independent() {
        // All surgery orders of a 3-chord diagram give the same state.
        let d = parse("strands 2\nstrand 1: a b c\nstrand 2: b a c");
        let orders: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let reference = components_after_full_surgery(&d);
        for order in orders {
            let mut state = ClosedCurveState::new(&d);
            for c in order {
                state.surger(c).unwrap();
            }
            assert_eq!(state.components(), reference);
        }
    }
}
