//! Two-term slide moves, diagram-level relation vectors, and reduction of
//! diagrams to normal form.
//!
//! The elementary move slides one chord endpoint over an adjacent chord: the
//! moving endpoint leaves its slot and re-appears next to the far endpoint
//! of the chord it slid over (above it when the mover started below its
//! anchor, below it otherwise). Every composite rewrite in this module is a
//! sequence of these elementary slides, and the trace records each one.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::diagram::{ChordDiagram, DiagramError, Endpoint};
use crate::formal::FormalSum;

/// One elementary slide: `moving` passes over the chord that owns `anchor`.
/// The two endpoints occupy consecutive positions on one strand and belong
/// to distinct chords.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlideMove {
    pub moving: Endpoint,
    pub anchor: Endpoint,
}

impl SlideMove {
    pub fn new(moving: Endpoint, anchor: Endpoint) -> Self {
        Self { moving, anchor }
    }

    /// True when the moving endpoint starts immediately below its anchor.
    pub fn moving_from_below(&self) -> bool {
        self.moving.pos < self.anchor.pos
    }
}

impl fmt::Display for SlideMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slide {} over {}", self.moving, self.anchor)
    }
}

/// All slides with the mover taken from below: one per pair of consecutive
/// same-strand endpoints of distinct chords.
pub fn applicable_slides(d: &ChordDiagram) -> Vec<SlideMove> {
    let mut out = Vec::new();
    for s in 0..d.strand_count() {
        let word = d.strand(s);
        for t in 0..word.len().saturating_sub(1) {
            if word[t] != word[t + 1] {
                out.push(SlideMove::new(Endpoint::new(s, t), Endpoint::new(s, t + 1)));
            }
        }
    }
    out
}

/// The shared slide primitive on strand words. Both `apply_slide` and the
/// normal-form rewriter go through here. Returns where the moved endpoint
/// landed.
fn slide_words(
    words: &mut [Vec<usize>],
    p: Endpoint,
    q: Endpoint,
) -> Result<Endpoint, DiagramError> {
    let moving_chord = *words
        .get(p.strand)
        .and_then(|w| w.get(p.pos))
        .ok_or(DiagramError::NoSuchEndpoint(p))?;
    let anchor_chord = *words
        .get(q.strand)
        .and_then(|w| w.get(q.pos))
        .ok_or(DiagramError::NoSuchEndpoint(q))?;
    if p.strand != q.strand || p.pos.abs_diff(q.pos) != 1 {
        return Err(DiagramError::NotAdjacent(p, q));
    }
    if moving_chord == anchor_chord {
        return Err(DiagramError::SameChord(p, q));
    }
    let from_below = p.pos < q.pos;
    words[p.strand].remove(p.pos);
    // Locate the far endpoint of the anchor chord after the removal.
    let anchor_now = Endpoint::new(q.strand, if from_below { q.pos - 1 } else { q.pos });
    let mut far: Option<Endpoint> = None;
    for (s, w) in words.iter().enumerate() {
        for (t, &c) in w.iter().enumerate() {
            if c == anchor_chord && !(s == anchor_now.strand && t == anchor_now.pos) {
                far = Some(Endpoint::new(s, t));
            }
        }
    }
    let far = far.expect("anchor chord has two endpoints");
    let insert_at = if from_below { far.pos + 1 } else { far.pos };
    words[far.strand].insert(insert_at, moving_chord);
    Ok(Endpoint::new(far.strand, insert_at))
}

/// Applies one elementary slide, returning the moved diagram.
pub fn apply_slide(d: &ChordDiagram, m: &SlideMove) -> Result<ChordDiagram, DiagramError> {
    Ok(apply_slide_with_landing(d, m)?.0)
}

fn apply_slide_with_landing(
    d: &ChordDiagram,
    m: &SlideMove,
) -> Result<(ChordDiagram, Endpoint), DiagramError> {
    let mut words = d.strand_words().to_vec();
    let landed = slide_words(&mut words, m.moving, m.anchor)?;
    Ok((ChordDiagram::from_strands(words), landed))
}

/// The diagram relation vector for a consecutive endpoint pair (p, q) of
/// distinct chords:
/// `D - transpose(D) - slide(D) + transpose(slide(D))`,
/// where the final transposition swaps the slid endpoint with the far
/// endpoint of the anchor chord it landed next to.
pub fn four_term_diagram_vector(
    d: &ChordDiagram,
    p: Endpoint,
    q: Endpoint,
) -> Result<FormalSum, DiagramError> {
    let transposed = d.adjacent_transposition(p, q)?;
    let mv = SlideMove::new(p, q);
    let anchor_chord = d.chord_at(q)?;
    let (slid, landed) = apply_slide_with_landing(d, &mv)?;
    // The anchor chord's far endpoint sits right next to the landing spot.
    let far = if mv.moving_from_below() {
        Endpoint::new(landed.strand, landed.pos - 1)
    } else {
        Endpoint::new(landed.strand, landed.pos + 1)
    };
    debug_assert_eq!(slid.chord_at(far), Ok(anchor_chord));
    let slid_transposed = slid.adjacent_transposition(landed, far)?;
    Ok(FormalSum::term(d.canonical_key(), 1)
        .add(&FormalSum::term(transposed.canonical_key(), -1))
        .add(&FormalSum::term(slid.canonical_key(), -1))
        .add(&FormalSum::term(slid_transposed.canonical_key(), 1)))
}

/// One recorded rewriting step: the move plus the canonical keys on both
/// sides, so traces can be replayed and audited.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub mv: SlideMove,
    pub before: String,
    pub after: String,
}

/// A replayable certificate: the ordered elementary slides taking the input
/// diagram to the output diagram.
#[derive(Clone, Debug, Default)]
pub struct MoveTrace {
    pub steps: Vec<TraceStep>,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays every step from `start`, checking the recorded keys.
    pub fn replay(&self, start: &ChordDiagram) -> Result<ChordDiagram, NormalFormError> {
        let mut d = start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            if d.canonical_key() != step.before {
                return Err(NormalFormError::TraceMismatch { step: i });
            }
            d = apply_slide(&d, &step.mv)?;
            if d.canonical_key() != step.after {
                return Err(NormalFormError::TraceMismatch { step: i });
            }
        }
        Ok(d)
    }
}

/// Per-component shape of a diagram in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentNormalForm {
    /// Strand indices along the component's path, first strand carrying the
    /// caravan.
    pub path: Vec<usize>,
    /// Number of bridges between consecutive path strands, each 1 or 2.
    pub bridges: Vec<usize>,
    /// One-humped camels in the caravan.
    pub m1: usize,
    /// Two-humped camels in the caravan.
    pub m2: usize,
}

impl fmt::Display for ComponentNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self
            .path
            .iter()
            .map(|s| (s + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let bridges = self
            .bridges
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "path={path} bridges={bridges} m1={} m2={}",
            self.m1, self.m2
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalFormSummary {
    pub components: Vec<ComponentNormalForm>,
}

impl fmt::Display for NormalFormSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("elementary move budget exceeded; this indicates an implementation bug")]
    IterationCap,
    #[error("caravan search over a {0}-chord loop zone exceeds the supported size {1}")]
    ZoneTooLarge(usize, usize),
    #[error("caravan search exhausted its state budget; this indicates an implementation bug")]
    ZoneSearchFailed,
    #[error("greedy rewriting stalled on a component")]
    Stalled,
    #[error("rewriting finished on a diagram that fails the normal-form check")]
    NotNormal,
    #[error("trace does not replay at step {step}")]
    TraceMismatch { step: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

const MOVE_CAP: usize = 1_000_000;
/// Per-component move budget for the greedy rewriter before handing the
/// component to the exhaustive search.
const COMPONENT_SOFT_CAP: usize = 300;
const ZONE_MAX_CHORDS: usize = 8;
const ZONE_STATE_CAP: usize = 4_000_000;
const FALLBACK_STATE_CAP: usize = 2_000_000;

/// Greedily tiles a loops-only word into camel blocks `[x x]` / `[x y x y]`.
/// Returns block lengths, or `None` if the word is not a caravan.
fn caravan_blocks(word: &[usize]) -> Option<Vec<usize>> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < word.len() {
        if i + 1 < word.len() && word[i] == word[i + 1] {
            blocks.push(2);
            i += 2;
        } else if i + 3 < word.len()
            && word[i] == word[i + 2]
            && word[i + 1] == word[i + 3]
            && word[i] != word[i + 1]
        {
            blocks.push(4);
            i += 4;
        } else {
            return None;
        }
    }
    Some(blocks)
}

fn caravan_counts(word: &[usize]) -> Option<(usize, usize)> {
    let blocks = caravan_blocks(word)?;
    let m1 = blocks.iter().filter(|&&b| b == 2).count();
    let m2 = blocks.iter().filter(|&&b| b == 4).count();
    Some((m1, m2))
}

/// Computes the normal-form summary of a diagram, or `None` if any
/// component violates the normal-form shape.
pub fn compute_summary(d: &ChordDiagram) -> Option<NormalFormSummary> {
    let partition = d.connected_components();
    let mut components = Vec::new();
    for block in &partition.blocks {
        components.push(component_summary(d, block)?);
    }
    Some(NormalFormSummary { components })
}

/// True iff every connected component satisfies the normal-form shape for
/// some path orientation.
pub fn is_normal_form(d: &ChordDiagram) -> bool {
    compute_summary(d).is_some()
}

fn component_summary(d: &ChordDiagram, block: &[usize]) -> Option<ComponentNormalForm> {
    let in_block: HashSet<usize> = block.iter().copied().collect();
    let chords: Vec<usize> = (0..d.chord_count())
        .filter(|&c| in_block.contains(&d.chord_strands(c).0))
        .collect();
    let mut loops: Vec<usize> = Vec::new();
    let mut bridges: Vec<usize> = Vec::new();
    for &c in &chords {
        let (a, b) = d.chord_strands(c);
        if a == b {
            loops.push(c);
        } else {
            bridges.push(c);
        }
    }

    if block.len() == 1 {
        let s = block[0];
        debug_assert!(bridges.is_empty());
        let (m1, m2) = caravan_counts(d.strand(s))?;
        return Some(ComponentNormalForm {
            path: vec![s],
            bridges: vec![],
            m1,
            m2,
        });
    }

    // Bridge multigraph on the block strands must be a path.
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    for &c in &bridges {
        *pair_count.entry(d.chord_strands(c)).or_default() += 1;
    }
    if pair_count.len() != block.len() - 1 {
        return None;
    }
    let mut neighbors: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in pair_count.keys() {
        neighbors.entry(a).or_default().push(b);
        neighbors.entry(b).or_default().push(a);
    }
    if neighbors.values().any(|v| v.len() > 2) {
        return None;
    }
    let mut ends: Vec<usize> = block
        .iter()
        .copied()
        .filter(|s| neighbors.get(s).map_or(0, Vec::len) == 1)
        .collect();
    if ends.len() != 2 {
        return None;
    }
    ends.sort_unstable();

    // All loops must live on a single end strand.
    let loop_strand: Option<usize> = {
        let strands: HashSet<usize> = loops.iter().map(|&c| d.chord_strands(c).0).collect();
        match strands.len() {
            0 => None,
            1 => Some(*strands.iter().next().unwrap()),
            _ => return None,
        }
    };
    let starts: Vec<usize> = match loop_strand {
        Some(s) if ends.contains(&s) => vec![s],
        Some(_) => return None,
        None => ends.clone(),
    };

    'orient: for &start in &starts {
        // Walk the path.
        let mut path = vec![start];
        let mut prev = usize::MAX;
        while path.len() < block.len() {
            let cur = *path.last().unwrap();
            let next = neighbors[&cur].iter().copied().find(|&s| s != prev);
            let Some(next) = next else { continue 'orient };
            prev = cur;
            path.push(next);
        }

        // Multiplicities 1 or 2.
        let mut counts = Vec::new();
        for w in path.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            let l = pair_count[&key];
            if l > 2 {
                continue 'orient;
            }
            counts.push(l);
        }

        // Non-crossing parallels: same endpoint order on both strands.
        for (i, w) in path.windows(2).enumerate() {
            if counts[i] == 2 {
                let key = (w[0].min(w[1]), w[0].max(w[1]));
                let pair: Vec<usize> = bridges
                    .iter()
                    .copied()
                    .filter(|&c| d.chord_strands(c) == key)
                    .collect();
                let (c1, c2) = (pair[0], pair[1]);
                let pos_on = |c: usize, s: usize| {
                    d.strand(s).iter().position(|&x| x == c).unwrap()
                };
                let lower_on_a = pos_on(c1, w[0]) < pos_on(c2, w[0]);
                let lower_on_b = pos_on(c1, w[1]) < pos_on(c2, w[1]);
                if lower_on_a != lower_on_b {
                    continue 'orient;
                }
            }
        }

        // Down-path endpoints below up-path endpoints on every inner strand.
        for i in 1..path.len() {
            let s = path[i];
            let up: HashSet<usize> = bridges
                .iter()
                .copied()
                .filter(|&c| {
                    d.chord_strands(c) == (s.min(path[i - 1]), s.max(path[i - 1]))
                })
                .collect();
            let word = d.strand(s);
            let first_up = word.iter().position(|c| up.contains(c));
            if let Some(first_up) = first_up {
                for &c in &word[first_up..] {
                    if !up.contains(&c) {
                        continue 'orient;
                    }
                }
            }
        }

        // Caravan at the bottom of the first strand, below all bridges.
        let word = d.strand(path[0]);
        let loop_set: HashSet<usize> = loops.iter().copied().collect();
        let prefix_len = word
            .iter()
            .position(|c| !loop_set.contains(c))
            .unwrap_or(word.len());
        if word[prefix_len..].iter().any(|c| loop_set.contains(c)) {
            continue 'orient;
        }
        let Some((m1, m2)) = caravan_counts(&word[..prefix_len]) else {
            continue 'orient;
        };

        return Some(ComponentNormalForm {
            path,
            bridges: counts,
            m1,
            m2,
        });
    }
    None
}

/// Rewrites a diagram to normal form through elementary slides.
///
/// Returns the rewritten diagram, the replayable trace, and the per-component
/// summary. Disconnected diagrams are handled component by component.
pub fn normal_form(
    d: &ChordDiagram,
) -> Result<(ChordDiagram, MoveTrace, NormalFormSummary), NormalFormError> {
    let mut worker = Worker::new(d);
    let partition = d.connected_components();
    for block in &partition.blocks {
        worker.reduce_component(block)?;
    }
    let result = worker.snapshot();
    let Some(summary) = compute_summary(&result) else {
        return Err(NormalFormError::NotNormal);
    };
    let trace = MoveTrace {
        steps: worker.steps,
    };
    Ok((result, trace, summary))
}

struct Worker {
    words: Vec<Vec<usize>>,
    protected: Vec<bool>,
    steps: Vec<TraceStep>,
    /// Step count at the start of the current component; the greedy rewriter
    /// yields to the exhaustive search when one component uses too many
    /// moves.
    component_floor: usize,
}

impl Worker {
    fn new(d: &ChordDiagram) -> Self {
        Self {
            words: d.strand_words().to_vec(),
            protected: vec![false; d.chord_count()],
            steps: Vec::new(),
            component_floor: 0,
        }
    }

    fn snapshot(&self) -> ChordDiagram {
        ChordDiagram::from_strands(self.words.clone())
    }

    fn budget(&self) -> Result<(), NormalFormError> {
        if self.steps.len() >= MOVE_CAP {
            Err(NormalFormError::IterationCap)
        } else {
            Ok(())
        }
    }

    fn soft_budget(&self) -> Result<(), NormalFormError> {
        self.budget()?;
        if self.steps.len() - self.component_floor >= COMPONENT_SOFT_CAP {
            Err(NormalFormError::Stalled)
        } else {
            Ok(())
        }
    }

    fn slide(&mut self, p: Endpoint, q: Endpoint) -> Result<(), NormalFormError> {
        self.budget()?;
        let before = self.snapshot().canonical_key();
        slide_words(&mut self.words, p, q)?;
        let after = self.snapshot().canonical_key();
        self.steps.push(TraceStep {
            mv: SlideMove::new(p, q),
            before,
            after,
        });
        Ok(())
    }

    fn endpoints_of(&self, c: usize) -> (Endpoint, Endpoint) {
        let mut found = Vec::with_capacity(2);
        for (s, w) in self.words.iter().enumerate() {
            for (t, &id) in w.iter().enumerate() {
                if id == c {
                    found.push(Endpoint::new(s, t));
                }
            }
        }
        debug_assert_eq!(found.len(), 2);
        (found[0], found[1])
    }

    fn is_loop(&self, c: usize) -> bool {
        let (a, b) = self.endpoints_of(c);
        a.strand == b.strand
    }

    fn endpoint_on(&self, c: usize, s: usize) -> Endpoint {
        let (a, b) = self.endpoints_of(c);
        if a.strand == s {
            a
        } else {
            debug_assert_eq!(b.strand, s);
            b
        }
    }

    fn far_strand(&self, c: usize, s: usize) -> usize {
        let (a, b) = self.endpoints_of(c);
        if a.strand == s {
            b.strand
        } else {
            a.strand
        }
    }

    /// Free bridges with an endpoint on strand `s`, sorted by chord id.
    fn incident_free_bridges(&self, s: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.words[s]
            .iter()
            .copied()
            .filter(|&c| !self.protected[c] && !self.is_loop(c))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn reduce_component(&mut self, block: &[usize]) -> Result<(), NormalFormError> {
        self.component_floor = self.steps.len();
        let checkpoint = self.words.clone();
        let protected_checkpoint = self.protected.clone();
        match self.reduce_component_greedy(block) {
            Ok(()) => Ok(()),
            // The greedy rewriter can stall on entangled components. Rewind
            // its moves and hand the component to the exhaustive search,
            // which is complete at desk scale.
            Err(NormalFormError::Stalled) | Err(NormalFormError::Diagram(_)) => {
                self.words = checkpoint;
                self.protected = protected_checkpoint;
                self.steps.truncate(self.component_floor);
                self.exhaustive_component_search(block)
            }
            Err(e) => Err(e),
        }
    }

    fn reduce_component_greedy(&mut self, block: &[usize]) -> Result<(), NormalFormError> {
        if block.len() == 1 {
            self.caravanize_zone(block[0])?;
            return Ok(());
        }
        let has_chords = block.iter().any(|&s| !self.words[s].is_empty());
        if !has_chords {
            return Ok(());
        }
        let path = self.build_path(block)?;
        for &s in &path {
            self.caravanize_zone(s)?;
        }
        self.gather_caravans(&path)?;
        Ok(())
    }

    /// Breadth-first search over the component's slide graph from the
    /// current state to the nearest diagram whose component satisfies the
    /// normal-form shape. Complete, and cheap at desk scale.
    fn exhaustive_component_search(&mut self, block: &[usize]) -> Result<(), NormalFormError> {
        let moves_of = |words: &[Vec<usize>]| {
            let mut out = Vec::new();
            for &s in block {
                let word = &words[s];
                for t in 0..word.len().saturating_sub(1) {
                    if word[t] != word[t + 1] {
                        out.push((Endpoint::new(s, t), Endpoint::new(s, t + 1)));
                        out.push((Endpoint::new(s, t + 1), Endpoint::new(s, t)));
                    }
                }
            }
            out
        };
        let is_target = |words: &Vec<Vec<usize>>| {
            let d = ChordDiagram::from_strands(words.clone());
            component_summary(&d, block).is_some()
        };

        let start = self.words.clone();
        if is_target(&start) {
            return Ok(());
        }
        let key_of = |words: &Vec<Vec<usize>>| {
            ChordDiagram::from_strands(words.clone()).canonical_key()
        };
        let mut parents: HashMap<String, (Vec<Vec<usize>>, (Endpoint, Endpoint))> =
            HashMap::new();
        let mut seen: HashSet<String> = HashSet::new();
        seen.insert(key_of(&start));
        let mut queue = VecDeque::new();
        queue.push_back(start.clone());
        let mut goal: Option<Vec<Vec<usize>>> = None;
        'search: while let Some(state) = queue.pop_front() {
            for (p, q) in moves_of(&state) {
                let mut next = state.clone();
                slide_words(&mut next, p, q).expect("enumerated slides are applicable");
                let key = key_of(&next);
                if !seen.insert(key.clone()) {
                    continue;
                }
                parents.insert(key, (state.clone(), (p, q)));
                if is_target(&next) {
                    goal = Some(next);
                    break 'search;
                }
                queue.push_back(next);
                if seen.len() > FALLBACK_STATE_CAP {
                    return Err(NormalFormError::IterationCap);
                }
            }
        }
        let Some(goal) = goal else {
            return Err(NormalFormError::NotNormal);
        };
        let mut path = Vec::new();
        let mut cur = key_of(&goal);
        let start_key = key_of(&start);
        while cur != start_key {
            let (prev, mv) = parents[&cur].clone();
            path.push(mv);
            cur = key_of(&prev);
        }
        path.reverse();
        for (p, q) in path {
            self.slide(p, q)?;
        }
        Ok(())
    }

    fn build_path(&mut self, block: &[usize]) -> Result<Vec<usize>, NormalFormError> {
        let mut remaining: HashSet<usize> = block.iter().copied().collect();
        let start = *block.iter().min().unwrap();
        remaining.remove(&start);
        let mut path = vec![start];
        let mut head = start;
        while !remaining.is_empty() {
            let tau = self.round(head)?;
            debug_assert!(remaining.contains(&tau));
            remaining.remove(&tau);
            path.push(tau);
            head = tau;
        }
        Ok(path)
    }

    /// One round of the path construction: funnels every free bridge at the
    /// head strand onto a single next strand, trims the parallel count to at
    /// most two, and leaves the survivors protected. Returns the next strand.
    fn round(&mut self, sigma: usize) -> Result<usize, NormalFormError> {
        let mut tau: Option<usize> = None;
        loop {
            self.soft_budget()?;
            let free = self.incident_free_bridges(sigma);
            if free.is_empty() {
                return Err(NormalFormError::Stalled);
            }
            let t = match tau {
                Some(t) if free.iter().any(|&c| self.far_strand(c, sigma) == t) => t,
                _ => {
                    let t = self.far_strand(free[0], sigma);
                    tau = Some(t);
                    t
                }
            };

            if self.action_funnel(sigma, t, &free)? {
                continue;
            }
            if self.action_place_loops(sigma, t, &free)? {
                continue;
            }
            if self.action_uncross(sigma, t, &free)? {
                continue;
            }
            if self.action_clear_far_side(sigma, t, &free)? {
                continue;
            }
            if self.action_trim_parallels(sigma, t, &free)? {
                continue;
            }

            if free.len() > 2 {
                return Err(NormalFormError::Stalled);
            }
            for &c in &free {
                self.protected[c] = true;
            }
            return Ok(t);
        }
    }

    /// A1: removes one bridge whose far strand is not `t` from the head
    /// strand (or makes progress toward that).
    fn action_funnel(
        &mut self,
        sigma: usize,
        t: usize,
        free: &[usize],
    ) -> Result<bool, NormalFormError> {
        let stray: Option<usize> = free
            .iter()
            .copied()
            .filter(|&c| self.far_strand(c, sigma) != t)
            .max_by_key(|&c| self.endpoint_on(c, sigma).pos);
        let Some(e) = stray else {
            return Ok(false);
        };
        let x = self.endpoint_on(e, sigma);
        let below = x.pos.checked_sub(1).map(|p| Endpoint::new(sigma, p));
        if let Some(b_ep) = below {
            let b = self.words[sigma][b_ep.pos];
            if self.protected[b] {
                return Err(NormalFormError::Stalled);
            }
            if !self.is_loop(b) {
                // Strip over the bridge directly below: e leaves the strand.
                self.slide(x, b_ep)?;
            } else {
                let (lo, hi) = self.endpoints_of(b);
                if b_ep == hi {
                    // Whole loop span is below: descend past it.
                    self.slide(x, b_ep)?;
                } else {
                    debug_assert_eq!(b_ep, lo);
                    // Inside the span: absorb the loop into a bridge.
                    self.slide(b_ep, x)?;
                }
            }
        } else {
            let above = Endpoint::new(sigma, 1);
            let Some(&b) = self.words[sigma].get(1) else {
                return Err(NormalFormError::Stalled);
            };
            if self.protected[b] {
                return Err(NormalFormError::Stalled);
            }
            if !self.is_loop(b) {
                // Strip upward over the bridge above; the stray leaves the
                // head strand either way.
                self.slide(x, above)?;
            } else {
                // Loop directly above: absorb it into a bridge.
                self.slide(above, x)?;
            }
        }
        Ok(true)
    }

    /// A2: pushes head-strand loops below every parallel endpoint.
    fn action_place_loops(
        &mut self,
        sigma: usize,
        _t: usize,
        free: &[usize],
    ) -> Result<bool, NormalFormError> {
        let mut parallels: Vec<usize> = free.to_vec();
        parallels.sort_by_key(|&c| self.endpoint_on(c, sigma).pos);
        for &b in parallels.iter().rev() {
            let b_ep = self.endpoint_on(b, sigma);
            let above_pos = b_ep.pos + 1;
            let Some(&occ) = self.words[sigma].get(above_pos) else {
                continue;
            };
            if self.protected[occ] || !self.is_loop(occ) {
                continue;
            }
            let x = Endpoint::new(sigma, above_pos);
            let (lo, hi) = self.endpoints_of(occ);
            if x == lo {
                // Span above the parallel: ascend past the whole span.
                self.slide(b_ep, x)?;
            } else {
                debug_assert_eq!(x, hi);
                // Parallel sits inside the span: absorb the loop.
                self.slide(x, b_ep)?;
            }
            return Ok(true);
        }
        Ok(false)
    }

    /// A2c: collapses a crossing pair of parallels into one bridge plus a
    /// loop (a crossing pair is not normal-form material; its rank is 1).
    fn action_uncross(
        &mut self,
        sigma: usize,
        t: usize,
        free: &[usize],
    ) -> Result<bool, NormalFormError> {
        let mut parallels: Vec<usize> = free.to_vec();
        parallels.sort_by_key(|&c| self.endpoint_on(c, sigma).pos);
        for w in parallels.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let lo_t = self.endpoint_on(lo, t).pos;
            let hi_t = self.endpoint_on(hi, t).pos;
            if lo_t > hi_t {
                let hi_ep = self.endpoint_on(hi, sigma);
                let lo_ep = self.endpoint_on(lo, sigma);
                if hi_ep.pos != lo_ep.pos + 1 {
                    return Err(NormalFormError::Stalled);
                }
                self.slide(hi_ep, lo_ep)?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A3: clears every free occurrence sitting above the lowest parallel
    /// endpoint on the far strand by pivoting it onto the head strand.
    fn action_clear_far_side(
        &mut self,
        _sigma: usize,
        t: usize,
        free: &[usize],
    ) -> Result<bool, NormalFormError> {
        let parallel_eps: HashSet<usize> = free
            .iter()
            .map(|&c| self.endpoint_on(c, t).pos)
            .collect();
        let Some(&lowest) = parallel_eps.iter().min() else {
            return Ok(false);
        };
        // Walk up from the lowest parallel endpoint; the first stranger has a
        // parallel endpoint immediately below it.
        for pos in lowest + 1..self.words[t].len() {
            if parallel_eps.contains(&pos) {
                continue;
            }
            if !parallel_eps.contains(&(pos - 1)) {
                return Err(NormalFormError::Stalled);
            }
            let anchor = Endpoint::new(t, pos - 1);
            self.slide(Endpoint::new(t, pos), anchor)?;
            return Ok(true);
        }
        Ok(false)
    }

    /// A4: while three or more parallels remain, rewrites the bottom three
    /// into one bridge plus a two-humped camel parked on the head strand.
    fn action_trim_parallels(
        &mut self,
        sigma: usize,
        t: usize,
        free: &[usize],
    ) -> Result<bool, NormalFormError> {
        if free.len() < 3 {
            return Ok(false);
        }
        let mut parallels: Vec<usize> = free.to_vec();
        parallels.sort_by_key(|&c| self.endpoint_on(c, sigma).pos);
        let (x, y, z) = (parallels[0], parallels[1], parallels[2]);

        let x_t = self.endpoint_on(x, t);
        let y_t = self.endpoint_on(y, t);
        if y_t.pos != x_t.pos + 1 {
            return Err(NormalFormError::Stalled);
        }
        self.slide(x_t, y_t)?;

        let z_t = self.endpoint_on(z, t);
        let y_t = self.endpoint_on(y, t);
        if z_t.pos != y_t.pos + 1 {
            return Err(NormalFormError::Stalled);
        }
        self.slide(z_t, y_t)?;

        let y_s = self.endpoint_on(y, sigma);
        let above = Endpoint::new(sigma, y_s.pos + 1);
        if self.words[sigma].get(above.pos) != Some(&x) {
            return Err(NormalFormError::Stalled);
        }
        self.slide(y_s, above)?;

        let y_s = self.endpoint_on(y, sigma);
        let above = Endpoint::new(sigma, y_s.pos + 1);
        if self.words[sigma].get(above.pos) != Some(&z) {
            return Err(NormalFormError::Stalled);
        }
        self.slide(y_s, above)?;
        Ok(true)
    }

    /// Rewrites the loop prefix of a strand into camel blocks with a
    /// breadth-first search over in-zone slides.
    fn caravanize_zone(&mut self, s: usize) -> Result<(), NormalFormError> {
        let word = &self.words[s];
        let loop_occ: Vec<bool> = {
            let snapshot = self.snapshot();
            word.iter()
                .map(|&c| {
                    let (a, b) = snapshot.chord_strands(c);
                    a == b
                })
                .collect()
        };
        let zone_len = loop_occ.iter().take_while(|&&l| l).count();
        if loop_occ[zone_len..].iter().any(|&l| l) {
            // Loop occurrences are interleaved with bridge endpoints.
            return Err(NormalFormError::Stalled);
        }
        let zone: Vec<usize> = word[..zone_len].to_vec();
        if caravan_blocks(&zone).is_some() {
            return Ok(());
        }
        let chords = zone_len / 2;
        if chords > ZONE_MAX_CHORDS {
            return Err(NormalFormError::ZoneTooLarge(chords, ZONE_MAX_CHORDS));
        }

        // BFS to the nearest caravan-tiled word.
        let mut parents: HashMap<Vec<usize>, (Vec<usize>, (usize, usize))> = HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(zone.clone());
        parents.insert(zone.clone(), (Vec::new(), (0, 0)));
        let mut goal: Option<Vec<usize>> = None;
        'search: while let Some(state) = queue.pop_front() {
            for i in 0..state.len() - 1 {
                if state[i] == state[i + 1] {
                    continue;
                }
                for (p, q) in [(i, i + 1), (i + 1, i)] {
                    let mut next_words = vec![state.clone()];
                    slide_words(&mut next_words, Endpoint::new(0, p), Endpoint::new(0, q))
                        .expect("in-zone slides are always applicable");
                    let next = next_words.into_iter().next().unwrap();
                    if parents.contains_key(&next) {
                        continue;
                    }
                    parents.insert(next.clone(), (state.clone(), (p, q)));
                    if caravan_blocks(&next).is_some() {
                        goal = Some(next);
                        break 'search;
                    }
                    queue.push_back(next);
                }
            }
            if parents.len() > ZONE_STATE_CAP {
                return Err(NormalFormError::ZoneSearchFailed);
            }
        }
        let Some(goal) = goal else {
            return Err(NormalFormError::ZoneSearchFailed);
        };
        let mut path = Vec::new();
        let mut cur = goal;
        while cur != zone {
            let (prev, mv) = parents[&cur].clone();
            path.push(mv);
            cur = prev;
        }
        path.reverse();
        for (p, q) in path {
            self.slide(Endpoint::new(s, p), Endpoint::new(s, q))?;
        }
        debug_assert!(caravan_blocks(&self.words[s][..zone_len]).is_some());
        Ok(())
    }

    /// Camel blocks (position, length) on a strand, bottom to top.
    fn camel_blocks(&self, s: usize) -> Result<Vec<(usize, usize)>, NormalFormError> {
        let word = &self.words[s];
        let snapshot = self.snapshot();
        let is_loop_occ: Vec<bool> = word
            .iter()
            .map(|&c| {
                let (a, b) = snapshot.chord_strands(c);
                a == b && !self.protected[c]
            })
            .collect();
        let mut blocks = Vec::new();
        let mut i = 0;
        while i < word.len() {
            if !is_loop_occ[i] {
                i += 1;
                continue;
            }
            if i + 1 < word.len() && word[i] == word[i + 1] {
                blocks.push((i, 2));
                i += 2;
            } else if i + 3 < word.len() && word[i] == word[i + 2] && word[i + 1] == word[i + 3]
            {
                blocks.push((i, 4));
                i += 4;
            } else {
                // Loop occurrences failed to tile into camel blocks.
                return Err(NormalFormError::Stalled);
            }
        }
        Ok(blocks)
    }

    /// Moves every camel block to the first path strand, then settles the
    /// first strand so its caravan sits below the bridge endpoints.
    fn gather_caravans(&mut self, path: &[usize]) -> Result<(), NormalFormError> {
        for idx in (1..path.len()).rev() {
            let s = path[idx];
            let up_pair = (s.min(path[idx - 1]), s.max(path[idx - 1]));
            loop {
                self.soft_budget()?;
                let blocks = self.camel_blocks(s)?;
                let Some(&(start, len)) = blocks.last() else {
                    break;
                };
                let top = start + len - 1;
                let above = Endpoint::new(s, top + 1);
                let Some(&g) = self.words[s].get(above.pos) else {
                    return Err(NormalFormError::Stalled);
                };
                if !self.protected[g] {
                    return Err(NormalFormError::Stalled);
                }
                let g_pair = {
                    let (a, b) = self.endpoints_of(g);
                    (a.strand.min(b.strand), a.strand.max(b.strand))
                };
                if g_pair == up_pair {
                    // Hop the block over g onto the previous path strand.
                    for _ in 0..len {
                        let g_ep = self.endpoint_on(g, s);
                        let occ = Endpoint::new(s, g_ep.pos - 1);
                        self.slide(occ, g_ep)?;
                    }
                } else {
                    // Walk the down-path endpoint below this block. The walk
                    // stays inside the block's chords until it drops out
                    // underneath.
                    let block_chords: HashSet<usize> =
                        self.words[s][start..start + len].iter().copied().collect();
                    let mut guard = 0;
                    loop {
                        let g_ep = self.endpoint_on(g, s);
                        if g_ep.pos == 0 {
                            break;
                        }
                        let below_chord = self.words[s][g_ep.pos - 1];
                        if !block_chords.contains(&below_chord) {
                            break;
                        }
                        self.slide(g_ep, Endpoint::new(s, g_ep.pos - 1))?;
                        guard += 1;
                        if guard > 8 {
                            return Err(NormalFormError::Stalled);
                        }
                    }
                }
            }
        }

        // First strand: climb every bridge endpoint above the camel blocks.
        let s0 = path[0];
        loop {
            self.soft_budget()?;
            let blocks = self.camel_blocks(s0)?;
            let mut acted = false;
            for &(start, len) in &blocks {
                if start == 0 {
                    continue;
                }
                let below = Endpoint::new(s0, start - 1);
                let g = self.words[s0][below.pos];
                if !self.protected[g] {
                    continue;
                }
                // Climb g past this one block.
                let block_chords: HashSet<usize> =
                    self.words[s0][start..start + len].iter().copied().collect();
                let mut guard = 0;
                loop {
                    let g_ep = self.endpoint_on(g, s0);
                    let above_pos = g_ep.pos + 1;
                    let Some(&above_chord) = self.words[s0].get(above_pos) else {
                        break;
                    };
                    if !block_chords.contains(&above_chord) {
                        break;
                    }
                    self.slide(g_ep, Endpoint::new(s0, above_pos))?;
                    guard += 1;
                    if guard > 8 {
                        return Err(NormalFormError::Stalled);
                    }
                }
                acted = true;
                break;
            }
            if !acted {
                break;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Matrix;
    use crate::graph::IntersectionGraph;
    use crate::surgery::{conway_weight, homfly_weight};

    fn parse(text: &str) -> ChordDiagram {
        ChordDiagram::parse(text).unwrap()
    }

    #[test]
    fn applicable_slide_counts() {
        assert!(applicable_slides(&parse("strands 2\nstrand 1: a\nstrand 2: a")).is_empty());
        assert_eq!(
            applicable_slides(&parse("strands 2\nstrand 1: a b\nstrand 2: a b")).len(),
            2
        );
        assert_eq!(
            applicable_slides(&parse("strands 1\nstrand 1: a b a b")).len(),
            3
        );
    }

    #[test]
    fn slide_crossing_example() {
        // Slide a (below b on strand 1) over b: a lands above b's far
        // endpoint, so strand 2 reads b a a and a becomes a loop.
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: b a");
        let m = SlideMove::new(Endpoint::new(0, 0), Endpoint::new(0, 1));
        let slid = apply_slide(&d, &m).unwrap();
        assert_eq!(
            slid.canonical_text(),
            "strands 2\nstrand 1: c1\nstrand 2: c1 c2 c2"
        );
        assert_eq!(conway_weight(&d), 0);
        assert_eq!(conway_weight(&slid), 0);
    }

    #[test]
    fn slide_matches_vertex_slide() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: b a");
        let m = SlideMove::new(Endpoint::new(0, 0), Endpoint::new(0, 1));
        let slid = apply_slide(&d, &m).unwrap();
        let lhs = IntersectionGraph::from_diagram(&slid);
        let rhs = IntersectionGraph::from_diagram(&d)
            .slide_vertex(0, 1, 0)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn slide_back_restores() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: b a");
        let m = SlideMove::new(Endpoint::new(0, 0), Endpoint::new(0, 1));
        let slid = apply_slide(&d, &m).unwrap();
        // The slid endpoint now sits above b's far endpoint on strand 2.
        let back = apply_slide(&slid, &SlideMove::new(Endpoint::new(1, 1), Endpoint::new(1, 0)))
            .unwrap();
        assert_eq!(back.canonical_text(), d.canonical_text());
    }

    #[test]
    fn four_term_vector_mass_is_zero() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: a b");
        let v = four_term_diagram_vector(&d, Endpoint::new(0, 0), Endpoint::new(0, 1)).unwrap();
        assert_eq!(v.total_mass(), 0.into());
    }

    #[test]
    fn normal_form_crossing_diagram() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: b a");
        let (nf, trace, summary) = normal_form(&d).unwrap();
        assert!(is_normal_form(&nf));
        assert_eq!(summary.components.len(), 1);
        let c = &summary.components[0];
        assert_eq!(c.path, vec![0, 1]);
        assert_eq!(c.bridges, vec![1]);
        assert_eq!((c.m1, c.m2), (1, 0));
        assert_eq!(
            trace.replay(&d).unwrap().canonical_text(),
            nf.canonical_text()
        );
        assert_eq!(conway_weight(&d), conway_weight(&nf));
        assert_eq!(homfly_weight(&d), homfly_weight(&nf));
    }

    #[test]
    fn normal_form_parallel_diagram_is_fixed() {
        let d = parse("strands 2\nstrand 1: a b\nstrand 2: a b");
        let (nf, trace, summary) = normal_form(&d).unwrap();
        assert!(trace.is_empty());
        assert_eq!(nf.canonical_text(), d.canonical_text());
        let c = &summary.components[0];
        assert_eq!(c.bridges, vec![2]);
        assert_eq!((c.m1, c.m2), (0, 0));
    }

    #[test]
    fn normal_form_three_parallel_bridges() {
        let d = parse("strands 2\nstrand 1: a b c\nstrand 2: a b c");
        let before = (
            conway_weight(&d),
            homfly_weight(&d),
            Gf2Matrix::adjacency(&IntersectionGraph::from_diagram(&d)).rank(),
        );
        let (nf, trace, summary) = normal_form(&d).unwrap();
        let c = &summary.components[0];
        assert_eq!(c.bridges, vec![1]);
        assert_eq!((c.m1, c.m2), (0, 1));
        let after = (
            conway_weight(&nf),
            homfly_weight(&nf),
            Gf2Matrix::adjacency(&IntersectionGraph::from_diagram(&nf)).rank(),
        );
        assert_eq!(before, after);
        assert_eq!(
            trace.replay(&d).unwrap().canonical_text(),
            nf.canonical_text()
        );
    }

    #[test]
    fn is_normal_form_examples() {
        assert!(is_normal_form(&parse("strands 1")));
        assert!(is_normal_form(&parse("strands 2\nstrand 1: a\nstrand 2: a")));
        // A loop above a bridge endpoint breaks the caravan-below rule.
        assert!(!is_normal_form(&parse(
            "strands 2\nstrand 1: a b b\nstrand 2: a"
        )));
    }

    #[test]
    fn normal_form_knot_word() {
        let d = parse("strands 1\nstrand 1: a b c a b c");
        let (nf, trace, summary) = normal_form(&d).unwrap();
        assert!(is_normal_form(&nf));
        let c = &summary.components[0];
        assert_eq!((c.m1, c.m2), (1, 1));
        assert_eq!(
            trace.replay(&d).unwrap().canonical_text(),
            nf.canonical_text()
        );
        assert_eq!(conway_weight(&d), conway_weight(&nf));
    }

    #[test]
    fn normal_form_disconnected() {
        let d = parse("strands 4\nstrand 1: a\nstrand 2: a\nstrand 3: b b");
        let (nf, _, summary) = normal_form(&d).unwrap();
        assert!(is_normal_form(&nf));
        assert_eq!(summary.components.len(), 3);
        assert_eq!(summary.components[1].path, vec![2]);
        assert_eq!(summary.components[1].m1, 1);
        assert_eq!(summary.components[2].path, vec![3]);
    }
}
