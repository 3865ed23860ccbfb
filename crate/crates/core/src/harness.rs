//! Exhaustive verification suites and the adjacency collision scan.
//!
//! Every suite sweeps the enumerated diagrams of its stated range, checks one
//! family of identities exactly, and reports each counterexample found. A
//! passing suite has an empty failure list.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::diagram::ChordDiagram;
use crate::enumerate::{for_each_diagram, for_each_diagram_up_to};
use crate::formal::{FormalSum, TENSOR_SEP};
use crate::gf2::{congruence_witness_check, Gf2Matrix};
use crate::graph::IntersectionGraph;
use crate::relations::{
    applicable_slides, apply_slide, four_term_diagram_vector, is_normal_form, normal_form,
};
use crate::surgery::{conway_weight, homfly_weight, ClosedCurveState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub const SUITE_NAMES: &[&str] = &[
    "conway2",
    "knot-conway",
    "homfly2",
    "parity",
    "congruence",
    "semisymmetry",
    "slides",
    "fourterm",
    "hom",
    "bialgebra",
    "normalform",
    "all",
];

const FAILURE_LIST_CAP: usize = 100;

/// Outcome of one verification suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub k_max: usize,
    pub n_max: usize,
    pub cases: usize,
    pub failures: Vec<(String, String)>,
    /// Total failures, including any beyond the listed cap.
    pub failure_count: usize,
}

impl SuiteReport {
    fn new(name: &str, k_max: usize, n_max: usize) -> Self {
        Self {
            name: name.to_string(),
            k_max,
            n_max,
            cases: 0,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn fail(&mut self, diagram: &ChordDiagram, detail: String) {
        self.fail_plain(&diagram.canonical_key(), detail);
    }

    fn fail_plain(&mut self, subject: &str, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < FAILURE_LIST_CAP {
            self.failures.push((subject.to_string(), detail));
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < FAILURE_LIST_CAP {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} k<={} n<={} cases={} failures={}",
            self.name, self.k_max, self.n_max, self.cases, self.failure_count
        )?;
        let mut failures = self.failures.clone();
        failures.sort();
        for (key, detail) in &failures {
            write!(f, "\nFAIL {key} :: {detail}")?;
        }
        Ok(())
    }
}

/// Runs one named suite over diagrams up to the given strand count and
/// degree. Suites with a fixed strand count (`conway2`, `knot-conway`,
/// `homfly2`) ignore `k_max`.
pub fn run_suite(name: &str, k_max: usize, n_max: usize) -> Result<SuiteReport, HarnessError> {
    match name {
        "conway2" => Ok(suite_conway2(n_max)),
        "knot-conway" => Ok(suite_knot_conway(n_max)),
        "homfly2" => Ok(suite_homfly2(n_max)),
        "parity" => Ok(suite_parity(k_max, n_max)),
        "congruence" => Ok(suite_congruence(k_max, n_max)),
        "semisymmetry" => Ok(suite_semisymmetry(k_max, n_max)),
        "slides" => Ok(suite_slides(k_max, n_max)),
        "fourterm" => Ok(suite_fourterm(k_max, n_max)),
        "hom" => Ok(suite_hom(k_max.min(3), n_max)),
        "bialgebra" => Ok(suite_bialgebra(k_max.min(2), n_max)),
        "normalform" => Ok(suite_normalform(k_max, n_max)),
        "all" => {
            let mut total = SuiteReport::new("all", k_max, n_max);
            for sub in SUITE_NAMES.iter().filter(|&&s| s != "all") {
                total.merge(run_suite(sub, k_max, n_max)?);
            }
            Ok(total)
        }
        other => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}

fn adjacency(d: &ChordDiagram) -> Gf2Matrix {
    Gf2Matrix::adjacency(&IntersectionGraph::from_diagram(d))
}

/// Conway weight equals det times rank (mod 2) on two strands.
fn suite_conway2(n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("conway2", 2, n_max);
    for_each_diagram_up_to(2, n_max, false, |d| {
        report.cases += 1;
        let m = adjacency(d);
        let expected = m.det() * ((m.rank() % 2) as u8);
        let got = conway_weight(d);
        if got != expected {
            report.fail(d, format!("conway={got} det*rank={expected}"));
        }
    });
    report
}

/// On one strand the Conway weight is the determinant alone.
fn suite_knot_conway(n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("knot-conway", 1, n_max);
    for_each_diagram_up_to(1, n_max, false, |d| {
        report.cases += 1;
        let expected = adjacency(d).det();
        let got = conway_weight(d);
        if got != expected {
            report.fail(d, format!("conway={got} det={expected}"));
        }
    });
    report
}

/// Homfly weight from the adjacency rank on two strands.
fn suite_homfly2(n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("homfly2", 2, n_max);
    for_each_diagram_up_to(2, n_max, false, |d| {
        report.cases += 1;
        let r = adjacency(d).rank();
        let n = d.chord_count();
        let expected_b = if r % 2 == 1 { n - r } else { n - r + 1 };
        let h = homfly_weight(d);
        if h.a_exp != n || h.b_exp != expected_b {
            report.fail(d, format!("homfly={h} expected a^{n} b^{expected_b}"));
        }
    });
    report
}

/// Two sufficient conditions for a vanishing Conway weight, plus the
/// single-surgery component parity they rest on.
fn suite_parity(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("parity", k_max, n_max);
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max, false, |d| {
            report.cases += 1;
            let c = conway_weight(d);
            if (d.chord_count() + d.strand_count()) % 2 == 0 && c != 0 {
                report.fail(d, format!("k+n even but conway={c}"));
            }
            if adjacency(d).det() == 0 && c != 0 {
                report.fail(d, format!("det=0 but conway={c}"));
            }
            // Every single surgery moves the component count by exactly one,
            // from any reachable surgery state.
            let n = d.chord_count();
            for mask in 0u32..(1 << n) {
                let mut state = ClosedCurveState::new(d);
                for c in 0..n {
                    if mask >> c & 1 == 1 {
                        state.surger(c).unwrap();
                    }
                }
                let before = state.components();
                for c in 0..n {
                    if mask >> c & 1 == 0 {
                        let mut next = state.clone();
                        next.surger(c).unwrap();
                        let after = next.components();
                        if before.abs_diff(after) != 1 {
                            report.fail(
                                d,
                                format!("surgery on {c} moved components {before}->{after}"),
                            );
                        }
                    }
                }
            }
        });
    }
    report
}

fn shared_colors(g: &IntersectionGraph, a: usize, b: usize) -> Vec<usize> {
    let la = g.label(a).colors();
    let lb = g.label(b).colors();
    let mut colors = vec![la.0, la.1];
    colors.retain(|&c| c == lb.0 || c == lb.1);
    colors.dedup();
    colors
}

/// The explicit transvection witnesses the congruence for every vertex
/// slide, so rank and det are invariant under it (checked directly too).
fn suite_congruence(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("congruence", k_max, n_max);
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max, false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            let m = Gf2Matrix::adjacency(&g);
            let n = g.vertex_count();
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    for color in shared_colors(&g, a, b) {
                        match congruence_witness_check(&g, a, b, color) {
                            Ok(true) => {}
                            Ok(false) => report.fail(
                                d,
                                format!("witness failed for a={a} b={b} color={color}"),
                            ),
                            Err(e) => report.fail(d, format!("witness error: {e}")),
                        }
                        let slid = g.slide_vertex(a, b, color).unwrap();
                        let slid_m = Gf2Matrix::adjacency(&slid);
                        if slid_m.rank() != m.rank() || slid_m.det() != m.det() {
                            report.fail(
                                d,
                                format!("rank/det changed under vertex slide a={a} b={b}"),
                            );
                        }
                        let complemented = g.complement_edge(a, b).unwrap();
                        let lhs = complemented.slide_vertex(a, b, color).unwrap();
                        let rhs =
                            Gf2Matrix::adjacency(&g.complement_edge(a, b).unwrap());
                        let lhs_m = Gf2Matrix::adjacency(&lhs);
                        if lhs_m.rank() != rhs.rank() || lhs_m.det() != rhs.det() {
                            report.fail(
                                d,
                                format!(
                                    "rank/det changed under complement-then-slide a={a} b={b}"
                                ),
                            );
                        }
                    }
                }
            }
        });
    }
    report
}

/// Label parity and semisymmetry of realized graphs, and their stability
/// under every vertex slide.
fn suite_semisymmetry(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("semisymmetry", k_max, n_max);
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max, false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            if !g.label_parity_holds() {
                report.fail(d, "label parity violated".into());
            }
            if !g.is_semisymmetric() {
                report.fail(d, "semisymmetry violated".into());
            }
            if !Gf2Matrix::adjacency(&g).is_semisymmetric() {
                report.fail(d, "adjacency matrix not semisymmetric".into());
            }
            let n = g.vertex_count();
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    for color in shared_colors(&g, a, b) {
                        let slid = g.slide_vertex(a, b, color).unwrap();
                        if !slid.label_parity_holds() || !slid.is_semisymmetric() {
                            report.fail(
                                d,
                                format!("slide a={a} b={b} color={color} broke invariants"),
                            );
                        }
                    }
                }
            }
        });
    }
    report
}

/// Diagram slides commute with vertex slides under the graph map, and every
/// slide preserves the surgery and adjacency invariants.
fn suite_slides(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("slides", k_max, n_max);
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max, false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            let m_before = adjacency(d);
            let conway_before = conway_weight(d);
            let homfly_before = homfly_weight(d);
            for mv in applicable_slides(d) {
                let moving_chord = d.chord_at(mv.moving).unwrap();
                let anchor_chord = d.chord_at(mv.anchor).unwrap();
                let slid = apply_slide(d, &mv).unwrap();
                let expected = g
                    .slide_vertex(moving_chord, anchor_chord, mv.moving.strand)
                    .unwrap();
                if IntersectionGraph::from_diagram(&slid) != expected {
                    report.fail(d, format!("graph map mismatch for {mv}"));
                }
                let m_after = adjacency(&slid);
                if m_after.rank() != m_before.rank() || m_after.det() != m_before.det() {
                    report.fail(d, format!("rank/det changed under {mv}"));
                }
                if conway_weight(&slid) != conway_before {
                    report.fail(d, format!("conway changed under {mv}"));
                }
                if homfly_weight(&slid) != homfly_before {
                    report.fail(d, format!("homfly changed under {mv}"));
                }
            }
        });
    }
    report
}

/// Maps a formal sum of diagram tensor keys through the intersection-graph
/// construction, term by term.
fn map_tensor_sum_to_graphs(sum: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (key, coeff) in sum.iter() {
        let (left, right) = key
            .split_once(TENSOR_SEP)
            .expect("tensor keys have two factors");
        let lg = IntersectionGraph::from_diagram(&ChordDiagram::parse_key(left).unwrap());
        let rg = IntersectionGraph::from_diagram(&ChordDiagram::parse_key(right).unwrap());
        out = out.add(&FormalSum::term(
            format!("{}{TENSOR_SEP}{}", lg.canonical_key(), rg.canonical_key()),
            coeff.clone(),
        ));
    }
    out
}

/// Maps a formal sum of single diagram keys through the graph construction.
fn map_diagram_sum_to_graphs(sum: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (key, coeff) in sum.iter() {
        let g = IntersectionGraph::from_diagram(&ChordDiagram::parse_key(key).unwrap());
        out = out.add(&FormalSum::term(g.canonical_key(), coeff.clone()));
    }
    out
}

/// The diagram four-term vector maps termwise onto the graph four-term
/// vector, and rank and det annihilate every graph four-term vector.
fn suite_fourterm(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("fourterm", k_max, n_max);
    // Termwise correspondence on degrees up to min(n_max, 3), along with the
    // transposition/edge-complement contract.
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max.min(3), false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            for mv in applicable_slides(d) {
                let a = d.chord_at(mv.moving).unwrap();
                let b = d.chord_at(mv.anchor).unwrap();
                let transposed = d.adjacent_transposition(mv.moving, mv.anchor).unwrap();
                if IntersectionGraph::from_diagram(&transposed)
                    != g.complement_edge(a, b).unwrap()
                {
                    report.fail(d, format!("transposition is not the edge complement at {mv}"));
                }
                let lhs = map_diagram_sum_to_graphs(
                    &four_term_diagram_vector(d, mv.moving, mv.anchor).unwrap(),
                );
                let rhs = g.four_term_vector(a, b, mv.moving.strand).unwrap();
                if lhs != rhs {
                    report.fail(d, format!("four-term image mismatch at {mv}"));
                }
            }
        });
    }
    // Product stability: complementing or sliding inside one factor commutes
    // with taking the product, and the slide commutes with the complement.
    {
        let mut pool = Vec::new();
        for n in 1..=n_max.min(2) {
            for_each_diagram(2, n, false, |d| pool.push(IntersectionGraph::from_diagram(d)));
        }
        for g in &pool {
            for h in &pool {
                report.cases += 1;
                let product = g.product(h);
                let n = g.vertex_count();
                for a in 0..n {
                    for b in 0..n {
                        if a == b {
                            continue;
                        }
                        if g.complement_edge(a, b).unwrap().product(h)
                            != product.complement_edge(a, b).unwrap()
                        {
                            report.fail_plain(
                                "graph product",
                                format!("complement not stable under product (a={a} b={b})"),
                            );
                        }
                        for color in shared_colors(g, a, b) {
                            let slid = g.slide_vertex(a, b, color).unwrap();
                            if slid.product(h)
                                != product.slide_vertex(a, b, color).unwrap()
                            {
                                report.fail_plain(
                                    "graph product",
                                    format!("slide not stable under product (a={a} b={b})"),
                                );
                            }
                            if slid.complement_edge(a, b).unwrap()
                                != g.complement_edge(a, b)
                                    .unwrap()
                                    .slide_vertex(a, b, color)
                                    .unwrap()
                            {
                                report.fail_plain(
                                    "graph product",
                                    format!("slide/complement do not commute (a={a} b={b})"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    // Annihilation by det and rank on the full range.
    for k in 1..=k_max {
        for_each_diagram_up_to(k, n_max, false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            let n = g.vertex_count();
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    for color in shared_colors(&g, a, b) {
                        let complemented = g.complement_edge(a, b).unwrap();
                        let slid = g.slide_vertex(a, b, color).unwrap();
                        let slid_complemented = slid.complement_edge(a, b).unwrap();
                        let quad = [&g, &complemented, &slid, &slid_complemented];
                        let det_sum: i32 = quad
                            .iter()
                            .zip([1, -1, -1, 1])
                            .map(|(gr, sign)| sign * Gf2Matrix::adjacency(gr).det() as i32)
                            .sum();
                        let rank_sum: i32 = quad
                            .iter()
                            .zip([1, -1, -1, 1])
                            .map(|(gr, sign)| sign * Gf2Matrix::adjacency(gr).rank() as i32)
                            .sum();
                        if det_sum != 0 || rank_sum != 0 {
                            report.fail(
                                d,
                                format!(
                                    "four-term not annihilated: det_sum={det_sum} rank_sum={rank_sum} (a={a} b={b} color={color})"
                                ),
                            );
                        }
                    }
                }
            }
        });
    }
    report
}

/// The graph construction is a homomorphism for products and coproducts.
fn suite_hom(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("hom", k_max, n_max);
    // Product homomorphism over pairs, strand counts 2 and 3.
    for k in 2..=k_max.max(2) {
        let n_cap = n_max.min(2);
        let mut pool = vec![ChordDiagram::empty(k)];
        for n in 1..=n_cap {
            for_each_diagram(k, n, false, |d| pool.push(d.clone()));
        }
        for d1 in &pool {
            for d2 in &pool {
                report.cases += 1;
                let stacked = d1.stack_product(d2).unwrap();
                let lhs = IntersectionGraph::from_diagram(&stacked);
                let rhs = IntersectionGraph::from_diagram(d1)
                    .product(&IntersectionGraph::from_diagram(d2));
                if lhs != rhs {
                    report.fail(&stacked, "product homomorphism mismatch".into());
                }
            }
        }
    }
    // Coproduct homomorphism on strand counts 1..=2, degrees up to 3.
    for k in 1..=2usize {
        for_each_diagram_up_to(k, n_max.min(3), false, |d| {
            report.cases += 1;
            let lhs = map_tensor_sum_to_graphs(&d.coproduct());
            let rhs = IntersectionGraph::from_diagram(d).coproduct();
            if lhs != rhs {
                report.fail(d, "coproduct homomorphism mismatch".into());
            }
        });
    }
    report
}

/// Bialgebra identities: coassociativity, product compatibility, graph-side
/// compatibility, and co-commutativity.
fn suite_bialgebra(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("bialgebra", k_max, n_max);

    // Coassociativity of the diagram coproduct, k <= 2, n <= 3.
    for k in 1..=k_max.min(2) {
        for_each_diagram_up_to(k, n_max.min(3), false, |d| {
            report.cases += 1;
            let delta = d.coproduct();
            let mut lhs = FormalSum::zero();
            let mut rhs = FormalSum::zero();
            for (key, coeff) in delta.iter() {
                let (left, right) = key.split_once(TENSOR_SEP).unwrap();
                let left_d = ChordDiagram::parse_key(left).unwrap();
                let right_d = ChordDiagram::parse_key(right).unwrap();
                lhs = lhs.add(
                    &left_d
                        .coproduct()
                        .tensor(&FormalSum::term(right, 1))
                        .scale(coeff.clone()),
                );
                rhs = rhs.add(
                    &FormalSum::term(left, 1)
                        .tensor(&right_d.coproduct())
                        .scale(coeff.clone()),
                );
            }
            if lhs != rhs {
                report.fail(d, "coproduct not coassociative".into());
            }
        });
    }

    // Compatibility of product and coproduct on two strands, factors of
    // degree <= 2.
    {
        let mut pool = vec![ChordDiagram::empty(2)];
        for n in 1..=n_max.min(2) {
            for_each_diagram(2, n, false, |d| pool.push(d.clone()));
        }
        for d1 in &pool {
            for d2 in &pool {
                report.cases += 1;
                let product = d1.stack_product(d2).unwrap();
                let lhs = product.coproduct();
                let mut rhs = FormalSum::zero();
                for (key1, c1) in d1.coproduct().iter() {
                    let (l1, r1) = key1.split_once(TENSOR_SEP).unwrap();
                    for (key2, c2) in d2.coproduct().iter() {
                        let (l2, r2) = key2.split_once(TENSOR_SEP).unwrap();
                        let left = ChordDiagram::parse_key(l1)
                            .unwrap()
                            .stack_product(&ChordDiagram::parse_key(l2).unwrap())
                            .unwrap();
                        let right = ChordDiagram::parse_key(r1)
                            .unwrap()
                            .stack_product(&ChordDiagram::parse_key(r2).unwrap())
                            .unwrap();
                        rhs = rhs.add(
                            &FormalSum::term(
                                format!(
                                    "{}{TENSOR_SEP}{}",
                                    left.canonical_key(),
                                    right.canonical_key()
                                ),
                                c1 * c2,
                            ),
                        );
                    }
                }
                if lhs != rhs {
                    report.fail(&product, "product/coproduct compatibility failed".into());
                }
            }
        }
    }

    // Graph-side: co-commutativity and compatibility, from diagrams with
    // k <= 2 and combined degree <= 3.
    for k in 1..=k_max.min(2) {
        for_each_diagram_up_to(k, n_max.min(3), false, |d| {
            report.cases += 1;
            let g = IntersectionGraph::from_diagram(d);
            if g.coproduct() != g.coproduct_swapped() {
                report.fail(d, "graph coproduct not co-commutative".into());
            }
        });
        let mut pool = vec![ChordDiagram::empty(k)];
        for n in 1..=n_max.min(3) {
            for_each_diagram(k, n, false, |d| pool.push(d.clone()));
        }
        for d1 in &pool {
            for d2 in &pool {
                if d1.chord_count() + d2.chord_count() > n_max.min(3) {
                    continue;
                }
                report.cases += 1;
                let g1 = IntersectionGraph::from_diagram(d1);
                let g2 = IntersectionGraph::from_diagram(d2);
                let lhs = g1.product(&g2).coproduct();
                let mut rhs = FormalSum::zero();
                for (key1, c1) in g1.coproduct().iter() {
                    for (key2, c2) in g2.coproduct().iter() {
                        let (l1, r1) = key1.split_once(TENSOR_SEP).unwrap();
                        let (l2, r2) = key2.split_once(TENSOR_SEP).unwrap();
                        let left = graph_from_key(l1).product(&graph_from_key(l2));
                        let right = graph_from_key(r1).product(&graph_from_key(r2));
                        rhs = rhs.add(&FormalSum::term(
                            format!(
                                "{}{TENSOR_SEP}{}",
                                left.canonical_key(),
                                right.canonical_key()
                            ),
                            c1 * c2,
                        ));
                    }
                }
                if lhs != rhs {
                    let stacked = d1.stack_product(d2).unwrap();
                    report.fail(&stacked, "graph bialgebra compatibility failed".into());
                }
            }
        }
    }
    report
}

/// Parses the graph text key format back into a graph (test-side inverse of
/// `IntersectionGraph::canonical_key`).
fn graph_from_key(key: &str) -> IntersectionGraph {
    use crate::graph::VertexLabel;
    if key == "empty" {
        return IntersectionGraph::new(vec![]);
    }
    let mut labels: Vec<VertexLabel> = Vec::new();
    let mut edges: Vec<(usize, usize, &str)> = Vec::new();
    for item in key.split("; ") {
        let fields: Vec<&str> = item.split_whitespace().collect();
        match fields[0] {
            "vertex" => {
                let pair = fields[2]
                    .trim_start_matches('{')
                    .trim_end_matches('}')
                    .split(',')
                    .map(|x| x.parse::<usize>().unwrap() - 1)
                    .collect::<Vec<_>>();
                labels.push(VertexLabel::new(pair[0], pair[1]));
            }
            "edge" => {
                let u = fields[1].trim_start_matches('c').parse::<usize>().unwrap() - 1;
                let v = fields[2].trim_start_matches('c').parse::<usize>().unwrap() - 1;
                edges.push((u, v, fields[3]));
            }
            other => panic!("unexpected graph key item {other:?}"),
        }
    }
    let mut g = IntersectionGraph::new(labels);
    for (u, v, kind) in edges {
        match kind {
            "fwd" => g = g.with_directed(u, v),
            "back" => g = g.with_directed(v, u),
            "both" => g = g.with_directed(u, v).with_directed(v, u),
            other => panic!("unexpected edge kind {other:?}"),
        }
    }
    g
}

/// Normal-form reduction: termination, shape, trace replay, and invariance.
fn suite_normalform(k_max: usize, n_max: usize) -> SuiteReport {
    let mut report = SuiteReport::new("normalform", k_max, n_max);
    for k in 1..=k_max {
        for n in 0..=n_max {
            for_each_diagram(k, n, true, |d| {
                report.cases += 1;
                let before = (
                    conway_weight(d),
                    homfly_weight(d),
                    adjacency(d).rank(),
                    adjacency(d).det(),
                );
                match normal_form(d) {
                    Ok((nf, trace, _summary)) => {
                        if !is_normal_form(&nf) {
                            report.fail(d, "result not in normal form".into());
                        }
                        match trace.replay(d) {
                            Ok(replayed) => {
                                if replayed.canonical_text() != nf.canonical_text() {
                                    report.fail(d, "trace replays to a different diagram".into());
                                }
                            }
                            Err(e) => report.fail(d, format!("trace replay failed: {e}")),
                        }
                        let after = (
                            conway_weight(&nf),
                            homfly_weight(&nf),
                            adjacency(&nf).rank(),
                            adjacency(&nf).det(),
                        );
                        if before != after {
                            report.fail(d, format!("invariants changed: {before:?} -> {after:?}"));
                        }
                    }
                    Err(e) => report.fail(d, format!("normal form failed: {e}")),
                }
            });
        }
    }
    report
}

/// The canonical (vertex-order-free) form of an adjacency matrix: the
/// minimum over all simultaneous row/column permutations.
pub fn canonical_matrix_class(m: &Gf2Matrix) -> Gf2Matrix {
    let n = m.order();
    if n <= 1 {
        return m.clone();
    }
    (0..n)
        .permutations(n)
        .map(|perm| m.permuted(&perm))
        .min()
        .expect("nonempty permutation set")
}

/// One adjacency class holding diagrams of both Conway values.
#[derive(Clone, Debug)]
pub struct CollisionClass {
    pub matrix: Gf2Matrix,
    pub conway_one: Vec<String>,
    pub conway_zero: Vec<String>,
    pub count_one: usize,
    pub count_zero: usize,
}

/// Result of scanning diagrams by adjacency class.
#[derive(Clone, Debug)]
pub struct CollisionReport {
    pub k: usize,
    pub n_max: usize,
    pub scanned: usize,
    /// With a target matrix: every scanned diagram in the target's class.
    pub target: Option<CollisionClass>,
    /// Without a target: every class containing both Conway values.
    pub collisions: Vec<CollisionClass>,
}

const EXAMPLES_PER_CLASS: usize = 5;

/// Scans all diagrams with `k` strands and degree up to `n_max`, grouping
/// them by the permutation-free class of their adjacency matrix and
/// recording Conway values. With a `target` matrix only that class is
/// tracked; otherwise all classes are grouped and those containing both
/// Conway values are reported.
pub fn find_adjacency_collisions(
    k: usize,
    n_max: usize,
    target: Option<&Gf2Matrix>,
) -> CollisionReport {
    let target_class = target.map(canonical_matrix_class);
    let mut scanned = 0usize;
    let mut classes: BTreeMap<Gf2Matrix, ([usize; 2], [Vec<String>; 2])> = BTreeMap::new();
    for n in 1..=n_max {
        if let Some(t) = &target_class {
            if t.order() != n {
                // Adjacency order equals the degree; other degrees can't match.
                scanned += crate::enumerate::diagram_count(k, n);
                continue;
            }
        }
        for_each_diagram(k, n, false, |d| {
            scanned += 1;
            let class = canonical_matrix_class(&adjacency(d));
            if let Some(t) = &target_class {
                if &class != t {
                    return;
                }
            }
            let bit = conway_weight(d) as usize;
            let entry = classes
                .entry(class)
                .or_insert_with(|| ([0, 0], [Vec::new(), Vec::new()]));
            entry.0[bit] += 1;
            if entry.1[bit].len() < EXAMPLES_PER_CLASS {
                entry.1[bit].push(d.canonical_key());
            }
        });
    }

    let to_class = |matrix: Gf2Matrix, counts: [usize; 2], examples: [Vec<String>; 2]| {
        CollisionClass {
            matrix,
            conway_zero: examples[0].clone(),
            conway_one: examples[1].clone(),
            count_zero: counts[0],
            count_one: counts[1],
        }
    };

    if target_class.is_some() {
        let target = classes
            .into_iter()
            .next()
            .map(|(m, (counts, examples))| to_class(m, counts, examples))
            .or_else(|| {
                target_class.map(|m| to_class(m, [0, 0], [Vec::new(), Vec::new()]))
            });
        CollisionReport {
            k,
            n_max,
            scanned,
            target,
            collisions: Vec::new(),
        }
    } else {
        let collisions = classes
            .into_iter()
            .filter(|(_, (counts, _))| counts[0] > 0 && counts[1] > 0)
            .map(|(m, (counts, examples))| to_class(m, counts, examples))
            .collect();
        CollisionReport {
            k,
            n_max,
            scanned,
            target: None,
            collisions,
        }
    }
}
