//! Chord diagrams on string links.
//!
//! This crate models chord diagrams on `k` ordered strands, builds their
//! labeled directed intersection graphs, evaluates GF(2) adjacency weight
//! systems (rank and determinant), evaluates the Conway and Homfly weights
//! by band surgery on the closure, rewrites diagrams to normal form through
//! two-term slide moves, and ships an exhaustive verification harness that
//! checks all of these against each other at desk scale.

pub mod diagram;
pub mod enumerate;
pub mod formal;
pub mod gf2;
pub mod graph;
pub mod harness;
pub mod relations;
pub mod surgery;

pub use diagram::{ChordDiagram, DiagramError, Endpoint, StrandComponentPartition};
pub use formal::{FormalSum, TENSOR_SEP};
pub use num_bigint::BigInt;
pub use gf2::{congruence_witness_check, Gf2Matrix, MatrixError};
pub use graph::{EdgeState, GraphError, IntersectionGraph, VertexLabel};
pub use harness::{
    find_adjacency_collisions, run_suite, CollisionReport, HarnessError, SuiteReport,
    SUITE_NAMES,
};
pub use relations::{
    applicable_slides, apply_slide, compute_summary, four_term_diagram_vector, is_normal_form,
    normal_form, ComponentNormalForm, MoveTrace, NormalFormError, NormalFormSummary, SlideMove,
};
pub use surgery::{conway_weight, homfly_weight, ClosedCurveState, HomflyMonomial, SurgeryError};
