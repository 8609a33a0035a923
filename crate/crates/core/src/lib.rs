//! Coherence-based probabilistic logic for conditional events.
//!
//! The crate decides, with exact rational arithmetic throughout:
//!
//! - **coherence** of a precise probability assessment on a finite family of
//!   conditional events `E|H` (no Dutch book), with an independent
//!   stake-searching oracle;
//! - **g-coherence** of a set-valued assessment, i.e. whether a subset of
//!   `[0,1]^n` contains at least one coherent point;
//! - the four opposition relations between sentences `(family, assessment
//!   set)` — contrary, subcontrary, contradictory, subaltern — all reduced to
//!   emptiness questions about t-coherent parts;
//! - construction and verification of **squares and hexagons of opposition**,
//!   their correspondence with tripartitions, and threshold-quantifier
//!   instances such as "at least proportion x of S are P".
//!
//! Assessment sets are finite unions of convex cells cut out by strict or
//! non-strict rational linear constraints inside the unit cube; all set
//! emptiness tests run through an exact simplex solver, so open and
//! half-open sets are decided soundly.

pub mod coherence;
pub mod events;
pub mod lp;
pub mod oppositions;
pub mod quantifiers;
pub mod rational;
pub mod regions;
pub mod sentences;

pub use coherence::{
    check_coherence, compute_pi, find_dutch_book, g_coherent, g_coherent_witness, gain_values,
    pi_equal, pi_is_empty, pi_subset, CoherenceError, DutchBook, PiBackend, PointAssessment, Truth,
};
pub use events::{
    classify_conditional, ConditionalEvent, ConditionalKind, Constituent, EventContext, EventError,
    Family, Formula,
};
pub use oppositions::{
    extract_tripartition, hexagon_from_contraries, hexagon_from_tripartition, hexagon_relations,
    square_from_contraries, square_from_tripartition, squares_coincide, swap_quadruple,
    verify_hexagon, verify_square, verify_square_minimal, ConditionCheck, Hexagon, HexagonVerdict,
    OppositionError, RelationReport, Square, SquareVerdict, Tripartition, TripartitionScope,
};
pub use quantifiers::{
    basic_hexagon, basic_square, cross_threshold, de_morgan_square, degenerate_report,
    mean_hexagon, mean_tripartition, no_cube_check, CrossThresholdReport, DegenerateReport,
    NoCubeReport, PiShape, QuantifiedHexagon, QuantifiedSquare, QuantifierError, Threshold,
};
pub use rational::{parse_rational, rat, rint, Rational};
pub use regions::{Cell, Interval, LinearConstraint, Region, RegionError, Relation};
pub use sentences::{
    contradictory, contrary, equivalent, subaltern, subcontrary, Sentence, SentenceError,
};
