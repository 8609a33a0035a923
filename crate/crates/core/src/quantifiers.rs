//! Threshold-quantifier instances of the square and hexagon of opposition.
//!
//! A threshold `x` in `]1/2, 1]` reads "at least proportion x" into a
//! conditional probability bound: the four basic sentence types over a
//! single conditional event `P|S` carry the assessments `[x,1]`, `[0,1-x]`,
//! `]1-x,1]` and `[0,x[`; at `x = 1` these are the traditional universal and
//! particular forms. The hexagon adds their disjunction `[0,1-x] u [x,1]`
//! and conjunction `]1-x,x[`. The n-event generalization replaces the single
//! probability by the mean of n conditional probabilities.

use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::coherence::{self, compute_pi, CoherenceError, PiBackend, Truth};
use crate::events::{
    classify_conditional, ConditionalEvent, ConditionalKind, EventContext, EventError, Family,
    Formula,
};
use crate::oppositions::{
    hexagon_from_tripartition, verify_hexagon, Hexagon, OppositionError, Square, Tripartition,
};
use crate::rational::{rat, rint, Rational};
use crate::regions::{Cell, Interval, LinearConstraint, Region, RegionError};
use crate::sentences::{Sentence, SentenceError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuantifierError {
    #[error("threshold {0} is outside ]1/2, 1]")]
    ThresholdOutOfRange(String),
    #[error("thresholds must satisfy 1/2 < x2 < x1 <= 1, got x1={x1}, x2={x2}")]
    ThresholdOrder { x1: String, x2: String },
    #[error("expected a family of {expected} events, got {got}")]
    FamilySize { expected: usize, got: usize },
    #[error("the hexagon could not be verified: {0}")]
    Unverified(String),
    #[error(transparent)]
    Event(#[from] EventError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
    #[error(transparent)]
    Opposition(#[from] OppositionError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
}

/// A quantifier threshold, a rational in `]1/2, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Threshold(Rational);

impl Threshold {
    pub fn new(x: Rational) -> Result<Self, QuantifierError> {
        if x <= rat(1, 2) || x > Rational::one() {
            return Err(QuantifierError::ThresholdOutOfRange(x.to_string()));
        }
        Ok(Threshold(x))
    }

    pub fn one() -> Threshold {
        Threshold(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `1 - x`, the co-threshold appearing in the particular forms.
    pub fn co(&self) -> Rational {
        rint(1) - &self.0
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The four threshold assessments of Table-style sentence types over one
/// conditional event.
fn threshold_regions(x: &Threshold) -> [Region; 4] {
    let co = x.co();
    let universal = Region::segment(Interval::closed(x.value().clone(), rint(1)).unwrap());
    let universal_neg = Region::segment(Interval::closed(rint(0), co.clone()).unwrap());
    let particular = Region::segment(Interval::new(co, false, rint(1), true).unwrap());
    let particular_neg =
        Region::segment(Interval::new(rint(0), true, x.value().clone(), false).unwrap());
    [universal, universal_neg, particular, particular_neg]
}

fn quantified_labels(x: &Threshold, letters: [&str; 4]) -> [String; 4] {
    letters.map(|l| format!("{l}({x})"))
}

/// A verified square with the threshold assessments of the four basic
/// sentence types, labeled `A(x), E(x), I(x), O(x)`.
#[derive(Clone, Debug)]
pub struct QuantifiedSquare {
    pub threshold: Threshold,
    pub square: Square,
}

/// A verified hexagon extending [`QuantifiedSquare`] with `U(x)` and `Y(x)`.
#[derive(Clone, Debug)]
pub struct QuantifiedHexagon {
    pub threshold: Threshold,
    pub hexagon: Hexagon,
}

fn single_event_family(fam: &Arc<Family>) -> Result<(), QuantifierError> {
    if fam.len() != 1 {
        return Err(QuantifierError::FamilySize {
            expected: 1,
            got: fam.len(),
        });
    }
    Ok(())
}

/// The threshold square over a single conditional event; verifies under
/// every context, including the degenerate ones.
pub fn basic_square(
    x: &Threshold,
    family: &Arc<Family>,
) -> Result<QuantifiedSquare, QuantifierError> {
    single_event_family(family)?;
    let regions = threshold_regions(x);
    let labels = quantified_labels(x, ["A", "E", "I", "O"]);
    let mut sentences = Vec::with_capacity(4);
    for (region, label) in regions.into_iter().zip(labels) {
        sentences.push(Sentence::labeled(family.clone(), region, label)?);
    }
    let quad: [Sentence; 4] = sentences.try_into().expect("four sentences");
    let square = Square::verified(quad, &PiBackend::Exact)?;
    Ok(QuantifiedSquare {
        threshold: x.clone(),
        square,
    })
}

/// The threshold hexagon `A, E, I, O, U, Y` over a single conditional event.
pub fn basic_hexagon(
    x: &Threshold,
    family: &Arc<Family>,
) -> Result<QuantifiedHexagon, QuantifierError> {
    single_event_family(family)?;
    let [a, e, i, o] = threshold_regions(x);
    let co = x.co();
    let top = a.union(&e)?;
    let bottom = Region::segment(Interval::new(co, false, x.value().clone(), false).unwrap());
    let labels = [
        format!("A({x})"),
        format!("E({x})"),
        format!("I({x})"),
        format!("O({x})"),
        format!("U({x})"),
        format!("Y({x})"),
    ];
    let mut sentences = Vec::with_capacity(6);
    for (region, label) in [a, e, i, o, top, bottom].into_iter().zip(labels) {
        sentences.push(Sentence::labeled(family.clone(), region, label)?);
    }
    let six: [Sentence; 6] = sentences.try_into().expect("six sentences");
    let hexagon = Hexagon::verified(six, &PiBackend::Exact)?;
    Ok(QuantifiedHexagon {
        threshold: x.clone(),
        hexagon,
    })
}

/// What the t-coherent part of a threshold sentence collapses to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PiShape {
    Empty,
    Zero,
    One,
    /// Equal to the sentence's whole assessment.
    Full,
    Other,
}

impl std::fmt::Display for PiShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PiShape::Empty => "empty",
            PiShape::Zero => "{0}",
            PiShape::One => "{1}",
            PiShape::Full => "the full assessment",
            PiShape::Other => "a proper sub-assessment",
        };
        f.write_str(s)
    }
}

fn shape_of(pi: &Region, assessment: &Region) -> Result<PiShape, RegionError> {
    if pi.is_empty() {
        return Ok(PiShape::Empty);
    }
    let zero = Region::segment(Interval::point(rint(0)).unwrap());
    let one = Region::segment(Interval::point(rint(1)).unwrap());
    if pi.equal(&zero)? {
        Ok(PiShape::Zero)
    } else if pi.equal(&one)? {
        Ok(PiShape::One)
    } else if pi.equal(assessment)? {
        Ok(PiShape::Full)
    } else {
        Ok(PiShape::Other)
    }
}

/// Per-sentence t-coherent parts of the threshold square, plus the
/// strengthening that the degenerate contexts produce: the contrary and
/// subcontrary pairs become contradictory and both subalternations become
/// symmetric.
#[derive(Clone, Debug)]
pub struct DegenerateReport {
    pub kind: ConditionalKind,
    /// Shapes for `A(x), E(x), I(x), O(x)` in order.
    pub shapes: [PiShape; 4],
    pub contrary_became_contradictory: Truth,
    pub subcontrary_became_contradictory: Truth,
    /// `A(x)/I(x)` and `E(x)/O(x)` subaltern in both directions.
    pub subalternation_symmetric: [Truth; 2],
    /// Scale caveats: sentence types stated via the negated consequent have
    /// their parts reported here in the consequent coordinate.
    pub scale_notes: Vec<String>,
}

pub fn degenerate_report(
    x: &Threshold,
    family: &Arc<Family>,
    backend: &PiBackend,
) -> Result<DegenerateReport, QuantifierError> {
    single_event_family(family)?;
    let kind = classify_conditional(family.context(), &family.events()[0]);
    let pi = compute_pi(family).expect("single-event families always certify");
    let regions = threshold_regions(x);
    let mut shapes = Vec::with_capacity(4);
    for region in &regions {
        let part = pi.intersect(region)?;
        shapes.push(shape_of(&part, region)?);
    }
    let shapes: [PiShape; 4] = shapes.try_into().expect("four shapes");

    let labels = quantified_labels(x, ["A", "E", "I", "O"]);
    let mut sentences = Vec::with_capacity(4);
    for (region, label) in regions.into_iter().zip(labels) {
        sentences.push(Sentence::labeled(family.clone(), region, label)?);
    }
    let contrary_became_contradictory =
        crate::sentences::contradictory(&sentences[0], &sentences[1], backend)?;
    let subcontrary_became_contradictory =
        crate::sentences::contradictory(&sentences[2], &sentences[3], backend)?;
    let ai = crate::sentences::subaltern(&sentences[0], &sentences[2], backend)?.and(
        crate::sentences::subaltern(&sentences[2], &sentences[0], backend)?,
    );
    let eo = crate::sentences::subaltern(&sentences[1], &sentences[3], backend)?.and(
        crate::sentences::subaltern(&sentences[3], &sentences[1], backend)?,
    );

    let mut scale_notes = Vec::new();
    if kind == ConditionalKind::Incompatible {
        scale_notes.push(format!(
            "E({x}) bounds the probability of the negated consequent; on that scale its \
             coherent part reads {{1}}, which is the value {} reported here on the consequent \
             scale",
            shapes[1]
        ));
    }

    Ok(DegenerateReport {
        kind,
        shapes,
        contrary_became_contradictory,
        subcontrary_became_contradictory,
        subalternation_symmetric: [ai, eo],
        scale_notes,
    })
}

/// The four subalternation claims between squares at two thresholds
/// `x2 < x1`: the stricter universal forms entail the looser ones, and the
/// looser particular forms entail the stricter ones.
#[derive(Clone, Debug)]
pub struct CrossThresholdReport {
    pub checks: Vec<(String, Truth)>,
}

impl CrossThresholdReport {
    pub fn all_hold(&self) -> Truth {
        self.checks
            .iter()
            .fold(Truth::True, |acc, (_, t)| acc.and(*t))
    }
}

pub fn cross_threshold(
    x1: &Threshold,
    x2: &Threshold,
    family: &Arc<Family>,
    backend: &PiBackend,
) -> Result<CrossThresholdReport, QuantifierError> {
    single_event_family(family)?;
    if x2.value() >= x1.value() {
        return Err(QuantifierError::ThresholdOrder {
            x1: x1.to_string(),
            x2: x2.to_string(),
        });
    }
    let strict = threshold_regions(x1);
    let loose = threshold_regions(x2);
    let subaltern = |upper: &Region, lower: &Region| -> Result<Truth, QuantifierError> {
        Ok(coherence::pi_subset(family, upper, lower, backend)?)
    };
    let checks = vec![
        (
            format!("A({x2}) subaltern of A({x1})"),
            subaltern(&strict[0], &loose[0])?,
        ),
        (
            format!("E({x2}) subaltern of E({x1})"),
            subaltern(&strict[1], &loose[1])?,
        ),
        (
            format!("I({x1}) subaltern of I({x2})"),
            subaltern(&loose[2], &strict[2])?,
        ),
        (
            format!("O({x1}) subaltern of O({x2})"),
            subaltern(&loose[3], &strict[3])?,
        ),
    ];
    Ok(CrossThresholdReport { checks })
}

/// The mean-threshold tripartition of `[0,1]^n`: mean at least `x`, mean at
/// most `1-x`, and the open slab in between.
pub fn mean_tripartition(n: usize, x: &Threshold) -> Result<Tripartition, QuantifierError> {
    if n == 0 {
        return Err(QuantifierError::FamilySize {
            expected: 1,
            got: 0,
        });
    }
    let weight = rat(1, n as i64);
    let coeffs: Vec<(usize, Rational)> = (0..n).map(|i| (i, weight.clone())).collect();
    let co = x.co();
    let high = Cell::new(
        n,
        vec![LinearConstraint::ge(coeffs.clone(), x.value().clone())],
    )?;
    let low = Cell::new(n, vec![LinearConstraint::le(coeffs.clone(), co.clone())])?;
    let slab = Cell::new(
        n,
        vec![
            LinearConstraint::gt(coeffs.clone(), co),
            LinearConstraint::lt(coeffs, x.value().clone()),
        ],
    )?;
    Ok(Tripartition::of_cube(
        Region::from_cells(n, vec![high])?,
        Region::from_cells(n, vec![low])?,
        Region::from_cells(n, vec![slab])?,
    )?)
}

/// The generalized hexagon over `n` conditional events with mean-threshold
/// assessments. The mass-LP backend cannot handle the coupled mean
/// constraints; use the exact backend (certifiable families) or a grid.
pub fn mean_hexagon(
    n: usize,
    x: &Threshold,
    family: &Arc<Family>,
    backend: &PiBackend,
) -> Result<Hexagon, QuantifierError> {
    if family.len() != n {
        return Err(QuantifierError::FamilySize {
            expected: n,
            got: family.len(),
        });
    }
    let tri = mean_tripartition(n, x)?;
    let labels = [
        format!("A({x})"),
        format!("E({x})"),
        format!("I({x})"),
        format!("O({x})"),
        format!("U({x})"),
        format!("Y({x})"),
    ];
    let hexagon = hexagon_from_tripartition(&tri, family)?.with_labels(labels);
    let verdict = verify_hexagon(hexagon.sentences(), backend)?;
    match verdict.overall() {
        Truth::False => Err(QuantifierError::Unverified(
            verdict
                .square
                .first_failure()
                .map(|c| c.label.clone())
                .unwrap_or_else(|| "extension identity failed".to_string()),
        )),
        // A grid backend can only fail to confirm; the construction itself
        // is valid for any cube tripartition.
        Truth::True | Truth::Unknown => Ok(hexagon),
    }
}

/// The square obtained by replacing both events of `P|S` by their negations:
/// the traditional square over `!P | !S`, labeled in lowercase.
pub fn de_morgan_square(
    ctx: &EventContext,
    subject: &Formula,
    predicate: &Formula,
) -> Result<QuantifiedSquare, QuantifierError> {
    let event = ConditionalEvent::new(ctx, predicate.clone().negated(), subject.clone().negated())?;
    let family = Arc::new(Family::new(ctx.clone(), vec![event])?);
    let x = Threshold::one();
    let regions = threshold_regions(&x);
    let labels = quantified_labels(&x, ["a", "e", "i", "o"]);
    let mut sentences = Vec::with_capacity(4);
    for (region, label) in regions.into_iter().zip(labels) {
        sentences.push(Sentence::labeled(family.clone(), region, label)?);
    }
    let quad: [Sentence; 4] = sentences.try_into().expect("four sentences");
    let square = Square::verified(quad, &PiBackend::Exact)?;
    Ok(QuantifiedSquare {
        threshold: x,
        square,
    })
}

/// One relation probed between a sentence of the upright square and a
/// sentence of the negated-events square, with the coherent point that
/// witnesses its failure.
#[derive(Clone, Debug)]
pub struct CrossRelation {
    pub relation: String,
    pub holds: Truth,
    pub witness: Option<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct CrossPair {
    pub left: String,
    pub right: String,
    pub relations: Vec<CrossRelation>,
}

/// The cross-square relation survey over the joint family `(P|S, !P|!S)`.
#[derive(Clone, Debug)]
pub struct NoCubeReport {
    pub pairs: Vec<CrossPair>,
}

impl NoCubeReport {
    /// True when no pair stands in any of the four relations, i.e. the two
    /// squares do not extend to a cube.
    pub fn cube_free(&self) -> Truth {
        self.pairs
            .iter()
            .flat_map(|p| &p.relations)
            .fold(Truth::True, |acc, r| acc.and(r.holds.negate()))
    }
}

/// Probes all sixteen pairs between the traditional square over `P|S` and
/// the negated-events square over `!P|!S`, lifted to the joint
/// two-event family by cylindrification. Every relation is expected to
/// fail, each failure witnessed by a coherent point.
pub fn no_cube_check(backend: &PiBackend) -> Result<NoCubeReport, QuantifierError> {
    let ctx = EventContext::unconstrained(vec!["P", "S"])?;
    let p = ctx.atom("P")?;
    let s = ctx.atom("S")?;
    let upright = ConditionalEvent::new(&ctx, p.clone(), s.clone())?;
    let negated = ConditionalEvent::new(&ctx, p.negated(), s.negated())?;
    let family = Arc::new(Family::new(ctx, vec![upright, negated])?);

    let x = Threshold::one();
    let parts = threshold_regions(&x);

    // Cylindrify the one-dimensional assessments into the joint square.
    let lift = |r: &Region, coord: usize| -> Result<Region, RegionError> {
        let mut cells = Vec::new();
        for cell in r.cells() {
            let mut constraints = Vec::new();
            for c in cell.constraints() {
                let coeffs: Vec<(usize, Rational)> =
                    c.coeffs().map(|(_, a)| (coord, a.clone())).collect();
                constraints.push(match c.relation() {
                    crate::regions::Relation::Eq => LinearConstraint::eq(coeffs, c.bound().clone()),
                    crate::regions::Relation::Le => LinearConstraint::le(coeffs, c.bound().clone()),
                    crate::regions::Relation::Lt => LinearConstraint::lt(coeffs, c.bound().clone()),
                });
            }
            cells.push(Cell::new(2, constraints)?);
        }
        Region::from_cells(2, cells)
    };

    let upper_labels = ["A", "E", "I", "O"];
    let lower_labels = ["a", "e", "i", "o"];

    let mut pairs = Vec::with_capacity(16);
    for (li, left_region) in parts.iter().enumerate() {
        let left = lift(left_region, 0)?;
        for (ri, right_region) in parts.iter().enumerate() {
            let right = lift(right_region, 1)?;
            let mut relations = Vec::new();
            // Each relation fails exactly when the relevant t-coherent part
            // is nonempty; the witness is the coherent point found there.
            let mut probe = |name: &str, region: Region| -> Result<(), QuantifierError> {
                let (occupied, witness) = coherence::g_coherent_witness(&family, &region, backend)?;
                relations.push(CrossRelation {
                    relation: name.to_string(),
                    holds: occupied.negate(),
                    witness,
                });
                Ok(())
            };
            probe("contrary", left.intersect(&right)?)?;
            probe(
                "subcontrary",
                left.complement().intersect(&right.complement())?,
            )?;
            probe(
                "subaltern (second of first)",
                left.intersect(&right.complement())?,
            )?;
            probe(
                "subaltern (first of second)",
                right.intersect(&left.complement())?,
            )?;
            let contrary = relations[0].holds;
            let subcontrary = relations[1].holds;
            let witness = relations[0]
                .witness
                .clone()
                .or_else(|| relations[1].witness.clone());
            relations.insert(
                2,
                CrossRelation {
                    relation: "contradictory".to_string(),
                    holds: contrary.and(subcontrary),
                    witness,
                },
            );
            pairs.push(CrossPair {
                left: format!("{}(1)", upper_labels[li]),
                right: format!("{}(1)", lower_labels[ri]),
                relations,
            });
        }
    }
    Ok(NoCubeReport { pairs })
}
