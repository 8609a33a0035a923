//! Squares and hexagons of opposition: verification of the defining
//! relations, constructors from contrary pairs and from tripartitions, and
//! the extraction of a tripartition from a verified square.
//!
//! A square is an ordered quadruple of sentences over one family with
//! (a) the first two contrary, (b) the last two subcontrary, (c) the two
//! diagonal pairs contradictory, and (d) each bottom sentence a subaltern of
//! the sentence above it. Checking (a) and (c) alone is equivalent. A
//! hexagon extends a square by the disjunction of the top pair and the
//! conjunction of the bottom pair; the extension conditions are region-level
//! identities and are checked semantically, while a weaker reading up to
//! t-coherence is reported alongside.

use std::sync::Arc;

use thiserror::Error;

use crate::coherence::{self, CoherenceError, PiBackend, Truth};
use crate::events::Family;
use crate::rational::Rational;
use crate::regions::{Region, RegionError};
use crate::sentences::{Sentence, SentenceError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OppositionError {
    #[error("sentences are over different families")]
    FamilyMismatch,
    #[error("the two sentences are not contraries")]
    NotContraries,
    #[error("the backend cannot certify the relation (verdict unknown)")]
    CannotCertify,
    #[error("invalid tripartition: {0}")]
    InvalidTripartition(String),
    #[error("not a square of opposition: {0}")]
    NotASquare(String),
    #[error("not a hexagon of opposition: {0}")]
    NotAHexagon(String),
    #[error("tripartition was validated for a different family")]
    ScopeMismatch,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// The universe a tripartition splits: the whole cube, or the coherent set
/// of a specific family.
#[derive(Clone, Debug)]
pub enum TripartitionScope {
    Cube,
    CoherentSet(Arc<Family>),
}

/// Three pairwise-disjoint regions covering their universe. Disjointness and
/// covering are checked at construction, region-level for the cube scope and
/// at the level of t-coherent parts for the coherent-set scope.
#[derive(Clone, Debug)]
pub struct Tripartition {
    parts: [Region; 3],
    scope: TripartitionScope,
}

impl Tripartition {
    pub fn of_cube(d1: Region, d2: Region, d3: Region) -> Result<Self, OppositionError> {
        let dim = d1.dim();
        if d2.dim() != dim || d3.dim() != dim {
            return Err(OppositionError::DimensionMismatch(d2.dim(), dim));
        }
        let parts = [d1, d2, d3];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if !parts[i].intersect(&parts[j])?.is_empty() {
                return Err(OppositionError::InvalidTripartition(format!(
                    "parts {} and {} overlap",
                    i + 1,
                    j + 1
                )));
            }
        }
        let union = parts[0].union(&parts[1])?.union(&parts[2])?;
        if !union.equal(&Region::full(dim))? {
            return Err(OppositionError::InvalidTripartition(
                "parts do not cover the cube".to_string(),
            ));
        }
        Ok(Tripartition {
            parts,
            scope: TripartitionScope::Cube,
        })
    }

    pub fn of_coherent_set(
        family: Arc<Family>,
        d1: Region,
        d2: Region,
        d3: Region,
        backend: &PiBackend,
    ) -> Result<Self, OppositionError> {
        let dim = family.len();
        for r in [&d1, &d2, &d3] {
            if r.dim() != dim {
                return Err(OppositionError::DimensionMismatch(r.dim(), dim));
            }
        }
        let parts = [d1, d2, d3];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let meet = parts[i].intersect(&parts[j])?;
            match coherence::pi_is_empty(&family, &meet, backend)? {
                Truth::True => {}
                Truth::False => {
                    return Err(OppositionError::InvalidTripartition(format!(
                        "coherent parts of {} and {} overlap",
                        i + 1,
                        j + 1
                    )))
                }
                Truth::Unknown => return Err(OppositionError::CannotCertify),
            }
        }
        let union = parts[0].union(&parts[1])?.union(&parts[2])?;
        match coherence::pi_equal(&family, &union, &Region::full(dim), backend)? {
            Truth::True => {}
            Truth::False => {
                return Err(OppositionError::InvalidTripartition(
                    "parts do not cover the coherent set".to_string(),
                ))
            }
            Truth::Unknown => return Err(OppositionError::CannotCertify),
        }
        Ok(Tripartition {
            parts,
            scope: TripartitionScope::CoherentSet(family),
        })
    }

    pub fn parts(&self) -> &[Region; 3] {
        &self.parts
    }

    pub fn scope(&self) -> &TripartitionScope {
        &self.scope
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }
}

/// Label plus verdict for one defining condition, with a counterexample
/// point where the backend produced one.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub label: String,
    pub holds: Truth,
    pub witness: Option<Vec<Rational>>,
}

/// Outcome of checking the four square conditions. `degenerate` marks the
/// sentences whose own assessment has empty t-coherent part; such squares
/// still verify, with all non-contradictory relations strengthened.
#[derive(Clone, Debug)]
pub struct SquareVerdict {
    pub conditions: Vec<ConditionCheck>,
    pub degenerate: Vec<Truth>,
}

impl SquareVerdict {
    pub fn overall(&self) -> Truth {
        self.conditions
            .iter()
            .fold(Truth::True, |acc, c| acc.and(c.holds))
    }

    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.holds == Truth::False)
    }
}

/// A square verdict plus the hexagon extension checks: the top sentence must
/// be the disjunction of the contrary pair and the bottom one the
/// conjunction of the subcontrary pair, as regions. The same identities up
/// to t-coherence are reported separately.
#[derive(Clone, Debug)]
pub struct HexagonVerdict {
    pub square: SquareVerdict,
    pub top_is_disjunction: bool,
    pub bottom_is_conjunction: bool,
    pub top_is_disjunction_t: Truth,
    pub bottom_is_conjunction_t: Truth,
}

impl HexagonVerdict {
    /// The strict reading: region-level identities.
    pub fn overall(&self) -> Truth {
        self.square
            .overall()
            .and(Truth::from_bool(self.top_is_disjunction))
            .and(Truth::from_bool(self.bottom_is_conjunction))
    }

    /// The reading up to t-coherence.
    pub fn overall_up_to_t(&self) -> Truth {
        self.square
            .overall()
            .and(self.top_is_disjunction_t)
            .and(self.bottom_is_conjunction_t)
    }
}

/// A verified square of opposition.
#[derive(Clone, Debug)]
pub struct Square {
    sentences: [Sentence; 4],
}

impl Square {
    /// Wraps a quadruple after checking all four conditions.
    pub fn verified(
        sentences: [Sentence; 4],
        backend: &PiBackend,
    ) -> Result<Square, OppositionError> {
        let verdict = verify_square(&sentences, backend)?;
        match verdict.overall() {
            Truth::True => Ok(Square { sentences }),
            Truth::False => Err(OppositionError::NotASquare(
                verdict
                    .first_failure()
                    .map(|c| c.label.clone())
                    .unwrap_or_default(),
            )),
            Truth::Unknown => Err(OppositionError::CannotCertify),
        }
    }

    pub fn sentences(&self) -> &[Sentence; 4] {
        &self.sentences
    }

    pub fn family(&self) -> &Arc<Family> {
        self.sentences[0].family()
    }

    /// `(s1,s2,s3,s4) -> (s2,s1,s4,s3)`, a square again.
    pub fn swapped(&self) -> Square {
        Square {
            sentences: swap_quadruple(&self.sentences),
        }
    }

    pub fn into_sentences(self) -> [Sentence; 4] {
        self.sentences
    }
}

/// A verified hexagon of opposition.
#[derive(Clone, Debug)]
pub struct Hexagon {
    sentences: [Sentence; 6],
}

impl Hexagon {
    pub fn verified(
        sentences: [Sentence; 6],
        backend: &PiBackend,
    ) -> Result<Hexagon, OppositionError> {
        let verdict = verify_hexagon(&sentences, backend)?;
        match verdict.overall() {
            Truth::True => Ok(Hexagon { sentences }),
            Truth::False => Err(OppositionError::NotAHexagon(
                verdict
                    .square
                    .first_failure()
                    .map(|c| c.label.clone())
                    .unwrap_or_else(|| "extension sentences are not the join/meet".to_string()),
            )),
            Truth::Unknown => Err(OppositionError::CannotCertify),
        }
    }

    /// Construction paths that are valid by construction use this; the
    /// verifying tests exercise `verify_hexagon` on the result.
    pub(crate) fn from_parts(sentences: [Sentence; 6]) -> Hexagon {
        Hexagon { sentences }
    }

    pub fn with_labels(mut self, labels: [String; 6]) -> Hexagon {
        for (s, l) in self.sentences.iter_mut().zip(labels) {
            *s = s.clone().with_label(l);
        }
        self
    }

    pub fn sentences(&self) -> &[Sentence; 6] {
        &self.sentences
    }

    pub fn family(&self) -> &Arc<Family> {
        self.sentences[0].family()
    }

    pub fn square(&self) -> [Sentence; 4] {
        [
            self.sentences[0].clone(),
            self.sentences[1].clone(),
            self.sentences[2].clone(),
            self.sentences[3].clone(),
        ]
    }
}

fn require_shared_family(sentences: &[Sentence]) -> Result<&Arc<Family>, OppositionError> {
    let first = sentences[0].family();
    for s in &sentences[1..] {
        if !sentences[0].same_family(s) {
            return Err(OppositionError::FamilyMismatch);
        }
    }
    Ok(first)
}

/// Emptiness of the t-coherent part of `region`, with a counterexample
/// when it is nonempty and the relation therefore fails.
fn emptiness_check(
    label: &str,
    family: &Arc<Family>,
    region: &Region,
    backend: &PiBackend,
) -> Result<ConditionCheck, OppositionError> {
    let (occupied, witness) = coherence::g_coherent_witness(family, region, backend)?;
    Ok(ConditionCheck {
        label: label.to_string(),
        holds: occupied.negate(),
        witness,
    })
}

fn contrary_check(
    label: &str,
    family: &Arc<Family>,
    a: &Sentence,
    b: &Sentence,
    backend: &PiBackend,
) -> Result<ConditionCheck, OppositionError> {
    let meet = a.region().intersect(b.region())?;
    emptiness_check(label, family, &meet, backend)
}

fn subcontrary_check(
    label: &str,
    family: &Arc<Family>,
    a: &Sentence,
    b: &Sentence,
    backend: &PiBackend,
) -> Result<ConditionCheck, OppositionError> {
    let meet = a
        .region()
        .complement()
        .intersect(&b.region().complement())?;
    emptiness_check(label, family, &meet, backend)
}

fn subaltern_check(
    label: &str,
    family: &Arc<Family>,
    upper: &Sentence,
    lower: &Sentence,
    backend: &PiBackend,
) -> Result<ConditionCheck, OppositionError> {
    let difference = upper.region().intersect(&lower.region().complement())?;
    emptiness_check(label, family, &difference, backend)
}

/// Checks all four defining conditions of a square of opposition.
pub fn verify_square(
    quad: &[Sentence; 4],
    backend: &PiBackend,
) -> Result<SquareVerdict, OppositionError> {
    let family = require_shared_family(quad)?.clone();
    let [s1, s2, s3, s4] = quad;
    let conditions = vec![
        contrary_check("(a) s1,s2 contraries", &family, s1, s2, backend)?,
        subcontrary_check("(b) s3,s4 subcontraries", &family, s3, s4, backend)?,
        contrary_check("(c) s1,s4 contraries", &family, s1, s4, backend)?,
        subcontrary_check("(c) s1,s4 subcontraries", &family, s1, s4, backend)?,
        contrary_check("(c) s2,s3 contraries", &family, s2, s3, backend)?,
        subcontrary_check("(c) s2,s3 subcontraries", &family, s2, s3, backend)?,
        subaltern_check("(d) s3 subaltern of s1", &family, s1, s3, backend)?,
        subaltern_check("(d) s4 subaltern of s2", &family, s2, s4, backend)?,
    ];
    let mut degenerate = Vec::with_capacity(4);
    for s in quad {
        degenerate.push(s.is_acceptable(backend)?.negate());
    }
    Ok(SquareVerdict {
        conditions,
        degenerate,
    })
}

/// Checks only contrariety of the top pair and the two contradictions; this
/// is equivalent to the full verification.
pub fn verify_square_minimal(
    quad: &[Sentence; 4],
    backend: &PiBackend,
) -> Result<Truth, OppositionError> {
    let family = require_shared_family(quad)?.clone();
    let [s1, s2, s3, s4] = quad;
    let checks = [
        contrary_check("(a)", &family, s1, s2, backend)?,
        contrary_check("(c14)", &family, s1, s4, backend)?,
        subcontrary_check("(c14')", &family, s1, s4, backend)?,
        contrary_check("(c23)", &family, s2, s3, backend)?,
        subcontrary_check("(c23')", &family, s2, s3, backend)?,
    ];
    Ok(checks.iter().fold(Truth::True, |acc, c| acc.and(c.holds)))
}

/// `(s1, s2, !s2, !s1)`; requires the inputs to be contraries.
pub fn square_from_contraries(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Square, OppositionError> {
    if !s1.same_family(s2) {
        return Err(OppositionError::FamilyMismatch);
    }
    match crate::sentences::contrary(s1, s2, backend)? {
        Truth::True => {}
        Truth::False => return Err(OppositionError::NotContraries),
        Truth::Unknown => return Err(OppositionError::CannotCertify),
    }
    Ok(Square {
        sentences: [s1.clone(), s2.clone(), s2.not(), s1.not()],
    })
}

/// Sentences `(D1, D2, D1 u D3, D2 u D3)` over the family; a square for any
/// valid tripartition of the cube or of the family's coherent set.
pub fn square_from_tripartition(
    tripartition: &Tripartition,
    family: &Arc<Family>,
) -> Result<Square, OppositionError> {
    if let TripartitionScope::CoherentSet(owner) = tripartition.scope() {
        if !(Arc::ptr_eq(owner, family) || **owner == **family) {
            return Err(OppositionError::ScopeMismatch);
        }
    }
    if tripartition.dim() != family.len() {
        return Err(OppositionError::DimensionMismatch(
            tripartition.dim(),
            family.len(),
        ));
    }
    let [d1, d2, d3] = tripartition.parts();
    let sentences = [
        Sentence::new(family.clone(), d1.clone())?,
        Sentence::new(family.clone(), d2.clone())?,
        Sentence::new(family.clone(), d1.union(d3)?)?,
        Sentence::new(family.clone(), d2.union(d3)?)?,
    ];
    Ok(Square { sentences })
}

/// The tripartition `(I1, I2, I3 n I4)` of the coherent set carried by a
/// verified square.
pub fn extract_tripartition(
    square: &Square,
    backend: &PiBackend,
) -> Result<Tripartition, OppositionError> {
    let [s1, s2, s3, s4] = square.sentences();
    let meet = s3.region().intersect(s4.region())?;
    Tripartition::of_coherent_set(
        square.family().clone(),
        s1.region().clone(),
        s2.region().clone(),
        meet,
        backend,
    )
}

/// Component-wise equality of t-coherent parts.
pub fn squares_coincide(
    a: &Square,
    b: &Square,
    backend: &PiBackend,
) -> Result<Truth, OppositionError> {
    if !a.sentences[0].same_family(&b.sentences[0]) {
        return Err(OppositionError::FamilyMismatch);
    }
    let mut verdict = Truth::True;
    for (x, y) in a.sentences.iter().zip(b.sentences.iter()) {
        verdict = verdict.and(crate::sentences::equivalent(x, y, backend)?);
    }
    Ok(verdict)
}

/// `(s1,s2,s3,s4) -> (s2,s1,s4,s3)` on raw quadruples; preserves being (or
/// not being) a square.
pub fn swap_quadruple(quad: &[Sentence; 4]) -> [Sentence; 4] {
    [
        quad[1].clone(),
        quad[0].clone(),
        quad[3].clone(),
        quad[2].clone(),
    ]
}

/// Checks the square on the first four sentences and the region-level
/// identities for the two extension sentences.
pub fn verify_hexagon(
    six: &[Sentence; 6],
    backend: &PiBackend,
) -> Result<HexagonVerdict, OppositionError> {
    require_shared_family(six.as_slice())?;
    let quad: [Sentence; 4] = [
        six[0].clone(),
        six[1].clone(),
        six[2].clone(),
        six[3].clone(),
    ];
    let square = verify_square(&quad, backend)?;
    let join = six[0].region().union(six[1].region())?;
    let meet = six[2].region().intersect(six[3].region())?;
    let family = six[0].family();
    Ok(HexagonVerdict {
        top_is_disjunction: six[4].region().equal(&join)?,
        bottom_is_conjunction: six[5].region().equal(&meet)?,
        top_is_disjunction_t: coherence::pi_equal(family, six[4].region(), &join, backend)?,
        bottom_is_conjunction_t: coherence::pi_equal(family, six[5].region(), &meet, backend)?,
        square,
    })
}

/// `(s1, s2, !s2, !s1, s1 v s2, !s1 & !s2)`; requires contraries.
pub fn hexagon_from_contraries(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Hexagon, OppositionError> {
    let square = square_from_contraries(s1, s2, backend)?;
    let [q1, q2, q3, q4] = square.into_sentences();
    let top = q1.or(&q2)?;
    let bottom = q3.and(&q4)?;
    Ok(Hexagon::from_parts([q1, q2, q3, q4, top, bottom]))
}

/// Sentences `(B1, B2, B1 u B3, B2 u B3, B1 u B2, B3)` from a tripartition
/// of the cube.
pub fn hexagon_from_tripartition(
    tripartition: &Tripartition,
    family: &Arc<Family>,
) -> Result<Hexagon, OppositionError> {
    if !matches!(tripartition.scope(), TripartitionScope::Cube) {
        return Err(OppositionError::InvalidTripartition(
            "hexagon construction needs a cube-scope tripartition".to_string(),
        ));
    }
    if tripartition.dim() != family.len() {
        return Err(OppositionError::DimensionMismatch(
            tripartition.dim(),
            family.len(),
        ));
    }
    let [b1, b2, b3] = tripartition.parts();
    let sentences = [
        Sentence::new(family.clone(), b1.clone())?,
        Sentence::new(family.clone(), b2.clone())?,
        Sentence::new(family.clone(), b1.union(b3)?)?,
        Sentence::new(family.clone(), b2.union(b3)?)?,
        Sentence::new(family.clone(), b1.union(b2)?)?,
        Sentence::new(family.clone(), b3.clone())?,
    ];
    Ok(Hexagon::from_parts(sentences))
}

/// The label, verdict and counterexample of one hexagon relation.
pub type RelationReport = Vec<ConditionCheck>;

/// Evaluates the nine relations the two extension sentences enter: the top
/// is a subaltern of each contrary and subcontrary to each of the bottom
/// pair; the bottom is contrary to each of the top pair and has each of the
/// subcontrary pair as subaltern; top and bottom are contradictory.
pub fn hexagon_relations(
    hexagon: &Hexagon,
    backend: &PiBackend,
) -> Result<RelationReport, OppositionError> {
    let [s1, s2, s3, s4, s5, s6] = hexagon.sentences();
    let family = hexagon.family().clone();
    Ok(vec![
        contrary_check("(i) s1,s6 contraries", &family, s1, s6, backend)?,
        contrary_check("(ii) s2,s6 contraries", &family, s2, s6, backend)?,
        subaltern_check("(iii) s3 subaltern of s6", &family, s6, s3, backend)?,
        subaltern_check("(iv) s4 subaltern of s6", &family, s6, s4, backend)?,
        subaltern_check("(v) s5 subaltern of s1", &family, s1, s5, backend)?,
        subaltern_check("(vi) s5 subaltern of s2", &family, s2, s5, backend)?,
        subcontrary_check("(vii) s5,s3 subcontraries", &family, s5, s3, backend)?,
        subcontrary_check("(viii) s5,s4 subcontraries", &family, s5, s4, backend)?,
        contrary_check("(ix) s5,s6 contraries", &family, s5, s6, backend)?,
        subcontrary_check("(ix) s5,s6 subcontraries", &family, s5, s6, backend)?,
    ])
}
