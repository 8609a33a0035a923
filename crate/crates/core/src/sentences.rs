//! Sentences: a family of conditional events paired with a set-valued
//! assessment. A sentence is acceptable when its assessment is g-coherent;
//! all four opposition relations are emptiness questions about t-coherent
//! parts, decided through the coherence kernel. Relations are defined only
//! between sentences over the same family; anything else is a usage error,
//! not a semantic question.

use std::sync::Arc;

use thiserror::Error;

use crate::coherence::{self, CoherenceError, PiBackend, Truth};
use crate::events::Family;
use crate::regions::{Region, RegionError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SentenceError {
    #[error("sentences are over different families")]
    FamilyMismatch,
    #[error("region dimension {got} does not match family size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// A pair of a family and a subset of `[0,1]^n`; the label is metadata only.
#[derive(Clone, Debug)]
pub struct Sentence {
    family: Arc<Family>,
    region: Region,
    label: Option<String>,
}

impl Sentence {
    pub fn new(family: Arc<Family>, region: Region) -> Result<Self, SentenceError> {
        if region.dim() != family.len() {
            return Err(SentenceError::DimensionMismatch {
                expected: family.len(),
                got: region.dim(),
            });
        }
        Ok(Sentence {
            family,
            region,
            label: None,
        })
    }

    pub fn labeled(
        family: Arc<Family>,
        region: Region,
        label: impl Into<String>,
    ) -> Result<Self, SentenceError> {
        let mut s = Sentence::new(family, region)?;
        s.label = Some(label.into());
        Ok(s)
    }

    pub fn family(&self) -> &Arc<Family> {
        &self.family
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Sentence {
        self.label = Some(label.into());
        self
    }

    pub fn same_family(&self, other: &Sentence) -> bool {
        Arc::ptr_eq(&self.family, &other.family) || self.family == other.family
    }

    fn require_same_family(&self, other: &Sentence) -> Result<(), SentenceError> {
        if self.same_family(other) {
            Ok(())
        } else {
            Err(SentenceError::FamilyMismatch)
        }
    }

    /// Conjunction: intersect the assessments over the shared family.
    pub fn and(&self, other: &Sentence) -> Result<Sentence, SentenceError> {
        self.require_same_family(other)?;
        Ok(Sentence {
            family: self.family.clone(),
            region: self.region.intersect(&other.region)?,
            label: None,
        })
    }

    /// Disjunction: union of the assessments.
    pub fn or(&self, other: &Sentence) -> Result<Sentence, SentenceError> {
        self.require_same_family(other)?;
        Ok(Sentence {
            family: self.family.clone(),
            region: self.region.union(&other.region)?,
            label: None,
        })
    }

    /// Negation: complement of the assessment within the cube.
    pub fn not(&self) -> Sentence {
        Sentence {
            family: self.family.clone(),
            region: self.region.complement(),
            label: None,
        }
    }

    /// Acceptability: the assessment is g-coherent.
    pub fn is_acceptable(&self, backend: &PiBackend) -> Result<Truth, SentenceError> {
        Ok(coherence::g_coherent(&self.family, &self.region, backend)?)
    }
}

/// Equivalence under t-coherence: equal t-coherent parts.
pub fn equivalent(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Truth, SentenceError> {
    s1.require_same_family(s2)?;
    Ok(coherence::pi_equal(
        &s1.family, &s1.region, &s2.region, backend,
    )?)
}

/// Contraries: the conjunction is not acceptable.
pub fn contrary(s1: &Sentence, s2: &Sentence, backend: &PiBackend) -> Result<Truth, SentenceError> {
    s1.require_same_family(s2)?;
    let meet = s1.region.intersect(&s2.region)?;
    Ok(coherence::pi_is_empty(&s1.family, &meet, backend)?)
}

/// Subcontraries: the conjunction of the negations is not acceptable.
pub fn subcontrary(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Truth, SentenceError> {
    s1.require_same_family(s2)?;
    let meet = s1.region.complement().intersect(&s2.region.complement())?;
    Ok(coherence::pi_is_empty(&s1.family, &meet, backend)?)
}

/// Contradictories: both contraries and subcontraries.
pub fn contradictory(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Truth, SentenceError> {
    Ok(contrary(s1, s2, backend)?.and(subcontrary(s1, s2, backend)?))
}

/// `s2` is a subaltern of `s1`: the t-coherent part of `s1`'s assessment is
/// contained in that of `s2`'s.
pub fn subaltern(
    s1: &Sentence,
    s2: &Sentence,
    backend: &PiBackend,
) -> Result<Truth, SentenceError> {
    s1.require_same_family(s2)?;
    Ok(coherence::pi_subset(
        &s1.family, &s1.region, &s2.region, backend,
    )?)
}
