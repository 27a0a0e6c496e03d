//! Trace audits and consistency-law checks over finite concept universes.
//!
//! [`verify_progress`] checks a recorded trace against the loop's progress
//! obligations. [`verify_honesty`] checks that no teacher feedback rules out
//! a known target. [`verify_consistency_laws`] checks the sample lattice's
//! interplay with concept consistency on an enumerable universe: the empty
//! sample admits every concept, joining samples intersects their admitted
//! sets, and growing a sample never admits new concepts.

use std::fmt;

use thiserror::Error;

use crate::engine::{Domain, SampleLattice, SampleOf, Trace};

/// Default cap on the number of concepts a finite universe may enumerate.
pub const DEFAULT_CONCEPT_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("the domain has no enumerable concept universe")]
    Unavailable,
    #[error("concept universe has {count} elements, above the cap of {cap}")]
    TooLarge { count: u64, cap: u64 },
}

/// Concept-level semantics for a domain: what hypotheses denote and which
/// concepts a sample admits. Domains over small finite universes can also
/// enumerate every concept, which enables the law checks below.
pub trait ConceptSemantics: Domain {
    type Concept: Clone + PartialEq + fmt::Debug;

    /// Denotation of a hypothesis.
    fn concretize(&self, hypothesis: &Self::Hypothesis) -> Self::Concept;

    /// Is the concept compatible with everything the sample records?
    fn concept_consistent(&self, concept: &Self::Concept, sample: &SampleOf<Self>) -> bool;

    /// Every concept, when the universe is finite and within `cap`.
    fn concept_universe(&self, _cap: u64) -> Result<Vec<Self::Concept>, UniverseError> {
        Err(UniverseError::Unavailable)
    }
}

/// A failed progress obligation, naming the round and the clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgressViolation {
    /// The sample did not grow from this round to the next.
    NotMonotone { round: usize },
    /// The hypothesis proposed this round is still consistent with the next
    /// round's sample, so the feedback taught nothing.
    HypothesisNotRuledOut { round: usize },
}

/// Check the recorded samples are nondecreasing and that each non-final
/// hypothesis is ruled out by the following round's sample.
pub fn verify_progress<D: Domain + ?Sized>(
    trace: &Trace<D::Hypothesis, SampleOf<D>>,
    domain: &D,
) -> Vec<ProgressViolation> {
    let lattice = domain.lattice();
    let mut violations = Vec::new();
    for pair in trace.steps.windows(2) {
        let (step, next) = (&pair[0], &pair[1]);
        if !lattice.leq(&step.sample, &next.sample) {
            violations.push(ProgressViolation::NotMonotone { round: step.round });
        }
        if domain.consistent(&step.hypothesis, &next.sample) {
            violations.push(ProgressViolation::HypothesisNotRuledOut { round: step.round });
        }
    }
    violations
}

/// A feedback sample that excludes a target concept.
#[derive(Clone, Debug, PartialEq)]
pub struct HonestyViolation<C> {
    pub round: usize,
    pub excluded_target: C,
}

/// Check every feedback sample in the trace against every target concept.
/// An honest teacher never returns feedback that a target fails.
pub fn verify_honesty<D: ConceptSemantics + ?Sized>(
    trace: &Trace<D::Hypothesis, SampleOf<D>>,
    domain: &D,
    targets: &[D::Concept],
) -> Vec<HonestyViolation<D::Concept>> {
    let mut violations = Vec::new();
    for (round, feedback) in trace.feedback() {
        for target in targets {
            if !domain.concept_consistent(target, feedback) {
                violations.push(HonestyViolation { round, excluded_target: target.clone() });
            }
        }
    }
    violations
}

/// A failed consistency law, with the concept witnessing it.
#[derive(Clone, Debug, PartialEq)]
pub enum ConsistencyLawViolation<C> {
    /// Some concept is inconsistent with the bottom sample.
    BottomExcludesConcept { concept: C },
    /// Consistency with a join differs from consistency with both parts.
    JoinLaw { pair: usize, concept: C },
    /// A concept consistent with the larger of two ordered samples is
    /// inconsistent with the smaller one.
    Monotonicity { pair: usize, concept: C },
}

/// Check the consistency laws on an enumerated concept universe against the
/// given sample pairs. Fails with [`UniverseError`] when the universe is
/// absent or larger than `cap`.
pub fn verify_consistency_laws<D: ConceptSemantics + ?Sized>(
    domain: &D,
    pairs: &[(SampleOf<D>, SampleOf<D>)],
    cap: u64,
) -> Result<Vec<ConsistencyLawViolation<D::Concept>>, UniverseError> {
    let universe = domain.concept_universe(cap)?;
    let lattice = domain.lattice();
    let mut violations = Vec::new();

    let bottom = lattice.bottom();
    for concept in &universe {
        if !domain.concept_consistent(concept, &bottom) {
            violations.push(ConsistencyLawViolation::BottomExcludesConcept { concept: concept.clone() });
        }
    }

    for (pair_index, (s1, s2)) in pairs.iter().enumerate() {
        let joined = lattice.join(s1, s2);
        for concept in &universe {
            let both = domain.concept_consistent(concept, s1) && domain.concept_consistent(concept, s2);
            if domain.concept_consistent(concept, &joined) != both {
                violations.push(ConsistencyLawViolation::JoinLaw { pair: pair_index, concept: concept.clone() });
            }
        }
        for (small, large) in [(s1, s2), (s2, s1)] {
            if lattice.leq(small, large) {
                for concept in &universe {
                    if domain.concept_consistent(concept, large) && !domain.concept_consistent(concept, small) {
                        violations.push(ConsistencyLawViolation::Monotonicity {
                            pair: pair_index,
                            concept: concept.clone(),
                        });
                    }
                }
            }
        }
    }

    Ok(violations)
}
