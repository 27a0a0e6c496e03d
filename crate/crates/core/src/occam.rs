//! Enumerative smallest-first learning over ranked hypothesis streams.
//!
//! A [`ComplexityOrdering`] pairs a rank function with a deterministic
//! enumeration emitting hypotheses in nondecreasing rank; the tie-break
//! within a rank is part of each enumerator's definition and the stream
//! order is authoritative. [`occam_learn`] walks the stream and returns the
//! first consistent hypothesis, so its output is rank-minimal among all
//! consistent hypotheses.

use crate::engine::{LearnerOutcome, Rank};

/// A ranked, restartable hypothesis enumeration.
///
/// Requirements on implementors: `stream` yields hypotheses in nondecreasing
/// `rank`, only finitely many hypotheses precede any given rank, and repeated
/// calls to `stream` replay the identical sequence.
pub trait ComplexityOrdering {
    type Hypothesis: Clone;

    fn rank(&self, hypothesis: &Self::Hypothesis) -> Rank;

    fn stream(&self) -> Box<dyn Iterator<Item = Self::Hypothesis> + '_>;

    /// True when `stream` enumerates the entire (finite) hypothesis space,
    /// which lets the learner report unrealizability instead of a cap hit.
    fn exhaustive(&self) -> bool {
        false
    }
}

/// Return the first enumerated hypothesis consistent with the sample.
///
/// Stops with `CapExhausted` as soon as the stream passes `rank_cap`, or
/// when a non-exhaustive stream ends. Each candidate is evaluated exactly
/// once per call; nothing is cached across calls, so growing samples never
/// see stale consistency results.
pub fn occam_learn<O, S, F>(
    ordering: &O,
    consistent: F,
    sample: &S,
    rank_cap: &Rank,
) -> LearnerOutcome<O::Hypothesis>
where
    O: ComplexityOrdering,
    F: Fn(&O::Hypothesis, &S) -> bool,
{
    for hypothesis in ordering.stream() {
        if ordering.rank(&hypothesis) > *rank_cap {
            return LearnerOutcome::CapExhausted(rank_cap.clone());
        }
        if consistent(&hypothesis, sample) {
            return LearnerOutcome::Hypothesis(hypothesis);
        }
    }
    if ordering.exhaustive() {
        LearnerOutcome::Unrealizable
    } else {
        LearnerOutcome::CapExhausted(rank_cap.clone())
    }
}
