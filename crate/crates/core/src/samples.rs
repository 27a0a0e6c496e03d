//! Sample types exchanged between learners and teachers.
//!
//! Three families are provided: positive/negative point samples
//! ([`PnSample`]), ICE samples with implication pairs ([`IceSample`]), and
//! grounded input samples for expression synthesis ([`GroundedSample`]).
//! Each forms a bounded join-semilattice under componentwise union, with the
//! empty sample as bottom. Sets are stored sorted so that equality and
//! serialization are deterministic.

use std::collections::BTreeSet;
use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::engine::SampleLattice;

/// A point in `Z^n`. Also used as a program state by the invariant domains.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<i64>> for Point {
    fn from(coords: Vec<i64>) -> Self {
        Point(coords)
    }
}

/// Positive/negative sample: `P` must be covered, `N` must be avoided.
///
/// `P` and `N` may overlap; such a sample is simply unrealizable, not
/// malformed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnSample<T: Ord> {
    #[serde(rename = "P")]
    pub pos: BTreeSet<T>,
    #[serde(rename = "N")]
    pub neg: BTreeSet<T>,
}

impl<T: Ord + Clone> PnSample<T> {
    pub fn empty() -> Self {
        PnSample { pos: BTreeSet::new(), neg: BTreeSet::new() }
    }

    pub fn positive(t: T) -> Self {
        let mut s = Self::empty();
        s.pos.insert(t);
        s
    }

    pub fn negative(t: T) -> Self {
        let mut s = Self::empty();
        s.neg.insert(t);
        s
    }

    pub fn from_parts(pos: impl IntoIterator<Item = T>, neg: impl IntoIterator<Item = T>) -> Self {
        PnSample { pos: pos.into_iter().collect(), neg: neg.into_iter().collect() }
    }

    pub fn join(&self, other: &Self) -> Self {
        PnSample {
            pos: self.pos.union(&other.pos).cloned().collect(),
            neg: self.neg.union(&other.neg).cloned().collect(),
        }
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }
}

/// A concept (set of elements) is consistent with a PN sample when it covers
/// every positive and avoids every negative.
pub fn pn_consistent<T: Ord>(concept: &BTreeSet<T>, sample: &PnSample<T>) -> bool {
    sample.pos.iter().all(|p| concept.contains(p)) && sample.neg.iter().all(|n| !concept.contains(n))
}

/// ICE sample: positives, negatives, and implication pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IceSample<T: Ord> {
    #[serde(rename = "P")]
    pub pos: BTreeSet<T>,
    #[serde(rename = "N")]
    pub neg: BTreeSet<T>,
    #[serde(rename = "I")]
    pub implications: BTreeSet<(T, T)>,
}

impl<T: Ord + Clone> IceSample<T> {
    pub fn empty() -> Self {
        IceSample { pos: BTreeSet::new(), neg: BTreeSet::new(), implications: BTreeSet::new() }
    }

    pub fn positive(t: T) -> Self {
        let mut s = Self::empty();
        s.pos.insert(t);
        s
    }

    pub fn negative(t: T) -> Self {
        let mut s = Self::empty();
        s.neg.insert(t);
        s
    }

    pub fn implication(from: T, to: T) -> Self {
        let mut s = Self::empty();
        s.implications.insert((from, to));
        s
    }

    pub fn from_parts(
        pos: impl IntoIterator<Item = T>,
        neg: impl IntoIterator<Item = T>,
        implications: impl IntoIterator<Item = (T, T)>,
    ) -> Self {
        IceSample {
            pos: pos.into_iter().collect(),
            neg: neg.into_iter().collect(),
            implications: implications.into_iter().collect(),
        }
    }

    /// Componentwise union.
    pub fn join(&self, other: &Self) -> Self {
        IceSample {
            pos: self.pos.union(&other.pos).cloned().collect(),
            neg: self.neg.union(&other.neg).cloned().collect(),
            implications: self.implications.union(&other.implications).cloned().collect(),
        }
    }

    /// Componentwise set inclusion.
    pub fn leq(&self, other: &Self) -> bool {
        self.pos.is_subset(&other.pos)
            && self.neg.is_subset(&other.neg)
            && self.implications.is_subset(&other.implications)
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty() && self.implications.is_empty()
    }
}

impl<T: Ord + Clone> From<PnSample<T>> for IceSample<T> {
    fn from(pn: PnSample<T>) -> Self {
        IceSample { pos: pn.pos, neg: pn.neg, implications: BTreeSet::new() }
    }
}

/// A concept is consistent with an ICE sample when it covers `P`, avoids `N`,
/// and every implication whose antecedent lies inside the concept has its
/// consequent inside as well.
pub fn ice_consistent<T: Ord>(concept: &BTreeSet<T>, sample: &IceSample<T>) -> bool {
    sample.pos.iter().all(|p| concept.contains(p))
        && sample.neg.iter().all(|n| !concept.contains(n))
        && sample
            .implications
            .iter()
            .all(|(a, b)| !concept.contains(a) || concept.contains(b))
}

/// Grounded sample: the input valuations at which a synthesis specification
/// has been instantiated. The formula itself lives with the instance; the
/// sample carries only the points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundedSample {
    #[serde(rename = "V")]
    pub valuations: BTreeSet<Point>,
}

impl GroundedSample {
    pub fn empty() -> Self {
        GroundedSample { valuations: BTreeSet::new() }
    }

    pub fn single(v: Point) -> Self {
        let mut s = Self::empty();
        s.valuations.insert(v);
        s
    }

    pub fn join(&self, other: &Self) -> Self {
        GroundedSample { valuations: self.valuations.union(&other.valuations).cloned().collect() }
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.valuations.is_subset(&other.valuations)
    }

    /// Embedding into the ICE lattice: valuations become positives.
    pub fn to_ice(&self) -> IceSample<Point> {
        IceSample::from_parts(self.valuations.iter().cloned(), [], [])
    }
}

/// PN lattice over elements of type `T`.
#[derive(Debug, Clone, Copy)]
pub struct PnLattice<T>(PhantomData<T>);

impl<T> Default for PnLattice<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> PnLattice<T> {
    pub const fn new() -> Self {
        PnLattice(PhantomData)
    }
}

impl<T: Ord + Clone + fmt::Debug> SampleLattice for PnLattice<T> {
    type Sample = PnSample<T>;

    fn bottom(&self) -> PnSample<T> {
        PnSample::empty()
    }

    fn join(&self, a: &PnSample<T>, b: &PnSample<T>) -> PnSample<T> {
        a.join(b)
    }

    fn leq(&self, a: &PnSample<T>, b: &PnSample<T>) -> bool {
        a.leq(b)
    }
}

/// ICE lattice over elements of type `T`.
#[derive(Debug, Clone, Copy)]
pub struct IceLattice<T>(PhantomData<T>);

impl<T> Default for IceLattice<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> IceLattice<T> {
    pub const fn new() -> Self {
        IceLattice(PhantomData)
    }
}

impl<T: Ord + Clone + fmt::Debug> SampleLattice for IceLattice<T> {
    type Sample = IceSample<T>;

    fn bottom(&self) -> IceSample<T> {
        IceSample::empty()
    }

    fn join(&self, a: &IceSample<T>, b: &IceSample<T>) -> IceSample<T> {
        a.join(b)
    }

    fn leq(&self, a: &IceSample<T>, b: &IceSample<T>) -> bool {
        a.leq(b)
    }
}

/// Lattice of grounded input samples.
#[derive(Debug, Default, Clone, Copy)]
pub struct GroundedLattice;

impl SampleLattice for GroundedLattice {
    type Sample = GroundedSample;

    fn bottom(&self) -> GroundedSample {
        GroundedSample::empty()
    }

    fn join(&self, a: &GroundedSample, b: &GroundedSample) -> GroundedSample {
        a.join(b)
    }

    fn leq(&self, a: &GroundedSample, b: &GroundedSample) -> bool {
        a.leq(b)
    }
}
