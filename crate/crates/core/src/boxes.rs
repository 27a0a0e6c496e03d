//! Interval and hyperrectangle hypothesis spaces.
//!
//! Two learners live here. The ranked learner enumerates intervals by the
//! magnitude of their finite endpoints and proposes the first one consistent
//! with the sample. The expansion learner proposes `Empty` until a positive
//! point arrives, then greedily grows a maximal consistent box around the
//! positives; against any honest teacher this converges because boxes around
//! a fixed point admit no infinite ascending alternation under inclusion.
//!
//! Printing grammar: `Empty`, `[-inf, 5]`, `[0, 3] x [-inf, inf]`. Parsing
//! accepts exactly what printing emits.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::engine::{Domain, LearnerOutcome, Learner, Rank, SampleOf, Teacher, Verdict};
use crate::occam::{occam_learn, ComplexityOrdering};
use crate::samples::{PnLattice, PnSample, Point};

/// An integer extended with two infinities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => write!(f, "inf"),
        }
    }
}

/// A nonempty interval `[lo, hi]` with `lo <= hi`, `lo != +inf`, `hi != -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedInterval {
    lo: ExtInt,
    hi: ExtInt,
}

impl ClosedInterval {
    pub fn new(lo: ExtInt, hi: ExtInt) -> Option<Self> {
        if lo == ExtInt::PosInf || hi == ExtInt::NegInf || lo > hi {
            return None;
        }
        Some(ClosedInterval { lo, hi })
    }

    pub const FULL: ClosedInterval = ClosedInterval { lo: ExtInt::NegInf, hi: ExtInt::PosInf };

    pub fn point(v: i64) -> Self {
        ClosedInterval { lo: ExtInt::Fin(v), hi: ExtInt::Fin(v) }
    }

    pub fn lo(&self) -> ExtInt {
        self.lo
    }

    pub fn hi(&self) -> ExtInt {
        self.hi
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= ExtInt::Fin(v) && ExtInt::Fin(v) <= self.hi
    }

    /// Largest absolute value among finite endpoints; 0 when both are
    /// infinite.
    pub fn complexity(&self) -> u64 {
        let l = self.lo.finite().map(i64::unsigned_abs).unwrap_or(0);
        let r = self.hi.finite().map(i64::unsigned_abs).unwrap_or(0);
        l.max(r)
    }

    /// Smallest interval containing both self and the point.
    pub fn hull(&self, v: i64) -> Self {
        ClosedInterval { lo: self.lo.min(ExtInt::Fin(v)), hi: self.hi.max(ExtInt::Fin(v)) }
    }
}

impl fmt::Display for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Interval hypothesis: empty, or a nonempty closed interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    Closed(ClosedInterval),
}

impl Interval {
    pub fn closed(lo: ExtInt, hi: ExtInt) -> Option<Self> {
        ClosedInterval::new(lo, hi).map(Interval::Closed)
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Interval::Empty => false,
            Interval::Closed(c) => c.contains(v),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => write!(f, "Empty"),
            Interval::Closed(c) => write!(f, "{c}"),
        }
    }
}

/// Complexity of an interval; `Empty` counts as 0.
pub fn interval_complexity(iv: &Interval) -> u64 {
    match iv {
        Interval::Empty => 0,
        Interval::Closed(c) => c.complexity(),
    }
}

/// Compare intervals by complexity. `Equal` means equivalent in the
/// quasi-order, not identical.
pub fn interval_cmp(a: &Interval, b: &Interval) -> Ordering {
    interval_complexity(a).cmp(&interval_complexity(b))
}

/// Hyperrectangle hypothesis: empty, or a product of nonempty intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rect {
    Empty,
    Product(Vec<ClosedInterval>),
}

impl Rect {
    pub fn full(dim: usize) -> Self {
        Rect::Product(vec![ClosedInterval::FULL; dim])
    }

    pub fn point(p: &Point) -> Self {
        Rect::Product(p.0.iter().map(|&c| ClosedInterval::point(c)).collect())
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Rect::Empty => None,
            Rect::Product(ivs) => Some(ivs.len()),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Rect::Empty => false,
            Rect::Product(ivs) => {
                ivs.len() == p.dim() && ivs.iter().zip(&p.0).all(|(iv, &c)| iv.contains(c))
            }
        }
    }

    /// Componentwise hull with a point; the hull of `Empty` is the point box.
    pub fn hull_point(&self, p: &Point) -> Rect {
        match self {
            Rect::Empty => Rect::point(p),
            Rect::Product(ivs) => {
                Rect::Product(ivs.iter().zip(&p.0).map(|(iv, &c)| iv.hull(c)).collect())
            }
        }
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        match self {
            Rect::Empty => &[],
            Rect::Product(ivs) => ivs,
        }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rect::Empty => write!(f, "Empty"),
            Rect::Product(ivs) => {
                for (i, iv) in ivs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{iv}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<Interval> for Rect {
    fn from(iv: Interval) -> Rect {
        match iv {
            Interval::Empty => Rect::Empty,
            Interval::Closed(c) => Rect::Product(vec![c]),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoxParseError {
    #[error("expected an interval of the form `[lo, hi]`, got `{0}`")]
    BadInterval(String),
    #[error("bad endpoint `{0}`")]
    BadEndpoint(String),
    #[error("endpoints out of order in `{0}`")]
    EmptyFactor(String),
}

fn parse_endpoint(s: &str) -> Result<ExtInt, BoxParseError> {
    match s {
        "-inf" => Ok(ExtInt::NegInf),
        "inf" | "+inf" => Ok(ExtInt::PosInf),
        _ => s.parse::<i64>().map(ExtInt::Fin).map_err(|_| BoxParseError::BadEndpoint(s.to_string())),
    }
}

fn parse_closed(s: &str) -> Result<ClosedInterval, BoxParseError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| BoxParseError::BadInterval(s.to_string()))?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| BoxParseError::BadInterval(s.to_string()))?;
    let lo = parse_endpoint(lo.trim())?;
    let hi = parse_endpoint(hi.trim())?;
    ClosedInterval::new(lo, hi).ok_or_else(|| BoxParseError::EmptyFactor(s.to_string()))
}

pub fn parse_interval(s: &str) -> Result<Interval, BoxParseError> {
    let s = s.trim();
    if s == "Empty" {
        return Ok(Interval::Empty);
    }
    parse_closed(s).map(Interval::Closed)
}

pub fn parse_rect(s: &str) -> Result<Rect, BoxParseError> {
    let s = s.trim();
    if s == "Empty" {
        return Ok(Rect::Empty);
    }
    let factors: Result<Vec<_>, _> = s.split(" x ").map(|f| parse_closed(f.trim())).collect();
    Ok(Rect::Product(factors?))
}

/// All intervals of exactly the given complexity, in enumeration order:
/// `[-inf, inf]` first (at complexity 0), then by `(lo, hi)` with `-inf`
/// least.
pub fn intervals_of_complexity(c: u64) -> Vec<Interval> {
    let c_i = c as i64;
    let mut endpoints_lo: Vec<ExtInt> = vec![ExtInt::NegInf];
    endpoints_lo.extend((-c_i..=c_i).map(ExtInt::Fin));
    let mut endpoints_hi: Vec<ExtInt> = (-c_i..=c_i).map(ExtInt::Fin).collect();
    endpoints_hi.push(ExtInt::PosInf);

    let mut out = Vec::new();
    if c == 0 {
        out.push(Interval::Closed(ClosedInterval::FULL));
    }
    for &lo in &endpoints_lo {
        for &hi in &endpoints_hi {
            let Some(iv) = ClosedInterval::new(lo, hi) else { continue };
            if iv == ClosedInterval::FULL {
                continue;
            }
            if iv.complexity() == c {
                out.push(Interval::Closed(iv));
            }
        }
    }
    out
}

/// Ranked enumeration of nonempty intervals; rank is the complexity.
#[derive(Debug, Default, Clone, Copy)]
pub struct IntervalOrdering;

impl ComplexityOrdering for IntervalOrdering {
    type Hypothesis = Interval;

    fn rank(&self, iv: &Interval) -> Rank {
        Rank::of([interval_complexity(iv)])
    }

    fn stream(&self) -> Box<dyn Iterator<Item = Interval> + '_> {
        Box::new((0u64..).flat_map(intervals_of_complexity))
    }
}

fn coord(p: &Point, d: usize) -> i64 {
    p.0[d]
}

fn as_1d(p: &Point) -> i64 {
    debug_assert_eq!(p.dim(), 1, "interval learner needs 1-dimensional points");
    p.0[0]
}

/// Is any interval consistent with the 1-d sample? None exists exactly when
/// a negative point falls inside the bounding range of the positives
/// (overlap of `P` and `N` included).
fn interval_sample_realizable(sample: &PnSample<Point>) -> bool {
    let Some(min) = sample.pos.iter().map(as_1d).min() else { return true };
    let max = sample.pos.iter().map(as_1d).max().unwrap();
    !sample.neg.iter().map(as_1d).any(|n| min <= n && n <= max)
}

/// Smallest-complexity interval containing all positives and no negatives.
///
/// Unrealizable samples are recognized directly; otherwise the ranked
/// enumeration is guaranteed to terminate at the minimal complexity, or at
/// `rank_cap` if that is lower.
pub fn interval_occam_learn(sample: &PnSample<Point>, rank_cap: &Rank) -> LearnerOutcome<Interval> {
    if !interval_sample_realizable(sample) {
        return LearnerOutcome::Unrealizable;
    }
    occam_learn(
        &IntervalOrdering,
        |iv: &Interval, s: &PnSample<Point>| {
            s.pos.iter().all(|p| iv.contains(as_1d(p))) && s.neg.iter().all(|n| !iv.contains(as_1d(n)))
        },
        sample,
        rank_cap,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

/// One face of an n-dimensional box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub side: Side,
}

/// Dimensions ascending, low face before high face.
pub fn canonical_face_order(dim: usize) -> Vec<Face> {
    (0..dim)
        .flat_map(|d| [Face { dim: d, side: Side::Low }, Face { dim: d, side: Side::High }])
        .collect()
}

/// Grow a maximal box around the positives, one greedy pass over the faces.
///
/// Starting from the bounding box of `P`, each face is pushed outward to the
/// furthest extent (possibly infinite) that keeps every negative outside,
/// given the other faces' current extents. One pass suffices: later
/// expansions only enlarge the box, so a negative that blocked an earlier
/// face still has its remaining coordinates inside and still blocks it;
/// faces pushed to infinity cannot move further at all.
///
/// Requires a nonempty `P` (the caller proposes `Empty` until then). Returns
/// `None` when some negative lies inside the bounding box of the positives,
/// since every box containing `P` contains that bounding box.
pub fn maximal_consistent_rect(
    sample: &PnSample<Point>,
    dim: usize,
    face_order: &[Face],
) -> Option<Rect> {
    assert!(!sample.pos.is_empty(), "maximal box expansion needs at least one positive point");

    let mut lo: Vec<i64> = (0..dim).map(|d| sample.pos.iter().map(|p| coord(p, d)).min().unwrap()).collect();
    let mut hi: Vec<i64> = (0..dim).map(|d| sample.pos.iter().map(|p| coord(p, d)).max().unwrap()).collect();

    if sample.neg.iter().any(|n| (0..dim).all(|d| lo[d] <= coord(n, d) && coord(n, d) <= hi[d])) {
        return None;
    }

    let mut ext_lo: Vec<ExtInt> = lo.drain(..).map(ExtInt::Fin).collect();
    let mut ext_hi: Vec<ExtInt> = hi.drain(..).map(ExtInt::Fin).collect();

    let others_inside = |n: &Point, skip: usize, ext_lo: &[ExtInt], ext_hi: &[ExtInt]| {
        (0..dim).all(|d| {
            d == skip || {
                let v = ExtInt::Fin(coord(n, d));
                ext_lo[d] <= v && v <= ext_hi[d]
            }
        })
    };

    for face in face_order {
        let d = face.dim;
        match face.side {
            Side::Low => {
                let blocker = sample
                    .neg
                    .iter()
                    .filter(|n| ExtInt::Fin(coord(n, d)) < ext_lo[d])
                    .filter(|n| others_inside(n, d, &ext_lo, &ext_hi))
                    .map(|n| coord(n, d))
                    .max();
                ext_lo[d] = match blocker {
                    Some(b) => ExtInt::Fin(b + 1),
                    None => ExtInt::NegInf,
                };
            }
            Side::High => {
                let blocker = sample
                    .neg
                    .iter()
                    .filter(|n| ExtInt::Fin(coord(n, d)) > ext_hi[d])
                    .filter(|n| others_inside(n, d, &ext_lo, &ext_hi))
                    .map(|n| coord(n, d))
                    .min();
                ext_hi[d] = match blocker {
                    Some(b) => ExtInt::Fin(b - 1),
                    None => ExtInt::PosInf,
                };
            }
        }
    }

    let ivs: Option<Vec<_>> = ext_lo
        .into_iter()
        .zip(ext_hi)
        .map(|(l, h)| ClosedInterval::new(l, h))
        .collect();
    Some(Rect::Product(ivs.expect("expansion never shrinks below the bounding box")))
}

/// Expansion learner: `Empty` until a positive arrives, then a maximal
/// consistent box grown in the canonical face order.
pub fn rect_wqo_learn(sample: &PnSample<Point>, dim: usize) -> LearnerOutcome<Rect> {
    if sample.pos.is_empty() {
        return LearnerOutcome::Hypothesis(Rect::Empty);
    }
    match maximal_consistent_rect(sample, dim, &canonical_face_order(dim)) {
        Some(rect) => LearnerOutcome::Hypothesis(rect),
        None => LearnerOutcome::Unrealizable,
    }
}

/// Faces of `rect` that could still be pushed outward without admitting a
/// negative. Empty result means the box is inclusion-maximal facewise.
pub fn face_expansion_violations(rect: &Rect, sample: &PnSample<Point>) -> Vec<Face> {
    let Rect::Product(ivs) = rect else { return Vec::new() };
    let dim = ivs.len();
    let mut violations = Vec::new();

    let others_inside = |n: &Point, skip: usize| {
        (0..dim).all(|d| d == skip || ivs[d].contains(coord(n, d)))
    };

    for face in canonical_face_order(dim) {
        let d = face.dim;
        match face.side {
            Side::Low => {
                let Some(lo) = ivs[d].lo().finite() else { continue };
                let tight = sample
                    .neg
                    .iter()
                    .any(|n| coord(n, d) == lo - 1 && others_inside(n, d));
                if !tight {
                    violations.push(face);
                }
            }
            Side::High => {
                let Some(hi) = ivs[d].hi().finite() else { continue };
                let tight = sample
                    .neg
                    .iter()
                    .any(|n| coord(n, d) == hi + 1 && others_inside(n, d));
                if !tight {
                    violations.push(face);
                }
            }
        }
    }
    violations
}

/// Deterministic teacher for a hidden box target: the target set is every
/// box containing `hidden_pos` and avoiding `hidden_neg`. Positives are
/// checked first; the lexicographically smallest violating point is
/// returned.
#[derive(Clone, Debug)]
pub struct BoxTeacher {
    pub hidden_pos: BTreeSet<Point>,
    pub hidden_neg: BTreeSet<Point>,
}

impl BoxTeacher {
    pub fn new(
        hidden_pos: impl IntoIterator<Item = Point>,
        hidden_neg: impl IntoIterator<Item = Point>,
    ) -> Self {
        BoxTeacher { hidden_pos: hidden_pos.into_iter().collect(), hidden_neg: hidden_neg.into_iter().collect() }
    }

    /// Is some box containing all of `hidden_pos` and none of `hidden_neg`?
    pub fn realizable(&self, dim: usize) -> bool {
        if self.hidden_pos.is_empty() {
            return true;
        }
        let lo: Vec<i64> = (0..dim).map(|d| self.hidden_pos.iter().map(|p| coord(p, d)).min().unwrap()).collect();
        let hi: Vec<i64> = (0..dim).map(|d| self.hidden_pos.iter().map(|p| coord(p, d)).max().unwrap()).collect();
        !self.hidden_neg.iter().any(|n| (0..dim).all(|d| lo[d] <= coord(n, d) && coord(n, d) <= hi[d]))
    }

    pub fn respond_rect(&self, rect: &Rect) -> Verdict<PnSample<Point>> {
        if let Some(missing) = self.hidden_pos.iter().find(|p| !rect.contains(p)) {
            return Verdict::Feedback(PnSample::positive(missing.clone()));
        }
        if let Some(inside) = self.hidden_neg.iter().find(|n| rect.contains(n)) {
            return Verdict::Feedback(PnSample::negative(inside.clone()));
        }
        Verdict::Accept
    }
}

/// Interval instance over 1-dimensional PN samples.
#[derive(Debug, Default)]
pub struct IntervalDomain {
    lattice: PnLattice<Point>,
}

impl IntervalDomain {
    pub fn new() -> Self {
        IntervalDomain { lattice: PnLattice::new() }
    }
}

impl Domain for IntervalDomain {
    type Lattice = PnLattice<Point>;
    type Hypothesis = Interval;

    fn lattice(&self) -> &Self::Lattice {
        &self.lattice
    }

    fn consistent(&self, iv: &Interval, s: &PnSample<Point>) -> bool {
        s.pos.iter().all(|p| iv.contains(as_1d(p))) && s.neg.iter().all(|n| !iv.contains(as_1d(n)))
    }

    fn render_hypothesis(&self, iv: &Interval) -> String {
        iv.to_string()
    }
}

impl crate::audit::ConceptSemantics for IntervalDomain {
    type Concept = Interval;

    fn concretize(&self, iv: &Interval) -> Interval {
        *iv
    }

    fn concept_consistent(&self, c: &Interval, s: &PnSample<Point>) -> bool {
        self.consistent(c, s)
    }
}

/// Rectangle instance over n-dimensional PN samples.
#[derive(Debug)]
pub struct RectDomain {
    pub dim: usize,
    lattice: PnLattice<Point>,
}

impl RectDomain {
    pub fn new(dim: usize) -> Self {
        RectDomain { dim, lattice: PnLattice::new() }
    }
}

impl Domain for RectDomain {
    type Lattice = PnLattice<Point>;
    type Hypothesis = Rect;

    fn lattice(&self) -> &Self::Lattice {
        &self.lattice
    }

    fn consistent(&self, rect: &Rect, s: &PnSample<Point>) -> bool {
        s.pos.iter().all(|p| rect.contains(p)) && s.neg.iter().all(|n| !rect.contains(n))
    }

    fn render_hypothesis(&self, rect: &Rect) -> String {
        rect.to_string()
    }
}

impl crate::audit::ConceptSemantics for RectDomain {
    type Concept = Rect;

    fn concretize(&self, rect: &Rect) -> Rect {
        rect.clone()
    }

    fn concept_consistent(&self, c: &Rect, s: &PnSample<Point>) -> bool {
        self.consistent(c, s)
    }
}

/// Ranked interval learner with a mandatory rank cap.
#[derive(Clone, Debug)]
pub struct IntervalOccamLearner {
    pub rank_cap: Rank,
}

impl Learner<IntervalDomain> for IntervalOccamLearner {
    fn propose(&self, sample: &SampleOf<IntervalDomain>) -> LearnerOutcome<Interval> {
        interval_occam_learn(sample, &self.rank_cap)
    }
}

/// Maximal-expansion learner for rectangles.
#[derive(Clone, Copy, Debug)]
pub struct RectWqoLearner {
    pub dim: usize,
}

impl Learner<RectDomain> for RectWqoLearner {
    fn propose(&self, sample: &SampleOf<RectDomain>) -> LearnerOutcome<Rect> {
        rect_wqo_learn(sample, self.dim)
    }
}

/// 1-d expansion learner, for interval instances driven by inclusion
/// maximality instead of ranked search.
#[derive(Clone, Copy, Debug)]
pub struct IntervalWqoLearner;

impl Learner<IntervalDomain> for IntervalWqoLearner {
    fn propose(&self, sample: &SampleOf<IntervalDomain>) -> LearnerOutcome<Interval> {
        match rect_wqo_learn(sample, 1) {
            LearnerOutcome::Hypothesis(Rect::Empty) => LearnerOutcome::Hypothesis(Interval::Empty),
            LearnerOutcome::Hypothesis(Rect::Product(ivs)) => {
                LearnerOutcome::Hypothesis(Interval::Closed(ivs[0]))
            }
            LearnerOutcome::Unrealizable => LearnerOutcome::Unrealizable,
            LearnerOutcome::CapExhausted(cap) => LearnerOutcome::CapExhausted(cap),
        }
    }
}

impl Teacher<IntervalDomain> for BoxTeacher {
    fn respond(&self, iv: &Interval) -> Verdict<PnSample<Point>> {
        self.respond_rect(&Rect::from(*iv))
    }
}

impl Teacher<RectDomain> for BoxTeacher {
    fn respond(&self, rect: &Rect) -> Verdict<PnSample<Point>> {
        self.respond_rect(rect)
    }
}
