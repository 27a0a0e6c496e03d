//! Randomized algebraic checks for the three sample lattices.

use std::collections::BTreeSet;

use proptest::prelude::*;

use alfsynth_core::samples::{
    ice_consistent, pn_consistent, GroundedSample, IceSample, PnSample, Point,
};

fn arb_point() -> impl Strategy<Value = Point> {
    prop::collection::vec(-6i64..=6, 2).prop_map(Point)
}

fn arb_point_set(max: usize) -> impl Strategy<Value = BTreeSet<Point>> {
    prop::collection::btree_set(arb_point(), 0..max)
}

fn arb_pn() -> impl Strategy<Value = PnSample<Point>> {
    (arb_point_set(5), arb_point_set(5)).prop_map(|(pos, neg)| PnSample { pos, neg })
}

fn arb_ice() -> impl Strategy<Value = IceSample<Point>> {
    (
        arb_point_set(4),
        arb_point_set(4),
        prop::collection::btree_set((arb_point(), arb_point()), 0..4),
    )
        .prop_map(|(pos, neg, implications)| IceSample { pos, neg, implications })
}

fn arb_grounded() -> impl Strategy<Value = GroundedSample> {
    arb_point_set(5).prop_map(|valuations| GroundedSample { valuations })
}

proptest! {
    #[test]
    fn pn_semilattice_laws(a in arb_pn(), b in arb_pn(), c in arb_pn()) {
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.join(&a), a.clone());
        prop_assert_eq!(PnSample::empty().join(&a), a.clone());
        prop_assert!(PnSample::<Point>::empty().leq(&a));
        prop_assert_eq!(a.leq(&b), a.join(&b) == b);
    }

    #[test]
    fn ice_semilattice_laws(a in arb_ice(), b in arb_ice(), c in arb_ice()) {
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.join(&a), a.clone());
        prop_assert_eq!(IceSample::empty().join(&a), a.clone());
        prop_assert!(IceSample::<Point>::empty().leq(&a));
        prop_assert_eq!(a.leq(&b), a.join(&b) == b);
    }

    #[test]
    fn grounded_semilattice_laws(a in arb_grounded(), b in arb_grounded(), c in arb_grounded()) {
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.join(&a), a.clone());
        prop_assert_eq!(GroundedSample::empty().join(&a), a.clone());
        prop_assert_eq!(a.leq(&b), a.join(&b) == b);
    }

    #[test]
    fn ice_consistency_factors_through_join(
        concept in arb_point_set(8),
        a in arb_ice(),
        b in arb_ice(),
    ) {
        let joined = a.join(&b);
        prop_assert_eq!(
            ice_consistent(&concept, &joined),
            ice_consistent(&concept, &a) && ice_consistent(&concept, &b)
        );
    }

    #[test]
    fn pn_embedding_preserves_consistency(concept in arb_point_set(8), pn in arb_pn()) {
        let ice: IceSample<Point> = pn.clone().into();
        prop_assert_eq!(ice_consistent(&concept, &ice), pn_consistent(&concept, &pn));
    }
}
