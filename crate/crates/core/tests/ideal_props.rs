mod common;

use common::{gauged_body, pos_q};
use njump_core::ideal::{ideal_contains_ideal, ideal_product, multiplier_ideal};
use njump_core::jumping::lct;
use njump_core::{rat, LatticePoint};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_pointwise_membership(b in gauged_body(), c in pos_q()) {
        let c = c / rat(4, 1);
        let ideal = multiplier_ideal(&b, &c).unwrap();
        prop_assert!(ideal.is_antichain());
        let cb = b.scale(&c).unwrap();
        for a1 in 0..20u64 {
            for a2 in 0..20u64 {
                let inside = cb.contains_lattice(LatticePoint::new(a1 + 1, a2 + 1), true);
                prop_assert_eq!(ideal.contains(LatticePoint::new(a1, a2)), inside, "({}, {})", a1, a2);
            }
        }
    }

    #[test]
    fn scaling_consistency(b in gauged_body(), c in pos_q()) {
        let lhs = multiplier_ideal(&b, &c).unwrap();
        let rhs = multiplier_ideal(&b.scale(&c).unwrap(), &rat(1, 1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decreasing_in_c(b in gauged_body(), c1 in pos_q(), dc in pos_q()) {
        let c1 = c1 / rat(4, 1);
        let c2 = &c1 + dc / rat(4, 1);
        let j1 = multiplier_ideal(&b, &c1).unwrap();
        let j2 = multiplier_ideal(&b, &c2).unwrap();
        prop_assert!(ideal_contains_ideal(&j1, &j2));
    }

    #[test]
    fn subadditive_at_lct(b in gauged_body(), chi in pos_q()) {
        let chi = chi / rat(4, 1);
        let l = lct(&b).unwrap();
        let Some(l) = l.as_rational().cloned() else {
            return Ok(());
        };
        let jc = multiplier_ideal(&b, &chi).unwrap();
        let jl = multiplier_ideal(&b, &l).unwrap();
        let jsum = multiplier_ideal(&b, &(&chi + &l)).unwrap();
        prop_assert!(ideal_contains_ideal(&ideal_product(&jc, &jl), &jsum));
    }
}
