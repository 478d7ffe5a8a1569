mod common;

use common::props::*;
use proptest::prelude::*;

fn check(result: Check) -> Result<(), TestCaseError> {
    result.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn derived_covers_are_emulators(seed in any::<u64>()) {
        check(cover_implies_emulator(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derive_then_quotient_is_identity_up_to_iso(seed in any::<u64>()) {
        check(derive_quotient_roundtrip(seed))?;
    }

    #[test]
    fn compositions_stay_in_class(seed in any::<u64>()) {
        check(composition_closure(seed))?;
    }

    #[test]
    fn deleting_edges_keeps_planarity(seed in any::<u64>()) {
        check(planarity_monotone(seed))?;
    }

    #[test]
    fn quotients_keep_emulators(seed in any::<u64>()) {
        check(quotient_preserves_emulator(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_graphs_are_projective_planar(seed in any::<u64>()) {
        check(planar_implies_projective(seed))?;
    }

    #[test]
    fn spanning_tree_does_not_matter(seed in any::<u64>()) {
        check(spanning_tree_independence(seed))?;
    }

    #[test]
    fn apex_insertion_over_wrapped_cycles(seed in any::<u64>()) {
        check(apex_insertion_on_wrapped_cycles(seed))?;
    }

    #[test]
    fn search_matches_exhaustive_labeling(seed in any::<u64>()) {
        check(search_agrees_with_brute_force(seed))?;
    }
}
