//! Property tests for the algebraic laws the rest of the crate leans on.
//!
//! Orders 1..=4 are sampled from the *complete* space of Latin squares
//! (cached enumeration); larger orders are sampled as random isotopes of
//! stock tables, including the chiral order-7 example.

use std::sync::OnceLock;

use proptest::prelude::*;
use qchir_core::dynamics::{self, WeightFn};
use qchir_core::parastrophe::ParastropheId;
use qchir_core::rng::SplitMix64;
use qchir_core::{fixtures, intercalates, search, Isotopism, LatinSquare, Perm};

fn all_squares(n: usize) -> &'static [LatinSquare] {
    static CACHE: [OnceLock<Vec<LatinSquare>>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    CACHE[n - 1].get_or_init(|| search::enumerate_latin_squares(n).unwrap().collect())
}

/// Any square of order 1..=4 (full coverage), or a seeded random isotope of
/// an order-5, order-6, or order-7 base table.
fn any_square() -> impl Strategy<Value = LatinSquare> {
    prop_oneof![
        3 => (1usize..=4, any::<prop::sample::Index>()).prop_map(|(n, idx)| {
            let all = all_squares(n);
            all[idx.index(all.len())].clone()
        }),
        1 => (5usize..=7, any::<u64>()).prop_map(|(n, seed)| {
            let base = match n {
                5 => fixtures::cyclic(5),
                6 => fixtures::cyclic(6),
                _ => fixtures::order7_chiral(),
            };
            let mut rng = SplitMix64::new(seed);
            base.apply(&Isotopism::random(n, &mut rng)).unwrap()
        }),
    ]
}

fn square_with_isotopisms() -> impl Strategy<Value = (LatinSquare, Isotopism, Isotopism)> {
    (any_square(), any::<u64>()).prop_map(|(q, seed)| {
        let mut rng = SplitMix64::new(seed);
        let g = Isotopism::random(q.order(), &mut rng);
        let h = Isotopism::random(q.order(), &mut rng);
        (q, g, h)
    })
}

fn revalidates(q: &LatinSquare) -> bool {
    LatinSquare::from_cells(q.order(), q.cells().to_vec()).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn applying_isotopisms_is_a_left_action((q, g, h) in square_with_isotopisms()) {
        let via_composite = q.apply(&h.compose(&g)?)?;
        let via_steps = q.apply(&g)?.apply(&h)?;
        prop_assert_eq!(via_composite, via_steps);
        prop_assert_eq!(q.apply(&Isotopism::identity(q.order()))?, q.clone());
        prop_assert_eq!(q.apply(&g)?.apply(&g.inverse())?, q.clone());
    }

    #[test]
    fn isotopy_preserves_the_latin_property((q, g, _) in square_with_isotopisms()) {
        prop_assert!(revalidates(&q.apply(&g)?));
        prop_assert!(revalidates(&q.mirror()));
        for id in ParastropheId::ALL {
            prop_assert!(revalidates(&q.parastrophe(id)));
        }
    }

    #[test]
    fn mirroring_commutes_with_the_twisted_action((q, g, _) in square_with_isotopisms()) {
        let lhs = q.apply(&g)?.mirror();
        let rhs = q.mirror().apply(&g.mirror_twist())?;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mirror_is_an_involution_and_matches_the_row_col_swap(q in any_square()) {
        prop_assert_eq!(q.mirror().mirror(), q.clone());
        prop_assert_eq!(q.mirror(), q.parastrophe(ParastropheId::SwapRowCol));
        prop_assert_eq!(q.is_commutative(), q.mirror() == q);
    }

    #[test]
    fn parastrophes_compose_by_the_group_law(
        q in any_square(),
        i in 0usize..6,
        j in 0usize..6,
    ) {
        let s = ParastropheId::ALL[i];
        let t = ParastropheId::ALL[j];
        let stepwise = q.parastrophe(t).parastrophe(s);
        let combined = q.parastrophe(s.after(t));
        prop_assert_eq!(stepwise, combined);
        prop_assert_eq!(q.parastrophe(s).parastrophe(s.inverse()), q.clone());
    }

    #[test]
    fn intercalate_invariants_survive_relabeling((q, g, _) in square_with_isotopisms()) {
        let r = q.apply(&g)?;
        prop_assert_eq!(
            intercalates::find_intercalates(&q).len(),
            intercalates::find_intercalates(&r).len()
        );
        prop_assert_eq!(intercalates::fingerprint(&q), intercalates::fingerprint(&r));
        prop_assert_eq!(intercalates::row_profiles(&q), intercalates::row_profiles(&r));
    }

    #[test]
    fn transposition_swaps_the_profile_families(q in any_square()) {
        let m = q.mirror();
        prop_assert_eq!(intercalates::row_profiles(&m), intercalates::col_profiles(&q));
        prop_assert_eq!(intercalates::col_profiles(&m), intercalates::row_profiles(&q));
    }

    #[test]
    fn cycle_types_are_conjugation_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = SplitMix64::new(seed);
        let p = Perm::random(n, &mut rng);
        let c = Perm::random(n, &mut rng);
        let conj = c.compose(&p)?.compose(&c.inverse())?;
        prop_assert_eq!(p.cycle_type(), conj.cycle_type());
        prop_assert_eq!(p.cycle_type(), p.inverse().cycle_type());
    }

    #[test]
    fn search_answers_match_class_membership(
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        // Over the full order-4 space: the search finds an isotopism exactly
        // when the two squares share an isotopy class, and any witness it
        // returns actually maps one square onto the other.
        let squares = all_squares(4);
        let partition = order4_partition();
        let (i, j) = (a.index(squares.len()), b.index(squares.len()));
        let report = search::find_isotopism(&squares[i], &squares[j])?;
        let same_class = partition.membership()[i] == partition.membership()[j];
        prop_assert_eq!(report.found, same_class);
        if let Some(g) = report.witness {
            prop_assert_eq!(squares[i].apply(&g)?, squares[j].clone());
        }
    }

    #[test]
    fn total_rates_are_exact_multiset_sums((q, g, _) in square_with_isotopisms()) {
        prop_assume!(q.order() <= 6);
        let weights = weight_menu(q.order());
        let r = q.apply(&g)?;
        for w in &weights {
            let rm_q = dynamics::symmetry_generated_rates(&q, w)?;
            prop_assert_eq!(rm_q.total_rate(), dynamics::mirror_rate(&q, w));
            // Isotopic squares carry bit-identical total rates.
            prop_assert_eq!(
                dynamics::symmetry_generated_rates(&r, w)?.total_rate(),
                rm_q.total_rate()
            );
            prop_assert!(dynamics::racemic_condition(&q, w));
        }
    }
}

fn order4_partition() -> &'static search::ClassPartition {
    static CACHE: OnceLock<search::ClassPartition> = OnceLock::new();
    CACHE.get_or_init(|| search::isotopy_classes(all_squares(4)).unwrap())
}

fn weight_menu(n: usize) -> Vec<WeightFn> {
    let mut menu = vec![WeightFn::unit(), WeightFn::constant(0.25).unwrap()];
    let mut map = std::collections::BTreeMap::new();
    for (i, parts) in qchir_oracles::partitions(n).into_iter().enumerate() {
        // Deliberately awkward weights to stress exact summation.
        map.insert(
            qchir_core::CycleType::from_parts(parts).unwrap(),
            0.1 + 0.3 * i as f64,
        );
    }
    menu.push(WeightFn::gamma_cycle_type(map).unwrap());
    menu
}
