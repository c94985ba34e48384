//! Cross-checks of the optimized implementations against independent,
//! deliberately naive reference routes on instances small enough for both.

use qchir_core::dynamics::{self, TwoStateSpec, WeightFn};
use qchir_core::rng::SplitMix64;
use qchir_core::{fixtures, intercalates, search, Isotopism, LatinSquare};
use qchir_oracles as oracle;

fn random_isotope(base: &LatinSquare, seed: u64) -> (LatinSquare, Isotopism) {
    let mut rng = SplitMix64::new(seed);
    let h = Isotopism::random(base.order(), &mut rng);
    (base.apply(&h).unwrap(), h)
}

#[test]
fn fast_search_agrees_with_brute_force_on_small_orders() {
    // Every (source, target) pair over all squares of orders 1..=3, both
    // within and across isotopy classes.
    for n in 1..=3 {
        let squares: Vec<LatinSquare> = search::enumerate_latin_squares(n).unwrap().collect();
        for q in &squares {
            for r in &squares {
                let brute = oracle::isotopisms_brute(q, r);
                let fast = search::enumerate_isotopisms(q, r).unwrap();
                assert_eq!(fast, brute, "order {n}: {q:?} -> {r:?}");
            }
        }
    }
}

#[test]
fn fast_search_agrees_with_brute_force_on_order_four_samples() {
    let bases = [fixtures::cyclic(4), fixtures::klein4()];
    for (i, base) in bases.iter().enumerate() {
        let (q, _) = random_isotope(base, 1000 + i as u64);
        let (r, _) = random_isotope(base, 2000 + i as u64);
        assert_eq!(
            search::enumerate_isotopisms(&q, &r).unwrap(),
            oracle::isotopisms_brute(&q, &r)
        );
        assert_eq!(search::autotopisms(&q), oracle::isotopisms_brute(&q, &q));
        assert_eq!(
            search::mirror_isotopisms(&q),
            oracle::isotopisms_brute(&q, &q.mirror())
        );
    }
    // Across the two order-4 classes nothing should be found by either route.
    let (q, _) = random_isotope(&fixtures::cyclic(4), 31);
    let (r, _) = random_isotope(&fixtures::klein4(), 32);
    assert!(oracle::isotopisms_brute(&q, &r).is_empty());
    assert!(!search::find_isotopism(&q, &r).unwrap().found);
}

#[test]
fn the_two_action_routes_coincide() {
    let mut rng = SplitMix64::new(9);
    for n in [1usize, 2, 3, 4, 5, 7] {
        let base = if n == 7 {
            fixtures::order7_chiral()
        } else {
            fixtures::cyclic(n)
        };
        for _ in 0..20 {
            let pre = Isotopism::random(n, &mut rng);
            let q = base.apply(&pre).unwrap();
            let g = Isotopism::random(n, &mut rng);
            assert_eq!(q.apply(&g).unwrap(), oracle::apply_inverse_formula(&q, &g));
        }
    }
}

#[test]
fn cell_enumeration_matches_row_decomposition_counts() {
    for n in 1..=4 {
        let stream_count = search::enumerate_latin_squares(n).unwrap().count() as u64;
        assert_eq!(
            stream_count,
            oracle::count_latin_squares_rowperm(n),
            "order {n}"
        );
    }
    // Order 5 in the stream matches the classical census value.
    assert_eq!(search::enumerate_latin_squares(5).unwrap().count(), 161_280);
}

#[test]
fn intercalate_scans_agree_with_the_definitional_oracle() {
    let mut cases = vec![
        fixtures::cyclic(2),
        fixtures::cyclic(3),
        fixtures::cyclic(4),
        fixtures::cyclic(5),
        fixtures::cyclic(6),
        fixtures::klein4(),
        fixtures::order7_chiral(),
    ];
    for seed in 0..5 {
        cases.push(random_isotope(&fixtures::klein4(), 500 + seed).0);
        cases.push(random_isotope(&fixtures::order7_chiral(), 600 + seed).0);
    }
    for q in &cases {
        let fast: Vec<(usize, usize, usize, usize)> = intercalates::find_intercalates(q)
            .iter()
            .map(|ic| {
                (
                    ic.rows.0 as usize,
                    ic.rows.1 as usize,
                    ic.cols.0 as usize,
                    ic.cols.1 as usize,
                )
            })
            .collect();
        assert_eq!(fast, oracle::intercalates_brute(q));
    }
}

#[test]
fn closed_form_matches_rk4_integration() {
    let cases = [
        (1.0, 1.0, 1.0, 0.5 * std::f64::consts::LN_2),
        (2.0, 1.0, 0.2, 1.0),
        (0.0, 3.0, 0.9, 2.5),
        (5.0, 0.0, 0.4, 0.3),
        (0.7, 1.3, 0.5, 4.0),
    ];
    for (k_q, k_qm, p0, t) in cases {
        let spec = TwoStateSpec::new(k_q, k_qm, p0).unwrap();
        let reference = oracle::rk4_two_state(k_q, k_qm, p0, t, 20_000);
        assert!(
            (spec.probability_at(t) - reference).abs() < 1e-10,
            "k_q={k_q} k_qm={k_qm} p0={p0} t={t}: closed={} rk4={reference}",
            spec.probability_at(t)
        );
    }
}

#[test]
fn sampled_chain_tracks_rk4_within_three_sigma() {
    let spec = TwoStateSpec::new(1.5, 0.5, 0.1).unwrap();
    let grid = [0.4, 1.2];
    let n = 40_000u64;
    let tr = dynamics::sample_two_state_with_threads(&spec, 1.2, n, 77, &grid, 4).unwrap();
    let emp = tr.p_empirical.unwrap();
    for (k, &t) in grid.iter().enumerate() {
        let p = oracle::rk4_two_state(1.5, 0.5, 0.1, t, 10_000);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((emp[k].frequency - p).abs() <= 3.0 * sigma);
    }
}

#[test]
fn mirror_channel_sets_transport_by_the_twisted_conjugation() {
    // Relabeling a square transports its mirror channels exactly:
    // Mir(h.Q) = mirror_twist(h) Mir(Q) h^{-1}, here verified with both
    // sides enumerated by brute force.
    let squares: Vec<LatinSquare> = search::enumerate_latin_squares(3).unwrap().collect();
    let mut rng = SplitMix64::new(4242);
    for trial in 0..10 {
        let q = &squares[rng.next_below(squares.len())];
        let h = Isotopism::random(3, &mut rng);
        let p = q.apply(&h).unwrap();
        let h_twist = h.mirror_twist();
        let h_inv = h.inverse();
        let mut transported: Vec<Isotopism> = oracle::isotopisms_brute(q, &q.mirror())
            .iter()
            .map(|g| h_twist.compose(g).unwrap().compose(&h_inv).unwrap())
            .collect();
        transported.sort_unstable();
        let direct = oracle::isotopisms_brute(&p, &p.mirror());
        assert_eq!(direct, transported, "trial {trial}");
    }
}

#[test]
fn mirror_rate_counts_brute_force_channels() {
    let w = WeightFn::unit();
    for (base, seed) in [
        (fixtures::cyclic(3), 7u64),
        (fixtures::cyclic(4), 8),
        (fixtures::klein4(), 9),
    ] {
        let (q, _) = random_isotope(&base, seed);
        let brute = oracle::isotopisms_brute(&q, &q.mirror()).len() as f64;
        assert_eq!(dynamics::mirror_rate(&q, &w), brute);
    }
}
