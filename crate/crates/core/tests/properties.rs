use genparity::antichain::{antichain_good_ep0, leq, meet, Antichain};
use genparity::arena::{parse_generalized, write_generalized, Player, Subgame, VertexSet};
use genparity::attractor::{attractor, positive_attractor, positive_safe_attractor};
use genparity::omega::{win_buchi, win_buchi_safe, win_genbuchi_safe, win_reach, win_safe};
use genparity::oracle::random_game;
use genparity::psolve::*;
use genparity::recursive::{
    escape_violation, gen_ziel_with_psolver, gen_zielonka, is_partition, zielonka,
    PartialSolver,
};
use proptest::prelude::*;

fn player() -> impl Strategy<Value = Player> {
    prop_oneof![Just(Player::Zero), Just(Player::One)]
}

fn subset(n: usize, bits: u64) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|v| bits >> v & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn attractor_is_closed_and_minimal(seed: u64, n in 1usize..30, bits: u64, p in player()) {
        let (arena, _) = random_game(n, 3, &[0], seed);
        let g = Subgame::full(&arena);
        let u = subset(n, bits);
        let attr = attractor(&g, p, &u);
        prop_assert!(u.is_subset(&attr));
        prop_assert_eq!(&attr, &u.union(&positive_attractor(&g, p, &u)));
        prop_assert!(g.is_trap(&g.alive().difference(&attr), p));
        // Idempotent: attracting to the attractor adds nothing.
        prop_assert_eq!(attractor(&g, p, &attr), attr);
    }

    #[test]
    fn positive_safe_attractor_respects_avoid(
        seed: u64, n in 1usize..20, t: u64, a: u64, p in player(),
    ) {
        let (arena, _) = random_game(n, 3, &[0], seed);
        let g = Subgame::full(&arena);
        let target = subset(n, t);
        let avoid = subset(n, a);
        let safe = positive_safe_attractor(&g, p, &target, &avoid);
        prop_assert!(safe.is_disjoint(&avoid));
        prop_assert!(safe.is_subset(&positive_attractor(&g, p, &target)));
        let empty = g.empty_set();
        prop_assert_eq!(
            positive_safe_attractor(&g, p, &target, &empty),
            positive_attractor(&g, p, &target)
        );
    }

    #[test]
    fn objective_inclusions(seed: u64, n in 1usize..20, t: u64, b: u64, p in player()) {
        let (arena, _) = random_game(n, 3, &[0], seed);
        let g = Subgame::full(&arena);
        let target = subset(n, t);
        let bad = subset(n, b);
        let buchi = win_buchi(&g, p, &target);
        prop_assert!(buchi.is_subset(&win_reach(&g, p, &target)));
        prop_assert!(g.is_trap(&buchi, p.opponent()));
        let safe = win_safe(&g, p, &bad);
        prop_assert!(safe.is_disjoint(&bad));
        prop_assert!(win_buchi_safe(&g, p, &target, &bad).is_subset(&buchi));
        prop_assert!(win_buchi_safe(&g, p, &target, &bad).is_subset(&safe));
        if p == Player::Zero {
            let single = win_genbuchi_safe(&g, std::slice::from_ref(&target), &bad);
            prop_assert_eq!(single, win_buchi_safe(&g, p, &target, &bad));
        }
    }

    #[test]
    fn antichain_insert_keeps_maximal_elements(
        entries in proptest::collection::vec((0usize..3, 0u32..5, 0u32..5), 0..30),
    ) {
        let mut a = Antichain::new(3);
        for (v, x, y) in &entries {
            a.insert(*v, vec![*x, *y]);
        }
        for (v, m) in a.iter() {
            for (w, m2) in a.iter() {
                prop_assert!(v != w || m == m2 || !leq(m, m2));
            }
        }
        for (v, x, y) in &entries {
            prop_assert!(a.member(*v, &[*x, *y]));
        }
        let b = a.clone();
        prop_assert_eq!(a.meet(&b), a.clone());
        prop_assert_eq!(a.union(&b), a);
    }

    #[test]
    fn vector_meet_is_greatest_lower_bound(
        x in proptest::collection::vec(0u32..7, 3),
        y in proptest::collection::vec(0u32..7, 3),
        z in proptest::collection::vec(0u32..7, 3),
    ) {
        let m = meet(&x, &y);
        prop_assert!(leq(&m, &x) && leq(&m, &y));
        if leq(&z, &x) && leq(&z, &y) {
            prop_assert!(leq(&z, &m));
        }
    }

    #[test]
    fn antichain_matches_explicit_on_larger_games(seed: u64, n in 1usize..16, k in 1usize..4) {
        let maxima: Vec<u32> = (0..k).map(|l| (seed >> (3 * l)) as u32 % 5).collect();
        let (arena, profile) = random_game(n, 2, &maxima, seed);
        let g = Subgame::full(&arena);
        prop_assert_eq!(
            gen_good_ep0_explicit(&g, &profile, usize::MAX).unwrap(),
            antichain_good_ep0(&g, &profile)
        );
    }

    /// Larger and sparser than the acceptance corpus, so partial solvers
    /// leave more unsolved. Zielonka serves as the reference.
    #[test]
    fn partial_solvers_are_sound_on_sparse_games(seed: u64, n in 2usize..40, d in 1u32..8) {
        let (arena, profile) = random_game(n, 2, &[d], seed);
        let g = Subgame::full(&arena);
        let truth = zielonka(&g, &profile);
        let solvers: [Box<dyn PartialSolver>; 3] = [
            Box::new(BuchiSolver::default()),
            Box::new(LaySolver::default()),
            Box::new(GoodEpSolver::default()),
        ];
        let mut solved = Vec::new();
        for s in &solvers {
            let r = s.solve(&g, &profile);
            prop_assert!(is_partition(&g, &r));
            prop_assert!(r.win0.is_subset(&truth.win0), "{}", s.name());
            prop_assert!(r.win1.is_subset(&truth.win1), "{}", s.name());
            prop_assert_eq!(escape_violation(&g, &r), None);
            solved.push(r.solved());
        }
        prop_assert!(solved[0].is_subset(&solved[1]), "buchi not below lay");
        prop_assert!(solved[1].is_subset(&solved[2]), "lay not below goodep");
    }

    #[test]
    fn generalized_solvers_collapse_on_sparse_games(seed: u64, n in 2usize..25, d in 1u32..7) {
        let (arena, profile) = random_game(n, 2, &[d], seed);
        let g = Subgame::full(&arena);
        prop_assert_eq!(buchi_solver(&g, &profile), gen_buchi_solver(&g, &profile));
        prop_assert_eq!(
            good_ep_solver(&g, &profile),
            gen_good_ep_solver(&g, &profile, GoodEpMode::Explicit)
        );
        prop_assert_eq!(zielonka(&g, &profile), gen_zielonka(&g, &profile));
    }

    /// The memory game credits an episode whose large even priority comes
    /// before its last vertex, which the single-dimension ladder does not, so
    /// with one dimension it can only find more.
    #[test]
    fn memory_game_layers_extend_parity_layers(seed: u64, n in 2usize..25, d in 1u32..7) {
        let (arena, profile) = random_game(n, 2, &[d], seed);
        let g = Subgame::full(&arena);
        for spec in build_list_p(&profile).into_iter().filter(|s| s.player == Player::Zero) {
            let vector = LayerSpec::vector(spec.q.clone());
            let u = g.select(|v| profile.priority(v, 0) % 2 == 0 && profile.priority(v, 0) >= spec.q[0]);
            let parity = layered_attractor(&g, &profile, &spec, &u);
            let general = gen_layered_attractor(&g, &profile, &vector, &u).unwrap();
            prop_assert!(parity.is_subset(&general), "q = {:?}", spec.q);
            prop_assert!(lay_ep(&g, &profile, &spec).is_subset(&gen_lay_ep(&g, &profile, &vector).unwrap()));
        }
    }

    #[test]
    fn generalized_partial_solvers_agree_with_zielonka(
        seed: u64, n in 2usize..20, k in 2usize..4,
    ) {
        let maxima: Vec<u32> = (0..k).map(|l| 1 + (seed >> (3 * l)) as u32 % 5).collect();
        let (arena, profile) = random_game(n, 2, &maxima, seed);
        let g = Subgame::full(&arena);
        let truth = gen_zielonka(&g, &profile);
        let solvers: [Box<dyn PartialSolver>; 3] = [
            Box::new(GenBuchiSolver::default()),
            Box::new(GenLaySolver::default()),
            Box::new(GenGoodEpSolver::default()),
        ];
        for s in &solvers {
            let r = s.solve(&g, &profile);
            prop_assert!(r.win0.is_subset(&truth.win0), "{}", s.name());
            prop_assert!(r.win1.is_subset(&truth.win1), "{}", s.name());
            prop_assert_eq!(escape_violation(&g, &r), None);
            prop_assert_eq!(gen_ziel_with_psolver(&g, &profile, s.as_ref()), truth.clone());
        }
    }

    #[test]
    fn written_games_parse_back(seed: u64, n in 1usize..30, k in 1usize..4) {
        let maxima: Vec<u32> = (0..k).map(|l| (seed >> (4 * l)) as u32 % 9).collect();
        let (arena, profile) = random_game(n, 4, &maxima, seed);
        let text = write_generalized(&arena, &profile);
        let (parsed, parsed_profile) = parse_generalized(&text).unwrap();
        prop_assert_eq!(parsed_profile.maxima(), profile.maxima());
        for v in arena.vertices() {
            prop_assert_eq!(parsed.owner(v), arena.owner(v));
            prop_assert_eq!(parsed.successors(v), arena.successors(v));
            prop_assert_eq!(parsed_profile.vector(v), profile.vector(v));
        }
    }
}
