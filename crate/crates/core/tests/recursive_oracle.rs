use genparity::arena::Subgame;
use genparity::oracle::{brute_generalized, brute_parity, random_game, STRATEGY_BUDGET};
use genparity::recursive::{gen_zielonka, zielonka};

#[test]
fn zielonka_matches_brute_force() {
    for seed in 0..300 {
        let n = 1 + (seed as usize % 8);
        let (arena, profile) = random_game(n, 3, &[4], seed);
        let g = Subgame::full(&arena);
        let expected = brute_parity(&g, &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(zielonka(&g, &profile), expected, "seed {seed}");
        assert_eq!(gen_zielonka(&g, &profile), expected, "seed {seed}");
    }
}

#[test]
fn gen_zielonka_matches_brute_force() {
    for seed in 0..300 {
        let n = 1 + (seed as usize % 6);
        let k = 1 + (seed as usize / 7) % 3;
        let (arena, profile) = random_game(n, 3, &vec![3; k], 1000 + seed);
        let g = Subgame::full(&arena);
        let expected = brute_generalized(&g, &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(gen_zielonka(&g, &profile), expected, "seed {seed}");
    }
}

#[test]
fn oracles_agree_on_one_dimension() {
    for seed in 0..200 {
        let (arena, profile) = random_game(1 + seed as usize % 7, 3, &[4], 5000 + seed);
        let g = Subgame::full(&arena);
        assert_eq!(
            brute_parity(&g, &profile, STRATEGY_BUDGET).unwrap(),
            brute_generalized(&g, &profile, STRATEGY_BUDGET).unwrap(),
            "seed {seed}"
        );
    }
}
