#![no_main]
use genparity::arena::{parse_game, Subgame};
use genparity::recursive::{gen_zielonka, is_partition};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(game) = parse_game(data) {
        // Keep solving cheap; the parser is the target.
        if game.arena.vertex_count() <= 64 {
            let g = Subgame::full(&game.arena);
            assert!(is_partition(&g, &gen_zielonka(&g, &game.profile)));
        }
    }
});
