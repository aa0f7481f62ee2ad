//! Replays the fuzz corpus seeds through the same checks the fuzz targets
//! make, so the seeds stay meaningful without a nightly toolchain.

use std::fs;
use std::path::Path;

use genparity::arena::{
    parse_game, parse_generalized, parse_parity, write_generalized, write_parity, Subgame,
};
use genparity::recursive::{gen_zielonka, is_partition};
use genparity::report::parse_regions;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn parity_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_parity") {
        if let Ok((arena, profile)) = parse_parity(&text) {
            let written = write_parity(&arena, &profile);
            let (again, again_profile) = parse_parity(&written).expect(&name);
            assert_eq!(write_parity(&again, &again_profile), written, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn generalized_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_generalized") {
        if let Ok((arena, profile)) = parse_generalized(&text) {
            let written = write_generalized(&arena, &profile);
            let (again, again_profile) = parse_generalized(&written).expect(&name);
            assert_eq!(write_generalized(&again, &again_profile), written, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn game_seeds_solve_to_a_partition() {
    for (name, text) in seeds("parse_game") {
        let game = parse_game(&text).expect(&name);
        let g = Subgame::full(&game.arena);
        assert!(is_partition(&g, &gen_zielonka(&g, &game.profile)), "{name}");
    }
}

#[test]
fn region_seeds_print_and_parse_back() {
    let mut rejected = 0;
    for (name, text) in seeds("parse_regions") {
        match parse_regions(&text) {
            Ok(report) => assert_eq!(parse_regions(&report.to_string()).unwrap(), report, "{name}"),
            Err(_) => rejected += 1,
        }
    }
    assert_eq!(rejected, 1);
}
