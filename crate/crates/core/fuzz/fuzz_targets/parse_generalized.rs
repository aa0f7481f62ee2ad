#![no_main]
use genparity::arena::{parse_generalized, write_generalized};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok((arena, profile)) = parse_generalized(data) {
        let text = write_generalized(&arena, &profile);
        let (again, again_profile) = parse_generalized(&text).expect("written game parses");
        assert_eq!(write_generalized(&again, &again_profile), text);
    }
});
