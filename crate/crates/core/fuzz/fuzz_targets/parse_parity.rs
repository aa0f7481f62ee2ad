#![no_main]
use genparity::arena::{parse_parity, write_parity};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok((arena, profile)) = parse_parity(data) {
        let text = write_parity(&arena, &profile);
        let (again, again_profile) = parse_parity(&text).expect("written game parses");
        assert_eq!(write_parity(&again, &again_profile), text);
    }
});
