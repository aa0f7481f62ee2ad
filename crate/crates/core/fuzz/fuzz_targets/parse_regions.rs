#![no_main]
use genparity::report::parse_regions;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(report) = parse_regions(data) {
        let text = report.to_string();
        assert_eq!(parse_regions(&text).expect("printed report parses"), report);
    }
});
