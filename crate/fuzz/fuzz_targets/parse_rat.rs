#![no_main]

use betweenness::geometry::parse_rat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rat(text) {
        assert_eq!(parse_rat(&r.to_string()).expect("printed rational must parse"), r);
    }
});
