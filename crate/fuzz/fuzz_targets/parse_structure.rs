#![no_main]

use betweenness::{classify, BetweennessStructure};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(s) = BetweennessStructure::parse(text) else {
        return;
    };
    let again = BetweennessStructure::parse(&s.to_text()).expect("printed structure must parse");
    assert_eq!(again.to_text(), s.to_text());
    // Classification is quartic; keep inputs small enough to stay fast.
    if s.len() <= 12 {
        let _ = classify(&s);
    }
});
