#![no_main]

use betweenness::poset::{map_to_text, parse_map};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = parse_map(text) else { return };
    let pairs: Vec<(String, String)> = m.clone().into_iter().collect();
    assert_eq!(parse_map(&map_to_text(&pairs)).expect("printed map must parse"), m);
});
