#![no_main]

use betweenness::FinitePoset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = FinitePoset::parse(text) else { return };
    let again = FinitePoset::parse(&p.to_text()).expect("printed poset must parse");
    assert_eq!(again.to_text(), p.to_text());
    let _ = p.kind_of();
    if p.len() <= 16 {
        let _ = p.betweenness_of();
        let _ = p.join_completion();
    }
});
