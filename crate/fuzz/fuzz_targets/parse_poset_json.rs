#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = linext::io::parse_poset_json(text) {
            // round trip must stay parseable and preserve the order
            let again = linext::io::parse_poset_json(&linext::io::poset_to_json(&p)).unwrap();
            assert_eq!(p.elements(), again.elements());
            for i in 0..p.len() {
                for j in 0..p.len() {
                    assert_eq!(p.lt(i, j), again.lt(i, j));
                }
            }
        }
    }
});
