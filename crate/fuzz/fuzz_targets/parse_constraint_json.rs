#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = linext::io::parse_constraint_json(text) {
            let again =
                linext::io::parse_constraint_json(&linext::io::constraint_to_json(&s)).unwrap();
            assert_eq!(s.forbidden_equal, again.forbidden_equal);
            assert_eq!(s.poset.elements(), again.poset.elements());
        }
    }
});
